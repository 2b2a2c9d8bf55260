import os
from pathlib import Path

import numpy as np
import pytest

from specgraph import from_edge_list, parse_tu_dataset, write_tu_dataset
from specgraph.tu import Dataset


def _write_lines(path, lines):
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")


@pytest.fixture
def minimal_tu_dir(tmp_path):
    """Two graphs: a triangle labeled -1 and a single edge labeled +1."""
    d = tmp_path / "MINI"
    d.mkdir()
    _write_lines(d / "MINI_A.txt", [
        "1, 2", "2, 1", "2, 3", "3, 2", "1, 3", "3, 1",
        "4, 5", "5, 4",
    ])
    _write_lines(d / "MINI_graph_indicator.txt", [1, 1, 1, 2, 2])
    _write_lines(d / "MINI_graph_labels.txt", [-1, 1])
    return d


def make_synth_dataset(n_per_class=20):
    """Cleanly separable synthetic dataset: cycles vs complete graphs (their
    smallest positive eigenvalues live in disjoint ranges for n >= 4)."""
    graphs, labels = [], []
    for i in range(n_per_class):
        n = 4 + (i % 10)
        graphs.append(from_edge_list(n, [(j, (j + 1) % n) for j in range(n)]))
        labels.append(0)
    for i in range(n_per_class):
        n = 4 + (i % 10)
        graphs.append(from_edge_list(
            n, [(a, b) for a in range(n) for b in range(a + 1, n)]))
        labels.append(1)
    avg_nodes = float(np.mean([g.n_nodes for g in graphs]))
    avg_edges = float(np.mean([2 * g.n_edges for g in graphs]))
    return Dataset(
        name="SYNTH", graphs=graphs, labels=np.asarray(labels),
        n_classes=2, raw_label_map={0: 0, 1: 1},
        avg_nodes=avg_nodes, avg_edges=avg_edges,
    )


@pytest.fixture(scope="session")
def synth_dataset():
    return make_synth_dataset()


@pytest.fixture
def synth_cache(tmp_path):
    """A dataset cache directory pre-populated with the synthetic dataset."""
    dataset = make_synth_dataset()
    write_tu_dataset(dataset, tmp_path / "SYNTH")
    return tmp_path


def dataset_cache_dir() -> Path:
    return Path(os.environ.get(
        "SPECGRAPH_CACHE", os.path.join("~", ".cache", "specgraph")
    )).expanduser()


def require_dataset(name: str):
    """Parse a real benchmark dataset from the local cache, or skip."""
    path = dataset_cache_dir() / name
    if not (path / f"{name}_A.txt").is_file():
        pytest.skip(
            f"dataset {name} not cached; run `specgraph fetch --dataset {name}` "
            f"(cache: {dataset_cache_dir()})"
        )
    return parse_tu_dataset(path, name)
