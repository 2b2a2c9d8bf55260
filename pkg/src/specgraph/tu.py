"""Ingestion of the standard multi-file TU graph-dataset distribution format.

A dataset directory holds at least:

    <name>_A.txt                "i, j" pairs of 1-indexed *global* node ids,
                                each undirected edge listed in both directions
    <name>_graph_indicator.txt  line t: 1-indexed graph id of global node t
    <name>_graph_labels.txt     line g: raw class label of graph g

Whitespace around commas and blank lines are tolerated. Node/edge attribute
sidecar files are ignored: classification here uses structure only.
"""

from __future__ import annotations

import hashlib
import logging
import os
import shutil
import tempfile
import urllib.error
import urllib.request
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadArchiveError,
    ChecksumMismatchError,
    DownloadError,
    IngestError,
)
from .graphs import from_edge_list

logger = logging.getLogger(__name__)

#: datasets of the benchmark suite, keyed by archive name, with the short
#: aliases used in the result tables
DATASET_NAMES = ("MUTAG", "PTC_MR", "ENZYMES", "PROTEINS_full", "DD", "NCI1")
DATASET_ALIASES = {
    "MT": "MUTAG",
    "PTC": "PTC_MR",
    "EZ": "ENZYMES",
    "PF": "PROTEINS_full",
    "DD": "DD",
    "NCI1": "NCI1",
}

DEFAULT_URL_TEMPLATE = "https://www.chrsmrrs.com/graphkerneldatasets/{name}.zip"
DEFAULT_CACHE_DIR = os.path.join("~", ".cache", "specgraph")


def canonical_dataset_name(name: str) -> str:
    """Resolve table aliases (MT, PTC, EZ, PF) to archive names."""
    return DATASET_ALIASES.get(name, name)


@dataclass(frozen=True)
class Dataset:
    """A named collection of graphs with 0-based integer class labels.

    ``raw_label_map`` maps the raw labels found in the files to the 0-based
    indices (assigned by ascending raw value). ``avg_nodes`` and ``avg_edges``
    are computed over the original graphs, before any component extraction;
    ``avg_edges`` counts adjacency entries, i.e. each undirected edge twice,
    matching the counting convention of the published dataset statistics.
    """

    name: str
    graphs: list
    labels: np.ndarray
    n_classes: int
    raw_label_map: dict
    avg_nodes: float
    avg_edges: float

    @property
    def n_graphs(self) -> int:
        return len(self.graphs)


def class_bias(dataset: Dataset) -> float:
    """Proportion of the dominant class, in percent."""
    counts = np.bincount(dataset.labels, minlength=dataset.n_classes)
    return 100.0 * counts.max() / counts.sum()


def _read_int_lines(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Parse one integer per line; returns (values, line numbers)."""
    values, lines = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(int(text))
            except ValueError:
                raise IngestError(path, line_no, f"expected an integer, got {text!r}")
            lines.append(line_no)
    return np.asarray(values, dtype=np.int64), np.asarray(lines, dtype=np.int64)


def _read_pair_lines(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Parse "i, j" per line; returns (pairs array, line numbers)."""
    pairs, lines = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            head, sep, tail = text.partition(",")
            if not sep:
                raise IngestError(path, line_no, f"expected 'i, j', got {text!r}")
            try:
                pairs.append((int(head), int(tail)))
            except ValueError:
                raise IngestError(path, line_no, f"expected integers, got {text!r}")
            lines.append(line_no)
    if not pairs:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64), np.asarray(lines, dtype=np.int64)


def _required_file(dir_path: Path, name: str, suffix: str) -> Path:
    path = dir_path / f"{name}{suffix}"
    if not path.is_file():
        raise IngestError(path, 0, "required dataset file is missing")
    return path


def parse_tu_dataset(dir_path, name: str) -> Dataset:
    """Parse a TU-format directory into a Dataset.

    Raw class labels are remapped to 0..n_classes-1 by ascending raw value.
    Parse failures raise IngestError carrying the file and line number.
    """
    dir_path = Path(dir_path)
    a_path = _required_file(dir_path, name, "_A.txt")
    ind_path = _required_file(dir_path, name, "_graph_indicator.txt")
    lab_path = _required_file(dir_path, name, "_graph_labels.txt")

    indicator, ind_lines = _read_int_lines(ind_path)
    raw_labels, _ = _read_int_lines(lab_path)
    edges, edge_lines = _read_pair_lines(a_path)

    n_nodes_total = indicator.shape[0]
    n_graphs = raw_labels.shape[0]
    if n_nodes_total == 0:
        raise IngestError(ind_path, 0, "dataset has no nodes")
    if indicator.min() < 1 or indicator.max() > n_graphs:
        bad = int(np.flatnonzero((indicator < 1) | (indicator > n_graphs))[0])
        raise IngestError(
            ind_path, int(ind_lines[bad]),
            f"graph id {indicator[bad]} outside 1..{n_graphs}",
        )

    if edges.size:
        out_of_range = (edges < 1) | (edges > n_nodes_total)
        if out_of_range.any():
            bad = int(np.flatnonzero(out_of_range.any(axis=1))[0])
            raise IngestError(
                a_path, int(edge_lines[bad]),
                f"node id in {tuple(edges[bad])} outside 1..{n_nodes_total}",
            )
        graph_of_u = indicator[edges[:, 0] - 1]
        graph_of_v = indicator[edges[:, 1] - 1]
        crossing = graph_of_u != graph_of_v
        if crossing.any():
            bad = int(np.flatnonzero(crossing)[0])
            raise IngestError(
                a_path, int(edge_lines[bad]),
                f"edge {tuple(edges[bad])} connects graphs "
                f"{graph_of_u[bad]} and {graph_of_v[bad]}",
            )
    else:
        graph_of_u = np.empty(0, dtype=np.int64)

    # local node ids: position among the (ascending) global ids of each graph
    node_graph = indicator - 1
    order = np.argsort(node_graph, kind="stable")
    local_id = np.empty(n_nodes_total, dtype=np.int64)
    sizes = np.bincount(node_graph, minlength=n_graphs)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    local_id[order] = np.arange(n_nodes_total) - starts[node_graph[order]]

    graphs = []
    if edges.size:
        edge_graph = graph_of_u - 1
        edge_order = np.argsort(edge_graph, kind="stable")
        sorted_edges = edges[edge_order]
        sorted_graph = edge_graph[edge_order]
        bounds = np.searchsorted(sorted_graph, np.arange(n_graphs + 1))
    for g in range(n_graphs):
        if edges.size:
            chunk = sorted_edges[bounds[g] : bounds[g + 1]]
            local = local_id[chunk - 1]
        else:
            local = np.empty((0, 2), dtype=np.int64)
        graphs.append(from_edge_list(int(sizes[g]), local))

    uniques, labels = np.unique(raw_labels, return_inverse=True)
    n_classes = uniques.shape[0]
    class_counts = np.bincount(labels, minlength=n_classes)
    if (class_counts == 0).any():
        raise IngestError(lab_path, 0, "every class must have at least one graph")

    avg_nodes = float(np.mean([g.n_nodes for g in graphs]))
    avg_edges = float(np.mean([2 * g.n_edges for g in graphs]))
    labels = labels.astype(np.int64)
    labels.setflags(write=False)
    return Dataset(
        name=name,
        graphs=graphs,
        labels=labels,
        n_classes=int(n_classes),
        raw_label_map={int(raw): i for i, raw in enumerate(uniques)},
        avg_nodes=avg_nodes,
        avg_edges=avg_edges,
    )


def write_tu_dataset(dataset: Dataset, dir_path) -> None:
    """Serialize a Dataset back to TU format (each edge in both directions)."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    name = dataset.name
    index_to_raw = {i: raw for raw, i in dataset.raw_label_map.items()}
    offset = 1
    with open(dir_path / f"{name}_A.txt", "w", encoding="utf-8") as a_fh, open(
        dir_path / f"{name}_graph_indicator.txt", "w", encoding="utf-8"
    ) as ind_fh:
        for g_id, g in enumerate(dataset.graphs, 1):
            for _ in range(g.n_nodes):
                ind_fh.write(f"{g_id}\n")
            for u, v in g.edges:
                a_fh.write(f"{offset + u}, {offset + v}\n")
                a_fh.write(f"{offset + v}, {offset + u}\n")
            offset += g.n_nodes
    with open(dir_path / f"{name}_graph_labels.txt", "w", encoding="utf-8") as fh:
        for label in dataset.labels:
            fh.write(f"{index_to_raw[int(label)]}\n")


def _sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _read_lockfile(path: Path) -> dict:
    recorded = {}
    if path.is_file():
        for line in path.read_text(encoding="utf-8").splitlines():
            parts = line.split()
            if len(parts) == 2:
                recorded[parts[0]] = parts[1]
    return recorded


def _dataset_files_present(dir_path: Path, name: str) -> bool:
    return all(
        (dir_path / f"{name}{suffix}").is_file()
        for suffix in ("_A.txt", "_graph_indicator.txt", "_graph_labels.txt")
    )


def fetch_dataset(name: str, cache_dir=None, url_template: str | None = None) -> Path:
    """Download and unpack a dataset archive once; later calls hit the cache.

    Returns the directory containing the dataset files. The archive's sha256
    is recorded in ``checksums.lock`` inside the cache on first download and
    verified against it afterwards; on mismatch the cache is left untouched.
    """
    name = canonical_dataset_name(name)
    cache = Path(os.path.expanduser(cache_dir or DEFAULT_CACHE_DIR))
    url_template = url_template or DEFAULT_URL_TEMPLATE
    extracted = cache / name
    if _dataset_files_present(extracted, name):
        return extracted

    archive_dir = cache / "archives"
    archive = archive_dir / f"{name}.zip"
    lockfile = cache / "checksums.lock"
    recorded = _read_lockfile(lockfile)

    if not archive.is_file():
        url = url_template.format(name=name)
        archive_dir.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=archive_dir, suffix=".part")
        os.close(fd)
        tmp = Path(tmp_name)
        try:
            logger.info("downloading %s", url)
            try:
                with urllib.request.urlopen(url, timeout=60) as resp, open(tmp, "wb") as out:
                    shutil.copyfileobj(resp, out)
            except (urllib.error.URLError, OSError) as exc:
                raise DownloadError(f"failed to download {url}: {exc}") from exc
            digest = _sha256_of(tmp)
            if archive.name in recorded and recorded[archive.name] != digest:
                raise ChecksumMismatchError(
                    f"{archive.name}: downloaded sha256 {digest} does not match "
                    f"recorded {recorded[archive.name]}"
                )
            if archive.name not in recorded:
                recorded[archive.name] = digest
                lockfile.write_text(
                    "".join(f"{k} {v}\n" for k, v in sorted(recorded.items())),
                    encoding="utf-8",
                )
            os.replace(tmp, archive)
        finally:
            tmp.unlink(missing_ok=True)
    else:
        digest = _sha256_of(archive)
        if archive.name in recorded:
            if digest != recorded[archive.name]:
                raise ChecksumMismatchError(
                    f"{archive.name}: cached archive sha256 {digest} does not "
                    f"match recorded {recorded[archive.name]}"
                )
        else:  # archive placed manually: pin it
            recorded[archive.name] = digest
            lockfile.write_text(
                "".join(f"{k} {v}\n" for k, v in sorted(recorded.items())),
                encoding="utf-8",
            )

    try:
        with zipfile.ZipFile(archive) as zf:
            for member in zf.namelist():
                target = (cache / member).resolve()
                if not str(target).startswith(str(cache.resolve()) + os.sep):
                    raise BadArchiveError(f"archive member escapes cache: {member}")
            zf.extractall(cache)
    except zipfile.BadZipFile as exc:
        raise BadArchiveError(f"{archive} is not a valid zip archive") from exc

    if not _dataset_files_present(extracted, name):
        raise BadArchiveError(
            f"archive {archive.name} did not contain {name}/{name}_A.txt and friends"
        )
    return extracted


def load_dataset(name: str, cache_dir=None, url_template: str | None = None) -> Dataset:
    """fetch_dataset + parse_tu_dataset in one call."""
    name = canonical_dataset_name(name)
    return parse_tu_dataset(fetch_dataset(name, cache_dir, url_template), name)
