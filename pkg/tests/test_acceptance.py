"""Acceptance suite.

Each test prints one PASS/FAIL line per criterion (run with ``-s`` to see
them). Criteria 1-4 are property-based and always run; criteria 5-9 need the
benchmark datasets in the local cache (``specgraph fetch``) and skip when a
dataset is unavailable. Accuracy criteria use the +/-3.0 percentage-point
band: classifier and splitter RNG streams legitimately differ between
implementations, so reproduction is judged at the level of accuracy, not
bit-exactness.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from specgraph import (
    ClassifierSpec,
    ForestConfig,
    build_normalized_laplacian,
    class_bias,
    cross_validate,
    eigenvalues_symmetric,
    embed_dataset,
    fit_forest,
    from_edge_list,
    save_forest,
    spectral_features,
    stratified_folds,
)
from specgraph.evaluation import auto_k
from specgraph.reference import (
    ACCURACY_TOLERANCE_PP,
    BENCH_DATASETS,
    CLASSIFIER_ACCURACY,
    DATASET_STATS,
)
from specgraph.rng import SplitMix64

from conftest import dataset_cache_dir, require_dataset
from oracles import (
    laplacian_charpoly_eigenvalues,
    complete_bipartite_graph,
    complete_bipartite_spectrum,
    complete_graph,
    complete_graph_spectrum,
    cycle_graph,
    cycle_graph_spectrum,
    enumerate_connected_edge_lists,
    path_graph,
    path_graph_spectrum,
    permuted_copy,
    random_connected_graph,
)

TOL_BAND = ACCURACY_TOLERANCE_PP


@contextmanager
def criterion(number, label):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {number} FAIL: {label}")
        raise
    print(f"ACCEPTANCE {number} PASS: {label}")


def _warm_kernels():
    eigenvalues_symmetric(np.eye(3))
    X = np.arange(20.0).reshape(10, 2)
    y = np.array([0, 1] * 5)
    fit_forest(X, y, ForestConfig(n_trees=2, seed=1))


def test_criterion_1_eigensolver_oracle_suite():
    _warm_kernels()
    start = time.perf_counter()
    with criterion(1, "eigensolver matches brute-force and closed-form oracles"):
        checked = 0
        for n in range(2, 7):
            for edges in enumerate_connected_edge_lists(n):
                g = from_edge_list(n, edges)
                mine = eigenvalues_symmetric(build_normalized_laplacian(g)).eigenvalues
                oracle = laplacian_charpoly_eigenvalues(g)
                assert np.abs(mine - oracle).max() <= 1e-7
                checked += 1
        # 1 + 4 + 38 + 728 + 26704 labeled connected graphs on 2..6 nodes
        assert checked == 27_475

        for n in range(2, 51):
            ev = eigenvalues_symmetric(build_normalized_laplacian(complete_graph(n)))
            assert np.abs(ev.eigenvalues - complete_graph_spectrum(n)).max() <= 1e-7
            ev = eigenvalues_symmetric(build_normalized_laplacian(path_graph(n)))
            assert np.abs(ev.eigenvalues - path_graph_spectrum(n)).max() <= 1e-7
        for n in range(3, 51):
            ev = eigenvalues_symmetric(build_normalized_laplacian(cycle_graph(n)))
            assert np.abs(ev.eigenvalues - cycle_graph_spectrum(n)).max() <= 1e-7
        for m in range(1, 51):
            for n in range(m, 51):
                ev = eigenvalues_symmetric(
                    build_normalized_laplacian(complete_bipartite_graph(m, n))
                )
                expected = complete_bipartite_spectrum(m, n)
                assert np.abs(ev.eigenvalues - expected).max() <= 1e-7

        elapsed = time.perf_counter() - start
        print(f"  checked {checked} enumerated graphs plus closed-form families "
              f"in {elapsed:.1f}s")
        assert elapsed < 60.0


def test_criterion_2_spectral_invariants_on_random_graphs():
    _warm_kernels()
    with criterion(2, "spectral invariants on 1000 random connected graphs"):
        rng = SplitMix64(2024)
        for _ in range(1000):
            n = 2 + rng.below(59)  # n in [2, 60]
            g = random_connected_graph(rng, n)
            ev = eigenvalues_symmetric(build_normalized_laplacian(g)).eigenvalues
            assert ev.min() >= -1e-8
            assert ev.max() <= 2.0 + 1e-8
            assert abs(ev.sum() - n) <= 1e-6 * n
            assert int((ev < 1e-6).sum()) == 1  # connected: one zero eigenvalue

        rng = SplitMix64(2025)
        for _ in range(1000):
            n = 2 + rng.below(59)
            g = random_connected_graph(rng, n)
            base = spectral_features(g, k=12).values
            for _ in range(5):
                relabeled = spectral_features(permuted_copy(g, rng), k=12).values
                assert np.abs(relabeled - base).max() <= 1e-9


def test_criterion_3_forest_determinism_across_threads(tmp_path):
    _warm_kernels()
    with criterion(3, "forest training is byte-identical on 1, 2, and 8 threads"):
        rng = np.random.default_rng(99)
        X = rng.normal(size=(150, 8))
        y = rng.integers(0, 3, size=150)
        y[:3] = [0, 1, 2]
        config = ForestConfig(n_trees=50, seed=1)
        blobs = []
        for n_threads in (1, 2, 8):
            model = fit_forest(X, y, config, n_threads=n_threads)
            path = tmp_path / f"forest_{n_threads}.sgf"
            save_forest(model, path)
            blobs.append(path.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]


def test_criterion_4_stratification_invariants():
    with criterion(4, "fold plans satisfy size and per-class balance exactly"):
        rng = SplitMix64(4)
        for _ in range(500):
            n_folds = 2 + rng.below(9)
            n_classes = 1 + rng.below(6)
            labels = np.concatenate([
                np.full(n_folds + rng.below(60), c) for c in range(n_classes)
            ])
            rng.shuffle(labels)
            plan = stratified_folds(labels, n_folds, seed=rng.next_u64())
            sizes = np.bincount(plan.assignments, minlength=n_folds)
            assert sizes.max() - sizes.min() <= 1
            assert sizes.sum() == labels.shape[0]
            for c in range(n_classes):
                per_fold = np.bincount(plan.assignments[labels == c],
                                       minlength=n_folds)
                assert per_fold.max() - per_fold.min() <= 1


# --- dataset-dependent criteria -------------------------------------------

def _cached(name):
    return (dataset_cache_dir() / name / f"{name}_A.txt").is_file()


def test_criterion_5_benchmark_accuracy(tmp_path):
    for name in BENCH_DATASETS:
        if not _cached(name):
            pytest.skip(f"dataset {name} not cached; run `specgraph fetch`")
    _warm_kernels()
    start = time.perf_counter()
    with criterion(5, "bench reproduces the published accuracy row within +/-3.0"):
        from specgraph.cli import main

        code = main(["bench", "--check", "--out-dir", str(tmp_path),
                     "--cache", str(dataset_cache_dir())])
        elapsed = time.perf_counter() - start
        print(f"  bench --check finished in {elapsed / 60:.1f} min "
              f"(target: < 30 min)")
        assert code == 0


@pytest.mark.parametrize("name", ["MUTAG", "PTC_MR", "NCI1"])
def test_criterion_6_classifier_comparison(name):
    dataset = require_dataset(name)
    _warm_kernels()
    with criterion(6, f"1-NN / 15-NN / ridge accuracies on {name} within +/-3.0"):
        X, y = embed_dataset(dataset, k=auto_k(dataset))
        plan = stratified_folds(y, 10, seed=1)
        specs = {
            "1nn": ClassifierSpec("knn", {"k_neighbors": 1}),
            "15nn": ClassifierSpec("knn", {"k_neighbors": 15}),
            "ridge": ClassifierSpec("ridge", {"lam": 1.0}),
        }
        for label, spec in specs.items():
            report = cross_validate(X, y, spec, plan)
            expected = CLASSIFIER_ACCURACY[label][name]
            print(f"  {name} {label}: {report.mean_percent:.1f} "
                  f"(reference {expected})")
            assert abs(report.mean_percent - expected) <= TOL_BAND


@pytest.mark.parametrize("name", ["MUTAG", "NCI1"])
def test_criterion_7_k_sweep(name, tmp_path):
    require_dataset(name)
    _warm_kernels()
    with criterion(7, f"k sweep on {name} within +/-3.0 per cell"):
        from specgraph.cli import main

        code = main(["sweep-k", "--dataset", name, "--check",
                     "--out-dir", str(tmp_path), "--cache", str(dataset_cache_dir())])
        assert code == 0


def test_criterion_7_single_eigenvalue_beats_bias():
    dataset = require_dataset("MUTAG")
    _warm_kernels()
    with criterion(7, "MUTAG k=1 accuracy clears the 66.5% class-bias baseline"):
        X, y = embed_dataset(dataset, k=1)
        plan = stratified_folds(y, 10, seed=1)
        report = cross_validate(X, y, ClassifierSpec("rfc", {"seed": 1}), plan)
        bias = class_bias(dataset)
        print(f"  MUTAG k=1: {report.mean_percent:.1f}% vs bias {bias:.1f}%")
        assert report.mean_percent > 70.0
        assert report.mean_percent > bias


@pytest.mark.parametrize("name", BENCH_DATASETS)
def test_criterion_8_ingestion_statistics(name):
    dataset = require_dataset(name)
    stats = DATASET_STATS[name]
    with criterion(8, f"{name} statistics match the published table"):
        assert dataset.n_graphs == stats["n_graphs"]
        assert dataset.n_classes == stats["n_classes"]
        assert abs(dataset.avg_nodes - stats["avg_nodes"]) <= 1.0
        assert abs(class_bias(dataset) - stats["bias"]) <= 0.1
        if name != "PTC_MR":
            assert abs(dataset.avg_edges - stats["avg_edges"]) <= 1.0
        print(f"  {name}: graphs={dataset.n_graphs} classes={dataset.n_classes} "
              f"avg_nodes={dataset.avg_nodes:.2f} avg_edges={dataset.avg_edges:.2f} "
              f"bias={class_bias(dataset):.1f}")


@pytest.mark.xfail(
    strict=True,
    reason="published PTC_MR edge average (15) is inconsistent with the "
    "distributed files under any counting convention (undirected ~14.7 "
    "would match, but every other dataset's printed value matches the "
    "both-direction count, and ours is ~29.4)",
)
def test_criterion_8_ptc_edge_average_as_published():
    dataset = require_dataset("PTC_MR")
    assert abs(dataset.avg_edges - DATASET_STATS["PTC_MR"]["avg_edges"]) <= 1.0


def test_criterion_9_hyperparameter_sanity():
    dataset = require_dataset("MUTAG")
    _warm_kernels()
    with criterion(9, "degenerate forest hyperparameters underperform on MUTAG"):
        X, y = embed_dataset(dataset, k=auto_k(dataset))
        plan = stratified_folds(y, 10, seed=1)

        def accuracy(**overrides):
            params = {"n_trees": 500, "min_samples_leaf": 1, "max_depth": 100,
                      "bootstrap": True, "seed": 1}
            params.update(overrides)
            return cross_validate(X, y, ClassifierSpec("rfc", params), plan).mean

        one_tree = accuracy(n_trees=1)
        full_forest = accuracy()
        shallow = accuracy(max_depth=1)
        deep = accuracy(max_depth=100)
        no_bootstrap = accuracy(bootstrap=False)
        print(f"  n_trees 1 vs 500: {100 * one_tree:.1f} vs {100 * full_forest:.1f}; "
              f"max_depth 1 vs 100: {100 * shallow:.1f} vs {100 * deep:.1f}; "
              f"bootstrap off: {100 * no_bootstrap:.1f}")
        assert full_forest - one_tree > 0.0
        assert shallow < deep
        # turning bootstrap off must not move the needle much
        assert abs(no_bootstrap - full_forest) <= 0.03
