"""Stratified k-fold cross-validation, accuracy aggregation, and the
embedding-dimension / hyperparameter sweep drivers.

Fold construction: classes are processed in ascending order; each class's
sample indices are shuffled with the run's SplitMix64 stream and dealt
round-robin onto folds, with the dealing position carried over from class to
class. Dealing the whole dataset onto consecutive folds in one continuous
rotation guarantees both balance invariants exactly: total fold sizes differ
by at most 1, and so do per-class counts within each fold.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import fit_predict_knn, fit_predict_ridge
from .forest import ForestConfig, fit_forest, predict_forest
from .rng import SplitMix64
from .spectral import embed_dataset, resolve_embedding_dim


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each sample to one of n_folds folds."""

    n_folds: int
    assignments: np.ndarray
    seed: int


@dataclass(frozen=True)
class ClassifierSpec:
    """Which classifier to run and with what hyperparameters.

    kind: "rfc" (params: ForestConfig fields), "knn" (params: k_neighbors),
    or "ridge" (params: lam).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def label(self) -> str:
        if self.kind == "knn":
            return f"{self.params.get('k_neighbors', 1)}nn"
        return self.kind


@dataclass(frozen=True)
class CvReport:
    """Per-fold accuracies plus aggregate statistics and wall-clock timings."""

    per_fold_accuracy: np.ndarray
    mean: float
    std: float
    fit_seconds: np.ndarray
    predict_seconds: np.ndarray
    embed_seconds: float
    config: dict

    @property
    def mean_percent(self) -> float:
        return 100.0 * self.mean


def stratified_folds(labels, n_folds: int, seed: int) -> FoldPlan:
    """Class-proportion-preserving fold assignment, deterministic for a seed."""
    y = np.asarray(labels)
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    counts = np.bincount(y)
    if (counts < n_folds).any():
        short = int(np.flatnonzero(counts < n_folds)[0])
        raise ValueError(
            f"class {short} has {counts[short]} samples, fewer than "
            f"{n_folds} folds"
        )
    rng = SplitMix64(seed)
    assignments = np.empty(y.shape[0], dtype=np.int32)
    position = 0
    for c in range(counts.shape[0]):
        members = np.flatnonzero(y == c)
        rng.shuffle(members)
        for i in members:
            assignments[i] = position % n_folds
            position += 1
    assignments.setflags(write=False)
    return FoldPlan(n_folds=n_folds, assignments=assignments, seed=seed)


def _run_classifier(spec: ClassifierSpec, train_X, train_y, test_X,
                    n_threads: int = 1):
    """Returns (predictions, fit_seconds, predict_seconds)."""
    if spec.kind == "rfc":
        config = ForestConfig(**spec.params)
        t0 = time.perf_counter()
        model = fit_forest(train_X, train_y, config, n_threads=n_threads)
        t1 = time.perf_counter()
        pred = predict_forest(model, test_X)
        t2 = time.perf_counter()
        return pred, t1 - t0, t2 - t1
    if spec.kind == "knn":
        t0 = time.perf_counter()
        pred = fit_predict_knn(train_X, train_y, test_X, **spec.params)
        return pred, time.perf_counter() - t0, 0.0
    if spec.kind == "ridge":
        t0 = time.perf_counter()
        pred = fit_predict_ridge(train_X, train_y, test_X, **spec.params)
        return pred, time.perf_counter() - t0, 0.0
    raise ValueError(f"unknown classifier kind {spec.kind!r}")


def cross_validate(embeddings, labels, spec: ClassifierSpec, plan: FoldPlan,
                   embed_seconds: float = 0.0, n_threads: int = 1) -> CvReport:
    """Fit on each fold's complement, test on the fold, aggregate accuracy."""
    X = np.asarray(embeddings, dtype=np.float64)
    y = np.asarray(labels)
    if X.shape[0] != y.shape[0] or y.shape[0] != plan.assignments.shape[0]:
        raise ValueError("embeddings, labels and fold plan lengths differ")

    acc = np.zeros(plan.n_folds)
    fit_s = np.zeros(plan.n_folds)
    pred_s = np.zeros(plan.n_folds)
    for f in range(plan.n_folds):
        test = plan.assignments == f
        train = ~test
        pred, fit_s[f], pred_s[f] = _run_classifier(
            spec, X[train], y[train], X[test], n_threads=n_threads
        )
        acc[f] = float(np.mean(pred == y[test]))
    return CvReport(
        per_fold_accuracy=acc,
        mean=float(acc.mean()),
        std=float(acc.std()),  # population std over folds
        fit_seconds=fit_s,
        predict_seconds=pred_s,
        embed_seconds=embed_seconds,
        config={"classifier": spec.label(), "params": dict(spec.params),
                "n_folds": plan.n_folds, "fold_seed": plan.seed},
    )


def sweep_embedding_dim(dataset, k_values, spec: ClassifierSpec, plan: FoldPlan,
                        n_threads: int = 1) -> dict:
    """One CvReport per k, the same fold plan reused throughout.

    The spectrum prefix does not depend on k, so the dataset is embedded once
    at max(k) and sliced.
    """
    k_values = [int(k) for k in k_values]
    if not k_values or min(k_values) < 1:
        raise ValueError("k values must be positive integers")
    t0 = time.perf_counter()
    X, y = embed_dataset(dataset, max(k_values), n_threads=n_threads)
    embed_s = time.perf_counter() - t0
    reports = {}
    for k in k_values:
        reports[k] = cross_validate(
            X[:, :k], y, spec, plan, embed_seconds=embed_s, n_threads=n_threads
        )
    return reports


#: hyperparameter grid explored by the robustness sweep; ordered as published
HP_GRID = {
    "n_trees": (1, 10, 50, 100, 250, 500, 750, 1000),
    "min_samples_leaf": (1, 2, 3, 4, 5, 6),
    "max_depth": (1, 5, 10, 50, 100, 250, 500, 750, 1000),
    "bootstrap": (True, False),
}

#: values used by the reference setup (and held fixed while another
#: parameter is being varied)
HP_DEFAULTS = {
    "n_trees": 500,
    "min_samples_leaf": 1,
    "max_depth": 100,
    "bootstrap": True,
}


@dataclass(frozen=True)
class SweepRecord:
    """Accuracy distribution for a single (parameter, value) setting."""

    param: str
    value: object
    per_fold_accuracy: np.ndarray


def sweep_hyperparameters(embeddings, labels, plan: FoldPlan,
                          grid: dict | None = None, forest_seed: int = 1,
                          n_threads: int = 1) -> list[SweepRecord]:
    """Vary one forest hyperparameter at a time, the others at their defaults.

    Emits raw per-fold accuracy distributions (box-plot material). The forest
    seed is held fixed so only parameter sensitivity is measured.
    """
    grid = dict(HP_GRID) if grid is None else grid
    unknown = set(grid) - set(HP_GRID)
    if unknown:
        raise ValueError(f"unknown hyperparameter(s): {sorted(unknown)}")
    records = []
    for param, values in grid.items():
        for value in values:
            params = dict(HP_DEFAULTS)
            params[param] = value
            params["seed"] = forest_seed
            report = cross_validate(
                embeddings, labels, ClassifierSpec("rfc", params), plan,
                n_threads=n_threads,
            )
            records.append(SweepRecord(param, value, report.per_fold_accuracy))
    return records


def write_cv_csv(path, rows, include_timings: bool = True) -> None:
    """Cross-validation report CSV.

    rows: iterables of (dataset, classifier, k, CvReport). One output line per
    fold: dataset,classifier,k,fold,accuracy,embed_ms,fit_ms,predict_ms.
    embed_ms is the dataset-level embedding time, repeated on each fold row.
    """
    with open(path, "w", encoding="utf-8") as fh:
        header = "dataset,classifier,k,fold,accuracy"
        if include_timings:
            header += ",embed_ms,fit_ms,predict_ms"
        fh.write(header + "\n")
        for dataset, classifier, k, report in rows:
            for f, acc in enumerate(report.per_fold_accuracy):
                line = f"{dataset},{classifier},{k},{f},{acc:.6f}"
                if include_timings:
                    line += (
                        f",{1e3 * report.embed_seconds:.3f}"
                        f",{1e3 * report.fit_seconds[f]:.3f}"
                        f",{1e3 * report.predict_seconds[f]:.3f}"
                    )
                fh.write(line + "\n")


def write_sweep_csv(path, dataset_name: str, records) -> None:
    """Long-format sweep CSV: dataset,param,value,fold,accuracy."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("dataset,param,value,fold,accuracy\n")
        for rec in records:
            for f, acc in enumerate(rec.per_fold_accuracy):
                fh.write(f"{dataset_name},{rec.param},{rec.value},{f},{acc:.6f}\n")


def auto_k(dataset) -> int:
    """The embedding dimension the protocol prescribes for a dataset."""
    return resolve_embedding_dim("auto", dataset.avg_nodes)
