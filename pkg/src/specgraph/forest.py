"""Random forest classifier over fixed-width embeddings.

Implements the contract of a balanced-class-weight forest: every sample
counts with weight N/(C * count_class) in impurity computations and leaf
tallies, each tree trains on a bootstrap resample (N draws with replacement),
and split candidates are midpoints between consecutive distinct values of
ceil(sqrt(d)) features drawn without replacement per node.

Training is deterministic for a fixed seed regardless of thread count: tree t
always consumes the SplitMix64 stream derived from (seed, t).
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _tree
from .rng import derive_stream

MAGIC = b"SGF1"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ForestConfig:
    """Forest hyperparameters; defaults reproduce the benchmark setup."""

    n_trees: int = 500
    min_samples_leaf: int = 1
    max_depth: int = 100
    bootstrap: bool = True
    max_features: str | int = "sqrt"
    seed: int = 1

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if isinstance(self.max_features, str):
            if self.max_features != "sqrt":
                raise ValueError("max_features must be 'sqrt' or an integer")
        elif self.max_features < 1:
            raise ValueError("max_features must be >= 1")

    def resolve_max_features(self, n_features: int) -> int:
        if self.max_features == "sqrt":
            return min(n_features, math.ceil(math.sqrt(n_features)))
        return min(n_features, int(self.max_features))


@dataclass(frozen=True)
class ForestModel:
    """Trained ensemble, stored as flat per-node arrays.

    ``tree_offsets[t]`` is the index of tree t's root in the node arrays;
    ``feature`` is -1 at leaves; ``value`` rows are weighted class counts.
    """

    n_classes: int
    n_features: int
    class_weights: np.ndarray
    tree_offsets: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    config: ForestConfig = field(compare=False)

    @property
    def n_trees(self) -> int:
        return self.tree_offsets.shape[0] - 1

    def tree_slice(self, t: int) -> slice:
        return slice(int(self.tree_offsets[t]), int(self.tree_offsets[t + 1]))


def balanced_class_weights(labels) -> np.ndarray:
    """Weight N / (C * count_c) per class, indexed by class.

    Equalizes each class's total weight: duplicating every minority sample
    until classes balance, then using uniform weights, yields the same class
    priors.
    """
    y = np.asarray(labels)
    if y.size == 0:
        raise ValueError("labels must be nonempty")
    counts = np.bincount(y)
    if (counts == 0).any():
        raise ValueError("every class in 0..max(labels) must be present")
    return y.size / (counts.size * counts.astype(np.float64))


def gini_impurity(class_counts) -> float:
    """1 - sum(p^2) over (possibly weighted) class counts."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if (counts < 0).any():
        raise ValueError("class counts must be nonnegative")
    total = counts.sum()
    if total <= 0:
        raise ValueError("class counts must not all be zero")
    p = counts / total
    return float(1.0 - (p * p).sum())


def fit_forest(X, y, config: ForestConfig | None = None, n_threads: int = 1) -> ForestModel:
    """Train a forest. Deterministic for fixed (X, y, config) at any thread count."""
    config = config or ForestConfig()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("X must be a nonempty 2-D matrix")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y lengths differ")
    n_samples, n_features = X.shape
    n_classes = int(y.max()) + 1 if y.size else 0
    if n_classes < 2:
        raise ValueError("need at least 2 classes to fit a classifier")

    class_weights = balanced_class_weights(y)
    sample_weight = class_weights[y]
    y32 = y.astype(np.int32)
    xt = np.ascontiguousarray(X.T)
    mtry = config.resolve_max_features(n_features)

    def grow(t: int):
        cap = 2 * n_samples + 1
        feature = np.empty(cap, np.int32)
        threshold = np.empty(cap, np.float64)
        left = np.empty(cap, np.int32)
        right = np.empty(cap, np.int32)
        value = np.empty((cap, n_classes), np.float64)
        n_nodes = _tree.build_tree(
            xt, y32, sample_weight, n_classes,
            np.uint64(derive_stream(config.seed, t)),
            config.bootstrap, config.max_depth, config.min_samples_leaf, mtry,
            feature, threshold, left, right, value,
        )
        return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(),
                left[:n_nodes].copy(), right[:n_nodes].copy(),
                value[:n_nodes].copy())

    if n_threads > 1 and config.n_trees > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            trees = list(pool.map(grow, range(config.n_trees)))
    else:
        trees = [grow(t) for t in range(config.n_trees)]

    sizes = np.array([t[0].shape[0] for t in trees], dtype=np.int64)
    offsets = np.zeros(config.n_trees + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    model = ForestModel(
        n_classes=n_classes,
        n_features=n_features,
        class_weights=class_weights,
        tree_offsets=offsets,
        feature=np.concatenate([t[0] for t in trees]),
        threshold=np.concatenate([t[1] for t in trees]),
        left=np.concatenate([t[2] for t in trees]),
        right=np.concatenate([t[3] for t in trees]),
        value=np.concatenate([t[4] for t in trees]),
        config=config,
    )
    for arr in (model.class_weights, model.tree_offsets, model.feature,
                model.threshold, model.left, model.right, model.value):
        arr.setflags(write=False)
    return model


def predict_scores(model: ForestModel, X) -> np.ndarray:
    """Per-class scores: the mean over trees of each leaf's normalized
    weighted class distribution (every tree carries one vote)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(
            f"expected {model.n_features} feature columns, got shape {X.shape}"
        )
    out = np.zeros((X.shape[0], model.n_classes))
    _tree.accumulate_votes(
        X, model.tree_offsets, model.feature, model.threshold,
        model.left, model.right, model.value, out,
    )
    return out / model.n_trees


def predict_forest(model: ForestModel, X) -> np.ndarray:
    """Predicted class per row; ties go to the smallest class index."""
    return np.argmax(predict_scores(model, X), axis=1)


def _pack_max_features(mf) -> tuple[int, int]:
    return (0, 0) if mf == "sqrt" else (1, int(mf))


def save_forest(model: ForestModel, path) -> None:
    """Write the model as a little-endian SGF1 container."""
    cfg = model.config
    mf_kind, mf_value = _pack_max_features(cfg.max_features)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", _FORMAT_VERSION, model.n_classes, model.n_features))
        fh.write(struct.pack(
            "<IIIBBIq",
            cfg.n_trees, cfg.min_samples_leaf, cfg.max_depth,
            1 if cfg.bootstrap else 0, mf_kind, mf_value, cfg.seed,
        ))
        fh.write(struct.pack("<Q", model.n_trees))
        fh.write(model.class_weights.astype("<f8").tobytes())
        for t in range(model.n_trees):
            sl = model.tree_slice(t)
            n_nodes = sl.stop - sl.start
            fh.write(struct.pack("<Q", n_nodes))
            fh.write(model.feature[sl].astype("<i4").tobytes())
            fh.write(model.threshold[sl].astype("<f8").tobytes())
            fh.write(model.left[sl].astype("<i4").tobytes())
            fh.write(model.right[sl].astype("<i4").tobytes())
            fh.write(model.value[sl].astype("<f8").tobytes())


def _read_exact(fh, count: int) -> bytes:
    data = fh.read(count)
    if len(data) != count:
        raise ValueError("model file is truncated")
    return data


def load_forest(path) -> ForestModel:
    """Read an SGF1 container written by save_forest."""
    with open(path, "rb") as fh:
        if _read_exact(fh, 4) != MAGIC:
            raise ValueError("not a forest model file (bad magic)")
        version, n_classes, n_features = struct.unpack("<III", _read_exact(fh, 12))
        if version != _FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {version}")
        (cfg_trees, msl, max_depth, bootstrap, mf_kind, mf_value,
         seed) = struct.unpack("<IIIBBIq", _read_exact(fh, 26))
        config = ForestConfig(
            n_trees=cfg_trees, min_samples_leaf=msl, max_depth=max_depth,
            bootstrap=bool(bootstrap),
            max_features="sqrt" if mf_kind == 0 else mf_value,
            seed=seed,
        )
        (n_trees,) = struct.unpack("<Q", _read_exact(fh, 8))
        class_weights = np.frombuffer(_read_exact(fh, 8 * n_classes), dtype="<f8")
        features, thresholds, lefts, rights, values = [], [], [], [], []
        sizes = []
        for _ in range(n_trees):
            (n_nodes,) = struct.unpack("<Q", _read_exact(fh, 8))
            sizes.append(n_nodes)
            features.append(np.frombuffer(_read_exact(fh, 4 * n_nodes), dtype="<i4"))
            thresholds.append(np.frombuffer(_read_exact(fh, 8 * n_nodes), dtype="<f8"))
            lefts.append(np.frombuffer(_read_exact(fh, 4 * n_nodes), dtype="<i4"))
            rights.append(np.frombuffer(_read_exact(fh, 4 * n_nodes), dtype="<i4"))
            values.append(np.frombuffer(
                _read_exact(fh, 8 * n_nodes * n_classes), dtype="<f8",
            ).reshape(n_nodes, n_classes))
        if fh.read(1):
            raise ValueError("trailing bytes after model payload")
    offsets = np.zeros(n_trees + 1, dtype=np.int64)
    np.cumsum(np.asarray(sizes, dtype=np.int64), out=offsets[1:])
    return ForestModel(
        n_classes=int(n_classes),
        n_features=int(n_features),
        class_weights=class_weights.astype(np.float64),
        tree_offsets=offsets,
        feature=np.concatenate(features).astype(np.int32),
        threshold=np.concatenate(thresholds).astype(np.float64),
        left=np.concatenate(lefts).astype(np.int32),
        right=np.concatenate(rights).astype(np.int32),
        value=np.concatenate(values).astype(np.float64),
        config=config,
    )
