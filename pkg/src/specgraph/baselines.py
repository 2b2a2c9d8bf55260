"""Baseline classifiers over fixed-width embeddings: k-nearest-neighbors and
a one-vs-rest ridge regression classifier."""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve


def fit_predict_knn(train_X, train_y, test_X, k_neighbors: int) -> np.ndarray:
    """Majority vote among the k nearest training points (Euclidean).

    Distance ties are broken by lower training index, vote ties by smallest
    class index.
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64)
    test_X = np.asarray(test_X, dtype=np.float64)
    if train_X.shape[0] == 0:
        raise ValueError("training set must be nonempty")
    if not 1 <= k_neighbors <= train_X.shape[0]:
        raise ValueError("k_neighbors must be in [1, train size]")

    # squared distances preserve the ordering; stable argsort keeps the
    # lower-training-index tie-break
    d2 = (
        (test_X * test_X).sum(axis=1)[:, None]
        - 2.0 * test_X @ train_X.T
        + (train_X * train_X).sum(axis=1)[None, :]
    )
    nearest = np.argsort(d2, axis=1, kind="stable")[:, :k_neighbors]
    n_classes = int(train_y.max()) + 1
    votes = (train_y[nearest][:, :, None] == np.arange(n_classes)).sum(axis=1)
    return np.argmax(votes, axis=1)


def fit_predict_ridge(train_X, train_y, test_X, lam: float = 1.0) -> np.ndarray:
    """One-vs-rest ridge regression on {-1, +1} targets.

    Features are centered by the training mean; the regularized normal
    equations are solved by Cholesky factorization (lam > 0 keeps the system
    positive definite even for rank-deficient designs). Prediction is the
    argmax over class scores.
    """
    if lam <= 0:
        raise ValueError("ridge penalty lam must be > 0")
    train_X = np.asarray(train_X, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64)
    test_X = np.asarray(test_X, dtype=np.float64)
    if train_X.shape[0] == 0:
        raise ValueError("training set must be nonempty")
    if train_X.shape[1] != test_X.shape[1]:
        raise ValueError("train and test feature widths differ")

    n_classes = int(train_y.max()) + 1
    targets = np.full((train_X.shape[0], n_classes), -1.0)
    targets[np.arange(train_y.shape[0]), train_y] = 1.0

    mean = train_X.mean(axis=0)
    xc = train_X - mean
    gram = xc.T @ xc + lam * np.eye(train_X.shape[1])
    weights = cho_solve(cho_factor(gram), xc.T @ targets)
    scores = (test_X - mean) @ weights
    return np.argmax(scores, axis=1)
