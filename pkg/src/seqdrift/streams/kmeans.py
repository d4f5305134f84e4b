"""Lloyd's k-means with k-means++ seeding, for labeling unlabeled initial data."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, DataError


def _sqdist(X, centers):
    return ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _plusplus(X, C, rng):
    centers = np.empty((C, X.shape[1]))
    centers[0] = X[rng.integers(len(X))]
    closest = ((X - centers[0]) ** 2).sum(axis=1)
    for k in range(1, C):
        total = closest.sum()
        if total == 0:
            idx = rng.integers(len(X))
        else:
            idx = rng.choice(len(X), p=closest / total)
        centers[k] = X[idx]
        closest = np.minimum(closest, ((X - centers[k]) ** 2).sum(axis=1))
    return centers


def kmeans_label(X, C: int, seed: int = 0, max_iters: int = 100, return_centers: bool = False):
    """Cluster ``X`` into ``C`` groups and return one label per row.

    A cluster that loses all its members is re-seeded at the sample
    farthest from its current center.  Deterministic for a fixed ``seed``.
    """
    X = np.asarray(X, dtype=float)
    if C < 1:
        raise ConfigError(f"C must be >= 1, got {C}")
    if X.ndim != 2 or len(X) == 0:
        raise DataError("k-means needs a nonempty 2-D sample array")
    rng = np.random.default_rng(seed)
    centers = _plusplus(X, C, rng)
    labels = np.zeros(len(X), dtype=np.int64)
    for it in range(max_iters):
        d2 = _sqdist(X, centers)
        new = d2.argmin(axis=1)
        for k in range(C):
            if not np.any(new == k):
                # farthest sample among clusters that can spare one
                sizes = np.bincount(new, minlength=C)
                own = d2[np.arange(len(X)), new]
                own[sizes[new] < 2] = -1.0
                far = int(own.argmax())
                if own[far] < 0:
                    raise DataError(f"cannot fill {C} clusters from {len(X)} samples")
                new[far] = k
                d2[far] = 0.0
        converged = it > 0 and np.array_equal(new, labels)
        labels = new
        if converged:
            break
        for k in range(C):
            centers[k] = X[labels == k].mean(axis=0)
    return (labels, centers) if return_centers else labels
