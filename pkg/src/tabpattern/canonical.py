"""Resize arbitrary m x n datasets into a fixed R x C image.

Two strategies are provided:

* ``sort-resample`` (default): rows are sorted lexicographically by
  (label, feature 1, feature 2, ...) and then decimated to R rows by
  nearest-rank selection (indices floor(i * m / R)) or zero-padded when
  m < R. Row order of the input is irrelevant by construction.
* ``pca-compact``: the standardized feature block is replaced by the
  rows of S @ Vt from its singular value decomposition, preserving the
  second-moment structure in at most rank(X) rows. Compressed rows are
  not samples, so the label column is left at zero under this strategy;
  rows beyond the rank are zero padding.

In both cases feature columns are standardized to mean 0 / population
sd 1 over the real (non-padded) rows before placement, zero-variance
columns become all-zero, labels occupy the last column, and every padded
cell is exactly 0. When a dataset has more than C - 1 feature columns
they are first projected onto their leading C - 1 principal components
(or the projection is refused with ``SizeError`` when disabled).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SizeError, ValidationError
from .patterns import TabularDataset

STRATEGIES = ("sort-resample", "pca-compact")


@dataclass(frozen=True)
class CanonSpec:
    """Target image shape and resize strategy."""

    rows: int = 128
    cols: int = 7
    strategy: str = "sort-resample"
    reduce_columns: bool = True

    def validate(self) -> None:
        if self.rows < 1:
            raise ValidationError(f"rows must be positive, got {self.rows}")
        if self.cols < 3:
            raise ValidationError(f"cols must be >= 3 (two features plus label), got {self.cols}")
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}, expected one of {STRATEGIES}")


@dataclass
class CanonicalImage:
    """A dataset rendered as a fixed-size real matrix."""

    pixels: np.ndarray
    source_m: int
    source_n: int
    strategy: str


class PCAResult(NamedTuple):
    scores: np.ndarray
    loadings: np.ndarray
    eigenvalues: np.ndarray
    truncated: bool


def pca_project(X: np.ndarray, k: int) -> PCAResult:
    """Project ``X`` onto its leading ``k`` principal components.

    Columns are centered (not scaled). Loadings are orthonormal with the
    sign convention that each component's largest-magnitude entry is
    positive; eigenvalues are those of the population covariance matrix,
    in non-increasing order. If ``k`` exceeds the numerical rank only
    ``rank`` components are returned and ``truncated`` is set.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValidationError("pca_project expects a 2-D matrix")
    if not np.all(np.isfinite(X)):
        raise ValidationError("pca_project input contains non-finite values")
    m, n = X.shape
    if not (1 <= k <= min(m, n)):
        raise ValidationError(f"k must lie in [1, min(m, n)] = [1, {min(m, n)}], got {k}")

    centered = X - X.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    tol = max(m, n) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    k_eff = min(k, rank)
    truncated = k_eff < k

    loadings = vt[:k_eff].T
    # sign convention: largest-magnitude loading entry of each component positive
    for j in range(k_eff):
        col = loadings[:, j]
        pivot = np.argmax(np.abs(col))
        if col[pivot] < 0:
            loadings[:, j] = -col
    eigenvalues = (s[:k_eff] ** 2) / m
    scores = centered @ loadings
    return PCAResult(scores, loadings, eigenvalues, truncated)


def standardize_columns(X: np.ndarray) -> np.ndarray:
    """Center and scale columns to population sd 1; constant columns map to zero."""
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    out = X - mean
    nonzero = sd > 0
    out[:, nonzero] /= sd[nonzero]
    out[:, ~nonzero] = 0.0
    return out


def _reduce_columns(X: np.ndarray, target: int, allow: bool) -> np.ndarray:
    if X.shape[1] <= target:
        return X
    if not allow:
        raise SizeError(
            f"dataset has {X.shape[1]} feature columns but the image only fits "
            f"{target}; enable reduce_columns or widen the target"
        )
    k = min(target, X.shape[0])
    res = pca_project(standardize_columns(X.copy()), k)
    scores = res.scores
    if scores.shape[1] < target:
        pad = np.zeros((scores.shape[0], target - scores.shape[1]))
        scores = np.hstack([scores, pad])
    return scores


def canonicalize(ds: TabularDataset, spec: CanonSpec) -> CanonicalImage:
    """Render ``ds`` as an exact ``spec.rows`` x ``spec.cols`` image."""
    spec.validate()
    ds.validate()
    R, C = spec.rows, spec.cols

    X = np.asarray(ds.features, dtype=float)
    y = np.asarray(ds.labels, dtype=float)
    X = _reduce_columns(X, C - 1, spec.reduce_columns)
    X = standardize_columns(X.copy())
    n = X.shape[1]
    m = X.shape[0]

    pixels = np.zeros((R, C))
    if spec.strategy == "sort-resample":
        order = np.lexsort(tuple(X[:, j] for j in range(n - 1, -1, -1)) + (y,))
        Xs, ys = X[order], y[order]
        if m >= R:
            idx = (np.arange(R) * m) // R
            pixels[:, :n] = Xs[idx]
            pixels[:, C - 1] = ys[idx]
        else:
            pixels[:m, :n] = Xs
            pixels[:m, C - 1] = ys
    else:  # pca-compact
        _, s, vt = np.linalg.svd(X, full_matrices=False)
        tol = max(m, n) * np.finfo(float).eps * (s[0] if s.size else 0.0)
        rank = int(np.sum(s > tol))
        rank = min(rank, R)
        block = s[:rank, None] * vt[:rank]
        for i in range(rank):
            pivot = np.argmax(np.abs(block[i]))
            if block[i, pivot] < 0:
                block[i] = -block[i]
        pixels[:rank, :n] = block

    if not np.all(np.isfinite(pixels)):
        raise ValidationError("canonical image contains non-finite values")
    return CanonicalImage(pixels=pixels, source_m=ds.m, source_n=ds.n, strategy=spec.strategy)


def image_to_dataset(img: CanonicalImage) -> TabularDataset:
    """Inverse-ish view of a padded image: real rows back as a dataset.

    Only meaningful for sort-resample images whose label column is +-1 on
    real rows; used for idempotence checks.
    """
    labels = img.pixels[:, -1]
    real = labels != 0
    return TabularDataset(features=img.pixels[real, :-1].copy(), labels=labels[real].copy())
