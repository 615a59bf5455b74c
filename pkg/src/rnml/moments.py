"""Moment-matrix assembly from a learning sample.

Builds the plain and label-weighted second-moment matrices, the
label/feature cross vector, the per-observation normalization weights, and
arbitrary reweighted variants (the coverage / interval / signed-two-class
constructions all reuse the same weighted sum).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularProjection
from .linalg import symmetrize

# Row-block size for the fixed-tree pairwise accumulation of moment sums.
_BLOCK = 4096


@dataclass(frozen=True)
class Dataset:
    """M observations: feature matrix x of shape (M, d_x) and labels y of shape (M,)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
            raise DimensionMismatch(
                f"expected x (M, d_x) with matching y (M,), got {x.shape} and {y.shape}"
            )
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise DimensionMismatch("dataset needs at least one row and one feature")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("dataset values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.shape[0] < x.shape[1]:
            warnings.warn(
                f"fewer observations ({x.shape[0]}) than features ({x.shape[1]}); "
                "the moment matrix will be rank deficient",
                stacklevel=3,
            )

    @property
    def m(self) -> int:
        return self.x.shape[0]

    @property
    def d_x(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class MomentSet:
    """Second moments g, label-weighted moments yg, cross vector y_vec, row count m."""

    g: np.ndarray
    yg: np.ndarray
    y_vec: np.ndarray
    m: int


def _pairwise_blocks(terms: list[np.ndarray]) -> np.ndarray:
    """Fixed-tree pairwise reduction; deterministic for a given block count."""
    while len(terms) > 1:
        paired = [terms[i] + terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            paired.append(terms[-1])
        terms = paired
    return terms[0]


def _weighted_second_moment(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """sum_l w[l] * outer(x[l], x[l]) with blockwise pairwise accumulation."""
    blocks = []
    for start in range(0, x.shape[0], _BLOCK):
        xb = x[start:start + _BLOCK]
        wb = w[start:start + _BLOCK]
        blocks.append(xb.T @ (wb[:, None] * xb))
    return symmetrize(_pairwise_blocks(blocks))


def build_moments(data: Dataset) -> MomentSet:
    """Assemble g[q,r] = sum x_q x_r, yg[q,r] = sum y x_q x_r, y_vec[q] = sum y x_q."""
    ones = np.ones(data.m)
    g = _weighted_second_moment(data.x, ones)
    yg = _weighted_second_moment(data.x, data.y)
    blocks = [
        data.x[s:s + _BLOCK].T @ data.y[s:s + _BLOCK]
        for s in range(0, data.m, _BLOCK)
    ]
    y_vec = _pairwise_blocks(blocks)
    return MomentSet(g=g, yg=yg, y_vec=y_vec, m=data.m)


def regularize(g: np.ndarray, lam: float) -> np.ndarray:
    """Ridge shift g + lam * mean(diag(g)) * I; lam = 0 returns g unchanged.

    The shift scales with the mean diagonal so lam is unit-free.  An
    all-zero g stays all-zero: callers must treat that as fatal.
    """
    if lam < 0:
        raise ValueError("regularization parameter must be >= 0")
    g = np.asarray(g, dtype=float)
    if lam == 0.0:
        return g.copy()
    shift = lam * float(np.mean(np.diag(g)))
    return g + shift * np.eye(g.shape[0])


def build_n_weights(data: Dataset, g_inv: np.ndarray) -> np.ndarray:
    """Per-observation weights n[l] = 1 / (x_l . g_inv . x_l).

    Normalizes each observation to unit probability mass in the
    inverse-moment metric.  Raises SingularProjection for a row whose
    quadratic form is numerically zero (an all-zero feature row).
    """
    g_inv = np.asarray(g_inv, dtype=float)
    if g_inv.shape != (data.d_x, data.d_x):
        raise DimensionMismatch("g_inv dimension does not match the dataset")
    quad = np.einsum("li,ij,lj->l", data.x, g_inv, data.x)
    floor = 1e-14 * float(np.trace(g_inv))
    bad = np.nonzero(quad <= floor)[0]
    if bad.size:
        raise SingularProjection(row=int(bad[0]))
    return 1.0 / quad


def build_weighted_matrix(data: Dataset, weights) -> np.ndarray:
    """sum_l weights[l] * outer(x_l, x_l); weights may carry any sign."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (data.m,):
        raise DimensionMismatch(f"expected {data.m} weights, got shape {w.shape}")
    return _weighted_second_moment(data.x, w)
