"""Dense symmetric linear algebra kernel.

Cholesky factorization, SPD inversion, standard and generalized symmetric
eigendecomposition (cyclic Jacobi rotations), and a condition-number
diagnostic.  Sized for the small dense matrices this package works with
(dimension up to ~50); everything is stored as plain row-major float64
numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotPositiveDefinite

# Cholesky pivot must exceed this fraction of the largest input diagonal.
PIVOT_RTOL = 1e-13
# Jacobi: stop when the off-diagonal Frobenius norm drops below this
# fraction of the full Frobenius norm; hard cap on cyclic sweeps.
JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_sym_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a square symmetric float64 array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise DimensionMismatch("matrix must have dimension >= 1")
    if not np.array_equal(m, m.T):
        raise DimensionMismatch("matrix is not exactly symmetric")
    return m


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one (exact symmetry)."""
    u = np.triu(np.asarray(a, dtype=float))
    return u + np.triu(u, 1).T


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular L with positive diagonal, L @ L.T = input."""

    lower: np.ndarray

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending; column i of ``vectors`` pairs with ``values[i]``.

    For a generalized decomposition with metric B the columns satisfy
    vectors.T @ B @ vectors = identity.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def cholesky(a) -> CholeskyFactor:
    """Factor a symmetric positive definite matrix as L @ L.T.

    Raises NotPositiveDefinite (with the failing pivot index) as soon as a
    pivot falls below PIVOT_RTOL times the largest input diagonal entry.
    """
    m = as_sym_matrix(a)
    n = m.shape[0]
    threshold = PIVOT_RTOL * max(float(np.max(np.diag(m))), 0.0)
    lower = np.zeros((n, n))
    for j in range(n):
        pivot = m[j, j] - lower[j, :j] @ lower[j, :j]
        if pivot <= threshold:
            raise NotPositiveDefinite(j)
        ljj = math.sqrt(pivot)
        lower[j, j] = ljj
        if j + 1 < n:
            lower[j + 1:, j] = (m[j + 1:, j] - lower[j + 1:, :j] @ lower[j, :j]) / ljj
    return CholeskyFactor(lower)


def _solve_lower(lower: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Forward substitution: solve lower @ y = b (b may be 1-D or 2-D)."""
    y = np.array(b, dtype=float)
    for i in range(lower.shape[0]):
        y[i] -= lower[i, :i] @ y[:i]
        y[i] /= lower[i, i]
    return y


def _solve_upper_t(lower: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Back substitution: solve lower.T @ x = b."""
    x = np.array(b, dtype=float)
    for i in range(lower.shape[0] - 1, -1, -1):
        x[i] -= lower[i + 1:, i] @ x[i + 1:]
        x[i] /= lower[i, i]
    return x


def solve_cholesky(factor: CholeskyFactor, b) -> np.ndarray:
    """Solve (L @ L.T) z = b given the factor."""
    rhs = np.asarray(b, dtype=float)
    if rhs.shape[0] != factor.dim:
        raise DimensionMismatch(
            f"rhs length {rhs.shape[0]} != factor dimension {factor.dim}"
        )
    return _solve_upper_t(factor.lower, _solve_lower(factor.lower, rhs))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the first non-negligible component is positive."""
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        big = np.abs(col).max()
        if big == 0.0:
            continue
        nz = np.nonzero(np.abs(col) > 1e-12 * big)[0]
        if nz.size and col[nz[0]] < 0.0:
            vectors[:, j] = -col
    return vectors


def _jacobi(work: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi on a symmetric matrix; returns (diagonal, rotations).

    ``work`` is destroyed.  Raises NoConvergence if the off-diagonal norm
    has not met the threshold after JACOBI_MAX_SWEEPS sweeps.
    """
    n = work.shape[0]
    rot = np.eye(n)
    norm = float(np.linalg.norm(work))
    if n == 1 or norm == 0.0:
        return np.diag(work).copy(), rot
    target = JACOBI_RTOL * norm
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(work - np.diag(np.diag(work))))
        if off <= target:
            return np.diag(work).copy(), rot
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if apq == 0.0:
                    continue
                diff = work[q, q] - work[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                mask = np.ones(n, dtype=bool)
                mask[p] = mask[q] = False
                aip = work[mask, p].copy()
                aiq = work[mask, q].copy()
                new_p = aip - s * (aiq + tau * aip)
                new_q = aiq + s * (aip - tau * aiq)
                work[mask, p] = new_p
                work[p, mask] = new_p
                work[mask, q] = new_q
                work[q, mask] = new_q
                work[p, p] -= t * apq
                work[q, q] += t * apq
                work[p, q] = work[q, p] = 0.0
                vp = rot[:, p].copy()
                vq = rot[:, q].copy()
                rot[:, p] = vp - s * (vq + tau * vp)
                rot[:, q] = vq + s * (vp - tau * vq)
    raise NoConvergence(JACOBI_MAX_SWEEPS)


def _sorted_ascending(values: np.ndarray, vectors: np.ndarray) -> EigenDecomposition:
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], _fix_signs(vectors[:, order]))


def sym_eigen(a) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending."""
    m = as_sym_matrix(a)
    values, vectors = _jacobi(m.copy())
    return _sorted_ascending(values, vectors)


def gen_sym_eigen(a, b) -> EigenDecomposition:
    """Solve a @ v = value * b @ v for symmetric a and SPD b.

    Reduction through the Cholesky factor of b: solve the standard problem
    on L^-1 a L^-T, then back-transform the eigenvectors with L^-T so they
    come out b-orthonormal.
    """
    ma = as_sym_matrix(a)
    factor = cholesky(b)
    if ma.shape[0] != factor.dim:
        raise DimensionMismatch("a and b dimensions differ")
    lower = factor.lower
    half = _solve_lower(lower, ma)          # L^-1 a
    reduced = _solve_lower(lower, half.T)   # L^-1 (L^-1 a)^T = L^-1 a L^-T
    values, vectors = _jacobi(symmetrize(reduced))
    vectors = _solve_upper_t(lower, vectors)
    return _sorted_ascending(values, vectors)


def invert_spd(a) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix (exactly symmetric)."""
    factor = cholesky(a)
    inv = solve_cholesky(factor, np.eye(factor.dim))
    return symmetrize(inv)


def condition_estimate(a) -> float:
    """max|eigenvalue| / min|eigenvalue|; inf when the matrix is numerically singular.

    Reports, never raises (beyond input validation).
    """
    m = as_sym_matrix(a)
    try:
        magnitudes = np.abs(sym_eigen(m).values)
    except NoConvergence:
        return math.inf
    smallest = float(magnitudes.min())
    if smallest < 1e-300:
        return math.inf
    return float(magnitudes.max()) / smallest
