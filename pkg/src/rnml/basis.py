"""Polynomial feature bases evaluated through three-term recurrences.

Scalar inputs are expanded into vectors (Q_0(t), ..., Q_{d-1}(t)); using an
orthogonal family (Chebyshev, Legendre, ...) keeps the resulting moment
matrix far better conditioned than raw monomials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownFamily

FAMILIES = ("chebyshev", "legendre", "hermite", "laguerre", "monomial")


@dataclass(frozen=True)
class BasisSpec:
    """A polynomial family plus the number of degrees to evaluate."""

    family: str
    degree_count: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnknownFamily(
                f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}"
            )
        if self.degree_count < 1:
            raise ValueError("degree_count must be >= 1")


def evaluate_basis(spec: BasisSpec, t: float) -> np.ndarray:
    """Values (Q_0(t), ..., Q_{d-1}(t)) for the family's standard recurrence."""
    return evaluate_basis_batch(spec, np.array([t]))[0]


def evaluate_basis_batch(spec: BasisSpec, points) -> np.ndarray:
    """Row l holds the basis evaluated at points[l]; shape (len(points), d)."""
    t = np.asarray(points, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("points must be a nonempty 1-D array")
    if not np.all(np.isfinite(t)):
        raise ValueError("points must be finite")
    d = spec.degree_count
    out = np.empty((t.size, d))
    out[:, 0] = 1.0
    if d == 1:
        return out
    family = spec.family
    # degree-one term
    if family == "laguerre":
        out[:, 1] = 1.0 - t
    else:
        out[:, 1] = t
    for k in range(1, d - 1):
        prev, cur = out[:, k - 1], out[:, k]
        if family == "chebyshev":
            nxt = 2.0 * t * cur - prev
        elif family == "legendre":
            nxt = ((2 * k + 1) * t * cur - k * prev) / (k + 1)
        elif family == "hermite":
            # probabilists' convention
            nxt = t * cur - k * prev
        elif family == "laguerre":
            nxt = ((2 * k + 1 - t) * cur - k * prev) / (k + 1)
        else:  # monomial
            nxt = t * cur
        out[:, k + 1] = nxt
    return out
