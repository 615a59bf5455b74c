"""Deterministic synthetic datasets for the benchmark targets.

Each sample draws an abscissa uniformly from [-1, 1], labels it with the
target function, perturbs the abscissa with uniform noise of half-width
``noise_r``, and expands the perturbed value through a polynomial basis.
The PCG64 stream and the fixed draw order (abscissa then noise, per
sample) make generation a pure function of the spec.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, evaluate_basis_batch
from .moments import Dataset

TARGETS = ("linear", "runge", "step")
GENERATOR_NAME = "pcg64"


@dataclass(frozen=True)
class SynthSpec:
    """Target name, sample count, noise half-width, feature basis, seed."""

    target: str
    m: int
    noise_r: float
    basis: BasisSpec
    seed: int

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}; expected one of {TARGETS}")
        if self.m < 1:
            raise ValueError("sample count must be >= 1")
        if self.noise_r < 0:
            raise ValueError("noise half-width must be >= 0")


def target_fn(target: str, t: float) -> float:
    """The benchmark targets: identity, the classic 1/(1+25t^2) bump, unit step."""
    if target == "linear":
        return float(t)
    if target == "runge":
        return 1.0 / (1.0 + 25.0 * t * t)
    if target == "step":
        return 0.0 if t <= 0.0 else 1.0
    raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")


def generate(spec: SynthSpec) -> Dataset:
    """Draw the sample; same spec (seed included) gives bit-identical output."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    # one (abscissa, noise) pair per sample, in sample order
    draws = 2.0 * rng.random((spec.m, 2)) - 1.0
    t = draws[:, 0]
    eps = draws[:, 1]
    y = np.array([target_fn(spec.target, ti) for ti in t])
    x = evaluate_basis_batch(spec.basis, t + spec.noise_r * eps)
    return Dataset(x=x, y=y)
