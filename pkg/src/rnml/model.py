"""Fitted spectral model: outcome spectrum, cluster centers, probabilities,
point estimators, coverage diagnostics, and distribution estimation.

The central object is the generalized eigendecomposition of the pencil
(label-weighted moments, plain moments).  Eigenvalues are the possible
outcomes, eigenvectors the cluster centers; squared projections of a query
onto the centers give outcome probabilities without any norm-based loss.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyIntervalWarning,
    LabelNotInClasses,
    NotTwoClasses,
    SingularProjection,
)
from .linalg import EigenDecomposition, gen_sym_eigen, invert_spd
from .moments import (
    Dataset,
    MomentSet,
    build_moments,
    build_n_weights,
    build_weighted_matrix,
    regularize,
)


@dataclass(frozen=True)
class ClusterModel:
    """Everything the estimators need, independent of the training rows.

    ``eigenvectors`` column i is the i-th cluster center, normalized so
    eigenvectors.T @ g @ eigenvectors = identity against the (regularized)
    moment matrix g whose inverse is stored in ``g_inv``.  ``y_vec`` is the
    label/feature cross-moment vector, kept for the least-squares estimator.
    """

    eigenvalues: np.ndarray   # ascending outcome spectrum
    eigenvectors: np.ndarray  # d_x x d_x, columns are cluster centers
    g_inv: np.ndarray
    y_vec: np.ndarray
    coverage: np.ndarray      # effective observation count per center
    localization: np.ndarray  # impurity mass per center
    m: int
    lambda_used: float

    @property
    def d_x(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class Prediction:
    """Per-query outcome probabilities plus the two point estimators."""

    probabilities: np.ndarray  # aligned with the model's ascending spectrum
    a_ls: float
    a_rn: float


@dataclass(frozen=True)
class DistributionEstimate:
    """Quadrature-style estimate of the label distribution: nodes and masses."""

    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class TwoClassModel:
    """Signed-coverage classifier for a two-label sample.

    ``strengths`` (ascending) measure how strongly each state separates the
    classes: the value is the class-1-minus-class-2 effective count carried
    by that state.  ``signed_trace`` is the exact basis-complete sum the
    strengths must add up to.
    """

    strengths: np.ndarray
    classifiers: np.ndarray
    class1: float
    class2: float
    signed_trace: float


@dataclass(frozen=True)
class OutlierReport:
    """Clean vs one-outlier spectra, aligned node by node."""

    clean: DistributionEstimate
    skewed: DistributionEstimate
    escaped_indices: tuple[int, ...]  # skewed nodes outside the clean label range
    node_shifts: np.ndarray           # |node change| for the aligned remainder
    weight_shifts: np.ndarray         # relative |weight change| for the remainder
    moved_count: int                  # node_shifts above the tolerance
    tolerance: float


def _prepared(data: Dataset, lam: float) -> tuple[MomentSet, np.ndarray, np.ndarray]:
    moments = build_moments(data)
    g_reg = regularize(moments.g, lam)
    return moments, g_reg, invert_spd(g_reg)


def _omega_from(x: np.ndarray, eigenvectors: np.ndarray, n_weights: np.ndarray) -> np.ndarray:
    proj = x @ eigenvectors
    return proj**2 * n_weights[:, None]


def fit(data: Dataset, lam: float = 0.0) -> ClusterModel:
    """Solve the moment pencil and attach coverage/localization diagnostics.

    ``lam`` is the relative ridge shift applied to the plain moment matrix
    before factorization; raise it when NotPositiveDefinite is reported.
    """
    moments, g_reg, g_inv = _prepared(data, lam)
    decomp = gen_sym_eigen(moments.yg, g_reg)
    n_weights = build_n_weights(data, g_inv)
    omega = _omega_from(data.x, decomp.vectors, n_weights)
    return ClusterModel(
        eigenvalues=decomp.values,
        eigenvectors=decomp.vectors,
        g_inv=g_inv,
        y_vec=moments.y_vec,
        coverage=omega.sum(axis=0),
        localization=(omega * (1.0 - omega)).sum(axis=0),
        m=data.m,
        lambda_used=lam,
    )


def _query_quadratic(model: ClusterModel, x: np.ndarray) -> float:
    quad = float(x @ model.g_inv @ x)
    if quad <= 1e-14 * float(np.trace(model.g_inv)):
        raise SingularProjection()
    return quad


def _check_query(model: ClusterModel, x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (model.d_x,):
        raise DimensionMismatch(f"query must have length {model.d_x}, got shape {v.shape}")
    return v


def predict(model: ClusterModel, x) -> Prediction:
    """Outcome probabilities and the two point estimates for one query.

    The probabilities are the normalized squared projections onto the
    cluster centers; the spectral estimate ``a_rn`` is their mean outcome
    (a ratio of two quadratic forms, so it can never leave the spectrum
    range), while ``a_ls`` is the classic linear least-squares value.
    """
    v = _check_query(model, x)
    _query_quadratic(model, v)
    w = (v @ model.eigenvectors) ** 2
    total = float(w.sum())
    probabilities = w / total
    a_ls = float(v @ model.g_inv @ model.y_vec)
    a_rn = float(probabilities @ model.eigenvalues)
    return Prediction(probabilities=probabilities, a_ls=a_ls, a_rn=a_rn)


def omega_matrix(model: ClusterModel, data: Dataset) -> np.ndarray:
    """Per-row outcome probabilities; entry [l, i] is row l's mass on center i.

    On the training set every row sums to 1.
    """
    if data.d_x != model.d_x:
        raise DimensionMismatch("dataset dimension does not match the model")
    n_weights = build_n_weights(data, model.g_inv)
    return _omega_from(data.x, model.eigenvectors, n_weights)


def distribution(model: ClusterModel) -> DistributionEstimate:
    """Label-distribution estimate: (outcome, coverage) pairs, nodes ascending."""
    return DistributionEstimate(
        nodes=model.eigenvalues.copy(), weights=model.coverage.copy()
    )


def project(model: ClusterModel, xa, xb) -> float:
    """Overlap of two feature vectors in the inverse-moment metric."""
    va = _check_query(model, xa)
    vb = _check_query(model, xb)
    return float(va @ model.g_inv @ vb)


def state_from_x(model: ClusterModel, xc) -> np.ndarray:
    """Expansion coefficients of the query's normalized state over the centers.

    The squared coefficients are exactly the prediction probabilities, and
    they sum to 1 (completeness of the center basis).
    """
    v = _check_query(model, xc)
    quad = _query_quadratic(model, v)
    return (v @ model.eigenvectors) / np.sqrt(quad)


def mixed_state_average(model: ClusterModel, yg) -> float:
    """Average outcome of the whole-sample mixed state: trace(yg @ g_inv) / d_x."""
    m = np.asarray(yg, dtype=float)
    if m.shape != (model.d_x, model.d_x):
        raise DimensionMismatch("matrix dimension does not match the model")
    return float(np.trace(m @ model.g_inv)) / model.d_x


def coverage_eigenstates(data: Dataset, lam: float = 0.0) -> EigenDecomposition:
    """States with extremal coverage: eigendecomposition of the pencil
    (normalized second moments, plain second moments).

    Eigenvalues are per-state coverages and sum to the observation count;
    the top-coverage columns are the natural choice when only d <= d_x
    components are to be kept (see ``top_coverage_states``).
    """
    _, g_reg, g_inv = _prepared(data, lam)
    n_weights = build_n_weights(data, g_inv)
    cg = build_weighted_matrix(data, n_weights)
    return gen_sym_eigen(cg, g_reg)


def top_coverage_states(decomp: EigenDecomposition, d: int) -> tuple[np.ndarray, np.ndarray]:
    """The d highest-eigenvalue states, ordered descending."""
    if not 1 <= d <= decomp.dim:
        raise DimensionMismatch(f"d must be in [1, {decomp.dim}], got {d}")
    order = np.argsort(decomp.values, kind="stable")[::-1][:d]
    return decomp.values[order], decomp.vectors[:, order]


def interval_coverage(data: Dataset, lam: float, lo: float, hi: float) -> EigenDecomposition:
    """Coverage eigenstates restricted to observations with label in [lo, hi).

    The eigenvalue sum equals trace(g_inv @ weighted moments), the
    effective observation count inside the interval.
    """
    if not lo < hi:
        raise ValueError(f"empty interval: lo={lo!r} must be < hi={hi!r}")
    _, g_reg, g_inv = _prepared(data, lam)
    n_weights = build_n_weights(data, g_inv)
    inside = (data.y >= lo) & (data.y < hi)
    if not inside.any():
        warnings.warn(
            f"no observation has a label in [{lo}, {hi})", EmptyIntervalWarning,
            stacklevel=2,
        )
    cg = build_weighted_matrix(data, np.where(inside, n_weights, 0.0))
    return gen_sym_eigen(cg, g_reg)


def two_class_classifier(
    data: Dataset,
    lam: float = 0.0,
    class1: float | None = None,
    class2: float | None = None,
) -> TwoClassModel:
    """Classifier maximizing the class-1-minus-class-2 effective count.

    Signs the per-observation weights +1 for class 1 and -1 for class 2 and
    solves the same pencil as ``coverage_eigenstates``; the eigenvalues are
    the prediction strengths and the eigenvectors the classifiers.  When
    the classes are not given, the larger of the two distinct labels plays
    class 1.
    """
    labels = np.unique(data.y)
    if class1 is None or class2 is None:
        if labels.size != 2:
            raise NotTwoClasses(
                f"expected exactly two distinct labels, found {labels.size}"
            )
        class2, class1 = float(labels[0]), float(labels[1])
    if class1 == class2:
        raise NotTwoClasses("class labels must differ")
    is1 = data.y == class1
    is2 = data.y == class2
    stray = np.nonzero(~(is1 | is2))[0]
    if stray.size:
        raise LabelNotInClasses(int(stray[0]), float(data.y[stray[0]]))
    _, g_reg, g_inv = _prepared(data, lam)
    n_weights = build_n_weights(data, g_inv)
    signed = np.where(is1, n_weights, -n_weights)
    cg = build_weighted_matrix(data, signed)
    decomp = gen_sym_eigen(cg, g_reg)
    return TwoClassModel(
        strengths=decomp.values,
        classifiers=decomp.vectors,
        class1=class1,
        class2=class2,
        signed_trace=float(np.trace(g_inv @ cg)),
    )


def _align_dropping(clean: np.ndarray, kept: np.ndarray) -> np.ndarray:
    """Indices into ``clean`` pairing order-wise with ``kept`` (both sorted),
    choosing which clean nodes to drop so the worst node shift is smallest."""
    n_drop = clean.size - kept.size
    if n_drop <= 0 or kept.size == 0:
        return np.arange(kept.size)
    if n_drop > 3:
        return np.arange(kept.size)
    best, best_cost = np.arange(kept.size), np.inf
    for drop in combinations(range(clean.size), n_drop):
        keep = np.array([i for i in range(clean.size) if i not in drop], dtype=int)
        cost = float(np.max(np.abs(clean[keep] - kept)))
        if cost < best_cost:
            best, best_cost = keep, cost
    return best


def outlier_report(
    data: Dataset,
    lam: float,
    y_outlier: float,
    tolerance: float = 0.05,
    seed: int = 0,
) -> OutlierReport:
    """Fit with and without one injected outlier row and compare spectra.

    The injected row copies the features of a (seeded) random existing
    observation and carries ``y_outlier`` as its label.  Skewed nodes
    outside the clean label range count as escaped; the remaining nodes are
    aligned against the clean spectrum and ``moved_count`` says how many of
    them shifted by more than ``tolerance``.
    """
    clean_model = fit(data, lam)
    rng = np.random.Generator(np.random.PCG64(seed))
    row = int(rng.integers(data.m))
    skewed_data = Dataset(
        x=np.vstack([data.x, data.x[row]]),
        y=np.append(data.y, y_outlier),
    )
    skewed_model = fit(skewed_data, lam)
    clean = distribution(clean_model)
    skewed = distribution(skewed_model)

    span = float(data.y.max() - data.y.min())
    slack = 1e-8 * span if span > 0 else 1e-8
    lo, hi = float(data.y.min()) - slack, float(data.y.max()) + slack
    escaped = tuple(
        int(i) for i, node in enumerate(skewed.nodes) if not lo <= node <= hi
    )
    kept_mask = np.ones(skewed.nodes.size, dtype=bool)
    kept_mask[list(escaped)] = False
    kept_nodes = skewed.nodes[kept_mask]
    kept_weights = skewed.weights[kept_mask]

    pair = _align_dropping(clean.nodes, kept_nodes)
    node_shifts = np.abs(clean.nodes[pair] - kept_nodes)
    denom = np.where(clean.weights[pair] == 0.0, 1.0, np.abs(clean.weights[pair]))
    weight_shifts = np.abs(clean.weights[pair] - kept_weights) / denom
    return OutlierReport(
        clean=clean,
        skewed=skewed,
        escaped_indices=escaped,
        node_shifts=node_shifts,
        weight_shifts=weight_shifts,
        moved_count=int(np.sum(node_shifts > tolerance)),
        tolerance=tolerance,
    )
