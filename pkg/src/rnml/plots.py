"""Figure rendering for the report path.

Every CLI command that writes delimited output can also render a matching
matplotlib figure next to it.  Rendering is file-only (Agg backend), so it
works headless and never pops a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_FIG_KW = dict(figsize=(6.4, 4.2), dpi=120)


def _finish(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_sweep(path, axis: np.ndarray, a_ls: np.ndarray, a_rn: np.ndarray,
                 reference: np.ndarray | None = None, title: str = "") -> None:
    """Point estimates along a scalar query grid, optionally with the truth."""
    fig, ax = plt.subplots(**_FIG_KW)
    if reference is not None:
        ax.plot(axis, reference, color="0.6", lw=1.0, label="target")
    ax.plot(axis, a_ls, "C0--", lw=1.2, label="least squares")
    ax.plot(axis, a_rn, "C1-", lw=1.4, label="spectral ratio")
    ax.set_xlabel("x")
    ax.set_ylabel("y estimate")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    _finish(fig, path)


def render_probabilities(path, axis: np.ndarray, probabilities: np.ndarray,
                         nodes: np.ndarray | None = None, title: str = "") -> None:
    """One curve per outcome: probability of that outcome along the grid."""
    fig, ax = plt.subplots(**_FIG_KW)
    for i in range(probabilities.shape[1]):
        label = f"y={nodes[i]:.3g}" if nodes is not None else f"outcome {i}"
        ax.plot(axis, probabilities[:, i], lw=1.0, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("outcome probability")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=7, ncol=2)
    ax.grid(True, alpha=0.3)
    _finish(fig, path)


def render_distribution(path, nodes: np.ndarray, weights: np.ndarray,
                        title: str = "") -> None:
    """Quadrature-style label distribution as a stem chart."""
    fig, ax = plt.subplots(**_FIG_KW)
    markers, stems, base = ax.stem(nodes, weights)
    plt.setp(stems, lw=1.2)
    plt.setp(markers, ms=5)
    ax.set_xlabel("outcome node")
    ax.set_ylabel("coverage weight")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    _finish(fig, path)
