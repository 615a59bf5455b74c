"""Command-line front end.

Subcommands: gen (synthetic datasets), fit (model + spectrum table),
predict (estimate sweeps), distribution (node/weight table), select
(coverage-ranked component transform), classify2 (two-class strengths),
repro (the full benchmark grid with figures and a manifest).

Exit codes: 0 success, 2 invalid configuration or malformed input,
3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import formats, model as model_mod, plots
from .basis import FAMILIES, BasisSpec, evaluate_basis_batch
from .errors import (
    CsvParse,
    InvalidConfig,
    LabelNotInClasses,
    ModelParse,
    NoConvergence,
    NotPositiveDefinite,
    NotTwoClasses,
    RnmlError,
    SingularProjection,
    UnknownFamily,
)
from .linalg import condition_estimate
from .moments import Dataset, build_moments
from .synth import GENERATOR_NAME, TARGETS, SynthSpec, generate, target_fn

SEED_ENV = "RNML_SEED"
GRID_LO, GRID_HI, GRID_COUNT = -1.2, 1.2, 241
INTERIOR = 0.9
REPRO_NOISE = (0.1, 0.3)
REPRO_DIMS = (10, 20)


def _seed_default(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InvalidConfig(f"{SEED_ENV}={env!r} is not an integer") from None
    return 0


def _h(v: float) -> str:
    """Human-table number: 7 significant digits."""
    return format(float(v), ".7g")


def _load_dataset(path: str) -> Dataset:
    x, y = formats.read_dataset_csv(path)
    return Dataset(x=x, y=y)


def _sweep(loaded, axis_label: str, axis: np.ndarray, x_rows: np.ndarray):
    a_ls = np.empty(axis.size)
    a_rn = np.empty(axis.size)
    probs = np.empty((axis.size, loaded.d_x))
    for i, row in enumerate(x_rows):
        p = model_mod.predict(loaded, row)
        a_ls[i], a_rn[i], probs[i] = p.a_ls, p.a_rn, p.probabilities
    return a_ls, a_rn, probs


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.m < 1:
        raise InvalidConfig("--m must be >= 1")
    if args.r < 0:
        raise InvalidConfig("--r must be >= 0")
    if args.dx < 1:
        raise InvalidConfig("--dx must be >= 1")
    seed = _seed_default(args.seed)
    spec = SynthSpec(
        target=args.target, m=args.m, noise_r=args.r,
        basis=BasisSpec(args.basis, args.dx), seed=seed,
    )
    data = generate(spec)
    meta = {
        "generator": GENERATOR_NAME, "seed": seed, "target": args.target,
        "r": args.r, "m": args.m, "basis": args.basis, "dx": args.dx,
    }
    formats.write_dataset_csv(args.output, data.x, data.y, metadata=meta)
    print(" ".join(f"{k}={v}" for k, v in meta.items()))
    print(f"wrote {data.m} rows to {args.output}")
    return 0


def cmd_fit(args) -> int:
    data = _load_dataset(args.dataset)
    condition = condition_estimate(build_moments(data).g)
    try:
        fitted = model_mod.fit(data, args.lam)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(
            exc.pivot_index,
            f"moment matrix is not positive definite (pivot {exc.pivot_index}); "
            f"retry with a larger --lambda (used {args.lam:g})",
        ) from exc
    formats.write_model_json(args.output, fitted)
    print(f"condition(G) = {_h(condition)}   lambda = {_h(args.lam)}   "
          f"m = {data.m}   d_x = {data.d_x}")
    print(f"{'i':>4} {'y[i]':>14} {'C[i]':>14} {'D[i]':>14} {'D[i]/C[i]':>14}")
    for i in range(fitted.d_x):
        c = fitted.coverage[i]
        d = fitted.localization[i]
        ratio = d / c if c != 0.0 else 0.0
        print(f"{i:>4} {_h(fitted.eigenvalues[i]):>14} {_h(c):>14} "
              f"{_h(d):>14} {_h(ratio):>14}")
    print(f"wrote model to {args.output}")
    return 0


def cmd_predict(args) -> int:
    loaded = formats.read_model_json(args.model)
    if args.queries is not None:
        x_rows = formats.read_queries_csv(args.queries)
        if x_rows.shape[1] != loaded.d_x:
            raise InvalidConfig(
                f"queries have {x_rows.shape[1]} features, model expects {loaded.d_x}"
            )
        axis_label = "id"
        axis = np.arange(x_rows.shape[0], dtype=float)
        meta = {"model": args.model, "queries": args.queries}
    else:
        if args.basis is None:
            raise InvalidConfig("grid mode needs --basis (or pass --queries)")
        if args.count < 2:
            raise InvalidConfig("--count must be >= 2")
        if not args.lo < args.hi:
            raise InvalidConfig("--lo must be < --hi")
        axis_label = "t"
        axis = np.linspace(args.lo, args.hi, args.count)
        x_rows = evaluate_basis_batch(BasisSpec(args.basis, loaded.d_x), axis)
        meta = {"model": args.model, "basis": args.basis,
                "lo": args.lo, "hi": args.hi, "count": args.count}
    a_ls, a_rn, probs = _sweep(loaded, axis_label, axis, x_rows)
    formats.write_sweep_csv(args.output, axis_label, axis, a_ls, a_rn, probs,
                            metadata=meta)
    print(f"wrote {axis.size}-row sweep to {args.output}")
    if args.plot is not None:
        plots.render_sweep(args.plot, axis, a_ls, a_rn, title="estimate sweep")
        print(f"wrote figure to {args.plot}")
    return 0


def cmd_distribution(args) -> int:
    loaded = formats.read_model_json(args.model)
    est = model_mod.distribution(loaded)
    formats.write_distribution_csv(args.output, est, loaded.m)
    print(f"wrote {est.nodes.size} nodes to {args.output}")
    if args.plot is not None:
        plots.render_distribution(args.plot, est.nodes, est.weights,
                                  title="label distribution estimate")
        print(f"wrote figure to {args.plot}")
    return 0


def cmd_select(args) -> int:
    data = _load_dataset(args.dataset)
    d = args.d if args.d is not None else data.d_x
    if not 1 <= d <= data.d_x:
        raise InvalidConfig(f"--d must be in [1, {data.d_x}]")
    decomp = model_mod.coverage_eigenstates(data, args.lam)
    values, states = model_mod.top_coverage_states(decomp, d)
    print(f"{'rank':>4} {'coverage':>14}  state coefficients")
    for j in range(d):
        coeffs = " ".join(_h(v) for v in states[:, j])
        print(f"{j:>4} {_h(values[j]):>14}  {coeffs}")
    print(f"coverage sum (all {data.d_x} states) = {_h(float(np.sum(decomp.values)))}"
          f"   m = {data.m}")
    formats.write_transform_csv(args.output, values, states)
    print(f"wrote {d}-state transform to {args.output}")
    return 0


def cmd_classify2(args) -> int:
    data = _load_dataset(args.dataset)
    if (args.class1 is None) != (args.class2 is None):
        raise InvalidConfig("give both --class1 and --class2, or neither")
    result = model_mod.two_class_classifier(
        data, args.lam, class1=args.class1, class2=args.class2
    )
    print(f"class1 = {result.class1:g}   class2 = {result.class2:g}")
    print(f"{'rank':>4} {'strength':>14}  classifier coefficients")
    order = np.argsort(result.strengths, kind="stable")[::-1]
    for rank, j in enumerate(order):
        coeffs = " ".join(_h(v) for v in result.classifiers[:, j])
        print(f"{rank:>4} {_h(result.strengths[j]):>14}  {coeffs}")
    total = float(np.sum(result.strengths))
    print(f"strength sum = {_h(total)}   signed trace = {_h(result.signed_trace)}")
    return 0


def cmd_repro(args) -> int:
    if args.m < 1:
        raise InvalidConfig("--m must be >= 1")
    if args.count < 2:
        raise InvalidConfig("--count must be >= 2")
    base_seed = _seed_default(args.seed)
    os.makedirs(args.outdir, exist_ok=True)
    axis = np.linspace(GRID_LO, GRID_HI, args.count)
    interior = np.abs(axis) <= INTERIOR
    started = time.perf_counter()
    cells = []
    index = 0
    for target in TARGETS:
        for noise_r in REPRO_NOISE:
            for d_x in REPRO_DIMS:
                index += 1
                seed = base_seed + index
                name = f"{target}_r{noise_r:g}_dx{d_x}"
                cell_dir = os.path.join(args.outdir, name)
                os.makedirs(cell_dir, exist_ok=True)
                spec = SynthSpec(target=target, m=args.m, noise_r=noise_r,
                                 basis=BasisSpec("chebyshev", d_x), seed=seed)
                data = generate(spec)
                dataset_path = os.path.join(cell_dir, "dataset.csv")
                formats.write_dataset_csv(
                    dataset_path, data.x, data.y,
                    metadata={"generator": GENERATOR_NAME, "seed": seed,
                              "target": target, "r": noise_r, "m": args.m,
                              "basis": "chebyshev", "dx": d_x},
                )
                fitted = model_mod.fit(data, args.lam)
                model_path = os.path.join(cell_dir, "model.json")
                formats.write_model_json(model_path, fitted)
                x_rows = evaluate_basis_batch(BasisSpec("chebyshev", d_x), axis)
                a_ls, a_rn, probs = _sweep(fitted, "t", axis, x_rows)
                sweep_path = os.path.join(cell_dir, "sweep.csv")
                formats.write_sweep_csv(
                    sweep_path, "t", axis, a_ls, a_rn, probs,
                    metadata={"target": target, "r": noise_r, "dx": d_x,
                              "seed": seed, "m": args.m},
                )
                truth = np.array([target_fn(target, t) for t in axis])
                rmse_ls = float(np.sqrt(np.mean((a_ls - truth)[interior] ** 2)))
                rmse_rn = float(np.sqrt(np.mean((a_rn - truth)[interior] ** 2)))
                cell = {
                    "name": name, "target": target, "r": noise_r, "dx": d_x,
                    "seed": seed, "m": args.m, "lambda": args.lam,
                    "dataset": os.path.join(name, "dataset.csv"),
                    "model": os.path.join(name, "model.json"),
                    "sweep": os.path.join(name, "sweep.csv"),
                    "rmse_ls_interior": rmse_ls,
                    "rmse_rn_interior": rmse_rn,
                }
                if args.figures:
                    fig_path = os.path.join(cell_dir, "sweep.png")
                    plots.render_sweep(fig_path, axis, a_ls, a_rn, reference=truth,
                                       title=f"{target}, noise {noise_r:g}, "
                                             f"{d_x} components")
                    cell["figure"] = os.path.join(name, "sweep.png")
                    if target == "linear" and noise_r == 0.1 and d_x == 10:
                        prob_path = os.path.join(cell_dir, "probabilities.png")
                        plots.render_probabilities(
                            prob_path, axis, probs, nodes=fitted.eigenvalues,
                            title="outcome probabilities along the grid",
                        )
                        cell["probabilities_figure"] = os.path.join(
                            name, "probabilities.png")
                cells.append(cell)
                print(f"[{index:2d}/12] {name}: rmse_ls={_h(rmse_ls)} "
                      f"rmse_rn={_h(rmse_rn)}")
    manifest = {
        "generator": GENERATOR_NAME,
        "base_seed": base_seed,
        "m": args.m,
        "lambda": args.lam,
        "grid": {"lo": GRID_LO, "hi": GRID_HI, "count": args.count,
                 "interior_halfwidth": INTERIOR},
        "cells": cells,
    }
    manifest_path = os.path.join(args.outdir, "manifest.json")
    formats.write_json(manifest_path, manifest)
    elapsed = time.perf_counter() - started
    print(f"wrote {len(cells)} cells and {manifest_path} in {elapsed:.1f} s")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnml",
        description="Spectral cluster-center learning: fit, classify, and "
                    "estimate label distributions from moment matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic benchmark dataset")
    p.add_argument("--target", choices=TARGETS, required=True)
    p.add_argument("--m", type=int, required=True, help="sample count")
    p.add_argument("--r", type=float, default=0.0, help="noise half-width")
    p.add_argument("--basis", choices=FAMILIES, default="chebyshev")
    p.add_argument("--dx", type=int, required=True, help="feature dimension")
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("-o", "--output", required=True, help="dataset CSV path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fit", help="fit a model from a dataset CSV")
    p.add_argument("dataset", help="dataset CSV path")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="relative ridge shift for the moment matrix")
    p.add_argument("-o", "--output", required=True, help="model JSON path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="sweep the estimators over queries or a grid")
    p.add_argument("model", help="model JSON path")
    p.add_argument("--queries", default=None,
                   help="query CSV (x0..x{d-1}); omit to use a scalar grid")
    p.add_argument("--basis", choices=FAMILIES, default=None,
                   help="basis family for grid mode")
    p.add_argument("--lo", type=float, default=GRID_LO)
    p.add_argument("--hi", type=float, default=GRID_HI)
    p.add_argument("--count", type=int, default=GRID_COUNT)
    p.add_argument("-o", "--output", required=True, help="sweep CSV path")
    p.add_argument("--plot", default=None, help="also render a PNG figure here")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("distribution", help="label-distribution nodes and weights")
    p.add_argument("model", help="model JSON path")
    p.add_argument("-o", "--output", required=True, help="distribution CSV path")
    p.add_argument("--plot", default=None, help="also render a PNG figure here")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("select", help="rank states by coverage, emit a transform")
    p.add_argument("dataset", help="dataset CSV path")
    p.add_argument("--d", type=int, default=None, help="states to keep (default all)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("-o", "--output", required=True, help="transform CSV path")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("classify2", help="two-class strengths and classifiers")
    p.add_argument("dataset", help="dataset CSV path (exactly two distinct labels)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--class1", type=float, default=None)
    p.add_argument("--class2", type=float, default=None)
    p.set_defaults(func=cmd_classify2)

    p = sub.add_parser("repro", help="run the full 12-cell benchmark grid")
    p.add_argument("--outdir", required=True)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None,
                   help=f"base seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("--count", type=int, default=GRID_COUNT,
                   help="points per sweep grid")
    fig = p.add_mutually_exclusive_group()
    fig.add_argument("--figures", dest="figures", action="store_true", default=True)
    fig.add_argument("--no-figures", dest="figures", action="store_false")
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidConfig, CsvParse, ModelParse, UnknownFamily,
            NotTwoClasses, LabelNotInClasses) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotPositiveDefinite, NoConvergence, SingularProjection) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4
    except RnmlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
