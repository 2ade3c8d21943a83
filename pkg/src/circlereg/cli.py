"""Command-line entry points.

Exit codes: 0 success, 2 input/flag error, 3 numerical failure.
Reports are JSON with a schema-versioned layout; reruns with identical
flags and seed reproduce every field except wall-clock times.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .energy import FunctionalParams
from .field import AngleField, GridSpec, Mask
from .geometry import Metric
from .images import (
    extract_hue,
    load_angle_image,
    load_mask,
    load_signal_csv,
    render_hsv,
    save_angle_image,
    save_signal_csv,
)
from .mollifier import MollifierSpec
from .pipeline import (
    NoiseSpec,
    RunReport,
    add_noise,
    denoise,
    inpaint,
    make_rainbow,
    tv_denoise,
    tv_inpaint,
    wrapped_rmse,
)
from .solver import DescentConfig, NumericalError, default_step_size
from .study import (
    bbm_limit_study,
    conjecture_study,
    convergence_study,
    poincare_ratio_study,
    roughness_test_signal,
)

__all__ = ["main"]


def _add_shared_flags(sp):
    sp.add_argument("--s", type=float, default=0.5, help="smoothness order s in (0, 1]")
    sp.add_argument("--p", type=float, default=2.0, help="integrability exponent p > 1")
    sp.add_argument("--k", type=float, default=None,
                    help="kernel dimension offset k (default: grid dimension N)")
    sp.add_argument("--l", type=int, default=1, choices=(0, 1),
                    help="mollifier switch: 1 = mollified kernel, 0 = plain")
    sp.add_argument("--alpha", type=float, default=1.0, help="regularization weight")
    sp.add_argument("--eps", type=float, default=0.1, help="mollifier scale epsilon")
    sp.add_argument("--metric", choices=("geodesic", "chord"), default="geodesic")
    sp.add_argument("--mollifier", choices=("gaussian", "bump"), default="gaussian")
    sp.add_argument("--steps", type=int, default=200, help="gradient descent steps")
    sp.add_argument("--step-size", type=float, default=None,
                    help="fixed step size (default: grid heuristic)")
    sp.add_argument("--seed", type=int, default=0, help="noise generator seed")
    sp.add_argument("--sigma", type=float, default=0.0,
                    help="add Gaussian angle noise of this std dev before solving")
    sp.add_argument("--mask", default=None,
                    help="mask image: nonzero pixel = unknown region")
    sp.add_argument("--clean", default=None,
                    help="ground-truth field (enables wrapped-RMSE metrics)")
    sp.add_argument("--out", default=None, help="output path")
    sp.add_argument("--report", default=None, help="write a JSON report here")
    sp.add_argument("--trunc-tol", type=float, default=1e-12,
                    help="relative mollifier truncation tolerance")
    sp.add_argument("--threads", type=int, default=1,
                    help="cap on kernel parallelism (accepted for compatibility)")


def _params_from_args(args, ndim: int) -> FunctionalParams:
    k = float(ndim) if args.k is None else args.k
    mollifier = MollifierSpec(args.mollifier, args.eps, ndim) if args.l == 1 else None
    return FunctionalParams(
        p=args.p, s=args.s, k=k, l=args.l, alpha=args.alpha,
        metric=Metric(args.metric), mollifier=mollifier,
    )


def _cfg_from_args(args, grid) -> DescentConfig:
    step = args.step_size if args.step_size is not None else default_step_size(grid)
    return DescentConfig(steps=args.steps, step_size=step)


def _load_field(path) -> AngleField:
    path = str(path)
    if path.endswith(".csv"):
        return load_signal_csv(path)
    return load_angle_image(path)


def _save_field(u: AngleField, path):
    path = str(path)
    if path.endswith(".csv"):
        save_signal_csv(u, path)
    else:
        save_angle_image(u, path)


def _write_report(report: RunReport, path, seed=None):
    if seed is not None:
        report.seed = seed
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _study_report(command: str, params: dict, metrics: dict, t0: float) -> RunReport:
    return RunReport(
        command=command, params=params, metrics=metrics,
        wall_time_ms=(time.perf_counter() - t0) * 1e3,
    )


def _cmd_denoise(args, expect_ndim: int) -> int:
    field = _load_field(args.input)
    if field.grid.ndim != expect_ndim:
        raise ValueError(f"expected a {expect_ndim}D input, got {field.grid.ndim}D")
    clean = _load_field(args.clean) if args.clean else None
    if args.sigma > 0:
        if clean is None:
            clean = field
        field = add_noise(field, NoiseSpec(args.sigma, args.seed))
    params = _params_from_args(args, field.grid.ndim)
    cfg = _cfg_from_args(args, field.grid)
    result, report = denoise(field, params, cfg, clean=clean, trunc_tol=args.trunc_tol)
    report.command = f"denoise{expect_ndim}d"
    if args.out:
        _save_field(result, args.out)
    _write_report(report, args.report, seed=args.seed)
    return 0


def _cmd_inpaint(args) -> int:
    field = _load_field(args.input)
    if args.mask is None:
        raise ValueError("inpaint requires --mask")
    mask = load_mask(args.mask, field.grid)
    clean = _load_field(args.clean) if args.clean else None
    if args.sigma > 0:
        if clean is None:
            clean = field
        field = add_noise(field, NoiseSpec(args.sigma, args.seed))
    params = _params_from_args(args, field.grid.ndim)
    cfg = _cfg_from_args(args, field.grid)
    result, report = inpaint(
        field, mask, params, cfg, clean=clean, init=args.init, trunc_tol=args.trunc_tol
    )
    if args.out:
        _save_field(result, args.out)
    _write_report(report, args.report, seed=args.seed)
    return 0


def _cmd_tv_denoise(args) -> int:
    t0 = time.perf_counter()
    field = _load_field(args.input)
    out_vals = tv_denoise(field.values, lam=args.lam, iters=args.iters)
    result = field.with_values(out_vals)
    report = _study_report("tv-denoise", {"lam": args.lam, "iters": args.iters}, {}, t0)
    if args.clean:
        report.metrics["wrapped_rmse"] = wrapped_rmse(result, _load_field(args.clean))
    if args.out:
        _save_field(result, args.out)
    _write_report(report, args.report)
    return 0


def _cmd_tv_inpaint(args) -> int:
    t0 = time.perf_counter()
    field = _load_field(args.input)
    if args.mask is None:
        raise ValueError("tv-inpaint requires --mask")
    mask = load_mask(args.mask, field.grid)
    out_vals = tv_inpaint(field.values, mask, lam=args.lam, iters=args.iters, mu=args.mu)
    result = field.with_values(out_vals)
    report = _study_report(
        "tv-inpaint", {"lam": args.lam, "iters": args.iters, "mu": args.mu}, {}, t0
    )
    if args.clean:
        report.metrics["wrapped_rmse"] = wrapped_rmse(result, _load_field(args.clean))
    if args.out:
        _save_field(result, args.out)
    _write_report(report, args.report)
    return 0


def _parse_eps_list(text):
    return [float(t) for t in text.split(",") if t]


def _cmd_bbm_study(args) -> int:
    t0 = time.perf_counter()
    grid = GridSpec((args.n,))
    u = np.sin(2.0 * np.pi * grid.coords()[:, 0])
    rows = bbm_limit_study(
        u, grid, p=args.p, eps_list=_parse_eps_list(args.eps_list),
        profile=args.mollifier, trunc_tol=args.trunc_tol,
    )
    report = _study_report(
        "bbm-study",
        {"n": args.n, "p": args.p, "mollifier": args.mollifier},
        {"rows": rows},
        t0,
    )
    _write_report(report, args.report)
    for row in rows:
        ratio = "n/a" if row["ratio"] is None else f"{row['ratio']:.6f}"
        print(f"eps={row['eps']:g}  value={row['value']:.6g}  ratio={ratio}")
    return 0


def _cmd_conjecture_study(args) -> int:
    t0 = time.perf_counter()
    grid = GridSpec((args.n,))
    u = roughness_test_signal(args.n, args.s, seed=args.seed)
    result = conjecture_study(
        u, grid, p=args.p, s=args.s, eps_list=_parse_eps_list(args.eps_list),
        profile=args.mollifier, trunc_tol=args.trunc_tol,
    )
    report = _study_report(
        "conjecture-study",
        {"n": args.n, "p": args.p, "s": args.s, "seed": args.seed},
        result,
        t0,
    )
    _write_report(report, args.report, seed=args.seed)
    for row in result["rows"]:
        print(f"eps={row['eps']:g}  ratio={row['ratio']:.6f}")
    print(f"stabilized={result['stabilized']}  degenerate={result['degenerate']}")
    return 0


def _cmd_convergence_study(args) -> int:
    t0 = time.perf_counter()
    grid = GridSpec((args.n,))
    x = grid.coords()[:, 0]
    clean = AngleField(grid, np.pi * (1.0 + 0.8 * np.sin(2.0 * np.pi * x)))
    params = _params_from_args(args, 1)
    cfg = _cfg_from_args(args, grid)
    sigmas = [float(t) for t in args.sigma_list.split(",") if t]
    result = convergence_study(
        clean, sigmas, lambda d: args.c * d ** (args.p / 2.0), params, cfg,
        seeds=tuple(range(args.n_seeds)), trunc_tol=args.trunc_tol,
    )
    report = _study_report(
        "convergence-study",
        {"n": args.n, "p": args.p, "s": args.s, "c": args.c},
        result,
        t0,
    )
    _write_report(report, args.report)
    for row in result["rows"]:
        print(
            f"sigma={row['sigma']:g}  delta={row['delta_median']:.4g}  "
            f"alpha={row['alpha_median']:.4g}  rmse={row['rmse_median']:.4g}"
        )
    return 0


def _cmd_poincare_study(args) -> int:
    t0 = time.perf_counter()
    grid = GridSpec((args.n,))
    if args.mask:
        mask = load_mask(args.mask, grid)
    else:
        known = np.ones(args.n, dtype=bool)
        lo, hi = args.n // 3, 2 * args.n // 3
        known[lo:hi] = False
        mask = Mask(grid, known)
    params = _params_from_args(args, 1)
    result = poincare_ratio_study(
        grid, mask, params, n_samples=args.samples, seed=args.seed,
        trunc_tol=args.trunc_tol,
    )
    report = _study_report(
        "poincare-study",
        {"n": args.n, "samples": args.samples},
        {"max_ratio": result["max_ratio"]},
        t0,
    )
    _write_report(report, args.report, seed=args.seed)
    print(f"max_ratio={result['max_ratio']:.6g}")
    return 0


def _cmd_make_rainbow(args) -> int:
    field = make_rainbow(args.rows, args.cols)
    if args.out is None:
        raise ValueError("make-rainbow requires --out")
    _save_field(field, args.out)
    if args.render:
        render_hsv(field, args.render)
    return 0


def _cmd_add_noise(args) -> int:
    field = _load_field(args.input)
    noisy = add_noise(field, NoiseSpec(args.sigma, args.seed))
    if args.out is None:
        raise ValueError("add-noise requires --out")
    _save_field(noisy, args.out)
    return 0


def _cmd_extract_hue(args) -> int:
    field = extract_hue(args.input)
    if args.out is None:
        raise ValueError("extract-hue requires --out")
    _save_field(field, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circlereg",
        description=(
            "Variational regularization of circle-valued signals and images. "
            "Masks are images where nonzero pixels mark the unknown region."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        _add_shared_flags(sp)
        sp.set_defaults(func=func)
        return sp

    sp = add("denoise1d", lambda a: _cmd_denoise(a, 1),
             help="denoise a 1D radian CSV signal")
    sp.add_argument("--input", required=True)
    sp = add("denoise2d", lambda a: _cmd_denoise(a, 2),
             help="denoise a 2D grayscale angle image")
    sp.add_argument("--input", required=True)
    sp = add("inpaint", _cmd_inpaint, help="inpaint the masked region of a field")
    sp.add_argument("--input", required=True)
    sp.add_argument("--init", choices=("zeros", "tv"), default="zeros")

    sp = add("tv-denoise", _cmd_tv_denoise,
             help="TV (ROF) baseline on raw angles, periodicity-blind")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lam", type=float, default=0.5)
    sp.add_argument("--iters", type=int, default=200)
    sp = add("tv-inpaint", _cmd_tv_inpaint,
             help="split-Bregman TV inpainting baseline on raw angles")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lam", type=float, default=1.0)
    sp.add_argument("--iters", type=int, default=300)
    sp.add_argument("--mu", type=float, default=50.0)

    sp = add("bbm-study", _cmd_bbm_study,
             help="compare the s=1 regularizer with the Sobolev seminorm limit")
    sp.add_argument("--n", type=int, default=2048)
    sp.add_argument("--eps-list", default="0.05,0.02,0.01,0.005")
    sp = add("conjecture-study", _cmd_conjecture_study,
             help="ratio of the k=0 regularizer to the fractional seminorm")
    sp.add_argument("--n", type=int, default=2048)
    sp.add_argument("--eps-list", default="0.08,0.04,0.02,0.01,0.005")
    sp = add("convergence-study", _cmd_convergence_study,
             help="wrapped-RMSE under the alpha(delta) parameter choice rule")
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--sigma-list", default="0.2,0.1,0.05,0.025,0.0125")
    sp.add_argument("--c", type=float, default=1.0, help="alpha rule coefficient")
    sp.add_argument("--n-seeds", type=int, default=5)
    sp = add("poincare-study", _cmd_poincare_study,
             help="empirical bound on the masked-region norm ratio")
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--samples", type=int, default=200)

    sp = add("make-rainbow", _cmd_make_rainbow,
             help="write the two-cycle hue test image")
    sp.add_argument("--rows", type=int, default=60)
    sp.add_argument("--cols", type=int, default=60)
    sp.add_argument("--render", default=None, help="also write an HSV rendering here")
    sp = add("add-noise", _cmd_add_noise, help="add wrapped Gaussian angle noise")
    sp.add_argument("--input", required=True)
    sp = add("extract-hue", _cmd_extract_hue,
             help="extract the hue channel of an RGB image as an angle map")
    sp.add_argument("--input", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on flag errors already; normalize other codes
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
