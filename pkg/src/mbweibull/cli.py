"""Command-line interface.

Subcommands: simulate, fit, study, vannman, hazard-grid. Every command
that writes a file also writes a ``<out>.manifest.json`` sidecar with the
effective configuration and input digest. Outputs are byte-deterministic
for fixed flags and seed (set SOURCE_DATE_EPOCH to pin the manifest
timestamp as well).
"""

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .bivariate import BivariateWeibull
from .copulas import GaussianCopulaParams, GfgmParams
from .errors import ConvergenceError, DegenerateDataError, DomainError, NoClusterError
from .fitting import deviance_test, fit_m1, fit_m2, fit_mbw
from .mixture import MbwParams, hazard_grid, hazard_grid_csv
from .sampler import SeededStream, sample_mbw
from .studies import StudyConfig, run_study
from .univariate import RectUniform, WeibullParams
from .vannman import VANNMAN_DATA

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_CONVERGENCE = 3


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch is not None else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _write_manifest(out_path, command, params, seed=None, input_path=None):
    manifest = {
        "command": command,
        "parameters": params,
        "seed": seed,
        "timestamp": _timestamp(),
        "version": __version__,
    }
    if input_path is not None:
        with open(input_path, "rb") as fh:
            manifest["input_digest"] = "sha256:" + hashlib.sha256(fh.read()).hexdigest()
    with open(str(out_path) + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _model_params(args) -> MbwParams:
    if args.copula == "gfgm":
        cop = GfgmParams(rho=args.rho, a=args.copula_a, b=args.copula_b)
    else:
        cop = GaussianCopulaParams(rho=args.rho)
    return MbwParams(
        base=BivariateWeibull(
            WeibullParams(args.alpha1, args.beta1),
            WeibullParams(args.alpha2, args.beta2),
            cop,
        ),
        rect=RectUniform(0.0, 0.0, args.d),
        p=args.p,
    )


def _add_model_flags(p):
    p.add_argument("--alpha1", type=float, default=4.0)
    p.add_argument("--beta1", type=float, default=1.5)
    p.add_argument("--alpha2", type=float, default=3.5)
    p.add_argument("--beta2", type=float, default=5.0)
    p.add_argument("--rho", type=float, default=0.6)
    p.add_argument("--d", type=float, default=0.1)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--copula", choices=["gfgm", "gaussian"], default="gfgm")
    p.add_argument("--copula-a", type=float, default=1.0)
    p.add_argument("--copula-b", type=float, default=1.0)


def _read_xy_csv(path) -> np.ndarray:
    try:
        data = np.genfromtxt(path, delimiter=",", names=True)
    except (ValueError, IndexError) as e:
        raise DomainError(f"could not parse {path}: {e}") from e
    if data.size == 0 or data.dtype.names is None or len(data.dtype.names) < 2:
        raise DomainError(f"could not parse x,y columns from {path}")
    cols = data.dtype.names
    out = np.column_stack([data[cols[0]], data[cols[1]]]).astype(float)
    if out.ndim != 2 or np.any(~np.isfinite(out)):
        raise DomainError(f"non-numeric values in {path}")
    return out


def cmd_simulate(args) -> int:
    m = _model_params(args)
    pts = sample_mbw(args.n, m, SeededStream(seed=args.seed))
    with open(args.out, "w") as fh:
        fh.write("x,y\n")
        for x, y in pts:
            fh.write(f"{x:.17g},{y:.17g}\n")
    _write_manifest(
        args.out,
        "simulate",
        {
            "n": args.n,
            "alpha1": args.alpha1,
            "beta1": args.beta1,
            "alpha2": args.alpha2,
            "beta2": args.beta2,
            "rho": args.rho,
            "d": args.d,
            "p": args.p,
            "copula": args.copula,
            "copula_a": args.copula_a,
            "copula_b": args.copula_b,
        },
        seed=args.seed,
    )
    return EXIT_OK


def _fit_one(data, args):
    if args.model == "m1":
        return fit_m1(data)
    if args.model == "m2":
        return fit_m2(data)
    return fit_mbw(
        data,
        copula_family=args.copula,
        a=args.copula_a,
        b=args.copula_b,
        min_pts=args.minpts,
        eps=args.eps,
    )


def _print_fit(result):
    print(f"model: {result.model}")
    print(f"{'parameter':<10}{'estimate':>14}{'SE':>14}{'p-value':>12}")
    for name, est in result.estimates.items():
        se = result.std_errors.get(name, float("nan"))
        pv = result.p_values.get(name, float("nan"))
        flag = " (boundary)" if name in result.boundary_flags else ""
        print(f"{name:<10}{est:>14.6f}{se:>14.6f}{pv:>12.2g}{flag}")
    print(f"loglik: {result.loglik:.4f}")
    print(f"AIC:    {result.aic:.4f}")
    if not result.converged:
        print("warning: optimizer did not converge")


def cmd_fit(args) -> int:
    data = VANNMAN_DATA if args.data == "vannman" else _read_xy_csv(args.data)
    result = _fit_one(data, args)
    _print_fit(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(result.to_json())
            fh.write("\n")
        _write_manifest(
            args.out,
            "fit",
            {"model": args.model, "copula": args.copula, "minpts": args.minpts, "eps": args.eps},
            input_path=None if args.data == "vannman" else args.data,
        )
    return EXIT_OK if result.converged else EXIT_CONVERGENCE


def cmd_study(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    tp = raw.get("true_params", {})
    if raw.get("copula", "gfgm") == "gfgm":
        cop = GfgmParams(
            rho=tp.get("rho", 0.6), a=raw.get("copula_a", 1.0), b=raw.get("copula_b", 1.0)
        )
    else:
        cop = GaussianCopulaParams(rho=tp.get("rho", 0.6))
    params = MbwParams(
        base=BivariateWeibull(
            WeibullParams(tp.get("alpha1", 4.0), tp.get("beta1", 1.5)),
            WeibullParams(tp.get("alpha2", 3.5), tp.get("beta2", 5.0)),
            cop,
        ),
        rect=RectUniform(0.0, 0.0, tp.get("d", 0.1)),
        p=tp.get("p", 0.3),
    )
    eps_by_n = {int(k): float(v) for k, v in raw.get("eps_by_n", {}).items()} or None
    cfg = StudyConfig(
        true_params=params,
        sample_sizes=tuple(raw.get("sample_sizes", (100, 200, 300))),
        n_replicates=int(raw.get("n_replicates", 200)),
        level=float(raw.get("level", 0.95)),
        base_seed=int(raw.get("base_seed", args.seed)),
        min_pts=int(raw.get("min_pts", 4)),
        copula_family=raw.get("copula", "gfgm"),
        copula_a=float(raw.get("copula_a", 1.0)),
        copula_b=float(raw.get("copula_b", 1.0)),
        workers=int(raw.get("workers", args.workers)),
        **({"eps_by_n": eps_by_n} if eps_by_n else {}),
    )
    reports = run_study(cfg)
    os.makedirs(args.out_dir, exist_ok=True)
    for n, report in sorted(reports.items()):
        base = os.path.join(args.out_dir, f"study_n{n}")
        with open(base + ".csv", "w") as fh:
            fh.write(report.to_csv())
        with open(base + ".json", "w") as fh:
            fh.write(report.to_json())
            fh.write("\n")
        _write_manifest(
            base + ".csv",
            "study",
            {"sample_size": n, "n_replicates": cfg.n_replicates},
            seed=cfg.base_seed,
            input_path=args.config,
        )
        print(f"n={n}: wrote {base}.csv ({report.n_failures} failed replicates)")
    return EXIT_OK


def cmd_vannman(args) -> int:
    print("board,schedule1,schedule2")
    for i, (x, y) in enumerate(VANNMAN_DATA, start=1):
        print(f"{i},{x:.2f},{y:.2f}")
    print()
    m1 = fit_m1(VANNMAN_DATA)
    m2 = fit_m2(VANNMAN_DATA)
    m3 = fit_mbw(VANNMAN_DATA, min_pts=4, eps=1.6)
    for r in (m1, m2, m3):
        _print_fit(r)
        print()
    print("model comparison:")
    print(f"{'model':<6}{'loglik':>12}{'AIC':>12}")
    for r in (m1, m2, m3):
        print(f"{r.model:<6}{r.loglik:>12.4f}{r.aic:>12.4f}")
    d21 = deviance_test(m2, m1)
    d32 = deviance_test(m3, m2)
    print(
        f"deviance m2 vs m1: stat={d21['statistic']:.2f} df={d21['df']} "
        f"p={d21['p_value']:.3g}"
    )
    print(
        f"deviance m3 vs m2: stat={d32['statistic']:.2f} df={d32['df']} "
        f"p={d32['p_value']:.3g}"
    )
    return EXIT_OK


def cmd_hazard_grid(args) -> int:
    m = _model_params(args)
    grid = hazard_grid(m, args.x_min, args.x_max, args.y_min, args.y_max, args.step)
    with open(args.out, "w") as fh:
        fh.write(hazard_grid_csv(grid))
    _write_manifest(
        args.out,
        "hazard-grid",
        {
            "x_min": args.x_min,
            "x_max": args.x_max,
            "y_min": args.y_min,
            "y_max": args.y_max,
            "step": args.step,
            "alpha1": args.alpha1,
            "beta1": args.beta1,
            "alpha2": args.alpha2,
            "beta2": args.beta2,
            "rho": args.rho,
            "d": args.d,
            "p": args.p,
            "copula": args.copula,
        },
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbw",
        description="Bivariate Weibull mixture model for instantaneous and early failures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw samples from the mixture model")
    _add_model_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit model m1, m2, or m3 to x,y CSV data")
    p.add_argument("--data", required=True, help="CSV path, or 'vannman'")
    p.add_argument("--model", choices=["m1", "m2", "m3"], default="m3")
    p.add_argument("--copula", choices=["gfgm", "gaussian"], default="gfgm")
    p.add_argument("--copula-a", type=float, default=1.0)
    p.add_argument("--copula-b", type=float, default=1.0)
    p.add_argument("--minpts", type=int, default=4)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("study", help="run the replicated simulation study")
    p.add_argument("--config", required=True, help="JSON study configuration")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--seed", type=int, default=20260823)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("vannman", help="print the wood data and compare m1/m2/m3")
    p.set_defaults(func=cmd_vannman)

    p = sub.add_parser("hazard-grid", help="evaluate f, R, h on a grid")
    _add_model_flags(p)
    p.add_argument("--x-min", type=float, default=0.01)
    p.add_argument("--x-max", type=float, default=2.0)
    p.add_argument("--y-min", type=float, default=0.01)
    p.add_argument("--y-max", type=float, default=2.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hazard_grid)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, DegenerateDataError, NoClusterError, json.JSONDecodeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
