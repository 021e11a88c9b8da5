"""Command-line front end: Mittag-Leffler tables, series solutions, self-checks.

Usage::

    sawi-prabhakar ml --alpha 0.5 --rho 1.5 --gamma 2 --z 0.3
    sawi-prabhakar solve --problem heat-reg --alpha 0.9 --rho 0.5 --gamma 0.3 \\
        --omega -0.1 --nu 1 --diffusivity 1 --x-grid=-3:3:7 --t 1
    sawi-prabhakar validate --suite all

Every flag has a config-file key (``--lap-order`` <-> ``lap_order``) read
from ``--config FILE`` as ``key = value`` lines; flags override the file.

Exit codes: 0 success, 1 a validation check failed, 2 bad input,
3 series non-convergence, 4 truncation warning under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import sys
import warnings
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import analytic_solutions as sol
from .errors import NonConvergence, SawiPrabhakarError, TruncationWarning
from .ml_kernels import ml3
from .prabhakar_ops import Grid, Samples
from .specs import HilferSpec, KernelSpec
from .validation import SUITES, run_suites

PROBLEMS = ("advdisp", "advdisp-reg", "heat-reg", "heat-hp", "pointwise", "integro")
FORCINGS = {
    "zero": lambda t: np.zeros_like(t),
    "one": lambda t: np.ones_like(t),
    "exp": lambda t: np.exp(-t),
}
REQUIRED = {
    "ml": ("alpha", "rho", "gamma"),
    "solve": ("problem", "alpha", "rho"),
    "validate": (),
}


class InputError(ValueError):
    """Bad command-line or config input (exit code 2)."""


class _AppendOverride(argparse._AppendAction):
    """Repeatable flag whose first use on the command line replaces a config value."""

    def __call__(self, parser, namespace, values, option_string=None):
        if self.default is not None and getattr(namespace, self.dest, None) is self.default:
            setattr(namespace, self.dest, None)
        super().__call__(parser, namespace, values, option_string)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` -> ``numpy.linspace(start, stop, count)``."""
    try:
        start, stop, count = text.split(":")
        values = np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}") from exc
    if len(values) < 1:
        raise argparse.ArgumentTypeError("grid count must be positive")
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value file; flags override it")
    p.add_argument("--output", type=Path, help="write CSV here instead of stdout")
    p.add_argument("--serial", action="store_true",
                   help="sequential evaluation (the only mode; accepted for reproducible runs)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="sawi-prabhakar", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    ml = sub.add_parser("ml", help="three-parameter Mittag-Leffler values")
    _add_common(ml)
    ml.add_argument("--alpha", type=float)
    ml.add_argument("--rho", type=float)
    ml.add_argument("--gamma", type=float)
    ml.add_argument("--z", type=float, action=_AppendOverride, help="argument; may be repeated")
    ml.add_argument("--z-grid", type=parse_grid, help="start:stop:count")
    ml.add_argument("--tol", type=float, default=1e-15)

    solve = sub.add_parser("solve", help="evaluate a closed-form series solution")
    _add_common(solve)
    solve.add_argument("--problem", choices=PROBLEMS)
    solve.add_argument("--alpha", type=float)
    solve.add_argument("--rho", type=float)
    solve.add_argument("--gamma", type=float, default=1.0)
    solve.add_argument("--omega", type=float, default=0.0)
    solve.add_argument("--nu", type=float, default=1.0)
    solve.add_argument("--x", type=float, action=_AppendOverride, help="position; may be repeated")
    solve.add_argument("--x-grid", type=parse_grid)
    solve.add_argument("--t", type=float, action=_AppendOverride, help="time; may be repeated")
    solve.add_argument("--t-grid", type=parse_grid)
    solve.add_argument("--n-terms", type=int, default=sol.DEFAULT_TERMS)
    solve.add_argument("--k-max", type=float)
    solve.add_argument("--k-nodes", type=int, default=2048)
    solve.add_argument("--profile", choices=("gaussian", "point-mass"), default="gaussian")
    solve.add_argument("--sigma", type=float, default=1.0)
    solve.add_argument("--p", type=float, default=0.0, help="advection coefficient")
    solve.add_argument("--theta", type=float, default=0.0, help="dispersion coefficient")
    solve.add_argument("--lap-order", type=float, default=2.0, help="fractional Laplacian order")
    solve.add_argument("--diffusivity", type=float, default=1.0)
    solve.add_argument("--lambda", dest="lambda_coef", type=float, default=1.0)
    solve.add_argument("--delta", type=float, default=0.0)
    solve.add_argument("--m-init", type=float, default=0.0)
    solve.add_argument("--forcing", choices=tuple(FORCINGS), default="zero")
    solve.add_argument("--dt", type=float, default=1.0 / 512, help="time step of the integro grid")
    solve.add_argument("--strict", action="store_true", help="treat truncation warnings as errors")
    solve.add_argument("--fallback", action=argparse.BooleanOptionalAction, default=True,
                       help="invert the closed-form image by contour integration where the series is inaccurate")

    val = sub.add_parser("validate", help="run self-check suites")
    _add_common(val)
    val.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    val.add_argument("--dt", type=float, default=1.0 / 512)
    val.add_argument("--tol", type=float, help="replace every error bound")
    return parser, {"ml": ml, "solve": solve, "validate": val}


def read_config(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def _config_defaults(sub: argparse.ArgumentParser, values: dict[str, str]) -> dict[str, object]:
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    out: dict[str, object] = {}
    for key, text in values.items():
        action = actions.get(key)
        if action is None:
            raise InputError(f"unknown config key {key!r}")
        if action.nargs == 0:
            if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise InputError(f"{key} expects a boolean, got {text!r}")
            out[key] = text.lower() in ("true", "1", "yes")
            continue
        try:
            value = action.type(text) if action.type else text
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise InputError(f"bad value for {key}: {text!r}") from exc
        if action.choices is not None and value not in action.choices:
            raise InputError(f"{key} must be one of {list(action.choices)}")
        out[key] = [value] if isinstance(action, argparse._AppendAction) else value
    return out


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        try:
            values = read_config(args.config)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from exc
        subs[args.command].set_defaults(**_config_defaults(subs[args.command], values))
        args = parser.parse_args(argv)
    missing = [k for k in REQUIRED[args.command] if getattr(args, k, None) is None]
    if missing:
        raise InputError("missing required parameters: " + ", ".join(missing))
    return args


def _fmt(x) -> str:
    return repr(float(x))


def write_csv(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, np.integer)) and not isinstance(v, bool) else _fmt(v) for v in row])


def _points(single: list[float] | None, grid: np.ndarray | None, name: str, default: float | None = None) -> np.ndarray:
    if single is not None and grid is not None:
        raise InputError(f"give --{name} or --{name}-grid, not both")
    if grid is not None:
        return grid
    if single is not None:
        return np.array(single, dtype=float)
    if default is not None:
        return np.array([default])
    raise InputError(f"missing --{name} or --{name}-grid")


def cmd_ml(args: argparse.Namespace) -> list[tuple]:
    z = _points(args.z, args.z_grid, "z")
    rows = []
    for zi in z:
        r = ml3(args.alpha, args.rho, args.gamma, float(zi), args.tol)
        rows.append((zi, r.value.real, r.value.imag, r.est_error, int(r.terms_used)))
    return rows


def _hspec(args: argparse.Namespace) -> HilferSpec:
    return HilferSpec(KernelSpec(args.alpha, args.rho, args.gamma, args.omega), args.nu)


def _mode_quadrature(args: argparse.Namespace, g: sol.InitialProfile) -> sol.ModeQuadrature:
    if args.k_max is not None:
        return sol.ModeQuadrature(args.k_max, args.k_nodes)
    if g.kind != "gaussian":
        raise InputError("point-mass data needs --k-max")
    return sol.ModeQuadrature.for_profile(g, args.k_nodes)


def cmd_solve(args: argparse.Namespace) -> list[tuple]:
    hspec = _hspec(args)
    t = _points(args.t, args.t_grid, "t")
    if np.any(t < 0):
        raise InputError("times must be nonnegative")
    x = _points(args.x, args.x_grid, "x", default=0.0)
    rows = []
    if args.problem == "pointwise":
        for xi in x:
            spec = sol.PointwiseSpec(hspec, args.lambda_coef, float(xi))
            values = sol.solve_pointwise(spec, t, args.n_terms, args.fallback)
            rows.extend((xi, ti, v.real, v.imag) for ti, v in zip(t, values))
        return rows
    if args.problem == "integro":
        grid = Grid.covering(float(t.max()), args.dt)
        forcing = Samples.from_function(grid, FORCINGS[args.forcing])
        spec = sol.IntegroSpec(hspec, args.lambda_coef, args.delta, args.m_init, forcing)
        out = sol.solve_integro_grid(spec, args.n_terms)
        if np.any(t == 0) and out.origin_power < 0 and spec.M_init != 0:
            raise InputError("the integro solution is singular at t = 0 for this nu")
        idx = [grid.index_of(float(ti)) for ti in t]
        for xi in x:
            rows.extend((xi, ti, out.values[j].real, out.values[j].imag) for ti, j in zip(t, idx))
        return rows

    g = sol.InitialProfile.gaussian(args.sigma) if args.profile == "gaussian" else sol.InitialProfile.point_mass()
    mq = _mode_quadrature(args, g)
    if args.problem.startswith("advdisp"):
        spec = sol.AdvDispSpec(hspec, args.p, args.theta, args.lap_order, args.problem == "advdisp-reg")
        solver = sol.solve_adv_disp
    else:
        spec = sol.HeatSpec(hspec, args.diffusivity, args.problem == "heat-reg")
        solver = sol.solve_heat
    table = np.array([solver(spec, g, x, float(ti), args.n_terms, mq, args.fallback) for ti in t]).reshape(len(t), len(x))
    for i, xi in enumerate(x):
        rows.extend((xi, ti, table[j, i].real, table[j, i].imag) for j, ti in enumerate(t))
    return rows


def cmd_validate(args: argparse.Namespace, stream: TextIO) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = run_suites(names, args.dt, args.tol)
    for check in checks:
        print(check.line(), file=stream)
    return 0 if all(c.passed for c in checks) else 1


def _emit(args: argparse.Namespace, header: Sequence[str], rows: list[tuple]) -> None:
    if args.output is None:
        write_csv(sys.stdout, header, rows)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, rows)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        with warnings.catch_warnings():
            if getattr(args, "strict", False):
                warnings.simplefilter("error", TruncationWarning)
            if args.command == "ml":
                _emit(args, ("z", "re", "im", "est_error", "terms"), cmd_ml(args))
            elif args.command == "solve":
                _emit(args, ("x", "t", "re", "im"), cmd_solve(args))
            else:
                if args.output is None:
                    return cmd_validate(args, sys.stdout)
                with open(args.output, "w", encoding="utf-8", newline="") as fh:
                    return cmd_validate(args, fh)
    except TruncationWarning as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SawiPrabhakarError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
