"""lishwi command line: deterministic CSV/JSON tables and reports.

Exit codes: 0 success, 1 invalid arguments, 2 numerical failure (including a
Monte-Carlo estimate outside its tolerance). Logs go to stderr so the tables
on stdout stay byte-identical between runs.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Any, Callable, Sequence

from .analysis.capacity import utility_upper_bound
from .analysis.turning import turning_point
from .config import (
    DEFAULT_MC_RESOLUTION,
    DEFAULT_MC_TRIALS,
    DEFAULT_N0,
    DEFAULT_POWER_DB,
    DEFAULT_SEED,
    DEFAULT_TAU_BRACKET,
    DEFAULT_WAVELENGTH,
    DEFAULT_Z0,
    LOG_FORMAT,
    MC_TOLERANCE,
    QUAD_ABS_TOL,
    QUAD_REL_TOL,
)
from .errors import NumericalFailure, SnrLossUndefined
from .montecarlo.oracle import McSettings, estimate_effective_noise
from .output import FORMATS, emit, render
from .physics.base import (
    HwiModel,
    NoiseMethod,
    SurfaceGeometry,
    SystemConfig,
    UserPosition,
    linear_to_db,
)
from .physics.channel import array_gain_closed, array_gain_quadrature, dzeta_dA
from .physics.noise import effective_noise, effective_noise_exact
from .physics.quadrature import QuadratureSettings
from .sweeps import SweepSpec, SweepVariable, capacity_sweep, snr_loss_sweep, split_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

Row = dict[str, Any]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ── Flag helpers ──

def _unit_list(text: str) -> list[int]:
    try:
        units = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not units or min(units) < 1:
        raise argparse.ArgumentTypeError("unit counts must be integers >= 1")
    return units


def _system(args: argparse.Namespace) -> SystemConfig:
    return SystemConfig.from_db(args.power_db, args.n0, args.z0, args.wavelength)


def _model(args: argparse.Namespace) -> HwiModel:
    return HwiModel(args.alpha, args.beta)


def _quad(args: argparse.Namespace) -> QuadratureSettings:
    return QuadratureSettings(abs_tol=QUAD_ABS_TOL, rel_tol=args.quad_tol)


def _geometry(args: argparse.Namespace) -> SurfaceGeometry:
    if args.tau is not None:
        return SurfaceGeometry.from_tau(args.tau, args.z0)
    if args.area is not None:
        return SurfaceGeometry.from_area(args.area, args.z0)
    return SurfaceGeometry(args.half_length, args.z0)


def _sweep_spec(args: argparse.Namespace) -> SweepSpec:
    return SweepSpec(SweepVariable(args.var), args.lo, args.hi, args.steps, args.log)


# ── Subcommands ──

def cmd_zeta(args: argparse.Namespace) -> tuple[list[Row], bool]:
    geom = SurfaceGeometry.from_tau(args.tau, args.z0)
    user = UserPosition(args.x0, args.y0, args.z0)
    row: Row = {"tau": geom.tau, "A": geom.half_length_a, "area": geom.area}
    if user.on_cpl:
        row["zeta"] = array_gain_closed(geom.tau)
    row["zeta_quadrature"] = array_gain_quadrature(geom, user, _quad(args))
    if user.on_cpl:
        row["dzeta_dA"] = dzeta_dA(geom.tau, args.z0)
        row["gamma0"] = utility_upper_bound(geom.tau, args.z0)
    return [row], True


def cmd_noise(args: argparse.Namespace) -> tuple[list[Row], bool]:
    cfg = _system(args)
    geom = _geometry(args)
    noise = effective_noise(cfg, geom, _model(args), NoiseMethod(args.method), _quad(args))
    row: Row = {**geom.to_dict(), **noise.to_dict()}
    if cfg.n0 > 0:
        row["sigma"] = noise.total / cfg.n0
        row["sigma_db"] = linear_to_db(row["sigma"])
    return [row], True


def cmd_capacity_sweep(args: argparse.Namespace) -> tuple[list[Row], bool]:
    rows = capacity_sweep(_system(args), _model(args), _sweep_spec(args),
                          NoiseMethod(args.method), _quad(args), args.workers)
    return [row.to_dict(args.bits) for row in rows], False


# utility and gamma0 are part of every row; the sweeps differ only by name
cmd_utility_sweep = cmd_capacity_sweep


def cmd_snr_loss_sweep(args: argparse.Namespace) -> tuple[list[Row], bool]:
    rows = snr_loss_sweep(_system(args), _model(args), _sweep_spec(args),
                          NoiseMethod(args.method), _quad(args), args.workers,
                          shortcut=args.shortcut)
    return [row.to_dict(args.bits) for row in rows], False


def cmd_turning_point(args: argparse.Namespace) -> tuple[list[Row], bool]:
    tp = turning_point(_system(args), _model(args), NoiseMethod(args.method),
                       (args.tau_lo, args.tau_hi), _quad(args))
    if not tp.converged:
        raise NumericalFailure(f"bisection did not converge after {tp.iterations} iterations")
    return [tp.to_dict()], True


def cmd_split(args: argparse.Namespace) -> tuple[list[Row], bool]:
    if NoiseMethod(args.method) is not NoiseMethod.DISK:
        raise ValueError(f"split uses the disk noise form only, got --method {args.method}")
    cfg = _system(args)
    geom = SurfaceGeometry.from_area(args.area, args.z0)
    if args.units is not None:
        units = args.units
    else:
        units = SweepSpec(SweepVariable.M_UNITS, args.lo, args.hi, args.steps, args.log).points()
    rows = split_sweep(cfg, _model(args), geom, units, args.workers)
    return [row.to_dict(args.bits) for row in rows], False


def cmd_validate_mc(args: argparse.Namespace) -> tuple[list[Row], bool]:
    cfg = _system(args)
    geom = _geometry(args)
    model = _model(args)
    settings = McSettings(trials=args.trials, seed=args.seed, resolution=args.resolution,
                          random_symbol=args.random_symbol, workers=args.workers)
    analytic = effective_noise_exact(cfg, geom, model, _quad(args)).total
    mc = estimate_effective_noise(cfg, geom, model, settings)
    gap = abs(mc.noise_density_estimate - analytic)
    allowance = max(3.0 * mc.standard_error, args.tolerance * analytic)
    passed = gap <= allowance
    row: Row = {
        **geom.to_dict(),
        "n_eff_exact": analytic,
        **mc.to_dict(),
        "zeta": array_gain_closed(geom.tau),
        "relative_gap": gap / analytic if analytic > 0 else math.inf,
        "allowance": allowance,
        "seed": settings.seed,
        "passed": passed,
    }
    if passed:
        logger.info(f"Monte-Carlo agrees with the quadrature value (gap {gap:.3e} <= {allowance:.3e})")
    else:
        logger.warning(f"Monte-Carlo gap {gap:.3e} exceeds the allowance {allowance:.3e}")
    return [row], True


# ── Parser ──

def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    g = shared.add_argument_group("system")
    g.add_argument("--z0", type=float, default=DEFAULT_Z0, help="user distance to the surface (m)")
    g.add_argument("--n0", type=float, default=DEFAULT_N0, help="AWGN power spectral density")
    g.add_argument("--power-db", type=float, default=DEFAULT_POWER_DB, help="transmit power P in dB")
    g.add_argument("--alpha", type=float, default=0.0, help="HWI variance scale")
    g.add_argument("--beta", type=float, default=0.0, help="HWI radial exponent")
    g.add_argument("--wavelength", type=float, default=DEFAULT_WAVELENGTH,
                   help="carrier wavelength (m); only the Monte-Carlo field uses it")
    g = shared.add_argument_group("numerics")
    g.add_argument("--method", choices=[m.value for m in NoiseMethod], default=NoiseMethod.DISK.value,
                   help="effective-noise evaluation (turning points differ by method; default: disk)")
    g.add_argument("--quad-tol", type=float, default=QUAD_REL_TOL, help="relative quadrature tolerance")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--trials", type=int, default=DEFAULT_MC_TRIALS)
    g.add_argument("--resolution", type=int, default=DEFAULT_MC_RESOLUTION,
                   help="Monte-Carlo grid points per axis")
    g.add_argument("--workers", type=int, default=1, help="thread pool size for sweeps and trials")
    g = shared.add_argument_group("output")
    g.add_argument("--format", choices=FORMATS, default="csv")
    g.add_argument("--out", default=None, help="output file (default: standard output)")
    g.add_argument("--bits", action="store_true", help="append a capacity_bit column")
    g.add_argument("--log-level", default="WARNING",
                   choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return shared


def _sweep_flags(parser: argparse.ArgumentParser, lo: float = 0.01, hi: float = 100.0,
                 steps: int = 50, with_var: bool = True) -> None:
    if with_var:
        parser.add_argument("--var", default="area",
                            choices=[v.value for v in SweepVariable if v is not SweepVariable.M_UNITS])
    parser.add_argument("--lo", type=float, default=lo)
    parser.add_argument("--hi", type=float, default=hi)
    parser.add_argument("--steps", type=int, default=steps)
    parser.add_argument("--log", action="store_true", help="logarithmic spacing")


def _size_flags(parser: argparse.ArgumentParser, half_length: float | None = None) -> None:
    group = parser.add_mutually_exclusive_group(required=half_length is None)
    group.add_argument("--half-length", type=float, default=half_length, help="A (m)")
    group.add_argument("--area", type=float, default=None, help="surface area 4A² (m²)")
    group.add_argument("--tau", type=float, default=None, help="A / z0")


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = _Parser(prog="lishwi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeta", parents=[shared], help="array gain of a square surface")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.set_defaults(handler=cmd_zeta)

    p = sub.add_parser("noise", parents=[shared], help="effective noise density at one size")
    _size_flags(p)
    p.set_defaults(handler=cmd_noise)

    for name, handler, help_text in (
        ("capacity-sweep", cmd_capacity_sweep, "capacity over surface size"),
        ("utility-sweep", cmd_utility_sweep, "utility of surface-area and its bound"),
    ):
        p = sub.add_parser(name, parents=[shared], help=help_text)
        _sweep_flags(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("snr-loss-sweep", parents=[shared], help="received-SNR loss over size")
    _sweep_flags(p)
    p.add_argument("--shortcut", action="store_true", help="use the beta << 1 formula")
    p.set_defaults(handler=cmd_snr_loss_sweep)

    p = sub.add_parser("turning-point", parents=[shared], help="size where the utility turns negative")
    p.add_argument("--tau-lo", type=float, default=DEFAULT_TAU_BRACKET[0])
    p.add_argument("--tau-hi", type=float, default=DEFAULT_TAU_BRACKET[1])
    p.set_defaults(handler=cmd_turning_point)

    p = sub.add_parser("split", parents=[shared],
                       help="capacity over the number of LIS-Units (disk noise form only)")
    p.add_argument("--area", type=float, default=16.0, help="parent surface area (m²)")
    p.add_argument("--units", type=_unit_list, default=None,
                   help="comma-separated unit counts (default: --lo..--hi sweep)")
    _sweep_flags(p, lo=1, hi=16, steps=16, with_var=False)
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("validate-mc", parents=[shared], help="Monte-Carlo check of the exact noise")
    _size_flags(p, half_length=0.8)
    p.add_argument("--tolerance", type=float, default=MC_TOLERANCE,
                   help="relative discretisation allowance")
    p.add_argument("--random-symbol", action="store_true", help="unit-modulus random symbols")
    p.set_defaults(handler=cmd_validate_mc)

    return parser


def _run(handler: Callable[[argparse.Namespace], tuple[list[Row], bool]],
         args: argparse.Namespace) -> int:
    rows, single = handler(args)
    emit(render(rows, args.format, single=single), args.out)
    if args.command == "validate-mc" and not rows[0]["passed"]:
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr)
    try:
        return _run(args.handler, args)
    except NumericalFailure as exc:
        print(f"lishwi: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, SnrLossUndefined) as exc:
        print(f"lishwi: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
