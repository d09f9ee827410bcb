"""Turning points: where the utility of surface-area changes sign."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable

from scipy.optimize import root_scalar

from ..config import DEFAULT_TAU_BRACKET, ROOT_MAX_ITER, ROOT_REL_TOL
from ..errors import BracketError
from ..physics.base import HwiModel, NoiseMethod, SurfaceGeometry, SystemConfig
from ..physics.quadrature import DEFAULT_QUADRATURE, QuadratureSettings
from .capacity import condition_sides, high_snr_threshold, utility

logger = logging.getLogger(__name__)

_BOUNDARY_BRACKET = (1e-3, 1e3)


@dataclass(frozen=True)
class TurningPoint:
    tau_star: float
    area_star: float
    method: NoiseMethod
    converged: bool
    bracket: tuple[float, float]
    iterations: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "tau_star": self.tau_star,
            "area_star": self.area_star,
            "method": self.method.value,
            "converged": self.converged,
            "bracket_lo": self.bracket[0],
            "bracket_hi": self.bracket[1],
            "iterations": self.iterations,
        }


def _check_bracket(bracket: tuple[float, float]) -> tuple[float, float]:
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0 < lo < hi and math.isfinite(hi)):
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")
    return lo, hi


def _bisect(fn: Callable[[float], float], bracket: tuple[float, float],
            rtol: float, what: str) -> tuple[float, bool, int]:
    lo, hi = _check_bracket(bracket)
    f_lo, f_hi = fn(lo), fn(hi)
    if not (f_lo != 0 and f_hi != 0 and (f_lo < 0) != (f_hi < 0)):
        raise BracketError(
            f"no sign change of {what} on [{lo:g}, {hi:g}] "
            f"(values {f_lo:.3e}, {f_hi:.3e})",
            (lo, hi),
        )
    sol = root_scalar(fn, bracket=(lo, hi), method="bisect",
                      xtol=1e-15, rtol=rtol, maxiter=ROOT_MAX_ITER)
    return float(sol.root), bool(sol.converged), int(sol.iterations)


def turning_point(
    cfg: SystemConfig,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    bracket: tuple[float, float] = DEFAULT_TAU_BRACKET,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> TurningPoint:
    """Bisect the utility in tau to the surface size where it turns negative."""

    def gamma(tau: float) -> float:
        return utility(cfg, SurfaceGeometry.from_tau(tau, cfg.z0), model, method, quad)

    tau_star, converged, iterations = _bisect(gamma, bracket, ROOT_REL_TOL, "the utility")
    area_star = 4.0 * (tau_star * cfg.z0) ** 2
    logger.info(
        f"turning point ({method.value}): tau*={tau_star:.6f}, area*={area_star:.4f} m² "
        f"after {iterations} iterations"
    )
    return TurningPoint(tau_star, area_star, method, converged,
                        _check_bracket(bracket), iterations)


def negative_utility_boundary(
    cfg: SystemConfig,
    model: HwiModel,
    bracket: tuple[float, float] = _BOUNDARY_BRACKET,
    rtol: float = 1e-12,
) -> float:
    """tau where the disk-model negative-utility condition switches on."""

    def gap(tau: float) -> float:
        lhs, rhs = condition_sides(cfg, tau, model)
        return lhs - rhs

    tau, _, _ = _bisect(gap, bracket, rtol, "the negative-utility condition")
    return tau


def high_snr_boundary(
    beta: float,
    bracket: tuple[float, float] = _BOUNDARY_BRACKET,
    rtol: float = 1e-12,
) -> float:
    """tau where beta meets the high-SNR threshold; exists only for 0 < beta < 1."""
    tau, _, _ = _bisect(lambda t: high_snr_threshold(t) - beta, bracket, rtol,
                        "the high-SNR condition")
    return tau
