"""Adaptive 2-D integration over axis-aligned rectangles.

Wraps scipy's adaptive cubature with the tensor-product Gauss-Kronrod
(10/21-point) pair: the difference between the embedded rules is the error
estimate and the region with the largest estimate is split into four until
the tolerance is met or the subdivision budget is spent. No randomisation is
involved, so a given settings value always yields the same bits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cubature

from ..config import (
    QUAD_ABS_TOL,
    QUAD_MAX_DEPTH,
    QUAD_MAX_SUBDIVISIONS,
    QUAD_REL_TOL,
    QUAD_RULE,
)
from ..errors import NumericalFailure

logger = logging.getLogger(__name__)

# f(x, y) evaluated on equally shaped coordinate arrays
ScalarField = Callable[[np.ndarray, np.ndarray], "np.ndarray | float"]


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = QUAD_ABS_TOL
    rel_tol: float = QUAD_REL_TOL
    max_depth: int = QUAD_MAX_DEPTH

    def __post_init__(self) -> None:
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol or rel_tol must be positive")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be at least 1, got {self.max_depth}")

    @property
    def max_subdivisions(self) -> int:
        return min(4 ** min(self.max_depth, 16), QUAD_MAX_SUBDIVISIONS)

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUADRATURE = QuadratureSettings()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


def integrate_rect(
    f: ScalarField,
    x_lo: float,
    x_hi: float,
    y_lo: float,
    y_hi: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
) -> QuadratureResult:
    """Integrate f over [x_lo, x_hi] x [y_lo, y_hi].

    Non-convergence is reported through ``converged``; callers decide
    whether it is fatal (see ``integrate_or_raise``).
    """
    if not (x_lo < x_hi and y_lo < y_hi):
        raise ValueError(f"empty rectangle [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]")

    evaluations = 0

    def field(points: np.ndarray) -> np.ndarray:
        nonlocal evaluations
        evaluations += points.shape[0]
        x, y = points[:, 0], points[:, 1]
        return np.broadcast_to(np.asarray(f(x, y), dtype=float), x.shape)

    # Halved tolerances: scipy stops on err <= atol + rtol*|v|, the contract
    # here is err <= max(abs_tol, rel_tol*|v|).
    res = cubature(
        field,
        [x_lo, y_lo],
        [x_hi, y_hi],
        rule=QUAD_RULE,
        atol=settings.abs_tol / 2,
        rtol=settings.rel_tol / 2,
        max_subdivisions=settings.max_subdivisions,
    )
    value = float(res.estimate)
    error = float(res.error)
    converged = res.status == "converged" and error <= settings.tolerance_for(value)
    logger.debug(
        f"cubature on [{x_lo:g},{x_hi:g}]x[{y_lo:g},{y_hi:g}]: value={value:.6e} "
        f"err={error:.2e} evals={evaluations} converged={converged}"
    )
    return QuadratureResult(value, error, evaluations, converged)


def integrate_or_raise(
    f: ScalarField,
    x_lo: float,
    x_hi: float,
    y_lo: float,
    y_hi: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    what: str = "integral",
) -> float:
    """Like integrate_rect, but a non-converged result raises NumericalFailure."""
    res = integrate_rect(f, x_lo, x_hi, y_lo, y_hi, settings)
    if not res.converged:
        logger.warning(
            f"{what} did not converge: error estimate {res.error_estimate:.3e} "
            f"after {res.evaluations} evaluations"
        )
        raise NumericalFailure(
            f"{what} did not converge (error estimate {res.error_estimate:.3e})",
            error_estimate=res.error_estimate,
        )
    return res.value
