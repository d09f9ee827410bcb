"""Effective noise density under the HWI profile f(r) = alpha * r**(2*beta).

Three evaluations of Ñ are provided:

* ``exact``: the ratio of the two quadrant integrals (numerator weighted by
  f(r) * eta**-3, denominator eta**-1.5). By symmetry the ratio is the same
  on the quadrant [0, A]² and on the full square, so the quadrant is used,
  rescaled to the unit square.
* ``small-area``: eta replaced by z0² (A << z0); the remaining moment of
  r**(2*beta) is exact for integer beta and integrated otherwise.
* ``disk``: the square replaced by the disk of equal area, closed form.
"""

from __future__ import annotations

import logging
import math

from scipy.special import comb

from ..config import FD_REL_STEP
from ..errors import SnrLossUndefined
from .base import (
    HwiModel,
    NoiseBreakdown,
    NoiseMethod,
    SurfaceGeometry,
    SystemConfig,
    UserPosition,
    linear_to_db,
    require_cpl,
)
from .quadrature import DEFAULT_QUADRATURE, QuadratureSettings, integrate_or_raise

logger = logging.getLogger(__name__)


def variance_profile(r, model: HwiModel):
    """HWI variance density f(r) at distance r from the surface centre."""
    return model.alpha * r ** (2.0 * model.beta)


def _check_geometry(cfg: SystemConfig, geom: SurfaceGeometry) -> None:
    if not math.isclose(cfg.z0, geom.z0, rel_tol=1e-12):
        raise ValueError(f"geometry built for z0={geom.z0} used with z0={cfg.z0}")


def _hwi_scale(cfg: SystemConfig, geom: SurfaceGeometry, model: HwiModel) -> float:
    # P * alpha * A**(2 beta) / (4 pi z0²): the HWI term for beta = 0, A << z0
    return (cfg.power_p * model.alpha * geom.half_length_a ** (2.0 * model.beta)
            / (4.0 * math.pi * cfg.z0 ** 2))


def quadrant_power_moment(beta: float,
                          quad: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Integral of (s² + t²)**beta over the unit square [0, 1]²."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    if float(beta).is_integer():
        n = int(beta)
        return float(sum(
            comb(n, k, exact=True) / ((2 * k + 1) * (2 * (n - k) + 1))
            for k in range(n + 1)
        ))
    return integrate_or_raise(
        lambda s, t: (s * s + t * t) ** beta, 0.0, 1.0, 0.0, 1.0, quad,
        what="power moment",
    )


def _exact_ratio(tau: float, beta: float, quad: QuadratureSettings) -> float:
    t2 = tau * tau

    def weighted(s, t):
        rho2 = s * s + t * t
        return rho2 ** beta * (1.0 + t2 * rho2) ** -3.0

    def gain(s, t):
        return (1.0 + t2 * (s * s + t * t)) ** -1.5

    numerator = integrate_or_raise(weighted, 0.0, 1.0, 0.0, 1.0, quad,
                                   what="HWI noise numerator")
    denominator = integrate_or_raise(gain, 0.0, 1.0, 0.0, 1.0, quad,
                                     what="HWI noise denominator")
    return numerator / denominator


def effective_noise_exact(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
    user: UserPosition | None = None,
) -> NoiseBreakdown:
    require_cpl(user)
    _check_geometry(cfg, geom)
    if model.impairment_free:
        return NoiseBreakdown(cfg.n0, 0.0, NoiseMethod.EXACT)
    hwi = _hwi_scale(cfg, geom, model) * _exact_ratio(geom.tau, model.beta, quad)
    logger.debug(f"exact HWI term at tau={geom.tau:.6g}: {hwi:.9e}")
    return NoiseBreakdown(cfg.n0, hwi, NoiseMethod.EXACT)


def effective_noise_small_area(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> NoiseBreakdown:
    _check_geometry(cfg, geom)
    if model.impairment_free:
        return NoiseBreakdown(cfg.n0, 0.0, NoiseMethod.SMALL_AREA)
    hwi = _hwi_scale(cfg, geom, model) * quadrant_power_moment(model.beta, quad)
    return NoiseBreakdown(cfg.n0, hwi, NoiseMethod.SMALL_AREA)


def disk_hwi_term(cfg: SystemConfig, half_length_a: float, model: HwiModel) -> float:
    """Closed-form HWI term for a square of half-length A (disk of equal area)."""
    beta = model.beta
    return (4.0 ** (beta - 1.0) * cfg.power_p * model.alpha
            * half_length_a ** (2.0 * beta)
            / ((beta + 1.0) * cfg.z0 ** 2 * math.pi ** (beta + 1.0)))


def effective_noise_disk(cfg: SystemConfig, geom: SurfaceGeometry,
                         model: HwiModel) -> NoiseBreakdown:
    _check_geometry(cfg, geom)
    return NoiseBreakdown(cfg.n0, disk_hwi_term(cfg, geom.half_length_a, model),
                          NoiseMethod.DISK)


def effective_noise_low_beta(cfg: SystemConfig, geom: SurfaceGeometry,
                             model: HwiModel) -> NoiseBreakdown:
    """Small-area noise with the power moment set to 1 (beta << 1)."""
    _check_geometry(cfg, geom)
    return NoiseBreakdown(cfg.n0, _hwi_scale(cfg, geom, model), NoiseMethod.SMALL_AREA)


def low_beta_slope(cfg: SystemConfig, geom: SurfaceGeometry, model: HwiModel) -> float:
    return 2.0 * model.beta * _hwi_scale(cfg, geom, model) / geom.half_length_a


def effective_noise(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> NoiseBreakdown:
    if method is NoiseMethod.EXACT:
        return effective_noise_exact(cfg, geom, model, quad)
    if method is NoiseMethod.SMALL_AREA:
        return effective_noise_small_area(cfg, geom, model, quad)
    return effective_noise_disk(cfg, geom, model)


def snr_loss(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
    shortcut: bool = False,
) -> float:
    """Received-SNR loss sigma = Ñ / N0.

    With ``shortcut`` the beta << 1 form 1 + P alpha A**(2 beta) / (4 pi z0² N0)
    is used instead of the chosen noise method.
    """
    if cfg.n0 == 0:
        raise SnrLossUndefined("SNR loss is undefined for n0 = 0")
    if shortcut:
        return effective_noise_low_beta(cfg, geom, model).total / cfg.n0
    return effective_noise(cfg, geom, model, method, quad).total / cfg.n0


def snr_loss_db(sigma: float) -> float:
    return linear_to_db(sigma)


def dN_dA(cfg: SystemConfig, geom: SurfaceGeometry, model: HwiModel) -> float:
    """Derivative of the disk-form Ñ with respect to the half-length A."""
    _check_geometry(cfg, geom)
    beta = model.beta
    if beta == 0 or model.impairment_free:
        return 0.0
    return (beta * 4.0 ** (beta - 0.5) * cfg.power_p * model.alpha
            * geom.half_length_a ** (2.0 * beta - 1.0)
            / ((beta + 1.0) * cfg.z0 ** 2 * math.pi ** (beta + 1.0)))


def hwi_slope(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """dÑ/dA for any method: analytic for disk, central difference otherwise."""
    if method is NoiseMethod.DISK:
        return dN_dA(cfg, geom, model)
    if model.impairment_free:
        return 0.0
    a = geom.half_length_a
    h = a * FD_REL_STEP
    upper = effective_noise(cfg, geom.scaled(a + h), model, method, quad).hwi_term
    lower = effective_noise(cfg, geom.scaled(a - h), model, method, quad).hwi_term
    return (upper - lower) / (2.0 * h)
