"""Capacity, utility of surface-area, its upper bound and the sign conditions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from ..physics.base import (
    HwiModel,
    NoiseBreakdown,
    NoiseMethod,
    SurfaceGeometry,
    SystemConfig,
    UserPosition,
    linear_to_db,
    require_cpl,
)
from ..physics.channel import array_gain_closed, dzeta_dA, zeta_argument
from ..physics.noise import effective_noise, hwi_slope
from ..physics.quadrature import DEFAULT_QUADRATURE, QuadratureSettings


@dataclass(frozen=True)
class CapacityReport:
    """Everything known about one operating point; the row type of the sweeps."""

    geometry: SurfaceGeometry
    power_p: float
    zeta: float
    noise: NoiseBreakdown
    sigma: float
    capacity_nat: float
    utility: float
    utility_upper_bound: float

    @property
    def snr(self) -> float:
        return self.zeta * self.power_p / self.noise.total

    @property
    def capacity_bit(self) -> float:
        return self.capacity_nat / math.log(2.0)

    @property
    def sigma_db(self) -> float:
        return linear_to_db(self.sigma)

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.geometry.to_dict(),
            "zeta": self.zeta,
            "n_eff": self.noise.total,
            "hwi_term": self.noise.hwi_term,
            "method": self.noise.method.value,
            "sigma": self.sigma,
            "sigma_db": self.sigma_db,
            "snr": self.snr,
            "capacity_nat": self.capacity_nat,
            "capacity_bit": self.capacity_bit,
            "utility": self.utility,
            "gamma0": self.utility_upper_bound,
        }


def utility_upper_bound(tau: float, z0: float) -> float:
    """gamma0; diverges (returns +inf) at tau = 0."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    if tau == 0:
        return math.inf
    t2 = tau * tau
    return (1.0 / (4.0 * z0 ** 2)
            / math.atan(zeta_argument(tau))
            / (math.sqrt(2.0 * t2 + 1.0) * (t2 + 1.0)))


def _utility_value(cfg: SystemConfig, geom: SurfaceGeometry, zeta: float,
                   n_eff: float, noise_slope: float) -> float:
    gain_slope = dzeta_dA(geom.tau, cfg.z0)
    prefactor = cfg.power_p / (8.0 * geom.half_length_a * (n_eff + zeta * cfg.power_p))
    return prefactor * (gain_slope - zeta / n_eff * noise_slope)


def build_report(cfg: SystemConfig, geom: SurfaceGeometry, noise: NoiseBreakdown,
                 noise_slope: float) -> CapacityReport:
    """Assemble a report from an already evaluated Ñ and dÑ/dA."""
    n_eff = noise.total
    if not n_eff > 0:
        raise ValueError("effective noise density must be positive (n0 = 0 without HWI)")
    zeta = array_gain_closed(geom.tau)
    return CapacityReport(
        geometry=geom,
        power_p=cfg.power_p,
        zeta=zeta,
        noise=noise,
        sigma=n_eff / cfg.n0 if cfg.n0 > 0 else math.inf,
        capacity_nat=math.log1p(zeta * cfg.power_p / n_eff),
        utility=_utility_value(cfg, geom, zeta, n_eff, noise_slope),
        utility_upper_bound=utility_upper_bound(geom.tau, cfg.z0),
    )


def capacity(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
    user: UserPosition | None = None,
) -> CapacityReport:
    require_cpl(user)
    noise = effective_noise(cfg, geom, model, method, quad)
    return build_report(cfg, geom, noise, hwi_slope(cfg, geom, model, method, quad))


def utility_slope_terms(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """(dzeta/dA, zeta/Ñ * dÑ/dA): the utility is negative when the second wins."""
    n_eff = effective_noise(cfg, geom, model, method, quad).total
    zeta = array_gain_closed(geom.tau)
    offset = zeta / n_eff * hwi_slope(cfg, geom, model, method, quad)
    return dzeta_dA(geom.tau, cfg.z0), offset


def utility(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """dC/d(area) in nat/s/Hz/m²."""
    noise = effective_noise(cfg, geom, model, method, quad)
    if not noise.total > 0:
        raise ValueError("effective noise density must be positive (n0 = 0 without HWI)")
    zeta = array_gain_closed(geom.tau)
    slope = hwi_slope(cfg, geom, model, method, quad)
    return _utility_value(cfg, geom, zeta, noise.total, slope)


def condition_sides(cfg: SystemConfig, tau: float, model: HwiModel) -> tuple[float, float]:
    """Both sides of the disk-model negative-utility inequality, divided by 2*tau."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    z0, beta, p, alpha = cfg.z0, model.beta, cfg.power_p, model.alpha
    t2 = tau * tau
    lhs = 1.0 / (math.pi * z0 * math.sqrt(2.0 * t2 + 1.0) * (t2 + 1.0))
    if beta == 0 or alpha == 0:
        return lhs, 0.0
    zeta = array_gain_closed(tau)
    scale = 4.0 ** (beta - 1.0) * p * alpha
    numerator = zeta * beta * scale * tau ** (2.0 * beta - 2.0) * z0 ** (2.0 * beta - 3.0)
    denominator = ((beta + 1.0) * math.pi ** (beta + 1.0) * cfg.n0
                   + scale * tau ** (2.0 * beta) * z0 ** (2.0 * beta - 2.0))
    return lhs, numerator / denominator


def negative_utility_condition(cfg: SystemConfig, geom: SurfaceGeometry,
                               model: HwiModel) -> bool:
    """True when growing the surface reduces capacity under the disk model."""
    lhs, rhs = condition_sides(cfg, geom.tau, model)
    return lhs < rhs


def high_snr_threshold(tau: float) -> float:
    """Smallest beta giving negative utility at tau when N0 -> 0 (1 at tau = 0)."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    if math.isinf(tau):
        return 0.0
    x = zeta_argument(tau)
    if x == 0:
        return 1.0
    return x / ((tau * tau + 1.0) * math.atan(x))


def negative_utility_condition_high_snr(tau: float, beta: float) -> bool:
    return beta > high_snr_threshold(tau)
