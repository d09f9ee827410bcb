"""LoS channel over the surface and the array gain zeta.

Distances are normalised by z0 before integrating, so the quadrature always
works on O(1) integrands whatever the physical scale.
"""

from __future__ import annotations

import math

import numpy as np

from .base import ChannelSample, SurfaceGeometry, SystemConfig, UserPosition
from .quadrature import DEFAULT_QUADRATURE, QuadratureSettings, integrate_or_raise

TWO_PI = 2.0 * math.pi


def eta(point_x, point_y, user: UserPosition):
    """Squared distance between a surface point (z = 0) and the user."""
    return (user.x0 - point_x) ** 2 + (user.y0 - point_y) ** 2 + user.z0 ** 2


def channel_gain(point_x: float, point_y: float, user: UserPosition,
                 cfg: SystemConfig) -> ChannelSample:
    e = eta(point_x, point_y, user)
    amplitude = 0.5 * math.sqrt(user.z0 / math.pi) * e ** -0.75
    phase = (-TWO_PI * (math.sqrt(e) / cfg.wavelength)) % TWO_PI
    # tiny negative arguments round up to exactly 2*pi
    if phase >= TWO_PI:
        phase = 0.0
    return ChannelSample(amplitude=amplitude, phase=phase, power=amplitude * amplitude)


def channel_field(x: np.ndarray, y: np.ndarray, user: UserPosition,
                  cfg: SystemConfig) -> np.ndarray:
    """Complex s(x, y) on arrays of surface points."""
    e = eta(x, y, user)
    amplitude = 0.5 * np.sqrt(user.z0 / np.pi) * e ** -0.75
    return amplitude * np.exp(-1j * TWO_PI * np.sqrt(e) / cfg.wavelength)


def zeta_argument(tau: float) -> float:
    # tau**2 / sqrt(2 tau**2 + 1), written so it does not overflow for huge tau
    if tau == 0:
        return 0.0
    if math.isinf(tau):
        return math.inf
    return tau / math.sqrt(2.0 + 1.0 / (tau * tau))


def array_gain_closed(tau: float) -> float:
    """Fraction of the transmitted power captured by a square surface on the CPL."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    return math.atan(zeta_argument(tau)) / math.pi


def array_gain_quadrature(
    geom: SurfaceGeometry,
    user: UserPosition | None = None,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
) -> float:
    """Array gain by direct integration; any user position is allowed."""
    if user is None:
        user = UserPosition(0.0, 0.0, geom.z0)
    u0 = user.x0 / user.z0
    v0 = user.y0 / user.z0
    t = geom.half_length_a / user.z0

    def integrand(u, v):
        return ((u0 - u) ** 2 + (v0 - v) ** 2 + 1.0) ** -1.5

    value = integrate_or_raise(integrand, -t, t, -t, t, quad, what="array gain")
    return value / (4.0 * math.pi)


def dzeta_dA(tau: float, z0: float) -> float:
    if tau < 0 or z0 <= 0:
        raise ValueError("tau must be non-negative and z0 positive")
    t2 = tau * tau
    return 2.0 * tau / (math.pi * z0 * math.sqrt(2.0 * t2 + 1.0) * (t2 + 1.0))
