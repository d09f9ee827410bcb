"""Domain types shared by the channel, noise and analysis modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..config import DEFAULT_WAVELENGTH
from ..errors import OffAxisUserError


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB (-inf for 0)."""
    if value <= 0:
        return -math.inf
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class SystemConfig:
    """Global physical parameters of one link."""

    power_p: float
    n0: float
    z0: float
    wavelength: float = DEFAULT_WAVELENGTH

    def __post_init__(self) -> None:
        if not self.power_p > 0:
            raise ValueError(f"power_p must be positive, got {self.power_p}")
        if not self.n0 >= 0:
            raise ValueError(f"n0 must be non-negative, got {self.n0}")
        if not self.z0 > 0:
            raise ValueError(f"z0 must be positive, got {self.z0}")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @classmethod
    def from_db(cls, power_db: float, n0: float, z0: float,
                wavelength: float = DEFAULT_WAVELENGTH) -> SystemConfig:
        return cls(power_p=db_to_linear(power_db), n0=n0, z0=z0, wavelength=wavelength)

    def cpl_user(self) -> UserPosition:
        """The user on the central perpendicular line at distance z0."""
        return UserPosition(0.0, 0.0, self.z0)

    def geometry(self, half_length_a: float) -> SurfaceGeometry:
        return SurfaceGeometry(half_length_a, self.z0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "power_p": self.power_p,
            "n0": self.n0,
            "z0": self.z0,
            "wavelength": self.wavelength,
        }


@dataclass(frozen=True)
class SurfaceGeometry:
    """A square surface [-A, A]² seen from a user at distance z0."""

    half_length_a: float
    z0: float

    def __post_init__(self) -> None:
        if not self.half_length_a > 0:
            raise ValueError(f"half_length_a must be positive, got {self.half_length_a}")
        if not self.z0 > 0:
            raise ValueError(f"z0 must be positive, got {self.z0}")

    @classmethod
    def from_tau(cls, tau: float, z0: float) -> SurfaceGeometry:
        return cls(tau * z0, z0)

    @classmethod
    def from_area(cls, area: float, z0: float) -> SurfaceGeometry:
        if not area > 0:
            raise ValueError(f"area must be positive, got {area}")
        return cls(math.sqrt(area) / 2.0, z0)

    @property
    def tau(self) -> float:
        return self.half_length_a / self.z0

    @property
    def area(self) -> float:
        return 4.0 * self.half_length_a ** 2

    def scaled(self, half_length_a: float) -> SurfaceGeometry:
        return SurfaceGeometry(half_length_a, self.z0)

    def to_dict(self) -> dict[str, Any]:
        return {"A": self.half_length_a, "tau": self.tau, "area": self.area}


@dataclass(frozen=True)
class UserPosition:
    x0: float
    y0: float
    z0: float

    def __post_init__(self) -> None:
        if not self.z0 > 0:
            raise ValueError(f"z0 must be positive, got {self.z0}")

    @property
    def on_cpl(self) -> bool:
        return self.x0 == 0 and self.y0 == 0


def require_cpl(user: UserPosition | None) -> None:
    """Reject users off the central perpendicular line on closed-form paths."""
    if user is not None and not user.on_cpl:
        raise OffAxisUserError(
            f"user at ({user.x0}, {user.y0}) is off the central perpendicular line; "
            "only the general array-gain quadrature supports off-axis users"
        )


@dataclass(frozen=True)
class ChannelSample:
    """Effective LoS channel s(x, y) at one surface point."""

    amplitude: float
    phase: float
    power: float

    @property
    def value(self) -> complex:
        return self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class HwiModel:
    """Impairment variance profile f(r) = alpha * r**(2*beta)."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not self.beta >= 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")

    @property
    def impairment_free(self) -> bool:
        return self.alpha == 0

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta}


class NoiseMethod(str, Enum):
    """How the effective noise density is evaluated."""

    EXACT = "exact"
    SMALL_AREA = "small-area"
    DISK = "disk"


@dataclass(frozen=True)
class NoiseBreakdown:
    """Effective noise density Ñ split into its AWGN and HWI parts."""

    n0: float
    hwi_term: float
    method: NoiseMethod

    def __post_init__(self) -> None:
        if self.hwi_term < 0:
            raise ValueError(f"hwi_term must be non-negative, got {self.hwi_term}")

    @property
    def total(self) -> float:
        return self.n0 + self.hwi_term

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method.value,
            "n0": self.n0,
            "hwi_term": self.hwi_term,
            "n_eff": self.total,
        }
