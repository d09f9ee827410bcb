"""Splitting one surface into M LIS-Units, each with its own processing unit.

The received power is unchanged; every unit sees the HWI of a surface with
half-length A/M. The CPL assumption for every unit makes this an upper bound
on Ñ, approximately tight only for A << z0.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..physics.base import HwiModel, NoiseBreakdown, NoiseMethod, SurfaceGeometry, SystemConfig
from ..physics.noise import disk_hwi_term, dN_dA
from .capacity import CapacityReport, build_report


@dataclass(frozen=True)
class SplitConfig:
    m_units: int
    geometry: SurfaceGeometry

    def __post_init__(self) -> None:
        if isinstance(self.m_units, bool) or not isinstance(self.m_units, int):
            raise ValueError(f"m_units must be an integer, got {self.m_units!r}")
        if self.m_units < 1:
            raise ValueError(f"m_units must be at least 1, got {self.m_units}")

    @property
    def unit_half_length(self) -> float:
        return self.geometry.half_length_a / self.m_units

    @property
    def unit_geometry(self) -> SurfaceGeometry:
        return self.geometry.scaled(self.unit_half_length)


def split_noise_bound(cfg: SystemConfig, split: SplitConfig,
                      model: HwiModel) -> NoiseBreakdown:
    return NoiseBreakdown(cfg.n0, disk_hwi_term(cfg, split.unit_half_length, model),
                          NoiseMethod.DISK)


def split_capacity(cfg: SystemConfig, split: SplitConfig, model: HwiModel) -> CapacityReport:
    noise = split_noise_bound(cfg, split, model)
    # d/dA of the unit term evaluated at A/M
    slope = dN_dA(cfg, split.unit_geometry, model) / split.m_units
    return build_report(cfg, split.geometry, noise, slope)
