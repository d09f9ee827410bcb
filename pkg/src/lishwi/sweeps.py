"""Parameter sweeps producing the plot-ready rows of the CLI and the API."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Sequence, TypeVar

import numpy as np

from .analysis.capacity import CapacityReport, build_report, capacity
from .analysis.splitting import SplitConfig, split_capacity
from .errors import SnrLossUndefined
from .physics.base import HwiModel, NoiseMethod, SurfaceGeometry, SystemConfig
from .physics.noise import effective_noise_low_beta, low_beta_slope
from .physics.quadrature import DEFAULT_QUADRATURE, QuadratureSettings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class SweepVariable(str, Enum):
    HALF_LENGTH = "half_length"
    AREA = "area"
    TAU = "tau"
    M_UNITS = "m_units"


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    lo: float
    hi: float
    steps: int
    log: bool = False

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"sweep needs lo < hi, got lo={self.lo}, hi={self.hi}")
        if self.steps < 2:
            raise ValueError(f"sweep needs at least 2 steps, got {self.steps}")
        if self.log and not self.lo > 0:
            raise ValueError("a logarithmic sweep needs lo > 0")
        if self.variable is SweepVariable.M_UNITS and self.lo < 1:
            raise ValueError("an m_units sweep starts at 1 or above")

    def points(self) -> list[float]:
        space = np.geomspace if self.log else np.linspace
        values = space(self.lo, self.hi, self.steps)
        if self.variable is SweepVariable.M_UNITS:
            return [int(m) for m in np.unique(np.rint(values).astype(int))]
        return [float(v) for v in values]

    def geometry(self, value: float, z0: float) -> SurfaceGeometry:
        if self.variable is SweepVariable.HALF_LENGTH:
            return SurfaceGeometry(value, z0)
        if self.variable is SweepVariable.AREA:
            return SurfaceGeometry.from_area(value, z0)
        if self.variable is SweepVariable.TAU:
            return SurfaceGeometry.from_tau(value, z0)
        raise ValueError("m_units is only swept by the split analysis")


BASE_COLUMNS = (
    "A", "tau", "area", "zeta", "n_eff", "sigma", "sigma_db",
    "capacity_nat", "utility", "gamma0", "hwi_term",
)


@dataclass(frozen=True)
class OutputRow:
    A: float
    tau: float
    area: float
    zeta: float
    n_eff: float
    sigma: float
    sigma_db: float
    capacity_nat: float
    utility: float
    gamma0: float
    hwi_term: float
    capacity_bit: float
    m_units: int | None = None

    @classmethod
    def from_report(cls, report: CapacityReport, m_units: int | None = None) -> OutputRow:
        geom = report.geometry
        return cls(
            A=geom.half_length_a,
            tau=geom.tau,
            area=geom.area,
            zeta=report.zeta,
            n_eff=report.noise.total,
            hwi_term=report.noise.hwi_term,
            sigma=report.sigma,
            sigma_db=report.sigma_db,
            capacity_nat=report.capacity_nat,
            utility=report.utility,
            gamma0=report.utility_upper_bound,
            capacity_bit=report.capacity_bit,
            m_units=m_units,
        )

    def to_dict(self, bits: bool = False) -> dict[str, Any]:
        """Fixed column order; m_units only for split rows, capacity_bit on request."""
        row = {name: getattr(self, name) for name in BASE_COLUMNS}
        if self.m_units is not None:
            row["m_units"] = self.m_units
        if bits:
            row["capacity_bit"] = self.capacity_bit
        return row


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map in input order, optionally on a thread pool."""
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def capacity_sweep(
    cfg: SystemConfig,
    model: HwiModel,
    spec: SweepSpec,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
    workers: int = 1,
) -> list[OutputRow]:
    """One row per sweep point, ascending in the sweep variable."""

    def point(value: float) -> OutputRow:
        return OutputRow.from_report(
            capacity(cfg, spec.geometry(value, cfg.z0), model, method, quad)
        )

    points = spec.points()
    logger.info(f"{spec.variable.value} sweep: {len(points)} points, method {method.value}")
    return parallel_map(point, points, workers)


def snr_loss_sweep(
    cfg: SystemConfig,
    model: HwiModel,
    spec: SweepSpec,
    method: NoiseMethod = NoiseMethod.DISK,
    quad: QuadratureSettings = DEFAULT_QUADRATURE,
    workers: int = 1,
    shortcut: bool = False,
) -> list[OutputRow]:
    """Like capacity_sweep; with ``shortcut`` every row uses the beta << 1 noise."""
    if cfg.n0 == 0:
        raise SnrLossUndefined("SNR loss is undefined for n0 = 0")

    def point(value: float) -> OutputRow:
        geom = spec.geometry(value, cfg.z0)
        if not shortcut:
            return OutputRow.from_report(capacity(cfg, geom, model, method, quad))
        noise = effective_noise_low_beta(cfg, geom, model)
        return OutputRow.from_report(
            build_report(cfg, geom, noise, low_beta_slope(cfg, geom, model))
        )

    return parallel_map(point, spec.points(), workers)


def split_sweep(
    cfg: SystemConfig,
    model: HwiModel,
    geom: SurfaceGeometry,
    units: Sequence[int],
    workers: int = 1,
) -> list[OutputRow]:
    """Rows over the number of LIS-Units for one parent surface."""
    ordered = sorted(set(units))
    if not ordered:
        raise ValueError("at least one unit count is required")

    def point(m: int) -> OutputRow:
        return OutputRow.from_report(split_capacity(cfg, SplitConfig(m, geom), model), m)

    return parallel_map(point, ordered, workers)
