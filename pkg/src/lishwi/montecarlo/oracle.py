"""Grid-sampled Monte-Carlo simulation of the matched-filter receiver.

The surface is cut into resolution x resolution square cells. Per trial and
per cell an impairment h_i ~ CN(0, f(r_i)/Δ) and a noise sample
n_i ~ CN(0, N0/Δ) are drawn (white-process discretisation), the received
field sqrt(P) * s_i * (a + a*h_i) + n_i is matched-filtered as a Riemann sum
and normalised by 1/sqrt(ζ_grid). The variance of what is left after removing
the signal term estimates the effective noise density Ñ.

Every trial i draws from ``default_rng([seed, i])``, so the estimate does
not depend on how trials are spread over workers. The grid-dependent MF
weights are computed once per estimate; a trial is one block of float32
standard normals and one matrix product. Without HWI no h planes are drawn.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np

from ..config import (
    DEFAULT_MC_RESOLUTION,
    DEFAULT_MC_TRIALS,
    DEFAULT_SEED,
    MC_CHUNK_TRIALS,
    MC_MIN_TRIALS,
)
from ..physics.base import HwiModel, SurfaceGeometry, SystemConfig, UserPosition, require_cpl
from ..physics.channel import channel_field
from ..physics.noise import variance_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldGrid:
    """Channel samples at the cell centres of a square surface."""

    resolution: int
    half_length_a: float
    cell_area: float
    samples: np.ndarray
    radii: np.ndarray

    def __post_init__(self) -> None:
        if self.resolution < 2:
            raise ValueError(f"resolution must be at least 2, got {self.resolution}")
        shape = (self.resolution, self.resolution)
        if self.samples.shape != shape or self.radii.shape != shape:
            raise ValueError(f"samples and radii must have shape {shape}")

    @cached_property
    def zeta_grid(self) -> float:
        """Riemann-sum array gain of the sampled field."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.cell_area)


def build_grid(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    resolution: int = DEFAULT_MC_RESOLUTION,
    user: UserPosition | None = None,
) -> FieldGrid:
    require_cpl(user)
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    a = geom.half_length_a
    step = 2.0 * a / resolution
    centres = -a + step * (np.arange(resolution) + 0.5)
    x, y = np.meshgrid(centres, centres, indexing="ij")
    samples = channel_field(x, y, cfg.cpl_user(), cfg)
    return FieldGrid(
        resolution=resolution,
        half_length_a=a,
        cell_area=step * step,
        samples=samples,
        radii=np.hypot(x, y),
    )


@dataclass(frozen=True)
class McSettings:
    trials: int = DEFAULT_MC_TRIALS
    seed: int = DEFAULT_SEED
    resolution: int = DEFAULT_MC_RESOLUTION
    random_symbol: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.resolution < 2:
            raise ValueError(f"resolution must be at least 2, got {self.resolution}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")


@dataclass(frozen=True)
class McEstimate:
    noise_density_estimate: float
    standard_error: float
    signal_power_estimate: float
    hwi_awgn_covariance: float
    covariance_error: float
    trials: int
    resolution: int
    zeta_grid: float
    grid_noise_density: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "noise_density_estimate": self.noise_density_estimate,
            "standard_error": self.standard_error,
            "signal_power_estimate": self.signal_power_estimate,
            "hwi_awgn_covariance": self.hwi_awgn_covariance,
            "covariance_error": self.covariance_error,
            "trials": self.trials,
            "resolution": self.resolution,
            "zeta_grid": self.zeta_grid,
            "grid_noise_density": self.grid_noise_density,
        }


def expected_noise_density(cfg: SystemConfig, model: HwiModel, grid: FieldGrid) -> float:
    """What the estimator converges to on this grid: N0 + (P/ζ_grid)·Σ f|s|⁴Δ."""
    f = variance_profile(grid.radii, model)
    hwi = cfg.power_p * float(np.sum(f * np.abs(grid.samples) ** 4)) * grid.cell_area
    return cfg.n0 + hwi / grid.zeta_grid


@dataclass(frozen=True)
class _MatchedFilter:
    """Per-grid constants of a trial; only the Gaussian draws change between trials.

    ``weights`` has one row per cell and the columns (HWI, AWGN real part of
    s, AWGN imaginary part of s), each already scaled by the cell area, the
    1/sqrt(ζ_grid) normalisation and the per-component standard deviation.
    """

    signal_gain: float
    weights: np.ndarray
    impaired: bool

    @classmethod
    def for_grid(cls, cfg: SystemConfig, model: HwiModel, grid: FieldGrid) -> _MatchedFilter:
        delta = grid.cell_area
        s = grid.samples.ravel()
        norm = 1.0 / math.sqrt(grid.zeta_grid)
        # CN(0, v): real and imaginary parts carry v/2 each
        hwi_std = np.sqrt(variance_profile(grid.radii.ravel(), model) / (2.0 * delta))
        noise_std = math.sqrt(cfg.n0 / (2.0 * delta))
        weights = np.column_stack((
            norm * math.sqrt(cfg.power_p) * np.abs(s) ** 2 * delta * hwi_std,
            norm * s.real * delta * noise_std,
            norm * s.imag * delta * noise_std,
        ))
        return cls(
            signal_gain=math.sqrt(cfg.power_p * grid.zeta_grid),
            weights=weights,
            impaired=not model.impairment_free,
        )


def _symbol(rng: np.random.Generator, random_symbol: bool) -> complex:
    if not random_symbol:
        return 1.0 + 0.0j
    return complex(np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))


def _trial_terms(mf: _MatchedFilter, rng: np.random.Generator,
                 random_symbol: bool) -> tuple[complex, complex, complex]:
    """One transmission: (signal term, HWI noise term, AWGN term) after the MF."""
    a = _symbol(rng, random_symbol)
    # planes: h real, h imag (only with HWI), then n real, n imag
    planes = 4 if mf.impaired else 2
    draws = rng.standard_normal((planes, mf.weights.shape[0]), dtype=np.float32)
    sums = draws @ mf.weights
    hwi = a * complex(sums[0, 0], sums[1, 0]) if mf.impaired else 0j
    n_re, n_im = sums[-2], sums[-1]
    # conj(s)·n = (s_re n_re + s_im n_im) + i (s_re n_im - s_im n_re)
    awgn = complex(n_re[1] + n_im[2], n_im[1] - n_re[2])
    return mf.signal_gain * a, hwi, awgn


def simulate_mf_trial(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    grid: FieldGrid,
    rng: np.random.Generator,
    random_symbol: bool = False,
) -> tuple[complex, complex]:
    """Matched-filter output of one symbol as (sqrt(Pζ)·a, noise term)."""
    if not math.isclose(grid.half_length_a, geom.half_length_a, rel_tol=1e-12):
        raise ValueError("grid was built for a different surface")
    signal, hwi, awgn = _trial_terms(_MatchedFilter.for_grid(cfg, model, grid), rng,
                                     random_symbol)
    return signal, hwi + awgn


def _run_chunk(mf: _MatchedFilter, settings: McSettings, start: int, stop: int) -> np.ndarray:
    out = np.empty((stop - start, 3), dtype=complex)
    for k, trial in enumerate(range(start, stop)):
        rng = np.random.default_rng([settings.seed, trial])
        out[k] = _trial_terms(mf, rng, settings.random_symbol)
    return out


def _mean_and_error(values: np.ndarray) -> tuple[float, float]:
    return float(np.mean(values)), float(np.std(values, ddof=1) / math.sqrt(values.size))


def estimate_effective_noise(
    cfg: SystemConfig,
    geom: SurfaceGeometry,
    model: HwiModel,
    settings: McSettings = McSettings(),
) -> McEstimate:
    """Monte-Carlo estimate of Ñ with its standard error."""
    if settings.trials < MC_MIN_TRIALS:
        raise ValueError(
            f"at least {MC_MIN_TRIALS} trials are needed for a meaningful "
            f"standard error, got {settings.trials}"
        )
    grid = build_grid(cfg, geom, settings.resolution)
    mf = _MatchedFilter.for_grid(cfg, model, grid)
    bounds = [(lo, min(lo + MC_CHUNK_TRIALS, settings.trials))
              for lo in range(0, settings.trials, MC_CHUNK_TRIALS)]
    logger.info(
        f"Monte-Carlo: {settings.trials} trials on a {settings.resolution}² grid "
        f"(seed {settings.seed}, {settings.workers} worker(s))"
    )

    def run(bound: tuple[int, int]) -> np.ndarray:
        return _run_chunk(mf, settings, *bound)

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            chunks = list(pool.map(run, bounds))
    else:
        chunks = [run(b) for b in bounds]
    terms = np.concatenate(chunks)

    signal, hwi, awgn = terms[:, 0], terms[:, 1], terms[:, 2]
    noise_power = np.abs(hwi + awgn) ** 2
    estimate, error = _mean_and_error(noise_power)
    covariance, covariance_error = _mean_and_error(np.real(hwi * np.conj(awgn)))
    result = McEstimate(
        noise_density_estimate=estimate,
        standard_error=error,
        signal_power_estimate=float(np.mean(np.abs(signal) ** 2)),
        hwi_awgn_covariance=covariance,
        covariance_error=covariance_error,
        trials=settings.trials,
        resolution=settings.resolution,
        zeta_grid=grid.zeta_grid,
        grid_noise_density=expected_noise_density(cfg, model, grid),
    )
    logger.info(f"Monte-Carlo estimate Ñ={estimate:.6e} ± {error:.2e}")
    return result
