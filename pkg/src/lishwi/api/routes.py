"""API routes exposing capacity, noise, turning points and splitting."""

from __future__ import annotations

import asyncio
import logging
from typing import Annotated, Any, Callable

from fastapi import APIRouter, HTTPException, Query
from pydantic import BaseModel, Field

from ..analysis.capacity import capacity, utility_upper_bound
from ..analysis.turning import turning_point
from ..config import (
    DEFAULT_N0,
    DEFAULT_POWER_DB,
    DEFAULT_TAU_BRACKET,
    DEFAULT_Z0,
    QUAD_ABS_TOL,
    QUAD_REL_TOL,
)
from ..errors import NumericalFailure
from ..output import json_safe
from ..physics.base import HwiModel, NoiseMethod, SurfaceGeometry, SystemConfig
from ..physics.channel import array_gain_closed, dzeta_dA
from ..physics.noise import effective_noise
from ..physics.quadrature import QuadratureSettings
from ..sweeps import split_sweep

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/api", tags=["analysis"])


class LinkRequest(BaseModel):
    power_db: float = DEFAULT_POWER_DB
    n0: float = Field(default=DEFAULT_N0, ge=0)
    z0: float = Field(default=DEFAULT_Z0, gt=0)
    alpha: float = Field(default=0.0, ge=0)
    beta: float = Field(default=0.0, ge=0)
    method: NoiseMethod = NoiseMethod.DISK
    quad_tol: float = Field(default=QUAD_REL_TOL, gt=0)

    def system(self) -> SystemConfig:
        return SystemConfig.from_db(self.power_db, self.n0, self.z0)

    def model(self) -> HwiModel:
        return HwiModel(self.alpha, self.beta)

    def quad(self) -> QuadratureSettings:
        return QuadratureSettings(abs_tol=QUAD_ABS_TOL, rel_tol=self.quad_tol)


class SurfaceRequest(LinkRequest):
    half_length: float = Field(gt=0)  # A, the surface is [-A, A]²


class TurningPointRequest(LinkRequest):
    tau_lo: float = Field(default=DEFAULT_TAU_BRACKET[0], gt=0)
    tau_hi: float = Field(default=DEFAULT_TAU_BRACKET[1], gt=0)


class SplitRequest(LinkRequest):
    area: float = Field(default=16.0, gt=0)
    units: list[Annotated[int, Field(ge=1)]] = Field(default_factory=lambda: [1, 3, 5, 11],
                                                     min_length=1)


async def _compute(fn: Callable[[], Any]) -> Any:
    """Run a numerical job off the event loop and map its failures to HTTP errors."""
    loop = asyncio.get_running_loop()
    try:
        result = await loop.run_in_executor(None, fn)
    except NumericalFailure as exc:
        logger.warning(f"numerical failure: {exc}")
        raise HTTPException(status_code=422, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return json_safe(result)


@router.post("/capacity")
async def post_capacity(request: SurfaceRequest):
    """Capacity, utility and its upper bound at one surface size."""

    def job() -> dict[str, Any]:
        cfg = request.system()
        geom = SurfaceGeometry(request.half_length, request.z0)
        return capacity(cfg, geom, request.model(), request.method, request.quad()).to_dict()

    return await _compute(job)


@router.post("/noise")
async def post_noise(request: SurfaceRequest):
    """Effective noise density under every evaluation method."""

    def job() -> dict[str, Any]:
        cfg = request.system()
        geom = SurfaceGeometry(request.half_length, request.z0)
        methods = [
            effective_noise(cfg, geom, request.model(), method, request.quad()).to_dict()
            for method in NoiseMethod
        ]
        return {**geom.to_dict(), "methods": methods}

    return await _compute(job)


@router.post("/turning-point")
async def post_turning_point(request: TurningPointRequest):
    def job() -> dict[str, Any]:
        return turning_point(request.system(), request.model(), request.method,
                             (request.tau_lo, request.tau_hi), request.quad()).to_dict()

    return await _compute(job)


@router.post("/split")
async def post_split(request: SplitRequest):
    def job() -> dict[str, Any]:
        if request.method is not NoiseMethod.DISK:
            raise ValueError("splitting is evaluated with the disk noise form only")
        geom = SurfaceGeometry.from_area(request.area, request.z0)
        rows = split_sweep(request.system(), request.model(), geom, request.units)
        return {"area": request.area, "rows": [row.to_dict() for row in rows]}

    return await _compute(job)


@router.get("/zeta")
async def get_zeta(
    tau: float = Query(gt=0),
    z0: float = Query(default=DEFAULT_Z0, gt=0),
):
    """Array gain, its slope in A and the utility bound for a CPL user."""
    return json_safe({
        "tau": tau,
        "z0": z0,
        "zeta": array_gain_closed(tau),
        "dzeta_dA": dzeta_dA(tau, z0),
        "gamma0": utility_upper_bound(tau, z0),
    })
