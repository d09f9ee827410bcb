"""Shared operating points.

``impaired_link`` with ``impaired_model`` is the case with a turning point (alpha = 2, beta = 3, z0 = 2,
P = 20 dB, N0 = 1); ``ideal_link`` is the impairment-free capacity setting
(z0 = 4, N0 = 1, P = 30 dB).
"""

from __future__ import annotations

import pytest

from lishwi.physics.base import HwiModel, SystemConfig


@pytest.fixture
def impaired_link() -> SystemConfig:
    return SystemConfig.from_db(20.0, n0=1.0, z0=2.0)


@pytest.fixture
def impaired_model() -> HwiModel:
    return HwiModel(alpha=2.0, beta=3.0)


@pytest.fixture
def ideal_link() -> SystemConfig:
    return SystemConfig.from_db(30.0, n0=1.0, z0=4.0)


@pytest.fixture
def no_hwi() -> HwiModel:
    return HwiModel()
