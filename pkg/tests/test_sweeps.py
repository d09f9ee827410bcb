from __future__ import annotations

import json
import math

import numpy as np
import pytest

from lishwi.errors import SnrLossUndefined
from lishwi.output import format_number, render, render_csv, render_json
from lishwi.physics.base import HwiModel, NoiseMethod, SurfaceGeometry, SystemConfig
from lishwi.sweeps import (
    BASE_COLUMNS,
    SweepSpec,
    SweepVariable,
    capacity_sweep,
    parallel_map,
    snr_loss_sweep,
    split_sweep,
)


@pytest.mark.parametrize("lo,hi,steps,log", [
    (1.0, 1.0, 5, False),
    (2.0, 1.0, 5, False),
    (0.1, 1.0, 1, False),
    (0.0, 1.0, 5, True),
])
def test_sweep_spec_validation(lo, hi, steps, log):
    with pytest.raises(ValueError):
        SweepSpec(SweepVariable.AREA, lo, hi, steps, log)


def test_sweep_points():
    linear = SweepSpec(SweepVariable.TAU, 0.1, 0.5, 5).points()
    assert linear == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
    log = SweepSpec(SweepVariable.AREA, 0.01, 100.0, 5, log=True).points()
    assert log == pytest.approx([0.01, 0.1, 1.0, 10.0, 100.0])


def test_unit_sweep_points_are_unique_integers():
    points = SweepSpec(SweepVariable.M_UNITS, 1, 16, 40).points()
    assert points == list(range(1, 17))
    assert all(isinstance(m, int) for m in points)
    with pytest.raises(ValueError):
        SweepSpec(SweepVariable.M_UNITS, 0, 4, 5)


def test_sweep_geometry():
    assert SweepSpec(SweepVariable.AREA, 1, 2, 2).geometry(4.0, 2.0).half_length_a == 1.0
    assert SweepSpec(SweepVariable.TAU, 1, 2, 2).geometry(0.5, 2.0).half_length_a == 1.0
    assert SweepSpec(SweepVariable.HALF_LENGTH, 1, 2, 2).geometry(0.5, 2.0).half_length_a == 0.5
    with pytest.raises(ValueError):
        SweepSpec(SweepVariable.M_UNITS, 1, 2, 2).geometry(1.0, 2.0)


def test_plot_columns_keep_their_positions():
    assert BASE_COLUMNS[:10] == (
        "A", "tau", "area", "zeta", "n_eff", "sigma", "sigma_db",
        "capacity_nat", "utility", "gamma0",
    )
    assert BASE_COLUMNS[-1] == "hwi_term"


def test_rows_have_fixed_columns(impaired_link, impaired_model):
    rows = capacity_sweep(impaired_link, impaired_model,
                          SweepSpec(SweepVariable.AREA, 0.5, 4.0, 4))
    assert [list(r.to_dict()) for r in rows] == [list(BASE_COLUMNS)] * 4
    assert list(rows[0].to_dict(bits=True))[-1] == "capacity_bit"
    assert [r.area for r in rows] == pytest.approx([0.5, 1.666666666667, 2.833333333333, 4.0])


def test_impairment_free_capacity_sweep_is_monotone(ideal_link, no_hwi):
    rows = capacity_sweep(ideal_link, no_hwi,
                          SweepSpec(SweepVariable.AREA, 0.01, 100.0, 200, log=True))
    caps = [r.capacity_nat for r in rows]
    assert all(b > a for a, b in zip(caps, caps[1:]))
    assert all(r.utility <= r.gamma0 for r in rows)


@pytest.mark.parametrize("beta", [2.0, 3.0])
def test_impaired_capacity_has_interior_maximum(beta):
    cfg = SystemConfig(100.0, 1.0, 2.0)
    rows = capacity_sweep(cfg, HwiModel(2.0, beta),
                          SweepSpec(SweepVariable.AREA, 0.01, 1000.0, 40, log=True),
                          NoiseMethod.EXACT)
    caps = [r.capacity_nat for r in rows]
    peak = int(np.argmax(caps))
    assert 0 < peak < len(caps) - 1
    assert caps[-1] < caps[peak]


def test_parallel_sweep_matches_serial(impaired_link, impaired_model):
    spec = SweepSpec(SweepVariable.TAU, 0.05, 1.5, 12)
    serial = capacity_sweep(impaired_link, impaired_model, spec, NoiseMethod.SMALL_AREA)
    threaded = capacity_sweep(impaired_link, impaired_model, spec, NoiseMethod.SMALL_AREA,
                              workers=4)
    assert serial == threaded


def test_parallel_map_keeps_order():
    assert parallel_map(lambda x: x * x, [3, 1, 2], workers=2) == [9, 1, 4]
    with pytest.raises(ValueError):
        parallel_map(abs, [1], workers=0)


def test_snr_loss_sweep_shortcut_exact_at_beta_zero():
    cfg = SystemConfig(100.0, 1.0, 4.0)
    model = HwiModel(1.0, 0.0)
    spec = SweepSpec(SweepVariable.HALF_LENGTH, 0.1, 4.0, 6)
    disk = snr_loss_sweep(cfg, model, spec)
    shortcut = snr_loss_sweep(cfg, model, spec, shortcut=True)
    for a, b in zip(disk, shortcut):
        assert a.sigma == pytest.approx(b.sigma, rel=1e-12)
        assert a.utility == pytest.approx(b.utility, rel=1e-12)


def test_snr_loss_sweep_needs_awgn():
    cfg = SystemConfig(100.0, 0.0, 4.0)
    with pytest.raises(SnrLossUndefined):
        snr_loss_sweep(cfg, HwiModel(1.0, 1.0), SweepSpec(SweepVariable.TAU, 0.1, 1.0, 3))


def test_split_sweep_rows():
    cfg = SystemConfig(100.0, 1.0, 4.0)
    geom = SurfaceGeometry.from_area(16.0, 4.0)
    rows = split_sweep(cfg, HwiModel(1.0, 1.0), geom, [11, 1, 5, 3, 5])
    assert [r.m_units for r in rows] == [1, 3, 5, 11]
    hwi = [r.hwi_term for r in rows]
    assert all(b < a for a, b in zip(hwi, hwi[1:]))
    assert list(rows[0].to_dict())[-1] == "m_units"
    with pytest.raises(ValueError):
        split_sweep(cfg, HwiModel(1.0, 1.0), geom, [])


def test_format_number():
    assert format_number(1.0 / 3.0) == "0.333333333333"
    assert format_number(2.5e-20) == "2.5e-20"
    assert format_number(math.inf) == "inf"
    assert format_number(-math.inf) == "-inf"
    assert format_number(7) == "7"
    assert format_number(True) == "true"


def test_render_csv_and_json():
    rows = [{"A": 0.5, "gamma0": math.inf}, {"A": 1.0 / 3.0, "gamma0": 2.0}]
    assert render_csv(rows) == "A,gamma0\n0.5,inf\n0.333333333333,2\n"
    data = json.loads(render_json(rows))
    assert data == [{"A": 0.5, "gamma0": "inf"}, {"A": 0.333333333333, "gamma0": 2.0}]
    single = json.loads(render(rows, "json", single=True))
    assert single == {"A": 0.5, "gamma0": "inf"}
    with pytest.raises(ValueError):
        render(rows, "xml")
