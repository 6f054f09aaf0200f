import csv
import io
import math

import numpy as np
import pytest

from magnonkerr import (
    AllPointsUnstable, ArgumentError, SweepSpec, SystemParams, evaluate_point,
    figure_preset, run_sweep,
)
from magnonkerr.experiments import CSV_COLUMNS, FIGURES

TWO_PI = 2 * math.pi


def test_fig2_preset_matches_caption():
    spec = figure_preset("fig2")
    p = spec.base
    assert spec.variable == "Delta_m" and (spec.start, spec.stop, spec.count) == (-2.0, 0.0, 201)
    assert p.kappa_a == p.gamma_m == 0.4
    assert p.g_m == p.g_b == 0.5
    assert p.Delta_a_tilde == 1.0 and p.temperature == 0.010
    assert p.K == p.kappa_a
    assert p.gamma_b * p.omega_b_abs == pytest.approx(TWO_PI * 100)
    assert p.omega_a_abs == p.omega_m_abs == pytest.approx(TWO_PI * 10e9)
    assert p.omega_b_abs == pytest.approx(TWO_PI * 10e6)


@pytest.mark.parametrize("name", ["fig3", "fig4b"])
def test_kerr_presets(name):
    spec = figure_preset(name)
    assert spec.variable == "K" and spec.base.Delta_m == -1.0
    assert spec.start == 0.0 and spec.stop == pytest.approx(1.2 * 0.4)


def test_fig4a_preset():
    spec = figure_preset("fig4a")
    assert spec.variable == "Delta_m" and spec.base.K == 0.4


@pytest.mark.parametrize("name, Delta_m, K", [("fig4c", -0.8, 0.4), ("fig4d", -1.0, 0.8 * 0.4)])
def test_temperature_presets(name, Delta_m, K):
    spec = figure_preset(name)
    assert spec.variable == "T" and spec.resolved_spacing == "log"
    assert spec.base.Delta_m == Delta_m and spec.base.K == pytest.approx(K)
    assert spec.start > 0


def test_unknown_preset():
    with pytest.raises(ArgumentError):
        figure_preset("fig5")


@pytest.mark.parametrize("kwargs", [
    dict(variable="x", start=0, stop=1),
    dict(variable="K", start=1, stop=0),
    dict(variable="K", start=0, stop=1, count=1),
    dict(variable="T", start=0.0, stop=1.0),
    dict(variable="K", start=-0.1, stop=0.1),
    dict(variable="K", start=0, stop=1, directions="up"),
    dict(variable="K", start=0, stop=1, spacing="cubic"),
])
def test_spec_validation(kwargs):
    with pytest.raises(ArgumentError):
        SweepSpec(**kwargs)


def test_grid_spacing():
    lin = SweepSpec("Delta_m", -1.0, 1.0, count=5).grid()
    np.testing.assert_allclose(lin, [-1, -0.5, 0, 0.5, 1])
    log = SweepSpec("T", 1e-3, 1e-1, count=3).grid()
    np.testing.assert_allclose(log, [1e-3, 1e-2, 1e-1])


def test_csv_layout():
    spec = SweepSpec("Delta_m", -1.5, -0.5, count=5, base=SystemParams(K=0.4))
    text = run_sweep(spec).to_csv()
    assert "\r" not in text and text.endswith("\n")
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 6
    first = rows[1]
    assert first[0] == "Delta_m" and float(first[1]) == -1.5
    assert first[2] == first[3] == "1"
    assert first[1] == format(-1.5, ".17g")
    # 17 significant digits round-trip exactly
    res = run_sweep(spec)
    assert float(first[5]) == res.rows[0].backward.E_ab


def test_single_direction_columns():
    spec = SweepSpec("Delta_m", -1.5, -0.5, count=3, base=SystemParams(K=0.4), directions="positive")
    rows = list(csv.DictReader(io.StringIO(run_sweep(spec).to_csv())))
    assert all(r["E_ab_neg"] == "" and r["C_ab"] == "" and r["E_ab_pos"] != "" for r in rows)
    spec = SweepSpec("K", 0.0, 0.4, count=3, directions="negative")
    rows = list(csv.DictReader(io.StringIO(run_sweep(spec).to_csv())))
    assert all(r["E_ab_pos"] == "" and r["E_ab_neg"] != "" for r in rows)


def test_k_zero_direction_columns_identical():
    spec = SweepSpec("Delta_m", -2.0, 0.0, count=11, base=SystemParams(K=0.0))
    for r in csv.DictReader(io.StringIO(run_sweep(spec).to_csv())):
        for col in ("stable", "E_ab", "E_am", "E_mb", "Rmin"):
            assert r[f"{col}_pos"] == r[f"{col}_neg"]
        assert r["C_ab"] == r["C_am"] == r["C_mb"] == r["C_R"] == "0"


def test_unstable_points_serialized_empty():
    # blue-detuned cavity with strong optomechanical coupling is unstable for both directions
    base = SystemParams(Delta_a_tilde=-1.0, g_b=0.9, K=0.1)
    spec = SweepSpec("Delta_m", -1.0, 1.0, count=3, base=base)
    with pytest.raises(AllPointsUnstable):
        run_sweep(spec)


def test_partially_unstable_sweep():
    spec = SweepSpec("K", 0.0, 1.5, count=7, base=SystemParams(Delta_m=-1.0))
    result = run_sweep(spec)
    rows = list(csv.DictReader(io.StringIO(result.to_csv())))
    unstable = [r for r in rows if r["stable_pos"] == "0" or r["stable_neg"] == "0"]
    assert unstable, "expected some unstable points at large |K|"
    for r in unstable:
        assert r["C_ab"] == r["C_R"] == ""
        side = "pos" if r["stable_pos"] == "0" else "neg"
        assert r[f"E_ab_{side}"] == ""


def test_evaluate_point_matches_sweep_row():
    spec = figure_preset("fig2", count=21)
    result = run_sweep(spec)
    idx = 10
    assert result.rows[idx].value == -1.0
    point = evaluate_point(spec.params_at(result.rows[idx].value))
    assert point["forward"]["E_am"] == result.rows[idx].forward.E_am
    assert point["backward"]["R_min"] == result.rows[idx].backward.R_min
    assert point["C_mb"] == result.rows[idx].ratios["C_mb"]
    assert point["forward"]["R_min"] > 0
    assert point["forward"]["lyapunov_residual"] < 1e-10


def test_evaluate_point_decoupled():
    point = evaluate_point(SystemParams(g_m=0.0, g_b=0.0, K=0.0))
    for side in ("forward", "backward"):
        assert [point[side][k] for k in ("E_ab", "E_am", "E_mb", "R_min")] == [0.0] * 4
    assert [point[k] for k in ("C_ab", "C_am", "C_mb", "C_R")] == [0.0] * 4


def test_column_helper():
    res = run_sweep(SweepSpec("K", 0.0, 0.4, count=3, directions="positive"))
    assert np.all(np.isnan(res.column("E_ab_neg")))
    assert res.column("E_ab_pos").shape == (3,)


def test_worker_count_determinism():
    spec = figure_preset("fig2", count=41)
    assert run_sweep(spec, workers=1).to_csv() == run_sweep(spec, workers=3).to_csv()


def test_all_figures_run():
    for name in FIGURES:
        run_sweep(figure_preset(name, count=5))
