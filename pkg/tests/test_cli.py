"""Configuration round-trip, sweep machinery, and the command-line surface."""

import json
import math

import numpy as np
import pytest

import neqplates as nq
from neqplates.cli import (
    ConfigError,
    NoCrossingError,
    NoMinimumError,
    SweepSpec,
    find_heat_minimum,
    find_heat_zero,
    kelvin_to_natural,
    load_scenario,
    main,
    run_sweep,
    serialize_scenario,
    write_rows,
)
from neqplates.quadrature import QuadratureConfig


CONFIG = """\
[material.left]
omega_pl = 0.05
omega_0 = 0.1
gamma = 0.02

[material.right]
omega_pl = 0.08
omega_0 = 0.15
gamma = 0.03

[geometry]
a = 100.0
d_left = 500.0
d_right = 800.0

[temperatures]
t_phi_left = 600
t_phi_right = 300
t_b_left = 300
t_b_right = 600

[quadrature]
rel_tol = 1e-7
"""


@pytest.fixture()
def config_file(tmp_path):
    p = tmp_path / "scenario.ini"
    p.write_text(CONFIG)
    return str(p)


def test_kelvin_conversion():
    assert kelvin_to_natural(300.0) == pytest.approx(300.0 / 2.2898e6, rel=1e-12)
    assert kelvin_to_natural(0.0) == 0.0
    with pytest.raises(ValueError):
        kelvin_to_natural(-1.0)


def test_load_scenario(config_file):
    sc, quad = load_scenario(config_file)
    assert sc.mat_L.omega_pl == 0.05
    assert sc.geom.d_R == 800.0
    assert sc.temps.T_phi_L == pytest.approx(kelvin_to_natural(600.0))
    assert quad.rel_tol == 1e-7


def test_scenario_round_trip(tmp_path, config_file):
    sc, quad = load_scenario(config_file)
    p = tmp_path / "round.ini"
    p.write_text(serialize_scenario(sc, quad))
    sc2, quad2 = load_scenario(str(p))
    assert sc2 == sc
    assert quad2 == quad


def test_missing_section_is_config_error(tmp_path):
    p = tmp_path / "broken.ini"
    p.write_text("[material.left]\nomega_pl = 0.1\n")
    with pytest.raises(ConfigError):
        load_scenario(str(p))


def test_sweep_spec_validation():
    with pytest.raises(ConfigError):
        SweepSpec("bogus", 1.0, 10.0, 5, "log")
    with pytest.raises(ConfigError):
        SweepSpec("thickness_d", 10.0, 1.0, 5, "log")
    with pytest.raises(ConfigError):
        SweepSpec("thickness_d", 0.0, 1.0, 5, "log")
    with pytest.raises(ConfigError):
        SweepSpec("gap_a", 1.0, math.inf, 5, "log")
    vals = SweepSpec("thickness_d", 1.0, 100.0, 3, "log").values()
    assert vals == pytest.approx([1.0, 10.0, 100.0])
    vals = SweepSpec("thickness_d", 1.0, math.inf, 4, "log").values()
    assert math.isinf(vals[-1]) and len(vals) == 4


def test_sweep_rows_match_scalar_api(config_file):
    sweep = SweepSpec("thickness_d", 400.0, 500.0, 2, "linear")
    rows = run_sweep(config_file, sweep, quad=QuadratureConfig())
    sc, _ = load_scenario(config_file)
    for row, d in zip(rows, (400.0, 500.0)):
        ref = nq.Scenario(
            nq.Geometry(sc.geom.a, d, d), sc.mat_L, sc.mat_R, sc.temps
        )
        f = nq.casimir_force(ref)
        h = nq.heat_flux(ref)
        assert row.converged
        assert row.force_total == pytest.approx(f.total, rel=1e-12)
        assert row.q_total == pytest.approx(h.total, rel=1e-12)
        assert row.q_normalized == pytest.approx(
            h.total / nq.stefan_flux(sc.temps.T_phi_L, sc.temps.T_phi_R), rel=1e-12
        )


def test_sweep_deterministic_and_parallel_stable(config_file):
    sweep = SweepSpec("thickness_d", 10.0, 1000.0, 3, "log")
    r1 = run_sweep(config_file, sweep, quad=QuadratureConfig())
    r2 = run_sweep(config_file, sweep, quad=QuadratureConfig(), workers=2)
    assert r1 == r2


def test_sweep_infinite_row_uses_limits(config_file):
    sweep = SweepSpec("thickness_d", 1.0, math.inf, 3, "log")
    rows = run_sweep(config_file, sweep, observables=("heat",),
                     quad=QuadratureConfig())
    sc, _ = load_scenario(config_file)
    qinf = nq.landauer_heat_halfspace(
        sc.geom.a, sc.mat_L, sc.mat_R, sc.temps.T_B_L, sc.temps.T_B_R
    )
    assert math.isinf(rows[-1].swept_value)
    assert rows[-1].q_total == pytest.approx(qinf, rel=1e-10)


def test_write_rows_csv_and_records(tmp_path, config_file):
    sweep = SweepSpec("thickness_d", 400.0, 500.0, 2, "linear")
    rows = run_sweep(config_file, sweep, quad=QuadratureConfig())
    sc, quad = load_scenario(config_file)

    csv_path = tmp_path / "out.csv"
    write_rows(rows, sc, quad, sweep, str(csv_path), "csv")
    lines = csv_path.read_text().splitlines()
    header = [ln for ln in lines if not ln.startswith("#")][0]
    assert header.split(",")[0] == "swept_value"
    data = [ln for ln in lines if not ln.startswith("#")][1:]
    assert len(data) == 2
    assert float(data[0].split(",")[0]) == 400.0

    rec_path = tmp_path / "out.jsonl"
    write_rows(rows, sc, quad, sweep, str(rec_path), "records")
    recs = [json.loads(ln) for ln in rec_path.read_text().splitlines()]
    assert recs[1]["swept_value"] == 500.0


def test_find_heat_minimum_requires_interior(config_file):
    # equal temperatures: Q identically zero, no interior minimum
    sc, _ = load_scenario(config_file)
    T = kelvin_to_natural(300.0)
    sc = nq.Scenario(sc.geom, sc.mat_L, sc.mat_R, nq.Temperatures(T, T, T, T))
    with pytest.raises(NoMinimumError):
        find_heat_minimum(sc, (1.0, 1e4), grid_points=7)


def test_find_heat_zero_reports_no_crossing(config_file):
    sc, _ = load_scenario(config_file)
    T3, T6 = kelvin_to_natural(300.0), kelvin_to_natural(600.0)
    one_way = nq.Scenario(sc.geom, sc.mat_L, sc.mat_R,
                          nq.Temperatures(T6, T3, T6, T3))
    with pytest.raises(NoCrossingError):
        find_heat_zero(one_way, (10.0, 1e4))
    eq = nq.Scenario(sc.geom, sc.mat_L, sc.mat_R, nq.Temperatures(T3, T3, T3, T3))
    with pytest.raises(NoCrossingError):
        find_heat_zero(eq, (10.0, 1e4))


def test_main_force_and_heat(config_file, tmp_path, capsys):
    out = tmp_path / "force.txt"
    rc = main(["force", "--config", config_file, "--out", str(out),
               "--rel-tol", "1e-6"])
    assert rc in (0, None)
    text = out.read_text()
    assert "force_total" in text and "bath_term" in text

    rc = main(["heat", "--config", config_file])
    assert rc in (0, None)
    assert "q_total" in capsys.readouterr().out


def test_main_sweep_csv(config_file, tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", "--config", config_file, "--param", "thickness_d",
               "--min", "400", "--max", "500", "--points", "2",
               "--spacing", "linear", "--out", str(out), "--rel-tol", "1e-6"])
    assert rc in (0, None)
    assert out.exists()
    data = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert len(data) == 3  # header + 2 rows


def test_main_config_error_exit_code(tmp_path):
    p = tmp_path / "broken.ini"
    p.write_text("[geometry]\na = 1\n")
    assert main(["force", "--config", str(p)]) == 2
