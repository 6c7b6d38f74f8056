import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vibcavity.cli import main
from vibcavity.config import apply_overrides, canonical_json, parse_config, validate_config
from vibcavity.errors import IoError, ParseError, ValidationError
from vibcavity.scenarios import run_scenario
from vibcavity.table import ResultTable, format_table, read_table, write_table

TWO_PI = 2 * math.pi
MINIMAL = {"profile": {"kind": "sinusoidal", "L0": 1, "epsilon": 0.001, "Omega": 2}, "mode": 1,
           "numerics": {"t_end": 100, "tol": 1e-10, "sample_count": 1000}}


def resonant_config(**numerics):
    return {"profile": {"kind": "sinusoidal", "L0": TWO_PI, "epsilon": 1e-3 * TWO_PI,
                        "Omega": 2.0}, "numerics": numerics}


# -- parsing ---------------------------------------------------------------------------------


def test_minimal_config_defaults():
    cfg = parse_config(json.dumps(MINIMAL).encode())
    assert cfg.unruh.V_c == 1.0
    assert cfg.drive.gamma == 0.0 and cfg.drive.zeta == 0.0
    assert cfg.units == "internal"
    assert cfg.numerics.tol == 1e-10
    assert cfg.unit_system().c == 1.0
    assert cfg.mode_spec().omega_m0 == pytest.approx(TWO_PI)


def test_epsilon_not_below_length():
    bad = json.loads(json.dumps(MINIMAL))
    bad["profile"]["epsilon"] = 1.0
    with pytest.raises(ValidationError):
        parse_config(json.dumps(bad))


def test_unknown_key_is_named():
    bad = json.loads(json.dumps(MINIMAL))
    bad["profile"]["epsilonn"] = 0.1
    with pytest.raises(ParseError, match="epsilonn"):
        parse_config(json.dumps(bad))


@pytest.mark.parametrize("text", [b"{", b"\xff\xfe", b"[1, 2]", '{"profile": 1,}'])
def test_malformed_text(text):
    with pytest.raises(ParseError):
        parse_config(text)


def test_parse_error_has_position():
    with pytest.raises(ParseError, match="line 2"):
        parse_config('{\n  "mode": }')


@pytest.mark.parametrize("patch", [
    {"numerics": {"tol": 0}},
    {"numerics": {"sample_count": 1, "t_end": 1}},
    {"mode": 0},
    {"drive": {"gamma": -1}},
    {"constants": {"c": 1}},
])
def test_invariant_violations(patch):
    raw = json.loads(json.dumps(MINIMAL))
    for k, v in patch.items():
        raw[k] = {**raw.get(k, {}), **v} if isinstance(v, dict) and k in raw else v
    with pytest.raises(ValidationError):
        validate_config(raw)


def test_non_finite_rejected():
    with pytest.raises(ValidationError):
        parse_config('{"profile": {"kind": "constant", "L0": Infinity}}')


def test_profile_kinds():
    for prof in ({"kind": "constant", "L0": 2},
                 {"kind": "step", "L0": 1, "step_time": 0.5, "step_L2": 2},
                 {"kind": "piecewise_linear", "knots": [[0, 1], [1, 2]]}):
        assert parse_config(json.dumps({"profile": prof})).cavity().min_length() > 0
    with pytest.raises(ValidationError):
        parse_config('{"profile": {"kind": "step", "L0": 1}}')
    with pytest.raises(ValidationError):
        parse_config('{"profile": {"kind": "piecewise_linear", "knots": [[1, 1], [0, 2]]}}')


def test_overrides():
    raw = apply_overrides(MINIMAL, ["numerics.tol=1e-8", "drive.gamma=0.01", "units=si"])
    cfg = validate_config(raw)
    assert cfg.numerics.tol == 1e-8 and cfg.drive.gamma == 0.01 and cfg.units == "si"
    assert MINIMAL["numerics"]["tol"] == 1e-10
    with pytest.raises(ParseError):
        apply_overrides(MINIMAL, ["novalue"])
    with pytest.raises(ParseError):
        apply_overrides(MINIMAL, ["mode.x=1"])


@settings(max_examples=50, deadline=None)
@given(L0=st.floats(0.1, 10), frac=st.floats(0, 0.9), Om=st.floats(0.1, 5),
       tol=st.floats(1e-14, 1e-3), V_c=st.floats(1e-3, 1e3), m=st.integers(1, 9))
def test_canonical_round_trip(L0, frac, Om, tol, V_c, m):
    raw = {"profile": {"kind": "sinusoidal", "L0": L0, "epsilon": frac * L0, "Omega": Om},
           "mode": m, "unruh": {"V_c": V_c}, "numerics": {"tol": tol, "t_end": 1.0}}
    cfg = validate_config(raw)
    again = parse_config(cfg.canonical())
    assert again == cfg
    assert again.canonical() == cfg.canonical()
    assert again.digest() == cfg.digest()


def test_canonical_json_is_sorted():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


# -- tables ---------------------------------------------------------------------------------------


def test_empty_table(tmp_path):
    t = ResultTable(("t", "x"), np.empty((0, 2)), {"k": "v"})
    assert format_table(t) == "# k: v\r\nt,x\r\n"
    write_table(t, tmp_path / "e.csv")
    back = read_table(tmp_path / "e.csv")
    assert len(back) == 0 and back.columns == ("t", "x") and back.metadata == {"k": "v"}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=True, width=64), min_size=1,
                max_size=30))
def test_round_trip_exact(values):
    data = np.column_stack([np.arange(len(values), dtype=float), values])
    text = format_table(ResultTable(("t", "v"), data))
    import tempfile
    import os
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "r.csv")
        with open(path, "w", newline="") as fh:
            fh.write(text)
        back = read_table(path)
    np.testing.assert_array_equal(back.data, data)


def test_time_must_increase():
    with pytest.raises(ValueError):
        ResultTable(("t",), np.array([[0.0], [0.0]]))


def test_io_errors(tmp_path):
    with pytest.raises(IoError):
        write_table(ResultTable(("x",), [[1.0]]), tmp_path / "missing" / "x.csv")
    with pytest.raises(IoError):
        read_table(tmp_path / "nope.csv")


# -- scenarios ---------------------------------------------------------------------------------------


def test_simulate_constant_profile():
    cfg = validate_config({"profile": {"kind": "constant", "L0": 1}, "numerics": {"t_end": 5}})
    table = run_scenario(cfg, "simulate")
    assert np.all(table.column("abs_beta_sq") == 0)
    assert table.columns == ("t", "re_alpha", "im_alpha", "re_beta", "im_beta", "abs_beta_sq",
                             "invariant_drift")


def test_simulate_thousand_rows(tmp_path):
    table = run_scenario(parse_config(json.dumps(MINIMAL)), "simulate")
    write_table(table, tmp_path / "s.csv")
    back = read_table(tmp_path / "s.csv")
    assert len(back) == 1000
    assert np.all(np.diff(back.column("t")) > 0)
    np.testing.assert_array_equal(back.data, table.data)


def test_casimir_ratio_window():
    nu0 = 5e-4 * 0.99999975000001562
    times = list(np.linspace(0.1, 3, 20) / nu0)
    table = run_scenario(validate_config(resonant_config(times=times)), "casimir")
    ratio = table.column("N_ode") / table.column("N_ideal")
    assert np.all((ratio >= 0.95) & (ratio <= 1.05))
    assert table.columns == ("t", "N_ode", "N_ideal", "N_damped", "N_saturated")
    assert float(table.metadata["nu0"]) == pytest.approx(nu0, rel=1e-15)


def test_casimir_model_selection():
    raw = resonant_config(t_end=100.0, sample_count=5)
    raw["casimir"] = {"models": ["ideal"]}
    table = run_scenario(validate_config(raw), "casimir")
    assert table.columns == ("t", "N_ideal")


def test_scan_table():
    raw = resonant_config(t_end=200.0)
    raw["scan"] = {"Omega_grid": {"start": 1.9, "stop": 2.1, "count": 5}, "workers": 2}
    table = run_scenario(validate_config(raw), "scan")
    assert table.columns == ("Omega", "N_final")
    assert table.data[np.argmax(table.column("N_final")), 0] == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        run_scenario(validate_config(resonant_config(t_end=1.0)), "scan")


def test_unruh_table():
    raw = resonant_config()
    raw["unruh"] = {"a": 2 * math.pi / math.log(2), "omega_grid": {"values": [0.5, 1.0, 2.0]}}
    table = run_scenario(validate_config(raw), "unruh")
    assert table.columns == ("omega", "W_T", "W", "N")
    assert table.data[1, 1] == pytest.approx(1.5, rel=1e-14)
    assert table.data[1, 3] == pytest.approx(83.169153820895282, rel=1e-13)


def test_compare_threshold_row():
    eps_rel = 0.25  # L0 = 4 m epsilon
    L0 = TWO_PI
    x = 0.70341455687364763
    with pytest.warns(UserWarning):
        from vibcavity.casimir import DriveParams, resonant_rate
        nu0 = resonant_rate(DriveParams.resonant(eps_rel, 1.0))
    raw = {"profile": {"kind": "sinusoidal", "L0": L0, "epsilon": eps_rel * L0, "Omega": 2.0},
           "numerics": {"times": [0.0, x / nu0, 2 * x / nu0]}}
    table = run_scenario(validate_config(raw), "compare")
    assert table.column("R")[1] == pytest.approx(1.0, abs=1e-9)
    assert table.column("N_c")[1] == pytest.approx(1 / (math.e - 1), rel=1e-12)
    assert math.isinf(table.column("y_approx")[0]) and table.column("R")[0] == 0
    assert table.column("a0")[1] == pytest.approx(4 * eps_rel * L0, rel=1e-15)


def test_unknown_command():
    with pytest.raises(ValueError):
        run_scenario(parse_config(json.dumps(MINIMAL)), "plot")


# -- command line ----------------------------------------------------------------------------------


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(MINIMAL))
    return path


def test_cli_success_and_determinism(tmp_path, config_file):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", str(config_file), "--out", str(a)]) == 0
    assert main(["simulate", "--config", str(config_file), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" in a.read_bytes()


def test_cli_exit_codes(tmp_path, config_file):
    out = str(tmp_path / "o.csv")
    bad = tmp_path / "bad.json"
    bad.write_text('{"profile": {"kind": "constant", "L0": 1}, "epsilonn": 1}')
    assert main(["simulate", "--config", str(bad), "--out", out]) == 2
    assert main(["simulate", "--config", str(config_file), "--out", out,
                 "--override", "numerics.tol=-1"]) == 2
    assert main(["simulate", "--config", str(tmp_path / "none.json"), "--out", out]) == 4
    assert main(["simulate", "--config", str(config_file),
                 "--out", str(tmp_path / "no" / "dir.csv")]) == 4
    assert main(["simulate", "--config", str(config_file), "--out", out,
                 "--override", "numerics.tol=1e-300"]) == 3


def test_cli_entry_point(tmp_path, config_file):
    out = tmp_path / "u.csv"
    proc = subprocess.run([sys.executable, "-m", "vibcavity.cli", "simulate", "--config",
                           str(config_file), "--out", str(out),
                           "--override", "numerics.sample_count=3"],
                          capture_output=True, text=True, env={"VIBCAVITY_LOG": "info"})
    assert proc.returncode == 0, proc.stderr
    assert "wrote 3 rows" in proc.stderr
    assert len(read_table(out)) == 3
