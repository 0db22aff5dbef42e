import csv
import hashlib
import json
import math

import numpy as np
import pytest

from dimer_eet import cli, figures
from dimer_eet.exceptions import ParameterError

PI = math.pi


def read_csv(path):
    lines = path.read_text().splitlines()
    meta = {}
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.DictReader(body))
    return meta, body[0].split(","), rows


def digest_dir(path):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(path.iterdir())}


# ------------------------------------------------------------ parsing


@pytest.mark.parametrize("text, value", [
    ("0.3pi", 0.3 * PI), ("pi/2", PI / 2), ("-pi", -PI), ("1.5", 1.5), ("2*pi", 2 * PI),
])
def test_parse_number(text, value):
    assert cli.parse_number(text) == pytest.approx(value, rel=1e-15)


def test_parse_number_rejects_garbage():
    with pytest.raises(cli.ConfigError):
        cli.parse_number("pi*2")
    with pytest.raises(cli.ConfigError):
        cli.parse_number("abc")


def test_parse_axis():
    name, vals = cli.parse_axis("theta=0.1pi:0.9pi:5")
    assert name == "theta" and len(vals) == 5
    assert vals[-1] == pytest.approx(0.9 * PI)
    assert cli.parse_axis("dt-bath=0,50,100") == ("dt_bath", [0.0, 50.0, 100.0])
    for bad in ("omega=1,2", "theta", "theta=1:2", "theta=", "theta=1:2:0"):
        with pytest.raises(cli.ConfigError):
            cli.parse_axis(bad)


# ------------------------------------------------------------ figures


@pytest.mark.parametrize("fig_id", figures.FIGURE_IDS)
def test_figures_deterministic(tmp_path, fig_id):
    a = cli.run_figure(fig_id, tmp_path / "a")
    b = cli.run_figure(fig_id, tmp_path / "b")
    assert [p.name for p in a] == [p.name for p in b]
    assert digest_dir(tmp_path / "a") == digest_dir(tmp_path / "b")


def test_unknown_figure():
    with pytest.raises(ParameterError):
        figures.figure_curves(12)
    assert cli.main(["figure", "--id", "1"]) == cli.EXIT_CONFIG


def test_figure2_low_temperature_curve(tmp_path):
    paths = cli.run_figure(2, tmp_path)
    meta, header, rows = read_csv(next(p for p in paths if "Tm0.1" in p.name))
    assert tuple(header) == figures.TIME_COLUMNS + ("figure_value",)
    p = np.array([float(r["P"]) for r in rows])
    assert abs(p[0]) < 1e-15
    assert abs(p[-1] - 0.5) < 1e-2
    # damped oscillation: P overshoots 1/2 and the swings shrink
    assert p.max() > 0.9
    assert np.abs(p[-50:] - 0.5).max() < np.abs(p[:50] - 0.5).max()
    assert meta["T_m"] == "0.1"


def test_figure9_resonant_long_time(tmp_path):
    curve = next(c for c in figures.figure_curves(9) if c.label == "theta0.5pi")
    from dimer_eet.analytic import long_time
    value = curve.value(long_time(curve.params), curve.params)
    assert abs(value - 1.0) < 1e-2


def test_figure5_note_in_metadata(tmp_path):
    paths = cli.run_figure(5, tmp_path)
    meta, header, _ = read_csv(next(p for p in paths if "rad" in p.name))
    assert header == ["T_m", "P_ss", "C_ss", "figure_value"]
    assert "0.5 rad" in meta["note"]


def test_figure_json_mirrors_csv(tmp_path):
    csv_path = cli.run_figure(7, tmp_path, fmt="csv")[0]
    json_path = cli.run_figure(7, tmp_path, fmt="json")[0]
    _, header, rows = read_csv(csv_path)
    doc = json.loads(json_path.read_text())
    assert doc["columns"] == header
    assert len(doc["records"]) == len(rows)
    assert doc["records"][17]["C"] == float(rows[17]["C"])


# ------------------------------------------------------------- evolve


def test_evolve_csv_schema(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = cli.main(["evolve", "--theta", "0.3pi", "--tm", "10", "--points", "101",
                     "--out", str(out)])
    assert code == cli.EXIT_OK
    meta, header, rows = read_csv(out)
    assert header == list(figures.TIME_COLUMNS)
    t = [float(r["t"]) for r in rows]
    assert t == sorted(t) and len(t) == 101
    assert len(meta["config_sha256"]) == 64


def test_evolve_stdout_json(capsys):
    assert cli.main(["evolve", "--delta-omega", "-4", "--points", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["columns"] == list(figures.TIME_COLUMNS)
    assert [r["t"] for r in doc["records"]] == [0.0, 5.0, 10.0]


def test_config_hash_changes_with_settings(tmp_path):
    a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
    cli.main(["evolve", "--theta", "1", "--points", "5", "--out", str(a)])
    cli.main(["evolve", "--theta", "1", "--points", "5", "--out", str(b)])
    cli.main(["evolve", "--theta", "1.1", "--points", "5", "--out", str(c)])
    ha, hb, hc = (read_csv(p)[0]["config_sha256"] for p in (a, b, c))
    assert ha == hb != hc
    assert a.read_bytes() == b.read_bytes()


def test_config_file_and_flag_override(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# example\ntheta = 0.3pi\ntm = 100\nxi = 5\n")
    assert cli.main(["steady", "--config", str(conf), "--format", "json"]) == 0
    rec = json.loads(capsys.readouterr().out)["records"][0]
    assert rec["T_m"] == 100.0
    assert rec["theta"] == pytest.approx(0.3 * PI)
    assert cli.main(["steady", "--config", str(conf), "--tm", "0", "--format", "json"]) == 0
    rec = json.loads(capsys.readouterr().out)["records"][0]
    assert rec["P_ss"] == pytest.approx(math.cos(0.15 * PI) ** 2, abs=1e-15)
    assert "P_ss_high_T" not in rec


def test_config_errors(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("nonsense = 1\n")
    assert cli.main(["steady", "--config", str(conf), "--theta", "1"]) == cli.EXIT_CONFIG
    assert cli.main(["steady"]) == cli.EXIT_CONFIG
    assert cli.main(["evolve", "--theta", "1", "--delta-omega", "1"]) == cli.EXIT_CONFIG
    assert cli.main(["evolve", "--theta", "1", "--points", "1"]) == cli.EXIT_CONFIG
    assert cli.main(["evolve", "--theta", "1", "--t-max", "0"]) == cli.EXIT_CONFIG
    assert cli.main(["evolve", "--theta", "4"]) == cli.EXIT_CONFIG
    assert cli.main(["steady", "--config", str(tmp_path / "missing")]) == cli.EXIT_CONFIG


# ------------------------------------------------------------- validate


def test_validate_default_grid(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["validate", "--tol", "1e-6", "--format", "json", "--out", str(out)]) == cli.EXIT_OK
    assert capsys.readouterr().out.startswith("PASS")
    doc = json.loads(out.read_text())
    assert doc["status"] == "PASS"


def test_validate_zero_tolerance():
    assert cli.main(["validate", "--tol", "0"]) == cli.EXIT_CONFIG
    with pytest.raises(cli.ConfigError):
        cli.run_validate(0.0)


def test_validate_failure_names_worst(capsys):
    assert cli.main(["validate", "--tol", "1e-15", "--points", "21"]) == cli.EXIT_VALIDATION
    assert capsys.readouterr().out.startswith("FAIL: worst")


def test_validate_with_zero_temperature():
    code, report = cli.run_validate(1e-6, include_zero=True)
    assert code == cli.EXIT_OK, report.deviations


# -------------------------------------------------------------- sweep


def sweep(*axes, **kw):
    cfg = cli.RunConfig("sweep", axes=[cli.parse_axis(a) for a in axes], **kw)
    cfg.validate()
    return cli.run_sweep(cfg)


def test_sweep_theta_monotone_at_low_temperature():
    rows = sweep("theta=0.1pi:0.9pi:81", t_mean=0.1)
    p = np.array([r["P_ss"] for r in rows])
    assert len(p) == 81
    assert np.all(np.diff(p) < 0)


def test_sweep_temperature_difference_negligible():
    rows = sweep("dt_bath=0,50,100", theta=0.3 * PI, t_mean=100.0)
    p = [r["P_ss"] for r in rows]
    assert max(p) - min(p) < 1e-3


def test_sweep_cartesian_and_series():
    rows = sweep("theta=0.2pi,0.4pi", "tm=0,10", series=True, n_points=4)
    assert len(rows) == 2 * 2 * 4
    assert {(r["theta"], r["tm"]) for r in rows} == {
        (0.2 * PI, 0.0), (0.2 * PI, 10.0), (0.4 * PI, 0.0), (0.4 * PI, 10.0)}


def test_sweep_errors():
    with pytest.raises(cli.ConfigError):
        cli.run_sweep(cli.RunConfig("sweep", axes=[]))
    assert cli.main(["sweep"]) == cli.EXIT_CONFIG
    assert cli.main(["sweep", "--axis", "theta=1,2", "--axis", "theta=3"]) == cli.EXIT_CONFIG
    assert cli.main(["sweep", "--axis", "tm=-5,1", "--theta", "1"]) == cli.EXIT_CONFIG


def test_sweep_cli_output(capsys):
    assert cli.main(["sweep", "--axis", "tm=0,100", "--theta", "pi/2"]) == 0
    out = capsys.readouterr().out
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert body[0] == "tm,P_ss,C_ss"
    assert len(body) == 3
