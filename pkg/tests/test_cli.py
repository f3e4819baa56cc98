import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from semiquat.cli import main, to_json
from semiquat.config import RunConfig, parse_grid
from semiquat.errors import ConfigError

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)
    return go


def rows_of(text):
    doc = json.loads(text)
    return doc["columns"], doc["rows"]


def test_frenet_table(run):
    res = run("frenet", "--grid", "-1:1:11")
    assert res.exit_code == 0
    cols, rows = rows_of(res.output)
    assert len(rows) == 11
    mid = dict(zip(cols, rows[5]))
    assert mid["s"] == 0.0
    assert mid["kappa"] == pytest.approx(-1.0, abs=1e-12)
    assert mid["k"] == pytest.approx(1.41421356, abs=1e-8)
    res = run("frenet", "--grid", "-1:1:2", "--format", "csv")
    table = list(csv.reader(io.StringIO(res.output)))
    assert table[0][0] == "s" and len(table) == 3


def test_frenet_csv_null_tangent(tmp_path, run):
    path = tmp_path / "null.csv"
    lines = ["s,q1,q2,q3,q4"] + [f"{s / 10},{s / 10},0,{s / 10},0" for s in range(-10, 11)]
    path.write_text("\n".join(lines) + "\n")
    res = CliRunner().invoke(main, ["frenet", "--curve", str(path), "--grid", "-0.5:0.5:3"])
    assert res.exit_code == 3
    assert "s=-0.5" in res.output and "null" in res.output


def test_involute_table(run):
    res = run("involute", "--grid", "-1:2:4")
    cols, rows = rows_of(res.output)
    first = dict(zip(cols, rows[1]))
    assert [first[f"phi{i}"] for i in range(1, 5)] == pytest.approx([1.0, 2 * SQRT2, 2.0, SQRT2], abs=1e-15)
    assert first["tangency"] <= 1e-8
    last = dict(zip(cols, rows[3]))
    assert last["s"] == 2.0 and last["singular"] == 1 and last["Tphi1"] is None


def test_verify_default_passes(run):
    res = CliRunner().invoke(main, ["verify"])
    assert res.exit_code == 0
    report = json.loads(res.output)
    for key in ("theorem_3_2_distance", "theorem_3_3_frames", "theorem_3_4_curvatures",
                "theorem_3_5", "corollary_3_1_w_curve"):
        assert report[key]["pass"]
    assert report["config_echo"]["tolerances"]["distance"] == 1e-8


def test_verify_negative_control():
    res = CliRunner().invoke(main, ["verify", "--metric", "paper24"])
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert report["theorem_3_2_distance"]["pass"]
    assert not report["example_3_1_apparatus"]["pass"]


def test_verify_is_deterministic(tmp_path):
    runner = CliRunner()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    runner.invoke(main, ["verify", "--out", str(a)])
    runner.invoke(main, ["verify", "--out", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["config_echo"]["output"]["path"] != db["config_echo"]["output"]["path"]
    da["config_echo"]["output"] = db["config_echo"]["output"] = None
    assert da == db
    assert a.read_text().replace("a.json", "b.json") == b.read_text()


@pytest.mark.parametrize("args", [
    ["verify", "--grid", "1:1:5"],
    ["verify", "--grid", "-1:1:1"],
    ["verify", "--grid", "nonsense"],
    ["frenet", "--curve", "spiral"],
    ["project", "--drop-axis", "5"],
    ["frenet", "--grid", "-5:5:3"],
])
def test_config_errors_exit_2(args):
    res = CliRunner().invoke(main, args)
    assert res.exit_code == 2
    assert "config error" in res.output


def test_config_file(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"c": 0.5, "sample_grid": [-0.5, 0.5, 3], "tolerances": {"distance": 1e-6}}))
    res = CliRunner().invoke(main, ["verify", "--config", str(cfg)])
    report = json.loads(res.output)
    assert report["config_echo"]["c"] == 0.5
    assert report["config_echo"]["tolerances"]["distance"] == 1e-6
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert CliRunner().invoke(main, ["verify", "--config", str(bad)]).exit_code == 2
    bad.write_text("{not json")
    assert CliRunner().invoke(main, ["verify", "--config", str(bad)]).exit_code == 2


def test_project_outputs(tmp_path, run):
    res = run("project", "--grid", "-1:1:5", "--out", str(tmp_path), "--format", "csv")
    assert res.exit_code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["alpha.csv", "beta.csv", "phi.csv", "xi.csv"]
    xi = list(csv.reader((tmp_path / "xi.csv").open()))
    assert xi[0] == ["s", "q1", "q2", "q3"]
    s, *vals = (float(x) for x in xi[2])
    assert vals == pytest.approx([math.cosh(s), SQRT2 * s, math.sinh(s)])
    alpha = list(csv.reader((tmp_path / "alpha.csv").open()))
    s, *vals = (float(x) for x in alpha[2])
    assert vals == pytest.approx([SQRT2 * math.sinh(s), s, -SQRT2 * math.cosh(s)], abs=1e-8)
    beta = list(csv.reader((tmp_path / "beta.csv").open()))
    _, s_star, *vals = (float(x) for x in beta[2])
    assert vals == pytest.approx([2.0, 2.0 - s_star, 2.0], abs=1e-8)


def test_example_summary(run):
    doc = json.loads(run("example").output)
    assert doc["curvatures"]["kappa"] == pytest.approx(-1.0)
    assert doc["alpha_curvatures"]["r"] == pytest.approx(-1.0, abs=1e-6)
    assert doc["g(t,t*)"] == pytest.approx(-1.0)


def test_to_json_formatting():
    text = to_json({"a": 0.1, "b": [1, float("nan")], "c": True, "d": None})
    assert json.loads(text) == {"a": 0.1, "b": [1, None], "c": True, "d": None}
    assert "0.10000000000000001" in text
    with pytest.raises(TypeError):
        to_json(object())


def test_run_config_validation():
    assert parse_grid("-1:1:3") == (-1.0, 1.0, 3)
    with pytest.raises(ConfigError):
        parse_grid("1:2")
    with pytest.raises(ConfigError):
        RunConfig(tolerances={"distance": -1.0})
    with pytest.raises(ConfigError):
        RunConfig(tolerances={"bogus": 1.0})
    with pytest.raises(ConfigError):
        RunConfig(output_format="xml")
    with pytest.raises(ConfigError):
        RunConfig(fd_step=0.0)
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"metric": {"ambient_signs": [1, 1, 1, 1]}})
    cfg = RunConfig(fd_step=1e-3)
    assert cfg.mode == "fd" and cfg.tolerance("apparatus") == 1e-4
    assert RunConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()
