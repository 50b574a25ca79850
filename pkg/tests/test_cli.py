"""CLI contract: JSON outputs, sweep artifacts, exit codes."""

import json
import os

import pytest
from click.testing import CliRunner

from sumfree.cli import main, render_sweep_svg


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, env=None):
    return runner.invoke(main, list(args), env=env, catch_exceptions=False)


def test_classify_json(runner):
    res = invoke(runner, "classify", "--group", "Z10")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["type"] == "I(2)"
    assert payload["mu"] == "1/2"
    assert payload["extremal_size"] == 5


def test_classify_bad_literal(runner):
    res = invoke(runner, "classify", "--group", "Q8")
    assert res.exit_code != 0


def test_mu_type_iii(runner):
    res = invoke(runner, "mu", "--group", "Z7")
    payload = json.loads(res.output)
    assert payload["mu"] == "2/7"
    assert payload["extremal_size"] == 2


def test_sf_enum_type1(runner):
    res = invoke(runner, "sf-enum", "--group", "Z10")
    payload = json.loads(res.output)
    assert payload["count"] == 1
    assert payload["sets"] == [[1, 3, 5, 7, 9]]


def test_sf_enum_type2_small_vs_large(runner):
    res = invoke(runner, "sf-enum", "--group", "Z9")
    assert res.exit_code == 0
    assert json.loads(res.output)["count"] >= 1
    res = invoke(runner, "sf-enum", "--group", "Z63")
    assert res.exit_code != 0


def test_solve_full_group(runner):
    res = invoke(runner, "solve", "--group", "Z10", "--enumerate")
    payload = json.loads(res.output)
    assert payload["max_size"] == 5
    assert payload["optima"] == [[1, 3, 5, 7, 9]]


def test_solve_subset(runner):
    res = invoke(runner, "solve", "--group", "Z12", "--set", "1,2,3,11")
    payload = json.loads(res.output)
    assert payload["max_size"] == 3
    assert payload["input_size"] == 4


def test_good_true_false_exit_codes(runner):
    res = invoke(runner, "good", "--group", "Z10", "--set", "1,3")
    assert res.exit_code == 0
    assert json.loads(res.output)["decision"] == "true"
    res = invoke(runner, "good", "--group", "Z10", "--set", "1,3,6")
    assert json.loads(res.output)["decision"] == "false"
    res = invoke(runner, "good", "--group", "Z9", "--set", "1,2")
    assert res.exit_code != 0  # not type I


def test_bounds_output(runner):
    res = invoke(runner, "bounds", "--group", "Z20", "--p", "0.3")
    payload = json.loads(res.output)
    assert payload["fkg_lower"] <= payload["exact"] + 1e-12
    assert payload["exact"] <= payload["janson_upper"] + 1e-12


def sweep_config(tmp_path, **overrides):
    cfg = {
        "kind": "sharp",
        "groups": ["Z40"],
        "c_grid": [0.2, 2.0],
        "trials": 4,
        "seed": 5,
    }
    cfg.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_sweep_writes_csv_summary_svg(runner, tmp_path):
    cfg = sweep_config(tmp_path)
    out = str(tmp_path / "run.csv")
    svg = str(tmp_path / "run.svg")
    res = invoke(runner, "sweep", "--config", cfg, "--out", out, "--svg", svg, "--threads", "1")
    assert res.exit_code == 0, res.output
    assert os.path.exists(out)
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["indeterminate_rate"] <= 0.01
    text = (tmp_path / "run.svg").read_text()
    assert text.startswith("<svg") and "polyline" in text


def test_sweep_stdout_and_thread_determinism(runner, tmp_path):
    cfg = sweep_config(tmp_path)
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    invoke(runner, "sweep", "--config", cfg, "--out", out1, "--threads", "1")
    invoke(runner, "sweep", "--config", cfg, "--out", out2, "--threads", "3")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_seed_env_overrides_flag(runner, tmp_path):
    cfg = sweep_config(tmp_path)
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    out3 = str(tmp_path / "c.csv")
    invoke(runner, "sweep", "--config", cfg, "--out", out1, "--seed", "99", "--threads", "1")
    invoke(
        runner, "sweep", "--config", cfg, "--out", out2, "--seed", "1234", "--threads", "1",
        env={"SUMFREE_SEED": "99"},
    )
    invoke(runner, "sweep", "--config", cfg, "--out", out3, "--seed", "1234", "--threads", "1")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() != (tmp_path / "c.csv").read_bytes()


def test_sweep_bad_config(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "nope"}')
    res = invoke(runner, "sweep", "--config", str(path))
    assert res.exit_code != 0


def test_plot_from_csv(runner, tmp_path):
    cfg = sweep_config(tmp_path)
    out = str(tmp_path / "run.csv")
    invoke(runner, "sweep", "--config", cfg, "--out", out, "--threads", "1")
    svg = str(tmp_path / "replot.svg")
    res = invoke(runner, "plot", "--out", out, "--svg", svg)
    assert res.exit_code == 0
    assert (tmp_path / "replot.svg").read_text().startswith("<svg")


def test_render_svg_empty():
    assert "no data" in render_sweep_svg([])


def test_verify_bounds_and_claims(runner):
    for scope in ("bounds", "claims"):
        res = invoke(runner, "verify", scope)
        assert res.exit_code == 0, res.output
        payload = json.loads(res.output)
        assert payload["failed"] == 0


def test_verify_bad_scope(runner):
    res = invoke(runner, "verify", "everything")
    assert res.exit_code != 0
