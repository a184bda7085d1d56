import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mobcoop.cli import main
from mobcoop.exceptions import DomainError, EmptyResultError
from mobcoop.io import NORM_FIELDS, TAX_FIELDS, THRESHOLD_FIELDS, format_value, from_csv, render_chart, to_csv, to_json
from mobcoop.sweeps import SweepSpec, preset_specs, run_sweep
from mobcoop.econ import utility

SVG = "{http://www.w3.org/2000/svg}"


def test_format_value():
    assert format_value(True) == "1" and format_value(False) == "0"
    assert format_value(None) == ""
    assert format_value(3) == "3"
    assert format_value(0.1 + 0.2) == "0.3"
    assert format_value(1 / 3) == "0.333333333333"
    assert format_value(np.float64(2.5)) == "2.5"
    assert format_value(float("nan")) == "nan"


@given(st.floats(-1e9, 1e9, allow_nan=False))
def test_round_trip_within_tolerance(x):
    text = format_value(x)
    back = from_csv(to_csv([{"x": x}], ["x"]))[0]["x"]
    assert abs(back - x) <= 1e-12
    twelve = format(x, ".12g")
    if abs(float(twelve) - x) <= 1e-12:
        assert text == twelve


def test_twelve_digits_when_they_suffice():
    assert format_value(0.8875045516543131) == "0.887504551654"
    assert format_value(1.0408163265306123) == "1.04081632653"
    assert format_value(2.9510204081632653) == "2.951020408163"
    assert format_value(123.456) == "123.456"


def test_csv_round_trip_structure():
    recs = [dict(n=3, rho=1.0, alpha=0.5, alpha0=0.5, alpha1=0.5, beta=0.0, m=0.25,
                 delta_min=0.8875045516543, sustainable=True),
            dict(n=3, rho=1.0, alpha=0.5, alpha0=0.5, alpha1=0.5, beta=0.0, m=0.0,
                 delta_min=1.0, sustainable=False)]
    text = to_csv(recs, THRESHOLD_FIELDS)
    assert text.splitlines()[0] == "n,rho,alpha,alpha0,alpha1,beta,m,delta_min,sustainable"
    back = from_csv(text)
    assert back[0]["sustainable"] == 1 and back[1]["sustainable"] == 0
    assert abs(back[0]["delta_min"] - recs[0]["delta_min"]) <= 1e-12
    assert from_csv("") == []


def test_json_is_deterministic_and_uses_flags():
    recs = [dict(a=0.1 + 0.2, b=True, c=None, d=float("nan"))]
    text = to_json(recs, ["a", "b", "c", "d"])
    assert json.loads(text) == [{"a": 0.3, "b": 1, "c": None, "d": None}]
    assert text == to_json(recs, ["a", "b", "c", "d"])


def _records(groups, points):
    return [dict(g=g, x=float(i), y=math.sin(i + g)) for g in range(groups) for i in range(points)]


def test_chart_structure_and_determinism():
    svg = render_chart(_records(2, 10), "x", "y", "g", title="demo")
    root = ET.fromstring(svg.split("?>", 1)[1])
    assert root.tag == SVG + "svg" and root.get("version") == "1.1"
    assert len(root.findall(SVG + "polyline")) == 2
    assert svg == render_chart(_records(2, 10), "x", "y", "g", title="demo")
    texts = [t.text for t in root.findall(SVG + "text")]
    assert "g=0" in texts and "g=1" in texts


def test_chart_single_points_get_markers():
    svg = render_chart(_records(3, 1), "x", "y", "g")
    root = ET.fromstring(svg.split("?>", 1)[1])
    assert len(root.findall(SVG + "polyline")) == 3
    assert len(root.findall(SVG + "circle")) == 3


def test_chart_errors():
    with pytest.raises(EmptyResultError):
        render_chart([], "x", "y")
    with pytest.raises(EmptyResultError):
        render_chart([dict(x=1.0, y=float("nan"))], "x", "y")
    with pytest.raises(KeyError):
        render_chart([dict(x=1.0)], "x", "y")


@pytest.mark.parametrize("kw", [dict(points=1), dict(lo=1.0, hi=0.5), dict(param="rho"),
                                dict(kind="norm", param="beta"), dict(fmt="xml"), dict(kind="bogus")])
def test_sweep_spec_validation(kw):
    args = dict(param="m", lo=0.1, hi=1.0, points=3)
    args.update(kw)
    with pytest.raises(DomainError):
        SweepSpec(**args)


def test_sweep_curves_and_order():
    sp = SweepSpec("m", 0.0, 1.0, 3, fixed=dict(alpha=[0.5, 1.0], beta=[0.0, 1.0], n=3))
    tasks = sp.tasks()
    assert len(tasks) == 12
    assert [(t["alpha"], t["beta"], t["m"]) for t in tasks[:4]] == [
        (0.5, 0.0, 0.0), (0.5, 0.0, 0.5), (0.5, 0.0, 1.0), (0.5, 1.0, 0.0)]
    recs = run_sweep(sp)
    assert [r["m"] for r in recs[:3]] == [0.0, 0.5, 1.0]
    assert sp.fields() == THRESHOLD_FIELDS
    assert SweepSpec("alpha", 0.1, 1, 2, kind="norm", smooth=True).fields()[-1] == "beta_star_smoothed"
    assert SweepSpec("alpha", 0.1, 1, 2, kind="tax").fields() == TAX_FIELDS
    assert SweepSpec("alpha", 0.1, 1, 2, kind="norm").fields() == NORM_FIELDS


def test_sweep_parallel_matches_serial():
    sp = SweepSpec("alpha1", 0.6, 3.0, 8, fixed=dict(n=5, alpha=0.5, beta=4.0, m=[0.2, 0.8]))
    assert to_csv(run_sweep(sp, 1), sp.fields()) == to_csv(run_sweep(sp, 3), sp.fields())


def test_presets_exist():
    for name in ("fig2", "fig2-beta0", "fig2-beta1", "fig3", "fig-norm", "fig4"):
        assert preset_specs(name)
    assert len(preset_specs("fig2")) == 2
    with pytest.raises(DomainError):
        preset_specs("fig9")


# command line


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(out):
    lines = out.strip().splitlines()
    head = lines[0].split()
    return [dict(zip(head, map(float, ln.split()))) for ln in lines[1:]]


def test_cli_values(capsys):
    code, out, _ = run(capsys, "values", "--n", "2", "--rho", "1", "--alpha", "1", "--m", "1",
                       "--delta", "0.5", "--beta", "0")
    assert code == 0
    rows = table(out)
    assert rows[0]["v_aut"] == pytest.approx(-1.126524, abs=1e-5)
    code, out, _ = run(capsys, "values", "--n", "3", "--alpha", "0", "--beta", "1.5", "--delta", "0.7")
    rows = table(out)
    assert all(r["v_coop"] == r["v_aut"] for r in rows)
    code, out, _ = run(capsys, "values", "--n", "3", "--alpha", "1", "--m", "0", "--delta", "0.6",
                       "--rho", "2", "--json")
    rows = json.loads(out)
    w = np.exp([3.0, 2.0, 1.0]) / np.exp([3.0, 2.0, 1.0]).sum()
    assert np.allclose([r["v_aut"] for r in rows], utility(2.0, w) / 0.4, atol=1e-10)


def test_cli_argument_errors_name_the_flag(capsys):
    code, _, err = run(capsys, "values", "--m", "1.5")
    assert code == 2 and "--m" in err
    code, _, err = run(capsys, "threshold", "--alpha", "-1")
    assert code == 2 and "--alpha" in err
    code, _, err = run(capsys, "values", "--delta", "1.0")
    assert code == 2 and "--delta" in err
    code, _, err = run(capsys, "values", "--bogus", "1")
    assert code == 2
    code, _, err = run(capsys, "sweep", "--param", "m", "--lo", "1", "--hi", "0.5")
    assert code == 2 and "--lo" in err
    code, _, err = run(capsys, "sweep", "--param", "rho", "--lo", "0", "--hi", "1")
    assert code == 2 and "--param" in err


def test_cli_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--n", "2", "--alpha", "1", "--m", "0.5", "--beta", "0")
    assert code == 0
    rec = from_csv(out)[0]
    assert rec["delta_min"] == pytest.approx(0.88752, abs=1e-4) and rec["sustainable"] == 1
    code, out, _ = run(capsys, "threshold", "--m", "0")
    assert from_csv(out)[0]["sustainable"] == 0
    code, out, _ = run(capsys, "threshold", "--n", "5", "--alpha0", "0.5", "--alpha1", "2", "--beta", "4",
                       "--format", "json")
    rec = json.loads(out)[0]
    assert rec["alpha0"] == 0.5 and rec["alpha1"] == 2.0


def test_cli_threshold_sweep_is_monotone_and_deterministic(capsys, tmp_path):
    args = ["sweep", "--param", "m", "--lo", "0.05", "--hi", "1", "--points", "20",
            "--n", "3", "--rho", "1", "--beta", "0", "--alpha", "0.5", "1", "2"]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "--out", str(p1))[0] == 0
    assert run(capsys, *args, "--out", str(p2), "--workers", "2")[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    recs = from_csv(p1.read_text())
    assert p1.read_text().splitlines()[0] == ",".join(THRESHOLD_FIELDS)
    for a in (0.5, 1, 2):
        d = [r["delta_min"] for r in recs if r["alpha"] == a]
        assert len(d) == 20 and np.all(np.diff(d) < 0)


def test_cli_config_and_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2, "alpha": 1.0, "m": 0.5, "beta": 0.0, "rho": 1.0}))
    code, out, _ = run(capsys, "threshold", "--config", str(cfg))
    assert from_csv(out)[0]["delta_min"] == pytest.approx(0.8875046, abs=1e-6)
    code, out, _ = run(capsys, "threshold", "--config", str(cfg), "--m", "1")
    assert from_csv(out)[0]["delta_min"] == pytest.approx(0.8204157, abs=1e-6)
    sweep_cfg = tmp_path / "sweep.json"
    sweep_cfg.write_text(json.dumps({"param": "m", "lo": 0.2, "hi": 1.0, "points": 3,
                                     "alpha": [0.5, 1.0], "truncation-tol": 1e-3}))
    code, _, err = run(capsys, "sweep", "--config", str(sweep_cfg))
    assert code == 2 and "truncation-tol" in err
    sweep_cfg.write_text(json.dumps({"param": "m", "lo": 0.2, "hi": 1.0, "points": 3,
                                     "alpha": [0.5, 1.0]}))
    code, out, _ = run(capsys, "sweep", "--config", str(sweep_cfg))
    assert code == 0 and len(from_csv(out)) == 6
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "values", "--config", str(bad))[0] == 2
    assert run(capsys, "values", "--config", str(tmp_path / "missing.json"))[0] == 3


def test_cli_io_and_empty_errors(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--param", "m", "--lo", "0.1", "--hi", "1",
                     "--out", str(tmp_path / "no" / "such" / "dir.csv"))
    assert code == 3
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(capsys, "chart", "--in", str(empty), "--x", "m", "--y", "delta_min")[0] == 4
    header_only = tmp_path / "h.csv"
    header_only.write_text(",".join(THRESHOLD_FIELDS) + "\n")
    assert run(capsys, "chart", "--in", str(header_only), "--x", "m", "--y", "delta_min")[0] == 4
    assert run(capsys, "chart", "--in", str(tmp_path / "missing.csv"), "--x", "m", "--y", "d")[0] == 3


def test_cli_chart_from_sweep(capsys, tmp_path):
    csv_path, svg_path = tmp_path / "s.csv", tmp_path / "s.svg"
    run(capsys, "sweep", "--param", "m", "--lo", "0.1", "--hi", "1", "--points", "10",
        "--alpha", "0.5", "1", "--out", str(csv_path), "--chart", str(tmp_path / "direct.svg"))
    code, _, _ = run(capsys, "chart", "--in", str(csv_path), "--x", "m", "--y", "delta_min",
                     "--group", "alpha", "--out", str(svg_path))
    assert code == 0
    assert svg_path.read_text().count("<polyline") == 2
    assert (tmp_path / "direct.svg").read_text().count("<polyline") == 2
    assert run(capsys, "chart", "--in", str(csv_path), "--x", "m", "--y", "nope")[0] == 2


def test_cli_simulate_honors_seed(capsys):
    base = ["simulate", "--n", "2", "--alpha", "1", "--m", "0.5", "--delta", "0.8",
            "--replications", "500", "--regime", "autarky", "--type", "1"]
    _, a, _ = run(capsys, *base, "--seed", "1")
    _, b, _ = run(capsys, *base, "--seed", "1")
    _, c, _ = run(capsys, *base, "--seed", "2")
    assert a == b and a != c
    _, d, _ = run(capsys, "--seed", "1", *base)
    assert d == a
    row = from_csv(a)[0]
    assert row["regime"] == "autarky" and row["type"] == 1


def test_cli_norm_and_tax(capsys):
    code, out, _ = run(capsys, "norm-select", "--param", "alpha", "--lo", "0.2", "--hi", "0.6",
                       "--points", "3", "--n", "4", "--rho", "2", "--m", "0.5",
                       "--coarse-points", "20", "--refine-points", "40", "--smooth")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(NORM_FIELDS) + ",beta_star_smoothed"
    code, out, _ = run(capsys, "tax", "--lo", "0.5", "--hi", "2", "--points", "3",
                       "--tau-points", "51", "--m", "0.8", "--beta", "0")
    assert code == 0
    assert out.splitlines()[0] == ",".join(TAX_FIELDS)
    recs = from_csv(out)
    assert all(r["regime"] == "autarkic" for r in recs)
    code, _, err = run(capsys, "tax", "--preset", "fig3")
    assert code == 2 and "--preset" in err
