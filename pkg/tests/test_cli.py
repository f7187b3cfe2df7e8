import json
import sys
import xml.etree.ElementTree as ET

import pytest

from biasgain.cli import main
from biasgain.plot_emit import parse_csv, parse_json, parse_lut_csv

EPS = sys.float_info.epsilon
SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- eval ------------------------------------------------------------------

def test_eval_curve(capsys):
    code, out, _ = run(capsys, "eval", "--mode", "curve", "--x", "0.25", "--s", "2", "--t", "0.5")
    assert code == 0
    # the eps guard puts the result within a few ulps of 1/6
    assert abs(float(out) - 1 / 6) <= 4 * EPS
    assert out == repr(float(out)) + "\n"


def test_eval_bias(capsys):
    assert run(capsys, "eval", "--mode", "bias", "--x", "0.3", "--a", "0.5")[:2] == (0, "0.3\n")


def test_eval_gain_and_inverse(capsys):
    code, out, _ = run(capsys, "eval", "--mode", "gain", "--x", "0.25", "--a", "0.3333333333333333")
    assert code == 0 and abs(float(out) - 1 / 6) <= 1e-15
    code, out, _ = run(capsys, "eval", "--mode", "inverse", "--y", "0.16666666666666666", "--s", "2", "--t", "0.5")
    assert code == 0 and abs(float(out) - 0.25) <= 1e-12


@pytest.mark.parametrize("argv", [
    ["eval", "--mode", "inverse", "--y", "0.5", "--s", "0", "--t", "0.5"],
    ["eval", "--x", "1.5", "--s", "2", "--t", "0.5"],
    ["eval", "--mode", "bias", "--x", "0.5", "--a", "1"],
    ["eval", "--x", "nan", "--s", "2", "--t", "0.5"],
    ["eval", "--x", "1/3", "--s", "2", "--t", "0.5"],
    ["eval", "--mode", "curve", "--x", "0.5"],
    ["eval", "--mode", "bias", "--x", "0.5"],
    ["frobnicate"],
    [],
])
def test_eval_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_eval_clamp(capsys):
    code, out, _ = run(capsys, "eval", "--x", "1.5", "--s", "2", "--t", "0.3", "--clamp")
    assert (code, out) == (0, "1\n")
    code, out, _ = run(capsys, "eval", "--x", "-2", "--s", "2", "--t", "0.3", "--clamp")
    assert (code, out) == (0, "0\n")
    # inside [0, 1] the flag changes nothing
    with_clamp = run(capsys, "eval", "--x", "0.4", "--s", "2", "--t", "0.3", "--clamp")
    without = run(capsys, "eval", "--x", "0.4", "--s", "2", "--t", "0.3")
    assert with_clamp == without


# --- sample ----------------------------------------------------------------

def test_sample_csv(capsys):
    code, out, _ = run(capsys, "sample", "--s", "1", "--t", "0.5", "--n", "3", "--format", "csv")
    assert code == 0
    assert len(out.splitlines()) == 4
    assert len(parse_csv(out)) == 3


def test_sample_json(capsys):
    code, out, _ = run(capsys, "sample", "--s", "2", "--t", "0.5", "--n", "5", "--format", "json")
    assert code == 0
    x, y = json.loads(out)["points"][1]
    assert x == 0.25 and abs(y - 1 / 6) <= 4 * EPS
    series, params = parse_json(out)
    assert len(series) == 5 and (params.s, params.t) == (2, 0.5)


def test_sample_bad_n(capsys):
    code, out, _ = run(capsys, "sample", "--s", "1", "--t", "0.5", "--n", "1")
    assert code == 2 and out == ""


def test_sample_to_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sample", "--s", "3", "--t", "0.4", "--n", "9", "--out", str(path))
    assert code == 0 and out == ""
    assert len(parse_csv(path.read_text())) == 9


def test_sample_unwritable(tmp_path, capsys):
    code, out, err = run(capsys, "sample", "--s", "3", "--t", "0.4", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and out == "" and err


# --- plot ------------------------------------------------------------------

def test_plot_grid(tmp_path, capsys):
    path = tmp_path / "fig2.svg"
    code, _, _ = run(capsys, "plot", "--figure", "grid", "--out", str(path))
    assert code == 0
    root = ET.parse(path).getroot()
    cells = root.findall(f"{SVG}g")
    assert len(cells) == 7 * 5
    assert len(root.findall(f".//{SVG}polyline")) == 35


def test_plot_custom_grid(capsys):
    code, out, _ = run(capsys, "plot", "--s-values", "0.25,1,4", "--t-values", "0.2,0.8", "--no-knots")
    assert code == 0
    root = ET.fromstring(out)
    assert len(root.findall(f".//{SVG}polyline")) == 6
    assert not root.findall(f".//{SVG}circle")


@pytest.mark.parametrize("figure", ["bias", "gain"])
def test_plot_family(tmp_path, capsys, figure):
    path = tmp_path / f"{figure}.svg"
    assert run(capsys, "plot", "--figure", figure, "--out", str(path))[0] == 0
    assert len(ET.parse(path).getroot().findall(f".//{SVG}polyline")) == 9
    code, out, _ = run(capsys, "plot", "--figure", figure, "--a-values", "0.2,0.8")
    assert code == 0 and len(ET.fromstring(out).findall(f".//{SVG}polyline")) == 2


@pytest.mark.parametrize("argv", [
    ["plot", "--s-values", "1,,2"],
    ["plot", "--t-values", "0.5,abc"],
    ["plot", "--t-values", "0.5,1.5"],
    ["plot", "--figure", "bias", "--a-values", "0,0.5"],
    ["plot", "--width", "10"],
    ["plot", "--figure", "perlin"],
])
def test_plot_bad_flags(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_plot_unwritable(tmp_path, capsys):
    assert run(capsys, "plot", "--out", str(tmp_path / "missing" / "f.svg"))[0] == 1


# --- fit -------------------------------------------------------------------

def test_fit_round_trip(tmp_path, capsys):
    path = tmp_path / "in.csv"
    assert run(capsys, "sample", "--s", "4", "--t", "0.25", "--n", "33", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "fit", str(path))
    assert code == 0
    obj = json.loads(out)
    assert set(obj) == {"s", "t", "rmse", "iterations"}
    assert abs(obj["s"] - 4) <= 1e-2 and abs(obj["t"] - 0.25) <= 1e-2


def test_fit_json_identity(tmp_path, capsys):
    path = tmp_path / "in.json"
    run(capsys, "sample", "--s", "1", "--t", "0.5", "--n", "17", "--format", "json", "--out", str(path))
    code, out, _ = run(capsys, "fit", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["rmse"] <= 1e-6


def test_fit_two_points(tmp_path, capsys):
    path = tmp_path / "two.csv"
    path.write_text("x,y\n0,0\n1,1\n")
    code, out, _ = run(capsys, "fit", str(path))
    assert code == 2 and out == ""


def test_fit_garbage(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("hello\n")
    assert run(capsys, "fit", str(path))[0] == 2
    path.write_bytes(b"\xff\xfe\x00")
    assert run(capsys, "fit", str(path))[0] == 2


def test_fit_missing_file(tmp_path, capsys):
    code, out, _ = run(capsys, "fit", str(tmp_path / "nope.csv"))
    assert code == 1 and out == ""


# --- table -----------------------------------------------------------------

def test_table(capsys):
    code, out, _ = run(capsys, "table", "--s", "2", "--t", "0.5", "--resolution", "5")
    assert code == 0
    rows = parse_lut_csv(out)
    assert rows[1][:2] == (1, 0.25) and abs(rows[1][2] - 1 / 6) <= 4 * EPS


def test_table_endpoints(capsys):
    code, out, _ = run(capsys, "table", "--s", "0.3", "--t", "0.9", "--resolution", "2")
    rows = parse_lut_csv(out)
    assert code == 0 and [r[:2] for r in rows] == [(0, 0.0), (1, 1.0)]
    assert abs(rows[0][2]) <= 4 * EPS and abs(rows[1][2] - 1) <= 4 * EPS


def test_table_bad_resolution(capsys):
    assert run(capsys, "table", "--s", "1", "--t", "0.5", "--resolution", "1")[0] == 2
    assert run(capsys, "table", "--s", "1", "--t", "0.5", "--resolution", "2.5")[0] == 2
