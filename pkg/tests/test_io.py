"""
Test curve CSV and mode-set JSON codecs
"""

import json
import math

import pytest

from boostdecay.core.exceptions import DomainError, InputError
from boostdecay.models import ExpModeSet, SurvivalCurve
from boostdecay.services.io import read_curve_csv, read_modeset_json, write_curve_csv, write_modeset_json


def test_read_curve_with_comments(tmp_path):
    """Test comment lines are skipped and columns picked by name"""
    path = tmp_path / "curve.csv"
    path.write_text("# generated\nt,other,value\n0,9,1.0\n1,9,0.5\n2,9,0.25\n")
    curve = read_curve_csv(path)
    assert curve.t == [0.0, 1.0, 2.0]
    assert curve.value == [1.0, 0.5, 0.25]


def test_read_curve_probability_column(tmp_path):
    """Test probability samples are converted to the modulus"""
    path = tmp_path / "curve.csv"
    path.write_text("t,P\n0,1\n1,0.25\n")
    curve = read_curve_csv(path, column="P", values="probability")
    assert curve.value == [1.0, 0.5]


def test_read_curve_bad_header(tmp_path):
    """Test a missing column is an InputError"""
    path = tmp_path / "curve.csv"
    path.write_text("time,value\n0,1\n")
    with pytest.raises(InputError) as excinfo:
        read_curve_csv(path)
    assert excinfo.value.error_code == "bad_header"


def test_read_curve_non_numeric_row(tmp_path):
    """Test a non-numeric row is an InputError"""
    path = tmp_path / "curve.csv"
    path.write_text("t,value\n0,1\n1,abc\n")
    with pytest.raises(InputError):
        read_curve_csv(path)


def test_read_curve_increasing_values(tmp_path):
    """Test a non-monotone curve violates the curve invariants"""
    path = tmp_path / "curve.csv"
    path.write_text("t,value\n0,0.5\n1,0.7\n")
    with pytest.raises(DomainError):
        read_curve_csv(path)


def test_read_missing_file(tmp_path):
    """Test an unreadable path is an InputError with exit code 2"""
    with pytest.raises(InputError) as excinfo:
        read_curve_csv(tmp_path / "nope.csv")
    assert excinfo.value.exit_code == 2


def test_write_then_read_curve(tmp_path):
    """Test written curves keep full float precision"""
    path = tmp_path / "out" / "curve.csv"
    curve = SurvivalCurve.from_arrays([0.0, 0.1, 1.0 / 3.0], [1.0, math.exp(-0.05), math.exp(-1.0 / 6.0)])
    write_curve_csv(path, curve, comments=["theta=0.5"])
    assert path.read_text().startswith("# theta=0.5\n")
    assert read_curve_csv(path) == curve


def test_modeset_json_sorts_modes(tmp_path):
    """Test modes are sorted by width and M is optional"""
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"modes": [{"w": 0.7, "gamma": 3.0}, {"w": 0.3, "gamma": 1.0}]}))
    modeset, M = read_modeset_json(path)
    assert M is None
    assert list(modeset.widths) == [1.0, 3.0]
    assert list(modeset.weights) == [0.3, 0.7]


def test_modeset_json_roundtrip_with_mass(tmp_path):
    """Test M and extra keys are written"""
    path = tmp_path / "model.json"
    modeset = ExpModeSet.from_arrays([0.25, 0.75], [0.5, 2.0])
    write_modeset_json(path, modeset, M=700.0, extra={"theta": 0.6})
    document = json.loads(path.read_text())
    assert document["theta"] == 0.6
    assert read_modeset_json(path) == (modeset, 700.0)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        json.dumps([1, 2]),
        json.dumps({"modes": [{"w": 1.0}]}),
        json.dumps({"M": "heavy", "modes": [{"w": 1.0, "gamma": 1.0}]}),
    ],
)
def test_modeset_json_malformed(tmp_path, text):
    """Test malformed mode-set files are InputErrors"""
    path = tmp_path / "model.json"
    path.write_text(text)
    with pytest.raises(InputError):
        read_modeset_json(path)
