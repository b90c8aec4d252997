import math
import pathlib

import numpy as np
import pytest

import triodflow as tf

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def test_curvature_of_circle():
    a = np.linspace(0.0, 2.0, 129)
    pts = np.column_stack([2.0 * np.cos(a), 2.0 * np.sin(a)])
    k = np.array(tf.curvature(pts))
    assert np.allclose(k, 0.5, atol=1e-3)
    assert tf.polyline_length(pts) == pytest.approx(4.0, abs=1e-3)


def test_lambda_from_k():
    lam = tf.lambda_from_k([1.0, -1.0, 0.0])
    s = 1.0 / math.sqrt(3.0)
    assert lam == pytest.approx([s, s, -2 * s])


def test_steiner_scenario():
    curves, is_triod = tf.build_scenario("steiner", {"points": 16})
    assert is_triod
    assert len(curves) == 3 and curves[0].shape == (16, 2)
    assert tf.angle_defect(curves) < 1e-12
    assert tf.embeddedness_ratio(curves, True) == pytest.approx(4 * math.sqrt(3), abs=1e-12)


def test_steiner_point_and_obtuse():
    p = tf.steiner_point([0, 0], [1, 0], [0, 1])
    assert p is not None
    assert tf.steiner_point([0, 0], [1, 0], [math.cos(2.6), math.sin(2.6)]) is None
    with pytest.raises(ValueError):
        tf.steiner_point([0, 0], [1, 0], [2, 0])


def test_grim_reaper_residual():
    c = tf.grim_reaper([1.0, 0.0], 257, 1.3)
    assert tf.translator_residual(c, [1.0, 0.0]) < 1e-3


def test_blowup_fit():
    t = np.linspace(0.0, 0.9, 10)
    fit = tf.estimate_blowup(t, 4.0 / (1.0 - t))
    assert fit["classification"] == "TypeI"
    assert fit["T"] == pytest.approx(1.0, rel=1e-2)
    assert fit["C"] == pytest.approx(4.0, rel=1e-2)


def test_density_of_line():
    x = np.linspace(-20.0, 20.0, 4001)
    line = np.column_stack([x, np.zeros_like(x)])
    theta = tf.gaussian_density([line], False, 0.0, [0.0, 0.0], 2.0)
    assert theta == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        tf.gaussian_density([line], False, 3.0, [0.0, 0.0], 2.0)


def test_run_bowed_curve_dissipates():
    out = tf.run({"family": "bowed_curve", "params": {"points": 33}, "flow": {"t_end": 0.05}})
    assert out["reason"] == "t_end"
    length = out["series"]["L_total"]
    assert np.all(np.diff(length) < 0)
    assert out["curves"][0].shape == (33, 2)


def test_validate_bad_angles():
    import json

    ok, report = tf.validate(json.loads((CONFIGS / "bad_angles.json").read_text()))
    assert not ok
    assert "order 1" in report


def test_cli_exit_codes(tmp_path):
    assert tf.cli(["validate", "--config", CONFIGS / "steiner.json"]) == 0
    assert tf.cli(["validate", "--config", CONFIGS / "bad_angles.json"]) == 1
    assert tf.cli(["run", "--config", tmp_path / "missing.json"]) == 2
    assert tf.cli(["run", "--config", CONFIGS / "steiner.json", "--out", tmp_path]) == 0
    assert (tmp_path / "series.csv").read_text().startswith("t,L1,L2,L3,L_total,")
