import math

import pytest

import vexleb


def test_constant_exponent_norm_matches_closed_form():
    x = vexleb.Grid1D(0.0, 1.0, 100)
    f = vexleb.GridFunction.sample(x, lambda t: 1.0 + t)
    p = 3.0
    exact = sum((1.0 + x.midpoint(i)) ** p * x.h for i in range(100)) ** (1 / p)
    got = vexleb.luxemburg_norm(f, vexleb.ExponentField.constant(x, p), tol=1e-12)
    assert got == pytest.approx(exact, rel=1e-9)


def test_two_piece_exponent_norm():
    x = vexleb.Grid1D(0.0, 1.0, 64)
    p = vexleb.ExponentField(vexleb.GridFunction.sample(x, lambda t: 2.0 if t < 0.5 else 3.0))
    assert vexleb.luxemburg_norm(vexleb.GridFunction.constant(x, 2.0), p, tol=1e-12) == pytest.approx(2.0, abs=1e-8)


def test_hardy1_of_constant():
    x = vexleb.Grid1D(0.0, 2.0, 8)
    out = vexleb.hardy1(vexleb.GridFunction.constant(x, 1.0))
    assert out.values == pytest.approx([x.midpoint(i) for i in range(8)])


def test_condition_b_unit_fixture():
    x = vexleb.Grid1D(0.0, 1.0, 32)
    one = vexleb.GridFunction.constant(x, 1.0)
    r = vexleb.condition_b(vexleb.GridFunction.constant2(x, x, 1.0), one, one, 2.0,
                           vexleb.ExponentField.constant2(x, x, 2.0))
    assert r["value"] == pytest.approx(0.25)
    assert r["arg"] == [0.5, 0.5]


def test_rectangle_condition_is_one_for_constant_exponent():
    x = vexleb.Grid1D(0.0, 1.0, 8)
    r = vexleb.rectangle_condition_ar(vexleb.ExponentField.constant2(x, x, 3.0), 0.25)
    assert r["value"] == pytest.approx(1.0, abs=1e-9)


def test_blowup_control_has_flat_slope():
    r = vexleb.blowup_series(p1=2.0, p2=2.0, nx=1024)
    assert abs(r["slope"]) < 0.01


def test_reports_are_deterministic():
    assert vexleb.embedding(3, trials=20, seed=4) == vexleb.embedding(3, trials=20, seed=4)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        vexleb.Grid1D(1.0, 0.0, 4)
    x = vexleb.Grid1D(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        vexleb.GridFunction(x, [1.0, math.nan, 1.0, 1.0])
