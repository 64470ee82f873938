import json
import math
import random

import pytest

from wncocycles import dsl
from wncocycles.cocycles import (
    GroupCochain, QuadratureConfig, QuadratureError, basepoint_difference, bott_cochain, bott_cocycle,
    coboundary, constant_cochain, gv_cochain, gv_cocycle, gv_cocycle_result, integrate, random_circle_diffeo,
    random_line_diffeo, rotation, run_job,
)
from wncocycles.conventions import group_mul

L = dsl.parse
Q9 = QuadratureConfig.uniform(1e-9)


def S(src):
    return dsl.parse(src, dsl.CIRCLE)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(0, 1e-9)
    with pytest.raises(ValueError):
        QuadratureConfig(1e-9, 1e-9, 0)


def test_quadrature_error_on_nonconvergence():
    with pytest.raises(QuadratureError):
        integrate(lambda t: math.sin(1 / t) / t, 1e-6, 1.0, QuadratureConfig(1e-14, 1e-14, 3))
    r = integrate(math.cos, 0.0, 1.0, Q9)
    assert r.value == pytest.approx(math.sin(1.0), abs=1e-12) and r.subdivisions >= 1


def test_gv_degeneracies():
    h = L("exp(x) + x")
    assert gv_cocycle(L("x + 1"), L("2*x - 3"), h, 0.0) == 0
    assert gv_cocycle(L("x"), L("x + 0.3*tanh(x)"), h, 0.5) == 0
    assert gv_cocycle(L("x"), L("x"), L("x"), 0.2) == 0
    assert abs(gv_cocycle(L("x + 1"), L("x + 0.3*tanh(x)"), L("x"), 0.4)) < 1e-12


def test_gv_affine_h_closed_form():
    g, f = L("x + 0.3*tanh(x)"), L("x + 1")
    for a, h in ((2.0, L("2*x")), (0.5, L("0.5*x + 7"))):
        gp = lambda t: 1 + 0.3 / math.cosh(t) ** 2
        want = math.log(a) * (math.log(gp(1.0)) - math.log(gp(0.0)))
        assert abs(gv_cocycle(f, g, h, 0.0, QuadratureConfig.uniform(1e-12)) - want) < 1e-8


def test_gv_rejects_invalid_input():
    with pytest.raises(ValueError):
        gv_cocycle(L("x + 2"), L("x^3"), L("x"), -1.0)
    with pytest.raises(ValueError):
        gv_cocycle(L("x + 1"), S("x"), L("x"), 0.0)


def test_bott_rotations_vanish():
    g = S("x + 0.25*cos(x)")
    assert abs(bott_cocycle([rotation(0.7), g])) < 1e-12
    assert abs(bott_cocycle([S("x + 0.25*sin(x)"), rotation(-1.3)])) < 1e-12


def test_bott_refinement():
    pair = [S("x + 0.25*sin(x)"), S("x + 0.25*cos(x)")]
    a = bott_cocycle(pair, (1,), QuadratureConfig.uniform(1e-10))
    b = bott_cocycle(pair, (1,), QuadratureConfig.uniform(1e-12))
    assert abs(a - b) < 1e-8
    assert a != 0


def test_bott_argument_checks():
    with pytest.raises(ValueError):
        bott_cocycle([S("x")])
    with pytest.raises(ValueError):
        bott_cocycle([S("x"), S("x")], (2,))
    with pytest.raises(ValueError):
        bott_cocycle([L("x"), S("x")])


def test_coboundary_small_cases():
    g = [L("x + 1"), L("2*x"), L("x^3 + x")]
    assert coboundary(constant_cochain(0, 5.0), g[:1]) == 0
    vals = {}

    def c(a):
        key = a.render()
        vals.setdefault(key, len(vals) + 1.0)
        return vals[key]

    c1 = GroupCochain(1, c)
    g1, g2 = g[0], g[1]
    want = c(g2) - c(group_mul(g1, g2, dsl.compose)) + c(g1)
    assert coboundary(c1, [g1, g2]) == want
    with pytest.raises(ValueError):
        coboundary(c1, g)


def test_group_law_is_right_action():
    g1, g2 = L("x + 1"), L("2*x")
    assert group_mul(g1, g2, dsl.compose)(3.0) == 8.0


def test_gv_cocycle_identity():
    rng = random.Random(11)
    c = gv_cochain(0.3, Q9)
    worst = max(abs(coboundary(c, [random_line_diffeo(rng) for _ in range(4)])) for _ in range(20))
    assert worst < 1e-6


def test_bott_cocycle_identity():
    rng = random.Random(12)
    c = bott_cochain(Q9)
    worst = max(abs(coboundary(c, [random_circle_diffeo(rng) for _ in range(3)])) for _ in range(20))
    assert worst < 1e-6


def test_random_diffeos_are_valid():
    rng = random.Random(3)
    for _ in range(20):
        assert dsl.validate(random_line_diffeo(rng)).monotone
        r = dsl.validate(random_circle_diffeo(rng))
        assert r.valid and r.min_derivative > 0.1


def test_tolerance_halving_is_stable():
    rng = random.Random(5)
    f, g, h = (random_line_diffeo(rng) for _ in range(3))
    a = gv_cocycle(f, g, h, 0.1, QuadratureConfig.uniform(2e-10))
    b = gv_cocycle(f, g, h, 0.1, QuadratureConfig.uniform(1e-10))
    assert abs(a - b) < 10 * 1e-10


def test_basepoint_difference_is_reported():
    rng = random.Random(6)
    f, g, h = (random_line_diffeo(rng) for _ in range(3))
    d = basepoint_difference(f, g, h, 0.0, 0.5, Q9)
    assert math.isfinite(d)


def test_json_job():
    out = run_job({"cocycle": "gv", "diffeos": ["x + 1", "x + 0.3*tanh(x)", "2*x"], "basepoint": 0.0,
                   "tol": 1e-11})
    assert set(out) == {"value", "error_estimate", "subdivisions"}
    res = gv_cocycle_result(L("x + 1"), L("x + 0.3*tanh(x)"), L("2*x"), 0.0, QuadratureConfig.uniform(1e-11))
    assert out["value"] == res.value
    out = run_job(json.dumps({"cocycle": "bott", "diffeos": ["x + 0.25*sin(x)", "x + 0.25*cos(x)"]}))
    assert out["value"] == pytest.approx(-0.19469333730, abs=1e-9)
    with pytest.raises(ValueError):
        run_job({"cocycle": "pontryagin", "diffeos": []})
    with pytest.raises(ValueError):
        run_job({"diffeos": []})
