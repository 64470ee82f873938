from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wncocycles.dg import (
    DX, Form, MatrixForm, TPolyForm, TruncationError, UnknownGeneratorError, apply_antiderivation,
    bracket, cgen, dxgen, fgen, integrate_t, matrix_wedge, normalize, parse_form, render, trace, wedge,
)
from wncocycles.wn import WnComplex

from conftest import forms

G = Form.generator


def test_odd_square_vanishes():
    assert wedge(G(cgen(1)), G(cgen(1))).is_zero()


def test_swap_sign():
    a, b = G(cgen(1)), G(cgen(1, 1))
    assert wedge(a, b) == -wedge(b, a)


def test_koszul_sign_matches_permutation_parity():
    gs = [cgen(1, 2), cgen(2), cgen(1)]
    lhs = wedge(wedge(G(gs[0]), G(gs[1])), G(gs[2]))
    ordered = sorted(gs)
    perm = [ordered.index(g) for g in gs]
    inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    assert lhs.terms == {tuple(ordered): Fraction((-1) ** inv)}


def test_generator_order_and_dx_lower():
    assert cgen(2) < cgen(1, 1) < fgen(1) < dxgen(1)
    assert cgen(1, 2, 1) == cgen(1, 1, 2)
    assert dxgen(3).lower == () and dxgen(3).family == DX


def test_derivation_of_unit_and_dc():
    cx = WnComplex(1, 3)
    assert apply_antiderivation(cx.table, Form.scalar(1)).is_zero()
    assert cx.d(G(cgen(1))) == G(cgen(1, 1)) * G(cgen(1))


def test_leibniz_example():
    cx = WnComplex(1, 3)
    a, b = G(cgen(1)), G(cgen(1, 1))
    assert cx.d(a * b) == cx.d(a) * b - a * cx.d(b)


def test_unknown_generator_and_truncation():
    cx = WnComplex(1, 2)
    with pytest.raises(TruncationError):
        cx.d(G(cgen(1, 1, 1, 1)))
    with pytest.raises(UnknownGeneratorError):
        apply_antiderivation({}, G(cgen(1)))


def _gamma(n):
    return MatrixForm.build(n, lambda i, j: G(cgen(i, j)))


def test_matrix_wedge_examples():
    g1, g2 = _gamma(1), _gamma(2)
    assert matrix_wedge(g2, MatrixForm.zero(2)).is_zero()
    assert matrix_wedge(g1, g1)[1, 1].is_zero()
    assert matrix_wedge(g2, g2)[1, 1] == G(cgen(1, 2)) * G(cgen(2, 1))
    with pytest.raises(ValueError):
        matrix_wedge(g1, g2)


def test_bracket_examples():
    g = _gamma(2)
    lam = (g + g.T).scale(Fraction(1, 2))
    assert bracket(lam, lam) == matrix_wedge(lam, lam).scale(2)
    even = matrix_wedge(g, g)
    assert bracket(even, even).is_zero()


def test_trace_examples():
    assert trace(MatrixForm.zero(2)).is_zero()
    assert trace(_gamma(1)) == G(cgen(1, 1))
    assert trace(matrix_wedge(_gamma(2), _gamma(2))).is_zero()


def test_integrate_t_examples():
    w = G(cgen(1)) * G(cgen(1, 1))
    assert integrate_t(TPolyForm([w])) == w
    assert integrate_t(TPolyForm([Form(), w])) == w.scale(Fraction(1, 2))
    assert integrate_t(TPolyForm([Form(), w, -w])) == w.scale(Fraction(1, 6))


def test_render_parse_examples():
    f = G(cgen(1, 1, 1), Fraction(-1, 6)) * G(cgen(1))
    assert render(f) == "1/6 c[1|]^c[1|11]"
    assert parse_form(render(f)) == f
    assert render(Form()) == "0"
    assert parse_form("0").is_zero()
    assert parse_form("dx[1] - 2 f[1|1]^dx[1]") == G(dxgen(1)) - G(fgen(1, 1), 2) * G(dxgen(1))


@settings(max_examples=60, deadline=None)
@given(forms(n=3, max_order=2, max_degree=4))
def test_normalize_idempotent(a):
    assert normalize(normalize(a)) == normalize(a)
    assert parse_form(render(a)) == a


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.data())
def test_graded_commutativity(p, q, data):
    a = data.draw(forms(n=3, max_order=2, homogeneous=p, max_terms=3))
    b = data.draw(forms(n=3, max_order=2, homogeneous=q, max_terms=3))
    assert a * b == (b * a).scale((-1) ** (p * q))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.data())
def test_leibniz_rule(p, data):
    cx = WnComplex(2, 3)
    a = data.draw(forms(n=2, max_order=2, homogeneous=p, max_terms=3))
    b = data.draw(forms(n=2, max_order=2, max_degree=3, max_terms=3))
    assert cx.d(a * b) == cx.d(a) * b + a.scale((-1) ** p) * cx.d(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.data())
def test_trace_graded_cyclicity(p, q, data):
    n = 2
    A = MatrixForm.build(n, lambda i, j: data.draw(forms(n=2, max_order=1, homogeneous=p, max_terms=2)))
    B = MatrixForm.build(n, lambda i, j: data.draw(forms(n=2, max_order=1, homogeneous=q, max_terms=2)))
    assert trace(matrix_wedge(A, B)) == trace(matrix_wedge(B, A)).scale((-1) ** (p * q))
