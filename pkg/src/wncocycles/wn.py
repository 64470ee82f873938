"""
The cochain complex C*(W_n) of formal vector fields, truncated at jet order R.

Generators c^i_J are the functionals xi -> d^|J| xi^i / dx^J (0).  The
differential is tabulated per generator; the complex only knows d on
generators with |J| <= R, and asking for more raises TruncationError.

Also here: evaluation of cochains on polynomial vector fields, the
Chevalley-Eilenberg oracle used to cross-check d, and the bicomplex of
formal forms C*(W_n; Omega_n) with its comparison map mu.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, combinations_with_replacement
from math import factorial, prod

from .dg import (C, DX, F, Form, Gen, TruncationError, apply_antiderivation,
                 cgen, dxgen, fgen, gen, substitute)


def _sub_positions(J, S):
    """Indices of J with the positions in S removed."""
    s = set(S)
    return [j for k, j in enumerate(J) if k not in s]


@dataclass(frozen=True)
class WnComplex:
    n: int
    R: int

    def __post_init__(self):
        if self.n < 1 or self.R < 0:
            raise ValueError("need n >= 1 and R >= 0")

    def generators(self, max_order=None, family=C):
        """All generators of the given family with order <= max_order."""
        top = self.R if max_order is None else max_order
        out = []
        for r in range(top + 1):
            for i in range(1, self.n + 1):
                for J in combinations_with_replacement(range(1, self.n + 1), r):
                    out.append(gen(family, i, J))
        return out

    @cached_property
    def table(self):
        return _DiffTable(self, generator_differential)

    @cached_property
    def formal_table(self):
        return _DiffTable(self, _formal_entry)

    @cached_property
    def target_table(self):
        """d on C*(W_n) (x) Lambda(R^n)': c as usual, dx closed."""
        return _DiffTable(self, _target_entry)

    def d(self, form: Form) -> Form:
        return apply_antiderivation(self.table, form)

    def D(self, form: Form) -> Form:
        return apply_antiderivation(self.formal_table, form)

    def d_target(self, form: Form) -> Form:
        return apply_antiderivation(self.target_table, form)


class _DiffTable(dict):
    """Lazily filled generator -> differential map."""

    def __init__(self, cx, entry):
        super().__init__()
        self.cx = cx
        self.entry = entry

    def __missing__(self, g):
        if not isinstance(g, Gen):
            raise KeyError(g)
        v = self.entry(self.cx, g)
        self[g] = v
        return v


def _check_gen(cx, g):
    if g.upper < 1 or g.upper > cx.n or any(j < 1 or j > cx.n for j in g.lower):
        raise KeyError(g)
    if g.r > cx.R:
        raise TruncationError("%s has jet order %d > R=%d" % (g, g.r, cx.R))


def generator_differential(cx: WnComplex, g) -> Form:
    """d c^i_J = sum_k sum_{|S|=k} sum_l c^i_{l, J-S} ^ c^l_S."""
    if not isinstance(g, Gen):
        i, J = g
        g = cgen(i, *J)
    if g.family != C:
        raise KeyError(g)
    _check_gen(cx, g)
    i, J = g.upper, g.lower
    items = []
    for k in range(len(J) + 1):
        for S in combinations(range(len(J)), k):
            rest = _sub_positions(J, S)
            sub = [J[s] for s in S]
            for l in range(1, cx.n + 1):
                items.append(([cgen(i, l, *rest), cgen(l, *sub)], 1))
    return Form.from_terms(items)


def formal_forms_differential(cx: WnComplex, g) -> Form:
    """D on generators of C*(W_n; Omega_n).

    D f^i_J = sum_{k>=1} sum_{|S|=k} sum_l f^i_{l,J-S} ^ f^l_S - sum_l f^i_{lJ} ^ dx^l,
    D dx^i  = sum_j f^i_j ^ dx^j.
    """
    if g.family == DX:
        if not 1 <= g.upper <= cx.n:
            raise KeyError(g)
        return Form.from_terms(([fgen(g.upper, j), dxgen(j)], 1) for j in range(1, cx.n + 1))
    if g.family != F:
        raise KeyError(g)
    _check_gen(cx, g)
    i, J = g.upper, g.lower
    items = []
    for k in range(1, len(J) + 1):
        for S in combinations(range(len(J)), k):
            rest = _sub_positions(J, S)
            sub = [J[s] for s in S]
            for l in range(1, cx.n + 1):
                items.append(([fgen(i, l, *rest), fgen(l, *sub)], 1))
    for l in range(1, cx.n + 1):
        items.append(([fgen(i, l, *J), dxgen(l)], -1))
    return Form.from_terms(items)


def _formal_entry(cx, g):
    return formal_forms_differential(cx, g)


def _target_entry(cx, g):
    if g.family == DX:
        if not 1 <= g.upper <= cx.n:
            raise KeyError(g)
        return Form()
    return generator_differential(cx, g)


def mu_map(form: Form) -> Form:
    """mu(f^i) = dx^i + c^i, mu(f^i_J) = c^i_J (|J| >= 1), mu(dx^i) = -c^i."""

    def image(g):
        if g.family == F:
            if g.r == 0:
                return Form.generator(dxgen(g.upper)) + Form.generator(cgen(g.upper))
            return Form.generator(cgen(g.upper, *g.lower))
        if g.family == DX:
            return Form.generator(cgen(g.upper), -1)
        raise ValueError("mu is defined on f and dx generators, got %s" % (g,))

    return substitute(form, image)


# ---------------------------------------------------------------------------
# polynomial vector fields

def _poly_add(p, q, sign=1):
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _poly_mul(p, q, maxdeg):
    out = {}
    for e1, c1 in p.items():
        d1 = sum(e1)
        for e2, c2 in q.items():
            if d1 + sum(e2) > maxdeg:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e)
    return out


def _poly_diff(p, j):
    out = {}
    for e, c in p.items():
        if e[j]:
            e2 = e[:j] + (e[j] - 1,) + e[j + 1:]
            out[e2] = c * e[j]
    return out


class FormalVectorField:
    """sum_i xi^i d/dx^i with polynomial components of degree <= R+1.

    ``components[i-1]`` maps exponent tuples to rational coefficients.
    """
    __slots__ = ("n", "R", "components")

    def __init__(self, n, R, components):
        self.n = n
        self.R = R
        comps = []
        for comp in components:
            c = {}
            for e, v in dict(comp).items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError("exponent %r has wrong length" % (e,))
                v = Fraction(v)
                if v and sum(e) <= R + 1:
                    c[e] = v
            comps.append(c)
        if len(comps) != n:
            raise ValueError("need %d components" % n)
        self.components = tuple(comps)

    @classmethod
    def line(cls, coeffs, R=None):
        """n = 1 field sum_k coeffs[k] x^k d/dx."""
        R = len(coeffs) - 2 if R is None else R
        return cls(1, max(R, 0), [{(k,): a for k, a in enumerate(coeffs)}])

    @classmethod
    def linear(cls, n, R, matrix):
        """Field with components xi^a = sum_b matrix[a][b] x^b."""
        comps = []
        for a in range(n):
            comps.append({tuple(int(k == b) for k in range(n)): matrix[a][b] for b in range(n)})
        return cls(n, R, comps)

    def jet(self, i, J):
        """d^|J| xi^i / dx^J at 0."""
        mult = [0] * self.n
        for j in J:
            mult[j - 1] += 1
        c = self.components[i - 1].get(tuple(mult), 0)
        if not c:
            return Fraction(0)
        return c * prod(factorial(m) for m in mult)

    def __add__(self, other):
        return FormalVectorField(self.n, self.R,
                                 [_poly_add(a, b) for a, b in zip(self.components, other.components)])

    def scale(self, k):
        return FormalVectorField(self.n, self.R,
                                 [{e: c * k for e, c in comp.items()} for comp in self.components])

    def __eq__(self, other):
        return (isinstance(other, FormalVectorField) and self.n == other.n
                and self.components == other.components)

    __hash__ = None

    def __repr__(self):
        return "FormalVectorField(n=%d, R=%d, %r)" % (self.n, self.R, self.components)


def formal_bracket(xi: FormalVectorField, eta: FormalVectorField) -> FormalVectorField:
    """[xi, eta]^i = sum_j xi^j d_j eta^i - eta^j d_j xi^i, truncated."""
    if xi.n != eta.n or xi.R != eta.R:
        raise ValueError("fields live in different truncations")
    n, top = xi.n, xi.R + 1
    comps = []
    for i in range(n):
        acc = {}
        for j in range(n):
            acc = _poly_add(acc, _poly_mul(xi.components[j], _poly_diff(eta.components[i], j), top))
            acc = _poly_add(acc, _poly_mul(eta.components[j], _poly_diff(xi.components[i], j), top), -1)
        comps.append(acc)
    return FormalVectorField(n, xi.R, comps)


def pair(g, xi: FormalVectorField):
    """Value of a degree-1 generator on a field."""
    if g.family != C:
        raise ValueError("only c generators pair with vector fields, got %s" % (g,))
    return xi.jet(g.upper, g.lower)


def det(M):
    """Exact determinant by fraction-free elimination."""
    M = [list(r) for r in M]
    n = len(M)
    if n == 0:
        return Fraction(1)
    sign = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for r in range(k + 1, n):
            if M[r][k]:
                f = Fraction(M[r][k]) / M[k][k]
                for c in range(k, n):
                    M[r][c] -= f * M[k][c]
    out = Fraction(sign)
    for k in range(n):
        out *= M[k][k]
    return out


def evaluate_cochain(c: Form, fields) -> Fraction:
    """Alternating evaluation: monomial g_1..g_q -> det(g_k(xi_s))."""
    fields = list(fields)
    q = len(fields)
    total = Fraction(0)
    cache = {}
    for mono, coeff in c.terms.items():
        if len(mono) != q:
            raise ValueError("arity mismatch: degree %d cochain on %d fields" % (len(mono), q))
        rows = []
        for g in mono:
            if g not in cache:
                cache[g] = [pair(g, xi) for xi in fields]
            rows.append(cache[g])
        total += coeff * det(rows)
    return total


def ce_differential_oracle(c: Form, fields) -> Fraction:
    """(dc)(xi_1..xi_{q+1}) = sum_{i<j} (-1)^{i+j} c([xi_i, xi_j], ..^i..^j..)."""
    fields = list(fields)
    q1 = len(fields)
    deg = c.degree
    if c.is_zero():
        return Fraction(0)
    if deg is None:
        raise ValueError("oracle needs a homogeneous cochain")
    if q1 != deg + 1:
        raise ValueError("arity mismatch: need %d fields, got %d" % (deg + 1, q1))
    total = Fraction(0)
    for a in range(q1):
        for b in range(a + 1, q1):
            br = formal_bracket(fields[a], fields[b])
            rest = [f for k, f in enumerate(fields) if k not in (a, b)]
            v = evaluate_cochain(c, [br] + rest)
            total += -v if (a + b) & 1 else v  # 1-based (a+1)+(b+1) has the same parity
    return total


# ---------------------------------------------------------------------------
# random data for property checks

NONZERO_SMALL = [k for k in range(-3, 4) if k]


def random_field(rng: random.Random, n, R, density=0.6):
    comps = []
    for _ in range(n):
        comp = {}
        for deg in range(R + 2):
            for J in combinations_with_replacement(range(n), deg):
                if rng.random() < density:
                    e = [0] * n
                    for j in J:
                        e[j] += 1
                    comp[tuple(e)] = rng.choice(NONZERO_SMALL)
        comps.append(comp)
    return FormalVectorField(n, R, comps)


def random_cochain(rng: random.Random, n, degree, max_order, nterms=3):
    gens = WnComplex(n, max_order).generators(max_order)
    items = []
    for _ in range(nterms):
        if degree > len(gens):
            break
        items.append((rng.sample(gens, degree), rng.choice(NONZERO_SMALL)))
    return Form.from_terms(items)


def alternating_sign_check(c: Form, fields) -> bool:
    """Every transposition of the arguments negates the value."""
    base = evaluate_cochain(c, fields)
    for a, b in combinations(range(len(fields)), 2):
        sw = list(fields)
        sw[a], sw[b] = sw[b], sw[a]
        if evaluate_cochain(c, sw) != -base:
            return False
    return True


def d_squared_residuals(cx: WnComplex, max_order=None, family=C):
    """Generators g with d(d g) != 0 (empty means d^2 = 0)."""
    top = cx.R - 1 if max_order is None else max_order
    table = cx.table if family == C else cx.formal_table
    bad = []
    gens = cx.generators(top, family)
    if family == F:
        gens = gens + [dxgen(i) for i in range(1, cx.n + 1)]
    for g in gens:
        dd = apply_antiderivation(table, table[g])
        if dd:
            bad.append((g, dd))
    return bad


def mu_chain_residuals(cx: WnComplex, max_order=None):
    """Generators where mu o D != d_target o mu."""
    top = cx.R - 1 if max_order is None else max_order
    bad = []
    gens = cx.generators(top, F) + [dxgen(i) for i in range(1, cx.n + 1)]
    for g in gens:
        lhs = mu_map(cx.D(Form.generator(g)))
        rhs = cx.d_target(mu_map(Form.generator(g)))
        if lhs != rhs:
            bad.append((g, lhs - rhs))
    return bad


def mu_is_bijective_on_generators(cx: WnComplex, max_order=None):
    """mu is triangular: its linear parts on generators span each c and dx exactly once."""
    top = cx.R if max_order is None else max_order
    gens = cx.generators(top, F) + [dxgen(i) for i in range(1, cx.n + 1)]
    images = [mu_map(Form.generator(g)) for g in gens]
    basis = sorted({m for im in images for m in im.terms})
    if len(basis) != len(gens):
        return False
    M = [[im.terms.get(b, Fraction(0)) for b in basis] for im in images]
    return det(M) != 0


__all__ = [
    "WnComplex", "FormalVectorField", "generator_differential", "formal_forms_differential",
    "mu_map", "formal_bracket", "evaluate_cochain", "ce_differential_oracle", "pair",
    "random_field", "random_cochain", "det", "d_squared_residuals", "mu_chain_residuals",
    "mu_is_bijective_on_generators", "alternating_sign_check",
]
