"""
Jets of maps of the line and the Gelfand-Kazhdan form on S(R).

A point of S(R) is the jet (x_0, x_1, ..., x_N) of a germ k: (R, 0) -> R,
x_m = k^(m)(0).  The W_1-valued form omega has components
omega_r = omega^1_{1..1} (r lower indices), which are 1-forms in dx_0..dx_r
with coefficients rational in x_1..x_{r+1} and denominators powers of x_1.

Jet entries may be Fractions or sympy expressions; the composition code is
plain ring arithmetic and works for both.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import sympy as sp

from .conventions import GK_SIGN
from .dg import C, Form, merge
from .wn import FormalVectorField, evaluate_cochain, formal_bracket


class SingularJetError(ValueError):
    pass


@dataclass(frozen=True)
class Jet1D:
    """Derivatives (x_0, ..., x_R) at 0 of a map of the line."""
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("a jet needs at least x_0 and x_1")

    @property
    def R(self):
        return len(self.coeffs) - 1

    @classmethod
    def identity(cls, R):
        return cls((0, 1) + (0,) * (R - 1))

    def taylor(self):
        return [_div(x, factorial(m)) for m, x in enumerate(self.coeffs)]

    @classmethod
    def from_taylor(cls, t):
        return cls(tuple(_simp(a * factorial(m)) for m, a in enumerate(t)))

    def simplify(self):
        return Jet1D(tuple(_simp(x) for x in self.coeffs))


def _div(x, k):
    if isinstance(x, int):
        return Fraction(x, k)
    return x / k


def _simp(x):
    if isinstance(x, sp.Basic):
        return sp.cancel(sp.expand(x))
    return x


def _mul_trunc(p, q, N):
    out = [0] * (N + 1)
    for i, a in enumerate(p):
        if not _nonzero(a):
            continue
        for j, b in enumerate(q[:N + 1 - i]):
            out[i + j] += a * b
    return out


def _nonzero(a):
    return not (a == 0)


def jet_compose(a: Jet1D, b: Jet1D) -> Jet1D:
    """Jet of b o a (apply a first), truncated at order R.

    With a_0 != 0 the outer jet is read as the polynomial it truncates to;
    that is exact whenever the caller only needs orders below the one lost.
    """
    if a.R != b.R:
        raise ValueError("jets of different orders: %d vs %d" % (a.R, b.R))
    N = a.R
    A = a.taylor()
    B = b.taylor()
    out = [B[N]] + [0] * N
    for m in range(N - 1, -1, -1):
        out = _mul_trunc(out, A, N)
        out[0] += B[m]
    return Jet1D.from_taylor(out)


def jet_invert(a: Jet1D) -> Jet1D:
    """The jet b with b o a = a o b = identity, for a fixing 0."""
    if _nonzero(a.coeffs[0]):
        raise ValueError("jet_invert needs x_0 = 0; translate first")
    if not _nonzero(a.coeffs[1]):
        raise SingularJetError("singular jet: x_1 = 0")
    N = a.R
    A = a.taylor()
    B = [0, _div(1, A[1]) if isinstance(A[1], int) else 1 / A[1]] + [0] * (N - 1)
    for m in range(2, N + 1):
        comp = jet_compose(a, Jet1D.from_taylor(B)).taylor()
        B[m] = _simp(-comp[m] / A[1] ** m)
    return Jet1D.from_taylor(B)


# ---------------------------------------------------------------------------
# exterior forms on jet space

class JetForm:
    """Differential form on jet space; terms map sorted dx-index tuples to sympy expressions."""

    def __init__(self, terms=None):
        self.terms = {}
        for k, v in (terms or {}).items():
            v = sp.cancel(sp.sympify(v))
            if v != 0:
                self.terms[tuple(k)] = v

    @classmethod
    def function(cls, f):
        return cls({(): f})

    @classmethod
    def dx(cls, m, coeff=1):
        return cls({(m,): coeff})

    @property
    def degree(self):
        ds = {len(k) for k in self.terms}
        return ds.pop() if len(ds) == 1 else None

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return JetForm(t)

    def __neg__(self):
        return JetForm({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return JetForm({m: v * k for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, JetForm):
            return jet_wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, JetForm) and (self - other).is_zero()

    __hash__ = None

    def d(self):
        """Exterior derivative in the coordinates x_0, x_1, ..."""
        acc = {}
        for idx, f in self.terms.items():
            for s in f.free_symbols:
                m = coordinate_index(s)
                if m is None:
                    continue
                r = merge((m,), idx)
                if r is None:
                    continue
                sign, key = r
                acc[key] = acc.get(key, 0) + sign * sp.diff(f, s)
        return JetForm(acc)

    def subs(self, mapping):
        return JetForm({k: v.subs(mapping) for k, v in self.terms.items()})

    def evaluate(self, vectors):
        """Value on tangent vectors given as {m: component along d/dx_m}."""
        q = len(vectors)
        total = 0
        for idx, f in self.terms.items():
            if len(idx) != q:
                raise ValueError("arity mismatch")
            M = sp.Matrix(q, q, lambda i, j: sp.sympify(vectors[j].get(idx[i], 0)))
            total += f * M.det()
        return sp.cancel(total)

    def __repr__(self):
        if not self.terms:
            return "JetForm(0)"
        return "JetForm(%s)" % " + ".join(
            "(%s)%s" % (v, "".join("dx%d" % m for m in k)) for k, v in sorted(self.terms.items()))


def jet_wedge(a: JetForm, b: JetForm) -> JetForm:
    acc = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            r = merge(ka, kb)
            if r is None:
                continue
            sign, key = r
            acc[key] = acc.get(key, 0) + sign * va * vb
    return JetForm(acc)


def coords(N):
    """Symbols x_0 .. x_N."""
    return sp.symbols("x_0:%d" % (N + 1))


def coordinate_index(s):
    name = s.name
    if name.startswith("x_") and name[2:].isdigit():
        return int(name[2:])
    return None


# ---------------------------------------------------------------------------
# Gelfand-Kazhdan form

def gk_form_components(R: int):
    """[omega_0, ..., omega_R] on S(R).

    omega(tau) = GK_SIGN * jet of d/dt (k_0^{-1} o k_t) at t = 0, computed by
    composing truncated jets of order R+1 with a symbolic velocity.  The
    result involves x_0..x_{R+1} and dx_0..dx_R.
    """
    if R < 1:
        raise ValueError("need R >= 1")
    N = R + 1
    xs = coords(N)
    vs = sp.symbols("v_0:%d" % (N + 1))
    t = sp.Symbol("t")
    k0 = Jet1D((0,) + tuple(xs[1:]))
    inv = jet_invert(k0)
    # k_0^{-1} o k_t = (centered k_0)^{-1} o (k_t - x_0)
    inner = Jet1D(tuple(t * vs[0] if m == 0 else xs[m] + t * vs[m] for m in range(N + 1)))
    comp = jet_compose(inner, inv)
    omegas = []
    for r in range(R + 1):
        vel = sp.expand(sp.diff(comp.coeffs[r], t).subs(t, 0))
        terms = {}
        for m, v in enumerate(vs):
            cf = vel.coeff(v)
            if cf != 0:
                if m > R:
                    raise AssertionError("omega_%d depends on dx_%d" % (r, m))
                terms[(m,)] = GK_SIGN * cf
        omegas.append(JetForm(terms))
    return omegas


def alpha(form: Form, omegas) -> JetForm:
    """Realize a cochain of C*(W_1) as a form on S(R): c^1_{1^r} -> omega_r."""
    out = JetForm()
    for mono, coeff in form.terms.items():
        term = JetForm.function(sp.Rational(coeff.numerator, coeff.denominator))
        for g in mono:
            if g.family != C or g.upper != 1 or any(j != 1 for j in g.lower):
                raise ValueError("alpha is defined on C*(W_1) generators only, got %s" % (g,))
            if g.r >= len(omegas):
                raise ValueError("need omega_%d; compute more components" % g.r)
            term = jet_wedge(term, omegas[g.r])
        out = out + term
    return out


def w1_structure_constant(a, b):
    """[e_a, e_b] = s e_{a+b-1} with e_a = x^a/a! d/dx; returns s."""
    N = a + b
    ea = FormalVectorField.line([Fraction(int(k == a), factorial(a)) for k in range(N + 1)], N)
    eb = FormalVectorField.line([Fraction(int(k == b), factorial(b)) for k in range(N + 1)], N)
    br = formal_bracket(ea, eb)
    r = a + b - 1
    if r < 0:
        return Fraction(0)
    return br.jet(1, (1,) * r)


def maurer_cartan_residuals(omegas):
    """d omega_r + 1/2 [omega, omega]_r for r < len(omegas) - 1 (zero when MC holds)."""
    top = len(omegas) - 1
    out = []
    for r in range(top):
        rhs = JetForm()
        for a in range(r + 2):
            for b in range(a + 1, r + 2):
                if a + b - 1 != r:
                    continue
                s = w1_structure_constant(a, b)
                if s:
                    rhs = rhs + jet_wedge(omegas[a], omegas[b]).scale(sp.Rational(s.numerator, s.denominator))
        out.append(omegas[r].d() + rhs)
    return out


def lift_vector_field(X, N, xs=None):
    """Tangent vector at the frame x_0..x_N induced by the field X(x) d/dx.

    ``X`` is a sympy expression in the symbol ``x``.  The frame moves by the
    flow, k -> phi_s o k, so the velocity is the jet of X o k.
    """
    xs = coords(N) if xs is None else xs
    y = sp.Symbol("y")
    x = sp.Symbol("x")
    k = sum(xs[m] * y ** m / factorial(m) for m in range(N + 1))
    Xk = X.subs(x, k)
    return {m: sp.expand(sp.diff(Xk, y, m).subs(y, 0)) for m in range(N + 1)}


def omega_of_vector(omegas, vec):
    """The formal vector field omega(vec) in W_1, as exact sympy coefficients per order."""
    return [om.evaluate([vec]) for om in omegas]


def formal_field_from_values(values):
    """FormalVectorField with jets values[r] = d^r xi / dx^r (0)."""
    coeffs = [Fraction(str(v)) / factorial(r) for r, v in enumerate(values)]
    return FormalVectorField.line(coeffs, len(values) - 2)


def alpha_evaluation_residual(c: Form, fields, frame, R):
    """alpha(c)(X~_1..X~_q) - c(omega(X~_1), .., omega(X~_q)) at a numeric frame."""
    omegas = gk_form_components(R)
    N = R + 1
    xs = coords(N)
    subs = dict(zip(xs, frame))
    vecs = [{m: v.subs(subs) for m, v in lift_vector_field(X, N).items()} for X in fields]
    lhs = alpha(c, omegas).subs(subs).evaluate(vecs)
    ws = []
    for vec in vecs:
        vals = [om.subs(subs).evaluate([vec]) for om in omegas]
        ws.append(formal_field_from_values(vals))
    rhs = evaluate_cochain(c, ws)
    return sp.nsimplify(lhs) - sp.Rational(rhs.numerator, rhs.denominator)


# ---------------------------------------------------------------------------
# the Godbillon-Vey local form

def gv_candidates(xs):
    x0, x1, x2 = xs[0], xs[1], xs[2]
    return {
        "x_2/x_1": x2 / x1,
        "x_2/x_1^2": x2 / x1 ** 2,
        "x_2/x_0^2": x2 / x0 ** 2,
    }


def gv_local_form(R: int = 2):
    """Compare alpha(Lambda_1 ^ Psi_1) with dy ^ dy1 ^ dy2 for candidate y2.

    y = x_0 and y1 = log|x_1| enter only through dy = dx_0, dy1 = dx_1/x_1.
    """
    from .charforms import CharTable

    tbl = CharTable(1, 3)
    c11 = tbl.lambda_cap_p(1) * tbl.psi_p(1)
    omegas = gk_form_components(R)
    form = alpha(c11, omegas)
    xs = coords(R + 1)
    dy = JetForm.dx(0)
    dy1 = JetForm.dx(1, 1 / xs[1])
    report = {"form": repr(form), "closed": form.d().is_zero(), "candidates": {}}
    matches = []
    for name, y2 in gv_candidates(xs).items():
        target = jet_wedge(jet_wedge(dy, dy1), JetForm.function(y2).d())
        ratio = None
        if set(target.terms) == set(form.terms) and target.terms:
            ratios = {sp.cancel(form.terms[k] / target.terms[k]) for k in form.terms}
            if len(ratios) == 1:
                ratio = ratios.pop()
        constant = ratio is not None and not ratio.free_symbols
        report["candidates"][name] = {"ratio": str(ratio), "constant": bool(constant)}
        if constant and ratio != 0:
            matches.append((name, Fraction(str(ratio))))
    report["matches"] = [{"y2": name, "constant": str(k)} for name, k in matches]
    report["ok"] = bool(matches) and report["closed"]
    return form, report


__all__ = [
    "Jet1D", "SingularJetError", "jet_compose", "jet_invert", "JetForm", "jet_wedge",
    "coords", "gk_form_components", "alpha", "maurer_cartan_residuals", "lift_vector_field",
    "omega_of_vector", "alpha_evaluation_residual", "gv_local_form", "w1_structure_constant",
]
