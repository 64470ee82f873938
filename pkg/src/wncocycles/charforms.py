"""
Characteristic cochains of W_n.

gamma = (c^i_j), Psi^i_j = sum_k c^i_{jk} ^ c^k, lambda and alpha the
symmetric and antisymmetric parts of gamma.  From these: the Pontrjagin
cocycles Psi_p, the traces gamma_p and lambda_p, and the O(n)-relative
transgressions Lambda_p built from the interpolant

    Psi(t) = t/2 Psi + (t-1)/2 Psi^T + (t - t^2) [lambda, lambda].
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from math import factorial, prod

from .dg import (C, Form, MatrixForm, TPolyForm, bracket, cgen,
                 graded_symmetrize_trace, integrate_t, matrix_power, rescale_generators,
                 trace)
from .wn import WnComplex

HALF = Fraction(1, 2)


class TPolyMatrix:
    """sum_k coeffs[k] t^k with MatrixForm coefficients."""

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @property
    def tdegree(self):
        d = len(self.coeffs) - 1
        while d >= 0 and self.coeffs[d].is_zero():
            d -= 1
        return d

    def at(self, t):
        t = Fraction(t)
        out = self.coeffs[0].scale(1)
        for k, M in enumerate(self.coeffs[1:], start=1):
            out = out + M.scale(t ** k)
        return out


@dataclass
class CharTable:
    n: int
    R: int = 3
    cx: WnComplex = field(init=False, repr=False)

    def __post_init__(self):
        if self.R < 2:
            raise ValueError("characteristic forms need jet order R >= 2")
        self.cx = WnComplex(self.n, self.R)

    @cached_property
    def gamma(self):
        return MatrixForm.build(self.n, lambda i, j: Form.generator(cgen(i, j)))

    @cached_property
    def psi(self):
        n = self.n
        return MatrixForm.build(n, lambda i, j: Form.from_terms(
            ([cgen(i, j, k), cgen(k)], 1) for k in range(1, n + 1)))

    @cached_property
    def lam(self):
        g = self.gamma
        return (g + g.T).scale(HALF)

    @cached_property
    def alpha(self):
        g = self.gamma
        return (g - g.T).scale(HALF)

    @cached_property
    def psi_t(self):
        return psi_interpolant(self)

    def d(self, form):
        return self.cx.d(form)

    def dm(self, M):
        return M.map(self.cx.d)

    # ---- the cochains

    def _check_p(self, p):
        if not 1 <= p <= self.n:
            raise ValueError("p=%d out of range 1..%d" % (p, self.n))

    def psi_p(self, p):
        self._check_p(p)
        return _cached(self, ("psi", p), lambda: trace(matrix_power(self.psi, p)))

    def gamma_p(self, p):
        self._check_p(p)
        return _cached(self, ("gamma", p), lambda: trace(matrix_power(self.gamma, 2 * p - 1)))

    def lambda_p(self, p):
        self._check_p(p)
        return _cached(self, ("lambda", p), lambda: trace(matrix_power(self.lam, 2 * p - 1)))

    def transgression_integral(self, p):
        """int_0^1 Q_p(lambda, Psi(t)) dt."""
        self._check_odd(p)
        return _cached(self, ("int", p), lambda: integrate_t(q_lambda_psi_t(self, p)))

    def lambda_cap_p(self, p):
        self._check_odd(p)
        return _cached(self, ("Lambda", p),
                       lambda: self.transgression_integral(p).scale(lap_prefactor(p)))

    def _check_odd(self, p):
        self._check_p(p)
        if p % 2 == 0:
            raise ValueError("Lambda_p is only defined for odd p (got %d)" % p)

    def kappa(self, p):
        """Rational k with d Lambda_p = k Psi_p, or None if not proportional."""
        return proportionality(self.d(self.lambda_cap_p(p)), self.psi_p(p))


def _cached(tbl, key, fn):
    store = tbl.__dict__.setdefault("_forms", {})
    if key not in store:
        store[key] = fn()
    return store[key]


def gamma_p(tbl, p):
    return tbl.gamma_p(p)


def lambda_p(tbl, p):
    return tbl.lambda_p(p)


def psi_p(tbl, p):
    return tbl.psi_p(p)


def lambda_cap_p(tbl, p):
    return tbl.lambda_cap_p(p)


def lap_prefactor(p):
    """p p! 2^{p-1} / ((p+1)(p+2)...(2p+1))."""
    return Fraction(p * factorial(p) * 2 ** (p - 1), prod(range(p + 1, 2 * p + 2)))


def restriction_constant(p):
    """p! / ((p+1)...(2p+1))."""
    return Fraction(factorial(p), prod(range(p + 1, 2 * p + 2)))


def polarize(p, args):
    """Graded polarization of tr X^p: Koszul-signed symmetrization of the trace."""
    args = list(args)
    if len(args) != p:
        raise ValueError("polarize(%d) needs %d arguments, got %d" % (p, p, len(args)))
    return graded_symmetrize_trace(args)


def psi_interpolant(tbl: CharTable) -> TPolyMatrix:
    psi, psiT = tbl.psi, tbl.psi.T
    ll = bracket(tbl.lam, tbl.lam)
    return TPolyMatrix([
        psiT.scale(-HALF),
        psi.scale(HALF) + psiT.scale(HALF) + ll,
        ll.scale(-1),
    ])


def q_lambda_psi_t(tbl: CharTable, p: int) -> TPolyForm:
    """Q_p(lambda, Psi(t)) = Qbar_p(lambda, Psi(t), ..., Psi(t)) as a polynomial in t.

    The even arguments Psi(t) commute under the graded symmetrization, so the
    expansion groups t-index choices into multisets weighted by multinomials.
    """
    comps = tbl.psi_t.coeffs
    coeffs = {}
    for choice in combinations_with_replacement(range(len(comps)), p - 1):
        if any(comps[k].is_zero() for k in choice):
            continue
        mult = factorial(p - 1)
        for k in set(choice):
            mult //= factorial(choice.count(k))
        val = polarize(p, [tbl.lam] + [comps[k] for k in choice])
        tpow = sum(choice)
        coeffs[tpow] = coeffs.get(tpow, Form()) + val.scale(mult)
    top = max(coeffs, default=-1)
    return TPolyForm([coeffs.get(k, Form()) for k in range(top + 1)])


def restrict_to_gl(form: Form) -> Form:
    """Quotient killing every generator c^i_J with |J| != 1."""
    return rescale_generators(form, lambda g: 1 if g.family == C and g.r == 1 else 0)


def proportionality(a: Form, b: Form):
    """k with a = k b, or None."""
    if b.is_zero():
        return Fraction(0) if a.is_zero() else None
    mono, cb = next(iter(b.terms.items()))
    k = a.terms.get(mono, Fraction(0)) / cb
    return k if a == b.scale(k) else None


# ---------------------------------------------------------------------------
# structure identities

def dpsi_candidates(tbl):
    """Candidate Omega in d Psi = [lambda, Omega] + [alpha, Psi]."""
    lam, alpha, psi = tbl.lam, tbl.alpha, tbl.psi
    aps = bracket(alpha, psi)
    return {
        "Omega=Psi": bracket(lam, psi) + aps,
        "Omega=Psi^T": bracket(lam, psi.T) + aps,
        "Omega=-Psi": bracket(lam, psi).scale(-1) + aps,
        "Omega=-Psi^T": bracket(lam, psi.T).scale(-1) + aps,
        "Omega=0": aps,
    }


def _residual_size(M):
    return sum(len(e) for e in M.entries())


def verify_structure_identities(tbl: CharTable):
    """Exact residuals of d lambda, d Psi, d Psi^T against their bracket formulas."""
    lam, alpha, psi = tbl.lam, tbl.alpha, tbl.psi
    report = {}
    dla = tbl.dm(lam) - (bracket(alpha, lam) + (psi + psi.T).scale(HALF))
    report["dla"] = _residual_size(dla)
    dpsi = tbl.dm(psi)
    report["dOm"] = {name: _residual_size(dpsi - rhs) for name, rhs in dpsi_candidates(tbl).items()}
    dpsit = tbl.dm(psi.T) - (bracket(lam, psi.T).scale(-1) + bracket(alpha, psi.T))
    report["dOmt"] = _residual_size(dpsit)
    report["dOm_holding"] = sorted(k for k, v in report["dOm"].items() if v == 0)
    report["dpsi_p"] = {p: len(tbl.d(tbl.psi_p(p))) for p in range(1, tbl.n + 1)}
    return report


def pinv_residual(tbl, omega, args):
    """sum_i (-1)^{|omega|(k_1+..+k_{i-1})+1} Qbar(w_1,..,[omega,w_i],..,w_p).

    For odd omega the sign is (-1)^{k_1+..+k_{i-1}+1}; an even
    omega passes the earlier arguments without a sign.
    """
    p = len(args)
    w = omega.degree or 0
    acc = Form()
    shift = 0
    for i, X in enumerate(args):
        new = list(args)
        new[i] = bracket(omega, X)
        term = polarize(p, new)
        acc = acc + (term if (w * shift + 1) % 2 == 0 else -term)
        shift += X.degree or 0
    return acc


def substitution_matrix(tbl, name):
    return {"gamma": tbl.gamma, "lambda": tbl.lam, "alpha": tbl.alpha,
            "Psi": tbl.psi, "Psi^T": tbl.psi.T}[name]


__all__ = [
    "CharTable", "TPolyMatrix", "gamma_p", "lambda_p", "psi_p", "lambda_cap_p",
    "lap_prefactor", "restriction_constant", "polarize", "psi_interpolant",
    "q_lambda_psi_t", "restrict_to_gl", "proportionality", "verify_structure_identities",
    "dpsi_candidates", "pinv_residual", "substitution_matrix",
]
