"""
Numerical group cocycles on Diff(R) and Diff+(S^1).

Quadrature is delegated to QUADPACK (scipy.integrate.quad, adaptive
Gauss-Kronrod); ``QuadratureConfig`` is the only knob exposed.  Any
warning QUADPACK raises about convergence becomes a ``QuadratureError``.
"""

import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import dsl
from .conventions import group_mul, running_products
from .dsl import CIRCLE, LINE, DiffeoExpr

TWO_PI = 2 * math.pi


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    @classmethod
    def uniform(cls, tol, max_subdivisions=200):
        return cls(tol, tol, max_subdivisions)


@dataclass
class QuadResult:
    value: float
    error_estimate: float
    subdivisions: int

    def as_dict(self):
        return {"value": self.value, "error_estimate": self.error_estimate,
                "subdivisions": self.subdivisions}


def integrate(fn, a, b, q: QuadratureConfig) -> QuadResult:
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    out = quad(fn, a, b, epsabs=q.abs_tol, epsrel=q.rel_tol, limit=q.max_subdivisions,
               full_output=1)
    if len(out) > 3:
        raise QuadratureError("quadrature on [%g, %g] did not converge: %s" % (a, b, out[3].strip()))
    value, err, info = out[:3]
    return QuadResult(float(value), float(err), int(info["last"]))


def _require(e, domain, name):
    if not isinstance(e, DiffeoExpr):
        raise TypeError("%s must be a DiffeoExpr" % name)
    if e.domain != domain:
        raise ValueError("%s must live on the %s" % (name, domain))


def _check_nonvanishing(fn, a, b, what):
    lo, hi = min(a, b), max(a, b)
    ts = np.linspace(lo, hi, 65)
    vals = np.broadcast_to(np.asarray(fn(ts), dtype=float), ts.shape)
    if not np.all(np.isfinite(vals)) or np.any(vals == 0) or (vals.min() < 0 < vals.max()):
        raise ValueError("%s vanishes or is undefined on [%g, %g]" % (what, lo, hi))


# ---------------------------------------------------------------------------
# Godbillon-Vey

def gv_cocycle_result(f, g, h, x: float, q: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """int_x^{f(x)} log|h'(g(t))| g''(t)/g'(t) dt, with its error estimate."""
    for e, name in ((f, "f"), (g, "g"), (h, "h")):
        _require(e, LINE, name)
    g1, g2, h1 = g.derivative(1), g.derivative(2), h.derivative(1)
    a, b = float(x), float(f(float(x)))
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    _check_nonvanishing(g1, a, b, "g'")
    _check_nonvanishing(lambda t: h1(g(t)), a, b, "h' o g")

    def integrand(t):
        return math.log(abs(h1(g(t)))) * g2(t) / g1(t)

    return integrate(integrand, a, b, q)


def gv_cocycle(f, g, h, x: float, q: QuadratureConfig = QuadratureConfig()) -> float:
    return gv_cocycle_result(f, g, h, x, q).value


def basepoint_difference(f, g, h, x, x2, q: QuadratureConfig = QuadratureConfig()) -> float:
    """c_x - c_x2 (reported only; its coboundary structure is not asserted)."""
    return gv_cocycle(f, g, h, x, q) - gv_cocycle(f, g, h, x2, q)


# ---------------------------------------------------------------------------
# Bott

def bott_cocycle_result(gs, s_partition=(1,), q: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """Flat-circle Bott cocycle for n = 1.

    With gbar_1 = g_1 and gbar_2 = g_2 o g_1 the value is
    int_0^{2 pi} log gbar_1'(t) (log gbar_2')'(t) dt.
    """
    if tuple(s_partition) != (1,):
        raise ValueError("only the n = 1 partition (1,) is available on the circle")
    gs = list(gs)
    if len(gs) != 1 + sum(s_partition):
        raise ValueError("expected %d diffeos, got %d" % (1 + sum(s_partition), len(gs)))
    for k, e in enumerate(gs):
        _require(e, CIRCLE, "g%d" % (k + 1))
    bars = running_products(gs, dsl.compose)
    b1d = bars[0].derivative(1)
    b2d, b2dd = bars[1].derivative(1), bars[1].derivative(2)
    _check_nonvanishing(b1d, 0.0, TWO_PI, "gbar_1'")
    _check_nonvanishing(b2d, 0.0, TWO_PI, "gbar_2'")

    def integrand(t):
        return math.log(b1d(t)) * b2dd(t) / b2d(t)

    return integrate(integrand, 0.0, TWO_PI, q)


def bott_cocycle(gs, s_partition=(1,), q: QuadratureConfig = QuadratureConfig()) -> float:
    return bott_cocycle_result(gs, s_partition, q).value


# ---------------------------------------------------------------------------
# cochains and the coboundary

@dataclass
class GroupCochain:
    arity: int
    evaluator: Callable
    compose: Callable = field(default=dsl.compose)

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError("cochain of arity %d given %d arguments" % (self.arity, len(args)))
        return self.evaluator(*args)


def gv_cochain(x: float, q: QuadratureConfig = QuadratureConfig()) -> GroupCochain:
    return GroupCochain(3, lambda f, g, h: gv_cocycle(f, g, h, x, q))


def bott_cochain(q: QuadratureConfig = QuadratureConfig()) -> GroupCochain:
    return GroupCochain(2, lambda g1, g2: bott_cocycle([g1, g2], (1,), q))


def constant_cochain(p: int, k: float) -> GroupCochain:
    return GroupCochain(p, lambda *args: k)


def coboundary(c: GroupCochain, args) -> float:
    """Nonhomogeneous coboundary with values in R, trivial action."""
    args = list(args)
    p = c.arity
    if len(args) != p + 1:
        raise ValueError("coboundary of a %d-cochain needs %d arguments, got %d" % (p, p + 1, len(args)))
    total = c(*args[1:])
    for i in range(p):
        merged = args[:i] + [group_mul(args[i], args[i + 1], c.compose)] + args[i + 2:]
        total -= (-1) ** i * c(*merged)
    total += (-1) ** (p + 1) * c(*args[:p])
    return total


# ---------------------------------------------------------------------------
# random diffeomorphisms

def _dec(v, digits=4):
    return "%.*f" % (digits, v)


def random_line_diffeo(rng: random.Random) -> DiffeoExpr:
    """x + a sin(x + phi) + b tanh(x) with |a| + |b| < 0.9, so f' >= 0.1."""
    a = rng.uniform(-0.6, 0.6)
    b = rng.uniform(-1, 1) * (0.89 - abs(a))
    phi = rng.uniform(0, 3)
    return dsl.parse("x + %s*sin(x + %s) + %s*tanh(x)" % (_dec(a), _dec(phi), _dec(b)), LINE)


def random_circle_diffeo(rng: random.Random) -> DiffeoExpr:
    """x + a sin(x + phi) + (b/2) sin(2x + psi) with |a| + |b| < 0.9.

    Both perturbations are 2 pi periodic so the lift condition holds,
    and f' >= 1 - |a| - |b| > 0.1.
    """
    a = rng.uniform(-0.6, 0.6)
    b = rng.uniform(-1, 1) * (0.89 - abs(a))
    phi, psi = rng.uniform(0, 3), rng.uniform(0, 3)
    return dsl.parse("x + %s*sin(x + %s) + %s*sin(2*x + %s)/2"
                     % (_dec(a), _dec(phi), _dec(b), _dec(psi)), CIRCLE)


def rotation(theta: float) -> DiffeoExpr:
    sign = "+" if theta >= 0 else "-"
    return dsl.parse("x %s %s" % (sign, _dec(abs(theta), 12)), CIRCLE)


# ---------------------------------------------------------------------------
# JSON jobs

JOB_KEYS = {"cocycle", "diffeos"}


def run_job(job: dict) -> dict:
    """{"cocycle", "diffeos", "basepoint", "tol"} -> {"value", "error_estimate", "subdivisions"}."""
    if isinstance(job, str):
        job = json.loads(job)
    missing = JOB_KEYS - set(job)
    if missing:
        raise ValueError("job is missing %s" % ", ".join(sorted(missing)))
    tol = float(job.get("tol", 1e-10))
    q = QuadratureConfig.uniform(tol, int(job.get("max_subdivisions", 200)))
    kind = job["cocycle"]
    if kind == "gv":
        if len(job["diffeos"]) != 3:
            raise ValueError("gv needs three diffeos")
        f, g, h = (dsl.parse(s, LINE) for s in job["diffeos"])
        res = gv_cocycle_result(f, g, h, float(job.get("basepoint", 0.0)), q)
    elif kind == "bott":
        gs = [dsl.parse(s, CIRCLE) for s in job["diffeos"]]
        res = bott_cocycle_result(gs, tuple(job.get("s_partition", (1,))), q)
    else:
        raise ValueError("unknown cocycle %r" % kind)
    return res.as_dict()


__all__ = [
    "QuadratureConfig", "QuadratureError", "QuadResult", "integrate", "gv_cocycle", "gv_cocycle_result",
    "bott_cocycle", "bott_cocycle_result", "basepoint_difference", "GroupCochain", "gv_cochain",
    "bott_cochain", "constant_cochain", "coboundary", "random_line_diffeo", "random_circle_diffeo",
    "rotation", "run_job",
]
