"""
A small expression language for diffeomorphisms of the line and circle.

Grammar (EBNF, whitespace ignored)::

    expr   = term { ("+" | "-") term } ;
    term   = unary { ("*" | "/") unary } ;
    unary  = "-" unary | power ;
    power  = atom [ "^" [ "-" ] INT ] ;
    atom   = NUMBER | "x" | "pi" | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC   = "sin" | "cos" | "exp" | "log" | "tanh" | "atan" ;
    NUMBER = DIGITS [ "." DIGITS ] | "." DIGITS ;

Precedence is therefore ^ over unary minus over * / over + -, all binary
operators left-associative.  Circle maps are given by their lifts, which
must satisfy f(x + 2 pi) = f(x) + 2 pi.
"""

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

FUNCS = ("sin", "cos", "exp", "log", "tanh", "atan")
LINE, CIRCLE = "line", "circle"
TWO_PI = 2 * np.pi


class DSLSyntaxError(ValueError):
    def __init__(self, msg, pos):
        super().__init__("%s at position %d" % (msg, pos))
        self.pos = pos


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Neg:
    a: object


@dataclass(frozen=True)
class Add:
    a: object
    b: object


@dataclass(frozen=True)
class Sub:
    a: object
    b: object


@dataclass(frozen=True)
class Mul:
    a: object
    b: object


@dataclass(frozen=True)
class Div:
    a: object
    b: object


@dataclass(frozen=True)
class Pow:
    a: object
    k: int


@dataclass(frozen=True)
class Func:
    name: str
    a: object


ZERO, ONE, X = Num(Fraction(0)), Num(Fraction(1)), Var()

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(node):
    return _PREC.get(type(node), 5)


# ---------------------------------------------------------------------------
# parsing

_TOKENS = re.compile(r"\s*(?:(?P<num>\d+\.?\d*|\.\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def _tokenize(src):
    pos = 0
    out = []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKENS.match(src, pos)
        if not m:
            raise DSLSyntaxError("unexpected character %r" % src[pos], pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        kind, v, pos = self.take()
        if v != val:
            raise DSLSyntaxError("expected %r, found %r" % (val, v or "end of input"), pos)

    def parse(self):
        node = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise DSLSyntaxError("unexpected %r" % v, pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            kind, v, pos = self.take()
            if kind != "num" or not v.isdigit():
                raise DSLSyntaxError("exponent must be an integer", pos)
            return Pow(base, sign * int(v))
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return Num(Fraction(v))
        if kind == "name":
            if v == "x":
                return X
            if v == "pi":
                return Pi()
            if v in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(v, arg)
            raise DSLSyntaxError("unknown identifier %r" % v, pos)
        if v == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise DSLSyntaxError("unexpected %r" % (v or "end of input"), pos)


def parse_ast(src: str):
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# rendering

def _num_str(v: Fraction):
    if v.denominator == 1:
        return str(v.numerator)
    with localcontext() as ctx:
        ctx.prec = 100
        d = Decimal(v.numerator) / Decimal(v.denominator)
    s = format(d.normalize(), "f")
    if Fraction(s) != v:
        raise ValueError("number %s has no finite decimal form" % v)
    return s


def render_ast(node) -> str:
    t = type(node)
    if t is Num:
        if node.value < 0:
            return "-" + _num_str(-node.value)
        return _num_str(node.value)
    if t is Var:
        return "x"
    if t is Pi:
        return "pi"
    if t is Func:
        return "%s(%s)" % (node.name, render_ast(node.a))
    if t is Neg:
        inner = render_ast(node.a)
        if _prec(node.a) < 3 or (type(node.a) is Num and node.a.value < 0):
            inner = "(%s)" % inner
        return "-" + inner
    if t is Pow:
        base = render_ast(node.a)
        if _prec(node.a) < 5 or (type(node.a) is Num and node.a.value < 0):
            base = "(%s)" % base
        return "%s^%d" % (base, node.k)
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[t]
    p = _prec(node)
    left, right = render_ast(node.a), render_ast(node.b)
    if _prec(node.a) < p:
        left = "(%s)" % left
    if _prec(node.b) <= p:
        right = "(%s)" % right
    sep = " %s " % op if p == 1 else op
    return left + sep + right


# ---------------------------------------------------------------------------
# simplifying constructors

def _is_num(n, v=None):
    return type(n) is Num and (v is None or n.value == v)


def _decimal_ok(v: Fraction):
    q = v.denominator
    for p in (2, 5):
        while q % p == 0:
            q //= p
    return q == 1


def num(v):
    v = Fraction(v)
    return Neg(Num(-v)) if v < 0 else Num(v)


def _const(node):
    """Exact value of a folded constant, or None."""
    if type(node) is Num:
        return node.value
    if type(node) is Neg and type(node.a) is Num:
        return -node.a.value
    return None


def neg(a):
    ca = _const(a)
    if ca is not None:
        return num(-ca)
    if type(a) is Neg:
        return a.a
    return Neg(a)


def add(a, b):
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return num(ca + cb)
    if ca == 0:
        return b
    if cb == 0:
        return a
    if type(b) is Neg:
        return sub(a, b.a)
    return Add(a, b)


def sub(a, b):
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return num(ca - cb)
    if cb == 0:
        return a
    if ca == 0:
        return neg(b)
    if type(b) is Neg:
        return add(a, b.a)
    return Sub(a, b)


def mul(a, b):
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return num(ca * cb)
    if ca == 0 or cb == 0:
        return ZERO
    if ca == 1:
        return b
    if cb == 1:
        return a
    if ca == -1:
        return neg(b)
    if cb == -1:
        return neg(a)
    if type(a) is Neg:
        return neg(mul(a.a, b))
    if type(b) is Neg:
        return neg(mul(a, b.a))
    return Mul(a, b)


def div(a, b):
    ca, cb = _const(a), _const(b)
    if cb == 0:
        raise ZeroDivisionError("division by the constant 0")
    if ca == 0:
        return ZERO
    if cb == 1:
        return a
    if ca is not None and cb is not None and _decimal_ok(ca / cb):
        return num(ca / cb)
    return Div(a, b)


def power(a, k):
    if k == 0:
        return ONE
    if k == 1:
        return a
    ca = _const(a)
    if ca is not None and ca != 0 and _decimal_ok(ca ** k):
        return num(ca ** k)
    return Pow(a, k)


def func(name, a):
    return Func(name, a)


# ---------------------------------------------------------------------------
# calculus

@lru_cache(maxsize=None)
def diff_ast(node):
    t = type(node)
    if t in (Num, Pi):
        return ZERO
    if t is Var:
        return ONE
    if t is Neg:
        return neg(diff_ast(node.a))
    if t is Add:
        return add(diff_ast(node.a), diff_ast(node.b))
    if t is Sub:
        return sub(diff_ast(node.a), diff_ast(node.b))
    if t is Mul:
        return add(mul(diff_ast(node.a), node.b), mul(node.a, diff_ast(node.b)))
    if t is Div:
        da, db = diff_ast(node.a), diff_ast(node.b)
        return div(sub(mul(da, node.b), mul(node.a, db)), power(node.b, 2))
    if t is Pow:
        return mul(mul(num(node.k), power(node.a, node.k - 1)), diff_ast(node.a))
    if t is Func:
        u, du = node.a, diff_ast(node.a)
        if _const(du) == 0:
            return ZERO
        name = node.name
        if name == "sin":
            outer = func("cos", u)
        elif name == "cos":
            outer = neg(func("sin", u))
        elif name == "exp":
            outer = func("exp", u)
        elif name == "log":
            return div(du, u)
        elif name == "tanh":
            outer = sub(ONE, power(func("tanh", u), 2))
        elif name == "atan":
            return div(du, add(ONE, power(u, 2)))
        else:
            raise ValueError("unknown function %r" % name)
        return mul(outer, du)
    raise TypeError("not an expression node: %r" % (node,))


def substitute_x(node, repl):
    t = type(node)
    if t is Var:
        return repl
    if t in (Num, Pi):
        return node
    if t is Neg:
        return Neg(substitute_x(node.a, repl))
    if t is Pow:
        return Pow(substitute_x(node.a, repl), node.k)
    if t is Func:
        return Func(node.name, substitute_x(node.a, repl))
    return t(substitute_x(node.a, repl), substitute_x(node.b, repl))


def _py(node, mod):
    t = type(node)
    if t is Num:
        return repr(float(node.value))
    if t is Var:
        return "x"
    if t is Pi:
        return "_m.pi"
    if t is Neg:
        return "(-%s)" % _py(node.a, mod)
    if t is Pow:
        base = _py(node.a, mod)
        return "(%s**%d)" % (base, node.k) if node.k >= 0 else "(1.0/%s**%d)" % (base, -node.k)
    if t is Func:
        fn = node.name
        if mod is np and fn == "atan":
            fn = "arctan"
        return "_m.%s(%s)" % (fn, _py(node.a, mod))
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[t]
    return "(%s %s %s)" % (_py(node.a, mod), op, _py(node.b, mod))


@lru_cache(maxsize=None)
def compile_ast(node, scalar=False):
    """Python callable for ``node``; numpy-vectorised, or plain ``math`` when scalar."""
    mod = math if scalar else np
    return eval("lambda x: " + _py(node, mod), {"_m": mod})


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffeoExpr:
    ast: object
    domain: str = LINE

    @cached_property
    def _scalar_fn(self):
        return compile_ast(self.ast, True)

    @cached_property
    def _vector_fn(self):
        return compile_ast(self.ast)

    def __call__(self, x):
        if isinstance(x, (int, float)):
            try:
                return float(self._scalar_fn(x))
            except (ValueError, ZeroDivisionError, OverflowError):
                return math.nan
        with np.errstate(all="ignore"):
            return self._vector_fn(x)

    def derivative(self, k=1):
        return derivative(self, k)

    def render(self):
        return render_ast(self.ast)

    def __str__(self):
        return self.render()


def parse(src: str, domain: str = LINE) -> DiffeoExpr:
    if domain not in (LINE, CIRCLE):
        raise ValueError("domain must be 'line' or 'circle'")
    return DiffeoExpr(parse_ast(src), domain)


def render(e: DiffeoExpr) -> str:
    return e.render()


def derivative(e: DiffeoExpr, k: int = 1) -> DiffeoExpr:
    if k not in (1, 2, 3):
        raise ValueError("derivative order must be 1, 2 or 3")
    node = e.ast
    for _ in range(k):
        node = diff_ast(node)
    return DiffeoExpr(node, e.domain)


def compose(outer: DiffeoExpr, inner: DiffeoExpr) -> DiffeoExpr:
    """outer o inner."""
    if outer.domain != inner.domain:
        raise ValueError("cannot compose maps on different domains")
    return DiffeoExpr(substitute_x(outer.ast, inner.ast), outer.domain)


def identity(domain=LINE):
    return DiffeoExpr(X, domain)


# ---------------------------------------------------------------------------
# random expressions

def random_ast(rng, depth=3):
    """Random smooth expression, finite on the whole line.

    Divisions and logarithms only see arguments bounded away from zero.
    """
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.6:
            return X
        return Num(Fraction(rng.randint(1, 40), 10))
    a = random_ast(rng, depth - 1)
    k = rng.randrange(9)
    if k == 0:
        return Add(a, random_ast(rng, depth - 1))
    if k == 1:
        return Sub(a, random_ast(rng, depth - 1))
    if k == 2:
        return Mul(a, random_ast(rng, depth - 1))
    if k == 3:
        return Div(a, Add(Num(Fraction(2)), Func("cos", random_ast(rng, depth - 1))))
    if k == 4:
        return Pow(Func("tanh", a), rng.randint(2, 3))
    if k == 5:
        return Func("log", Add(Num(Fraction(1)), Pow(a, 2)))
    if k == 6:
        return Func("exp", Func("sin", a))
    if k == 7:
        return Neg(Func("atan", a))
    return Func(rng.choice(("sin", "cos", "tanh", "atan")), a)


def random_expression(rng, depth=3, domain=LINE):
    return DiffeoExpr(random_ast(rng, depth), domain)


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    domain: str
    grid: int
    window: tuple
    monotone: bool
    min_derivative: float
    equivariance_residual: float = None

    @property
    def valid(self):
        if not self.monotone:
            return False
        if self.domain == CIRCLE:
            return self.equivariance_residual is not None and self.equivariance_residual < 1e-9
        return True

    def as_dict(self):
        return {"domain": self.domain, "grid": self.grid, "window": list(self.window),
                "monotone": self.monotone, "min_derivative": self.min_derivative,
                "equivariance_residual": self.equivariance_residual, "valid": self.valid}


MONOTONE_FLOOR = 1e-8


def _refined_min(fp, xs, vals):
    """Polish the smallest sampled value of f' with a bounded 1-D search."""
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    best = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda t: fp(float(t)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if np.isfinite(res.fun):
            best = min(best, float(res.fun))
    return best


def validate(e: DiffeoExpr, grid: int = 256, window=(-10.0, 10.0)) -> ValidationReport:
    """Sampled check of f' > 0 (and of the lift condition on the circle).

    f' is sampled on ``grid`` points, its smallest sample is polished by a
    bounded local search, and monotonicity means the result exceeds
    MONOTONE_FLOOR.  This is evidence, not a certificate.
    """
    if grid < 64:
        raise ValueError("grid must be >= 64")
    if e.domain == CIRCLE:
        window = (0.0, float(TWO_PI))
        xs = np.linspace(0.0, TWO_PI, grid + 1)
    else:
        xs = np.linspace(window[0], window[1], grid)
    fp = derivative(e, 1)
    vals = np.broadcast_to(np.asarray(fp(xs), dtype=float), xs.shape)
    finite = bool(np.all(np.isfinite(vals)))
    mind = _refined_min(fp, xs, vals) if finite else float("nan")
    report = ValidationReport(e.domain, grid, tuple(window), finite and mind > MONOTONE_FLOOR, mind)
    if e.domain == CIRCLE:
        cell = xs[:-1]
        shift = np.broadcast_to(np.asarray(e(cell + TWO_PI) - e(cell) - TWO_PI, dtype=float), cell.shape)
        report.equivariance_residual = float(np.max(np.abs(shift)))
    return report


__all__ = [
    "DiffeoExpr", "parse", "render", "derivative", "compose", "identity", "validate", "random_expression",
    "ValidationReport", "DSLSyntaxError", "parse_ast", "render_ast", "diff_ast",
    "LINE", "CIRCLE", "Num", "Var", "Pi", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Func",
]
