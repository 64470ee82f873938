"""
Free graded-commutative algebra on odd generators, over the rationals.

A Form is a finite sum of monomials; a monomial is a strictly increasing
tuple of generators.  Every generator has degree 1, so the degree of a
monomial is its length and reordering costs the sign of the permutation.

Textual rendering (also accepted by ``parse_form``)::

    form     := "0" | term (("+" | "-") term)*
    term     := ["-"] [coeff] monomial | ["-"] coeff
    coeff    := INT ["/" INT]
    monomial := gen ("^" gen)*
    gen      := "c[" INT "|" lower "]" | "f[" INT "|" lower "]" | "dx[" INT "]"
    lower    := digits (one index per digit) | INT ("," INT)*   (when n > 9)

e.g. ``-1/6 c[1|11]^c[1|]``.
"""

import re
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, NamedTuple

C, F, DX = 0, 1, 2
FAMILY_NAMES = {C: "c", F: "f", DX: "dx"}


class TruncationError(ValueError):
    pass


class UnknownGeneratorError(KeyError):
    pass


class Gen(NamedTuple):
    """Generator c^i_J, f^i_J or dx^i.

    Field order is the canonical total order: (family, r, upper, lower).
    """
    family: int
    r: int
    upper: int
    lower: tuple

    def __str__(self):
        if self.family == DX:
            return "dx[%d]" % self.upper
        return "%s[%d|%s]" % (FAMILY_NAMES[self.family], self.upper, _lower_str(self.lower))


def _lower_str(lower):
    if all(j < 10 for j in lower):
        return "".join(str(j) for j in lower)
    return ",".join(str(j) for j in lower)


def gen(family, upper, lower=()):
    lower = tuple(sorted(lower))
    if family == DX and lower:
        raise ValueError("dx generators carry no lower indices")
    return Gen(family, len(lower), upper, lower)


def cgen(i, *lower):
    return gen(C, i, lower)


def fgen(i, *lower):
    return gen(F, i, lower)


def dxgen(i):
    return gen(DX, i)


# ---------------------------------------------------------------------------
# monomial arithmetic

def merge(a, b):
    """Wedge two sorted monomials.

    Returns (sign, monomial), or None when a generator repeats.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    if a[-1] < b[0]:
        return 1, a + b
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    inv = 0
    while i < la and j < lb:
        x, y = a[i], b[j]
        if x < y:
            out.append(x)
            i += 1
        elif x == y:
            return None
        else:
            out.append(y)
            inv += la - i
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inv & 1 else 1), tuple(out)


def sort_monomial(gens):
    """Sort a generator list; returns (sign, monomial) or None if it vanishes."""
    gens = list(gens)
    if len(set(gens)) != len(gens):
        return None
    # parity of the sorting permutation via cycle count
    order = sorted(range(len(gens)), key=gens.__getitem__)
    seen = [False] * len(gens)
    parity = 0
    for s in range(len(gens)):
        if seen[s]:
            continue
        k = s
        length = 0
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        parity += length - 1
    return (-1 if parity & 1 else 1), tuple(gens[k] for k in order)


# ---------------------------------------------------------------------------

class Form:
    """Exact rational linear combination of monomials in odd generators.

    Treat instances as immutable.
    """
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: dict monomial -> nonzero Fraction, already normalized
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_terms(cls, items: Iterable) -> "Form":
        """Build from (generator list, coefficient) pairs in any order."""
        acc = {}
        for gens, coeff in items:
            if not coeff:
                continue
            s = sort_monomial(gens)
            if s is None:
                continue
            sign, mono = s
            acc[mono] = acc.get(mono, 0) + sign * Fraction(coeff)
        return cls({k: v for k, v in acc.items() if v})

    @classmethod
    def scalar(cls, value):
        value = Fraction(value)
        return cls({(): value} if value else {})

    @classmethod
    def generator(cls, g, coeff=1):
        return cls({(g,): Fraction(coeff)})

    # -- queries

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def degrees(self):
        return {len(m) for m in self.terms}

    @property
    def degree(self):
        """Homogeneous degree, None for zero or mixed forms."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def homogeneous(self, deg):
        return Form({m: c for m, c in self.terms.items() if len(m) == deg})

    def generators(self):
        return {g for m in self.terms for g in m}

    def max_order(self):
        return max((g.r for g in self.generators()), default=-1)

    def coefficient(self, gens):
        s = sort_monomial(gens)
        if s is None:
            return Fraction(0)
        sign, mono = s
        return sign * self.terms.get(mono, Fraction(0))

    def items(self):
        return sorted(self.terms.items())

    # -- arithmetic

    def __eq__(self, other):
        if isinstance(other, Form):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Form.scalar(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, Form):
            if isinstance(other, (int, Fraction)):
                other = Form.scalar(other)
            else:
                return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return Form(acc)

    __radd__ = __add__

    def __neg__(self):
        return Form({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k):
        k = Fraction(k)
        if not k:
            return Form()
        return Form({m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, k):
        return self.scale(1 / Fraction(k))

    def __repr__(self):
        return "Form(%r)" % render(self)

    def __str__(self):
        return render(self)


def wedge(a: Form, b: Form) -> Form:
    if not a.terms or not b.terms:
        return Form()
    acc = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = merge(ma, mb)
            if r is None:
                continue
            sign, m = r
            v = acc.get(m, 0) + (ca * cb if sign > 0 else -ca * cb)
            if v:
                acc[m] = v
            else:
                del acc[m]
    return Form(acc)


def wedge_all(forms, unit=None):
    out = Form.scalar(1) if unit is None else unit
    for f in forms:
        out = wedge(out, f)
    return out


def normalize(form: Form) -> Form:
    """Re-canonicalize a Form (sort, drop zeros)."""
    return Form.from_terms((m, c) for m, c in form.terms.items())


def apply_antiderivation(table: Mapping, a: Form) -> Form:
    """Extend a degree-1 table on generators to an antiderivation.

    Missing generators raise UnknownGeneratorError; lookups may also raise
    TruncationError when the table is a truncated differential.
    """
    acc = {}
    for mono, coeff in a.terms.items():
        for k, g in enumerate(mono):
            try:
                dg = table[g]
            except KeyError:
                raise UnknownGeneratorError("unknown generator %s" % (g,)) from None
            if not dg.terms:
                continue
            prefix, suffix = mono[:k], mono[k + 1:]
            base = -coeff if k & 1 else coeff
            for m2, c2 in dg.terms.items():
                r1 = merge(prefix, m2)
                if r1 is None:
                    continue
                r2 = merge(r1[1], suffix)
                if r2 is None:
                    continue
                v = base * c2
                if r1[0] * r2[0] < 0:
                    v = -v
                m = r2[1]
                v = acc.get(m, 0) + v
                if v:
                    acc[m] = v
                else:
                    del acc[m]
    return Form(acc)


def substitute(form: Form, image) -> Form:
    """Algebra morphism determined by ``image(gen) -> Form`` on generators."""
    cache = {}

    def img(g):
        if g not in cache:
            cache[g] = image(g)
        return cache[g]

    out = Form()
    for mono, coeff in form.terms.items():
        term = Form.scalar(coeff)
        for g in mono:
            term = wedge(term, img(g))
            if not term.terms:
                break
        out = out + term
    return out


def rescale_generators(form: Form, weight) -> Form:
    """Diagonal substitution g -> weight(g) * g."""
    acc = {}
    for mono, coeff in form.terms.items():
        w = coeff
        for g in mono:
            w *= weight(g)
        if w:
            acc[mono] = w
    return Form(acc)


# ---------------------------------------------------------------------------
# rendering

def render(form: Form) -> str:
    if not form.terms:
        return "0"
    parts = []
    for mono, coeff in form.items():
        neg = coeff < 0
        mag = -coeff if neg else coeff
        body = "^".join(str(g) for g in mono)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = "%s %s" % (mag, body)
        if not parts:
            parts.append("-" + text if neg else text)
        else:
            parts.append(("- " if neg else "+ ") + text)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>(?:c|f)\[\d+\|[\d,]*\]|dx\[\d+\])|(?P<op>[-+^]))")
_GEN = re.compile(r"(c|f|dx)\[(\d+)(?:\|([\d,]*))?\]")


def _parse_gen(text):
    fam, upper, lower = _GEN.fullmatch(text).groups()
    if fam == "dx":
        return dxgen(int(upper))
    if lower is None:
        lower = ""
    if "," in lower:
        idx = [int(s) for s in lower.split(",") if s]
    else:
        idx = [int(ch) for ch in lower]
    return gen(C if fam == "c" else F, int(upper), idx)


def parse_form(text: str) -> Form:
    text = text.strip()
    if text == "0":
        return Form()
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse form at position %d: %r" % (pos, text[pos:pos + 10]))
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    items = []
    sign = 1
    coeff = None
    gens = []
    expect_gen = False

    def flush():
        if coeff is None and not gens:
            raise ValueError("empty term in %r" % text)
        items.append((gens, sign * (coeff if coeff is not None else Fraction(1))))

    i = 0
    started = False
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "op" and val in "+-" and not expect_gen:
            if started:
                flush()
            sign = -1 if val == "-" else 1
            coeff, gens, started = None, [], True
        elif kind == "num":
            if gens or coeff is not None:
                raise ValueError("misplaced coefficient in %r" % text)
            coeff = Fraction(val)
            started = True
        elif kind == "gen":
            gens.append(_parse_gen(val))
            expect_gen = False
            started = True
        elif kind == "op" and val == "^":
            if not gens:
                raise ValueError("dangling '^' in %r" % text)
            expect_gen = True
        else:
            raise ValueError("unexpected token %r in %r" % (val, text))
        i += 1
    if expect_gen:
        raise ValueError("dangling '^' in %r" % text)
    flush()
    return Form.from_terms(items)


# ---------------------------------------------------------------------------
# matrices of forms

class MatrixForm:
    """n x n matrix of Forms."""
    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.n = n
        self.rows = rows

    @classmethod
    def zero(cls, n):
        return cls([[Form() for _ in range(n)] for _ in range(n)])

    @classmethod
    def build(cls, n, entry):
        """entry(i, j) with 1-based indices."""
        return cls([[entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i - 1][j - 1]

    def entries(self):
        return [e for r in self.rows for e in r]

    @property
    def degree(self):
        ds = set()
        for e in self.entries():
            ds |= e.degrees()
        if len(ds) > 1:
            raise ValueError("matrix entries have mixed degrees %s" % sorted(ds))
        return ds.pop() if ds else None

    def is_zero(self):
        return all(e.is_zero() for e in self.entries())

    def map(self, fn):
        return MatrixForm([[fn(e) for e in r] for r in self.rows])

    @property
    def T(self):
        return MatrixForm([[self.rows[j][i] for j in range(self.n)] for i in range(self.n)])

    def _check(self, other):
        if not isinstance(other, MatrixForm):
            raise TypeError("expected MatrixForm")
        if other.n != self.n:
            raise ValueError("dimension mismatch: %d vs %d" % (self.n, other.n))

    def __add__(self, other):
        self._check(other)
        return MatrixForm([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        return MatrixForm([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda e: -e)

    def scale(self, k):
        return self.map(lambda e: e.scale(k))

    def __mul__(self, other):
        if isinstance(other, MatrixForm):
            return matrix_wedge(self, other)
        return self.scale(other)

    def __rmul__(self, k):
        return self.scale(k)

    def __eq__(self, other):
        return isinstance(other, MatrixForm) and self.rows == other.rows

    __hash__ = None

    def __repr__(self):
        return "MatrixForm(%s)" % ", ".join(
            "[%s]" % ", ".join(render(e) for e in r) for r in self.rows)


def matrix_wedge(A: MatrixForm, B: MatrixForm) -> MatrixForm:
    A._check(B)
    n = A.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Form()
            for k in range(n):
                a, b = A.rows[i][k], B.rows[k][j]
                if a.terms and b.terms:
                    acc = acc + wedge(a, b)
            row.append(acc)
        rows.append(row)
    return MatrixForm(rows)


def matrix_power(A: MatrixForm, k: int) -> MatrixForm:
    if k < 1:
        raise ValueError("power must be >= 1")
    out = A
    for _ in range(k - 1):
        out = matrix_wedge(out, A)
    return out


def _deg(X):
    d = X.degree
    return 0 if d is None else d


def bracket(A: MatrixForm, B: MatrixForm) -> MatrixForm:
    """Graded commutator A^B - (-1)^{|A||B|} B^A."""
    A._check(B)
    ab = matrix_wedge(A, B)
    ba = matrix_wedge(B, A)
    if (_deg(A) * _deg(B)) & 1:
        return ab + ba
    return ab - ba


def trace(A: MatrixForm) -> Form:
    out = Form()
    for i in range(A.n):
        out = out + A.rows[i][i]
    return out


def koszul_sign(degrees, order):
    """Sign of moving graded objects of the given degrees into ``order``."""
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and (degrees[order[a]] * degrees[order[b]]) & 1:
                sign = -sign
    return sign


def graded_symmetrize_trace(args):
    """(1/p!) sum over permutations of Koszul-signed tr(X_s1 ... X_sp)."""
    p = len(args)
    degs = [_deg(X) for X in args]
    acc = Form()
    count = 0
    for order in permutations(range(p)):
        count += 1
        prod = args[order[0]]
        for k in order[1:]:
            prod = matrix_wedge(prod, args[k])
        t = trace(prod)
        if koszul_sign(degs, order) < 0:
            t = -t
        acc = acc + t
    return acc.scale(Fraction(1, count))


# ---------------------------------------------------------------------------
# polynomials in a formal parameter t

class TPolyForm:
    """sum_k coeffs[k] t^k with Form coefficients."""
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    @property
    def tdegree(self):
        return len(self.coeffs) - 1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Form()] * (n - len(self.coeffs))
        b = other.coeffs + [Form()] * (n - len(other.coeffs))
        return TPolyForm([x + y for x, y in zip(a, b)])

    def at(self, t):
        t = Fraction(t)
        out = Form()
        for k, c in enumerate(self.coeffs):
            out = out + c.scale(t ** k)
        return out

    def __eq__(self, other):
        return isinstance(other, TPolyForm) and self.coeffs == other.coeffs

    __hash__ = None


def integrate_t(P: TPolyForm) -> Form:
    """Exact integral over t in [0, 1]."""
    out = Form()
    for k, c in enumerate(P.coeffs):
        out = out + c.scale(Fraction(1, k + 1))
    return out
