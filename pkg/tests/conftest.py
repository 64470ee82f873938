from fractions import Fraction

from hypothesis import strategies as st

from wncocycles.dg import Form, cgen
from wncocycles.wn import FormalVectorField


def gens_for(n, max_order):
    out = []
    for i in range(1, n + 1):
        stack = [()]
        while stack:
            J = stack.pop()
            out.append(cgen(i, *J))
            if len(J) < max_order:
                start = J[-1] if J else 1
                stack.extend(J + (j,) for j in range(start, n + 1))
    return sorted(out)


coeffs = st.integers(-3, 3).filter(bool).map(Fraction)


@st.composite
def forms(draw, n=2, max_order=2, max_degree=3, max_terms=4, homogeneous=None):
    pool = gens_for(n, max_order)
    deg = homogeneous if homogeneous is not None else None
    items = []
    for _ in range(draw(st.integers(0, max_terms))):
        d = deg if deg is not None else draw(st.integers(0, max_degree))
        mono = draw(st.lists(st.sampled_from(pool), min_size=d, max_size=d, unique=True))
        items.append((mono, draw(coeffs)))
    return Form.from_terms(items)


@st.composite
def fields(draw, n=1, R=2):
    comps = []
    for _ in range(n):
        comp = {}
        for deg in range(R + 2):
            for e in _exponents(n, deg):
                if draw(st.booleans()):
                    comp[e] = draw(coeffs)
        comps.append(comp)
    return FormalVectorField(n, R, comps)


def _exponents(n, deg):
    if n == 1:
        return [(deg,)]
    out = []
    for k in range(deg + 1):
        out += [(k,) + e for e in _exponents(n - 1, deg - k)]
    return out


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line("criterion %2d: %s  %s" % (k, "PASS" if ok else "FAIL", detail))
