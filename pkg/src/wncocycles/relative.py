"""
Relative cochains with respect to GL_n and O(n).

A cochain is relative to a linear subalgebra when contraction with every
basis field and the Lie derivative along it both vanish.  Only the Lie
algebra is checked; the extra component of O(n) is probed separately by
the coordinate reflections in ``reflect``.
"""

from dataclasses import dataclass

from .dg import Form, rescale_generators
from .wn import FormalVectorField, WnComplex, pair


@dataclass(frozen=True)
class LinearFieldBasis:
    kind: str  # "gl" or "so"
    n: int
    R: int = 3

    @property
    def elements(self):
        n = self.n
        out = []
        if self.kind == "gl":
            # E_ab = x^b d_a
            for a in range(n):
                for b in range(n):
                    M = [[0] * n for _ in range(n)]
                    M[a][b] = 1
                    out.append(FormalVectorField.linear(n, self.R, M))
        elif self.kind == "so":
            # A_ab = x^b d_a - x^a d_b
            for a in range(n):
                for b in range(a + 1, n):
                    M = [[0] * n for _ in range(n)]
                    M[a][b] = 1
                    M[b][a] = -1
                    out.append(FormalVectorField.linear(n, self.R, M))
        else:
            raise ValueError("unknown basis kind %r" % self.kind)
        return out

    def __len__(self):
        return self.n * self.n if self.kind == "gl" else self.n * (self.n - 1) // 2


def contract(c: Form, X: FormalVectorField) -> Form:
    """Interior product: g_1..g_q -> sum_k (-1)^{k-1} g_k(X) g_1..^g_k..g_q."""
    acc = {}
    for mono, coeff in c.terms.items():
        for k, g in enumerate(mono):
            v = pair(g, X)
            if not v:
                continue
            m = mono[:k] + mono[k + 1:]
            w = coeff * v
            if k & 1:
                w = -w
            w = acc.get(m, 0) + w
            if w:
                acc[m] = w
            else:
                del acc[m]
    return Form(acc)


def lie_derivative(c: Form, X: FormalVectorField, cx: WnComplex) -> Form:
    """Cartan formula L_X = i_X d + d i_X."""
    return contract(cx.d(c), X) + cx.d(contract(c, X))


def is_relative(c: Form, basis: LinearFieldBasis, cx: WnComplex = None):
    """(ok, report): horizontality and invariance along every basis field."""
    if cx is None:
        cx = WnComplex(basis.n, max(c.max_order() + 1, 1))
    report = {"kind": basis.kind, "n": basis.n, "horizontal": [], "invariant": []}
    for X in basis.elements:
        report["horizontal"].append(len(contract(c, X)))
        report["invariant"].append(len(lie_derivative(c, X, cx)))
    ok = not any(report["horizontal"]) and not any(report["invariant"])
    report["ok"] = ok
    return ok, report


def reflect(form: Form, axis: int) -> Form:
    """Pull back along x^axis -> -x^axis.

    c^i_J picks up s_i prod_j s_j with s the diagonal of the reflection.
    """
    def weight(g):
        k = (g.upper == axis) + sum(1 for j in g.lower if j == axis)
        return -1 if k & 1 else 1
    return rescale_generators(form, weight)


def reflection_invariant(form: Form, n: int) -> bool:
    """Invariance under every coordinate reflection (the non-identity component of O(n))."""
    return all(reflect(form, a) == form for a in range(1, n + 1))


def is_o_relative(c: Form, n: int, cx: WnComplex = None):
    """so(n)-relativity plus reflection invariance."""
    ok, report = is_relative(c, LinearFieldBasis("so", n), cx)
    refl = reflection_invariant(c, n)
    report["reflection_invariant"] = refl
    report["ok"] = ok and refl
    return ok and refl, report


__all__ = ["LinearFieldBasis", "contract", "lie_derivative", "is_relative", "reflect",
           "reflection_invariant", "is_o_relative"]
