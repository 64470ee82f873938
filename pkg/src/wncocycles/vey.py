"""
Vey bases of H*(W_n) and of H*(W_n, O(n)) in dimensions > 2n.

General tuples index Gamma_{p_1}..Gamma_{p_l} Psi_{r_1}..Psi_{r_k};
relative tuples index Lambda_{p_1}..Lambda_{p_l} Psi_{r_1}..Psi_{r_k} with
odd p.  The two index conditions state the p_1 / r_1 inequality in
opposite directions, so ``ineq`` selects it explicitly ("le": p_1 <= r_1,
"ge": p_1 >= r_1).  Defaults: "le" for general tuples, "ge" for relative.
"""

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from .dg import Form, wedge

GENERAL, RELATIVE = "general", "relative"
DEFAULT_INEQ = {GENERAL: "le", RELATIVE: "ge"}
MAX_N = 6


@dataclass(frozen=True)
class VeyTuple:
    ps: tuple
    rs: tuple
    relative: bool = False

    @property
    def degree(self):
        return degree_of(self)

    def label(self):
        head = "Lambda" if self.relative else "Gamma"
        return "".join("%s%d" % (head, p) for p in self.ps) + "".join("Psi%d" % r for r in self.rs)

    def __str__(self):
        return self.label()


def degree_of(t: VeyTuple) -> int:
    return 2 * (sum(t.ps) + sum(t.rs)) - len(t.ps)


def is_valid(t: VeyTuple, n: int, ineq: str = None) -> bool:
    variant = RELATIVE if t.relative else GENERAL
    ineq = ineq or DEFAULT_INEQ[variant]
    ps, rs = t.ps, t.rs
    if not ps:
        return False
    if list(ps) != sorted(set(ps)) or ps[0] < 1 or ps[-1] > n:
        return False
    if t.relative and any(p % 2 == 0 for p in ps):
        return False
    if list(rs) != sorted(rs) or (rs and (rs[0] < 1 or rs[-1] > n)):
        return False
    if rs:
        if ineq == "le" and not ps[0] <= rs[0]:
            return False
        if ineq == "ge" and not ps[0] >= rs[0]:
            return False
    return sum(rs) <= n and ps[0] + sum(rs) > n


def _all_tuples(n, variant, ineq):
    relative = variant == RELATIVE
    pool = [p for p in range(1, n + 1) if not relative or p % 2]
    rs_all = [()]
    for k in range(1, n + 1):
        rs_all += [rs for rs in combinations_with_replacement(range(1, n + 1), k) if sum(rs) <= n]
    for l in range(1, len(pool) + 1):
        for ps in combinations(pool, l):
            for rs in rs_all:
                t = VeyTuple(ps, rs, relative)
                if is_valid(t, n, ineq):
                    yield t


def _sort_key(t):
    return (t.ps, t.rs)


def enumerate_basis(n: int, m: int, variant: str = GENERAL, ineq: str = None):
    """All admissible tuples of degree m, in a fixed order."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    ineq = ineq or DEFAULT_INEQ[variant]
    return sorted((t for t in _all_tuples(n, variant, ineq) if t.degree == m), key=_sort_key)


def upper_bound(n, variant):
    if variant == GENERAL:
        return n * (n + 2)
    return n * (n + 3) // 2 if n % 2 == 0 else n * (n + 5) // 2


@dataclass
class DimensionTable:
    n: int
    variant: str
    ineq: str
    counts: dict

    @property
    def bounds(self):
        return 2 * self.n + 1, upper_bound(self.n, self.variant)

    def within_bounds(self):
        lo, hi = self.bounds
        return all(lo <= m <= hi for m, c in self.counts.items() if c)

    def out_of_claimed_range(self):
        """Relative degrees <= 2n, where the relative basis is not claimed."""
        if self.variant != RELATIVE:
            return {}
        return {m: c for m, c in self.counts.items() if m <= 2 * self.n}

    def as_dict(self):
        return {"n": self.n, "variant": self.variant, "ineq": self.ineq,
                "counts": {str(m): c for m, c in sorted(self.counts.items())},
                "bounds": list(self.bounds), "within_bounds": self.within_bounds()}


def dimension_table(n: int, variant: str = GENERAL, ineq: str = None) -> DimensionTable:
    if n > MAX_N:
        raise ValueError("n=%d too large for enumeration (max %d)" % (n, MAX_N))
    if n < 1:
        raise ValueError("n must be >= 1")
    ineq = ineq or DEFAULT_INEQ[variant]
    counts = {}
    for t in _all_tuples(n, variant, ineq):
        counts[t.degree] = counts.get(t.degree, 0) + 1
    return DimensionTable(n, variant, ineq, dict(sorted(counts.items())))


def cocycle_of(t: VeyTuple, tbl) -> Form:
    """Lambda_{p_1}..Lambda_{p_l} Psi_{r_1}..Psi_{r_k}.

    Even p has no transgression here (only odd Lambda_p is built), so
    general tuples with an even p raise ValueError.
    """
    if any(p % 2 == 0 for p in t.ps):
        raise ValueError("no transgression available for even p in %s" % t)
    out = Form.scalar(1)
    for p in t.ps:
        out = wedge(out, tbl.lambda_cap_p(p))
    for r in t.rs:
        out = wedge(out, tbl.psi_p(r))
    return out


__all__ = ["VeyTuple", "degree_of", "is_valid", "enumerate_basis", "dimension_table",
           "DimensionTable", "cocycle_of", "upper_bound", "GENERAL", "RELATIVE", "DEFAULT_INEQ"]
