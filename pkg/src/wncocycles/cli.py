"""
Command-line front end.

    wncocycles check d2 --n N --order R
    wncocycles classes --n N
    wncocycles vey --n N [--ineq le|ge] [--variant general|relative|both]
    wncocycles gv --f E --g E --h E --x X
    wncocycles bott --g1 E --g2 E
    wncocycles verify gv-local
    wncocycles suite
    wncocycles job FILE

``--json`` prints the report as JSON (schema ``REPORT_SCHEMA``).  Exit
status is 0 when every check passes, 1 when one fails and 2 on bad usage.
The thread count for batched work comes from $WNCOCYCLES_THREADS.
"""

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import charforms, cocycles, dsl, jets, relative, vey, wn
from .dsl import DSLSyntaxError

REPORT_SCHEMA = "wncocycles.report/1"
THREADS_ENV = "WNCOCYCLES_THREADS"
MAX_N, MAX_ORDER = 3, 4


class UsageError(Exception):
    pass


def threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise UsageError("%s must be an integer" % THREADS_ENV)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class Check:
    name: str
    status: str  # pass | fail | value
    value: object = None
    residual: object = None

    def as_dict(self):
        return {"name": self.name, "status": self.status, "value": _jsonable(self.value),
                "residual": _jsonable(self.residual)}


@dataclass
class Report:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    timing: float = 0.0

    def check(self, name, ok, value=None, residual=None):
        self.checks.append(Check(name, "pass" if ok else "fail", value, residual))

    def value(self, name, value, residual=None):
        self.checks.append(Check(name, "value", value, residual))

    def merge(self, other, prefix):
        for c in other.checks:
            self.checks.append(Check("%s/%s" % (prefix, c.name), c.status, c.value, c.residual))
        for k, v in other.tables.items():
            self.tables["%s/%s" % (prefix, k)] = v

    @property
    def ok(self):
        return all(c.status != "fail" for c in self.checks)

    def as_dict(self):
        return {"schema": REPORT_SCHEMA, "command": self.command, "config": _jsonable(self.config),
                "ok": self.ok, "checks": [c.as_dict() for c in self.checks],
                "tables": _jsonable(self.tables), "timing": round(self.timing, 3)}

    def render(self):
        lines = ["%s  %s" % (self.command, " ".join("%s=%s" % kv for kv in self.config.items()))]
        width = max([len(c.name) for c in self.checks] + [10])
        for c in self.checks:
            extra = ""
            if c.value is not None:
                extra += "  %s" % _fmt(c.value)
            if c.residual is not None:
                extra += "  residual=%s" % _fmt(c.residual)
            lines.append("  %-*s  %-5s%s" % (width, c.name, c.status.upper(), extra))
        for name, tbl in self.tables.items():
            lines.append("  table %s" % name)
            if isinstance(tbl, dict) and "counts" in tbl:
                lines.append("    %6s %6s" % ("degree", "count"))
                for m, k in tbl["counts"].items():
                    lines.append("    %6s %6s" % (m, k))
            else:
                lines.append("    %s" % json.dumps(_jsonable(tbl)))
        lines.append("  %s in %.2fs" % ("OK" if self.ok else "FAILED", self.timing))
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return "%.3e" % v
    if isinstance(v, (dict, list)):
        return json.dumps(_jsonable(v))
    return str(v)


def _limits(args, n, order=None):
    over = n > MAX_N or (order is not None and order > MAX_ORDER)
    if over and not args.force:
        raise UsageError("n <= %d and order <= %d by default; pass --force to override" % (MAX_N, MAX_ORDER))
    if over:
        print("warning: sizes beyond n=%d, R=%d grow combinatorially" % (MAX_N, MAX_ORDER), file=sys.stderr)


# ---------------------------------------------------------------------------
# commands

def cmd_d2(n, order):
    rep = Report("check d2", {"n": n, "order": order})
    cx = wn.WnComplex(n, order + 1)
    bad = wn.d_squared_residuals(cx, max_order=order)
    rep.check("d2 on generators", not bad, len(cx.generators(order)), len(bad))
    bad = wn.d_squared_residuals(cx, max_order=order, family=wn.F)
    rep.check("D2 on formal forms", not bad, None, len(bad))
    bad = wn.mu_chain_residuals(cx, max_order=order)
    rep.check("mu chain map", not bad, None, len(bad))
    return rep


def cmd_oracle(n, cases=100, seed=0, R=3):
    rep = Report("check oracle", {"n": n, "cases": cases, "seed": seed})
    rng = random.Random(seed)
    cx = wn.WnComplex(n, R)
    mismatches = 0
    for _ in range(cases):
        q = rng.randint(1, 3)
        c = wn.random_cochain(rng, n, q, R - 1)
        fields = [wn.random_field(rng, n, R) for _ in range(q + 1)]
        if wn.evaluate_cochain(cx.d(c), fields) != wn.ce_differential_oracle(c, fields):
            mismatches += 1
    rep.check("d vs CE oracle", mismatches == 0, cases, mismatches)
    return rep


def cmd_classes(n):
    rep = Report("classes", {"n": n})
    tbl = charforms.CharTable(n, 3)
    cx = wn.WnComplex(n, 3)
    ids = charforms.verify_structure_identities(tbl)
    rep.check("d lambda identity", ids["dla"] == 0, None, ids["dla"])
    rep.check("d Psi^T identity", ids["dOmt"] == 0, None, ids["dOmt"])
    rep.check("d Psi identity", bool(ids["dOm_holding"]), ids["dOm_holding"])
    for p in range(1, n + 1):
        rep.check("d Psi_%d = 0" % p, tbl.d(tbl.psi_p(p)).is_zero())
        ok, _ = relative.is_relative(tbl.psi_p(p), relative.LinearFieldBasis("gl", n), cx)
        rep.check("Psi_%d gl-relative" % p, ok)
        if p % 2 == 0:
            rep.check("lambda_%d = 0" % p, tbl.lambda_p(p).is_zero())
    for p in range(1, n + 1, 2):
        L = tbl.lambda_cap_p(p)
        k = tbl.kappa(p)
        rep.check("d Lambda_%d = kappa Psi_%d" % (p, p), k is not None and k != 0, k)
        ratio = charforms.proportionality(charforms.restrict_to_gl(L), tbl.lambda_p(p))
        want = charforms.restriction_constant(p)
        rep.check("Lambda_%d on gl = %s lambda_%d" % (p, want, p), ratio == want, ratio)
        if n >= 2:
            ok, _ = relative.is_o_relative(L, n, cx)
            rep.check("Lambda_%d O(%d)-relative" % (p, n), ok)
        else:
            rep.check("Lambda_%d sign flip" % p, relative.reflection_invariant(L, 1))
    if n <= 2:
        seen = set()
        for iq in ("le", "ge"):
            for m in range(2 * n + 1, vey.upper_bound(n, vey.RELATIVE) + 1):
                for t in vey.enumerate_basis(n, m, vey.RELATIVE, iq):
                    if t in seen:
                        continue
                    seen.add(t)
                    c = vey.cocycle_of(t, tbl)
                    ok, _ = relative.is_o_relative(c, n, cx)
                    rep.check("%s closed, O(%d)-relative" % (t.label(), n), ok and tbl.d(c).is_zero())
    return rep


def cmd_vey(n, ineq=None, variant="both", force=False):
    rep = Report("vey", {"n": n, "ineq": ineq or "default", "variant": variant})
    variants = [vey.GENERAL, vey.RELATIVE] if variant == "both" else [variant]
    ineqs = [ineq] if ineq else ["le", "ge"]
    for v in variants:
        for iq in ineqs:
            t = vey.dimension_table(n, v, iq)
            key = "%s-%s" % (v, iq)
            rep.tables[key] = t.as_dict()
            rep.check("%s within bounds" % key, t.within_bounds(), t.bounds)
    return rep


def _parse_line(name, src):
    try:
        return dsl.parse(src, dsl.LINE)
    except DSLSyntaxError as e:
        raise UsageError("--%s: %s" % (name, e))


def _parse_circle(name, src):
    try:
        return dsl.parse(src, dsl.CIRCLE)
    except DSLSyntaxError as e:
        raise UsageError("--%s: %s" % (name, e))


def cmd_gv(f, g, h, x, tol=1e-10):
    rep = Report("gv", {"f": f, "g": g, "h": h, "x": x, "tol": tol})
    es = {k: _parse_line(k, s) for k, s in (("f", f), ("g", g), ("h", h))}
    for k, e in es.items():
        vr = dsl.validate(e)
        rep.check("%s monotone" % k, vr.monotone, vr.min_derivative)
    if not rep.ok:
        return rep
    res = cocycles.gv_cocycle_result(es["f"], es["g"], es["h"], x, cocycles.QuadratureConfig.uniform(tol))
    rep.value("gv", res.value, res.error_estimate)
    rep.tables["quadrature"] = res.as_dict()
    return rep


def cmd_bott(g1, g2, tol=1e-10):
    rep = Report("bott", {"g1": g1, "g2": g2, "tol": tol})
    es = [_parse_circle("g1", g1), _parse_circle("g2", g2)]
    for k, e in zip(("g1", "g2"), es):
        vr = dsl.validate(e)
        rep.check("%s monotone" % k, vr.monotone, vr.min_derivative)
        rep.check("%s equivariant" % k, vr.equivariance_residual < 1e-9, None, vr.equivariance_residual)
    if not rep.ok:
        return rep
    res = cocycles.bott_cocycle_result(es, (1,), cocycles.QuadratureConfig.uniform(tol))
    rep.value("bott", res.value, res.error_estimate)
    rep.tables["quadrature"] = res.as_dict()
    return rep


def cmd_gv_local(R=3):
    rep = Report("verify gv-local", {"R": R})
    omegas = jets.gk_form_components(R)
    res = jets.maurer_cartan_residuals(omegas)
    rep.check("Maurer-Cartan", all(r.is_zero() for r in res), None, sum(len(r.terms) for r in res))
    _, report = jets.gv_local_form(2)
    rep.check("alpha(Lambda_1 Psi_1) closed", report["closed"])
    rep.check("coordinate triple found", report["ok"], report["matches"])
    rep.tables["candidates"] = report["candidates"]
    return rep


def cmd_cocycle_identities(cases=20, seed=0, tol=1e-9):
    rep = Report("check cocycles", {"cases": cases, "seed": seed, "tol": tol})
    q = cocycles.QuadratureConfig.uniform(tol)
    rng = random.Random(seed)
    line = [[cocycles.random_line_diffeo(rng) for _ in range(4)] for _ in range(cases)]
    circ = [[cocycles.random_circle_diffeo(rng) for _ in range(3)] for _ in range(cases)]
    gv, bott = cocycles.gv_cochain(0.3, q), cocycles.bott_cochain(q)
    with ThreadPoolExecutor(threads()) as pool:
        r_gv = max(abs(v) for v in pool.map(lambda a: cocycles.coboundary(gv, a), line))
        r_bott = max(abs(v) for v in pool.map(lambda a: cocycles.coboundary(bott, a), circ))
    rep.check("gv coboundary", r_gv < 1e-6, None, r_gv)
    rep.check("bott coboundary", r_bott < 1e-6, None, r_bott)
    P = dsl.parse
    degenerate = [
        cocycles.gv_cocycle(P("x + 1"), P("2*x - 3"), P("exp(x) + x"), 0.4, q),
        cocycles.gv_cocycle(P("x"), P("x + 0.3*tanh(x)"), P("exp(x) + x"), 0.4, q),
        cocycles.gv_cocycle(P("x + 1"), P("x + 0.3*tanh(x)"), P("x"), 0.4, q),
    ]
    rep.check("gv degeneracies", max(map(abs, degenerate)) < 1e-12, None, max(map(abs, degenerate)))
    C = lambda s: dsl.parse(s, dsl.CIRCLE)
    rot = [cocycles.bott_cocycle([cocycles.rotation(0.7), C("x + 0.25*cos(x)")], (1,), q),
           cocycles.bott_cocycle([C("x + 0.25*sin(x)"), cocycles.rotation(-1.1)], (1,), q)]
    rep.check("bott rotation degeneracies", max(map(abs, rot)) < 1e-12, None, max(map(abs, rot)))
    pair = [C("x + 0.25*sin(x)"), C("x + 0.25*cos(x)")]
    a = cocycles.bott_cocycle(pair, (1,), cocycles.QuadratureConfig.uniform(1e-10))
    b = cocycles.bott_cocycle(pair, (1,), cocycles.QuadratureConfig.uniform(1e-12))
    rep.check("bott refinement", abs(a - b) < 1e-8, a, abs(a - b))
    return rep


def cmd_suite():
    rep = Report("suite", {"max_n": MAX_N, "max_order": MAX_ORDER})
    for n in (1, 2, 3):
        rep.merge(cmd_d2(n, MAX_ORDER), "d2 n=%d" % n)
    for n in (1, 2):
        rep.merge(cmd_oracle(n), "oracle n=%d" % n)
    for n in (1, 2, 3):
        rep.merge(cmd_classes(n), "classes n=%d" % n)
    for n in (1, 2):
        rep.merge(cmd_vey(n), "vey n=%d" % n)
    rep.merge(cmd_gv_local(), "gv-local")
    rep.merge(cmd_cocycle_identities(), "cocycles")
    return rep


def cmd_job(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError("cannot read job file: %s" % e)
    jobs = data if isinstance(data, list) else [data]
    rep = Report("job", {"file": path, "jobs": len(jobs)})

    def run(job):
        try:
            return cocycles.run_job(job), None
        except (ValueError, cocycles.QuadratureError) as e:
            return None, str(e)

    with ThreadPoolExecutor(threads()) as pool:
        results = list(pool.map(run, jobs))
    for i, (res, err) in enumerate(results):
        if err is None:
            rep.value("job %d" % i, res["value"], res["error_estimate"])
            rep.tables["job %d" % i] = res
        else:
            rep.check("job %d" % i, False, err)
    return rep


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="wncocycles", description="Gelfand-Fuks cochains and group cocycles.")
    ap.add_argument("--json", action="store_true", help="print the report as JSON")
    ap.add_argument("--force", action="store_true", help="allow sizes beyond the desk-scale limits")
    sub = ap.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="exact complex checks")
    csub = check.add_subparsers(dest="what", required=True)
    d2 = csub.add_parser("d2", help="d^2 = 0 on generators")
    d2.add_argument("--n", type=int, required=True)
    d2.add_argument("--order", type=int, required=True)
    orc = csub.add_parser("oracle", help="d against the Chevalley-Eilenberg oracle")
    orc.add_argument("--n", type=int, required=True)
    orc.add_argument("--cases", type=int, default=100)
    orc.add_argument("--seed", type=int, default=0)
    coc = csub.add_parser("cocycles", help="group cocycle identities on random diffeos")
    coc.add_argument("--cases", type=int, default=20)
    coc.add_argument("--seed", type=int, default=0)

    cl = sub.add_parser("classes", help="characteristic forms and transgressions")
    cl.add_argument("--n", type=int, required=True)

    vp = sub.add_parser("vey", help="Vey basis dimension tables")
    vp.add_argument("--n", type=int, required=True)
    vp.add_argument("--ineq", choices=["le", "ge"])
    vp.add_argument("--variant", choices=["general", "relative", "both"], default="both")

    gv = sub.add_parser("gv", help="Godbillon-Vey cocycle on Diff(R)")
    for k in ("f", "g", "h"):
        gv.add_argument("--" + k, required=True)
    gv.add_argument("--x", type=float, required=True)
    gv.add_argument("--tol", type=float, default=1e-10)

    bp = sub.add_parser("bott", help="Bott cocycle on Diff+(S^1)")
    bp.add_argument("--g1", required=True)
    bp.add_argument("--g2", required=True)
    bp.add_argument("--tol", type=float, default=1e-10)

    vr = sub.add_parser("verify", help="jet-space comparisons")
    vr.add_argument("what", choices=["gv-local"])

    sub.add_parser("suite", help="every check at desk scale")

    jb = sub.add_parser("job", help="evaluate a JSON cocycle job (or a list of them)")
    jb.add_argument("file")
    return ap


def dispatch(args):
    c = args.command
    if c == "check":
        if args.what == "d2":
            _limits(args, args.n, args.order)
            if args.n < 1 or args.order < 0:
                raise UsageError("need n >= 1 and order >= 0")
            return cmd_d2(args.n, args.order)
        if args.what == "oracle":
            _limits(args, args.n)
            return cmd_oracle(args.n, args.cases, args.seed)
        return cmd_cocycle_identities(args.cases, args.seed)
    if c == "classes":
        _limits(args, args.n)
        if args.n < 1:
            raise UsageError("need n >= 1")
        return cmd_classes(args.n)
    if c == "vey":
        if not 1 <= args.n <= vey.MAX_N:
            raise UsageError("vey needs 1 <= n <= %d" % vey.MAX_N)
        return cmd_vey(args.n, args.ineq, args.variant)
    if c == "gv":
        return cmd_gv(args.f, args.g, args.h, args.x, args.tol)
    if c == "bott":
        return cmd_bott(args.g1, args.g2, args.tol)
    if c == "verify":
        return cmd_gv_local()
    if c == "suite":
        return cmd_suite()
    if c == "job":
        return cmd_job(args.file)
    raise UsageError("unknown command %r" % c)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = dispatch(args)
    except UsageError as e:
        ap.print_usage(sys.stderr)
        print("error: %s" % e, file=sys.stderr)
        return 2
    rep.timing = time.perf_counter() - t0
    if args.json:
        print(json.dumps(rep.as_dict(), indent=2))
    else:
        print(rep.render())
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
