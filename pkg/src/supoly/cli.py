"""Command-line entry point: ``supoly <command> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import families, liealg, odeverify, orthogonality, quadrature
from .curvering import CurveRing
from .exactnum import Poly
from .families import FamilyId, FamilyTable, build_family

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


# parsing helpers

_COEFF_RE = re.compile(r"^\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(c)?\s*$")


def parse_coeff(tok: str) -> Poly:
    """Rational or rational multiple of c: ``3``, ``-1/2``, ``-2c``, ``c``, ``2/3*c``."""
    mt = _COEFF_RE.match(tok)
    if not mt or (mt.group(2) is None and mt.group(3) is None):
        raise ConfigError(f"cannot parse curve coefficient {tok!r}")
    sign = -1 if mt.group(1) == "-" else 1
    q = Fraction(mt.group(2)) if mt.group(2) else Fraction(1)
    return Poly.monomial(1 if mt.group(3) else 0, sign * q)


def parse_curve(text: str, m: int) -> CurveRing:
    if text == "quartic":
        return CurveRing.quartic(m)
    try:
        return CurveRing(m, [parse_coeff(t) for t in text.split(",")])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_m_list(text: str) -> list[int]:
    try:
        ms = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --m value {text!r}") from exc
    if not ms or any(m < 2 for m in ms):
        raise ConfigError("m must be an integer >= 2")
    return ms


def parse_family(text: str | None, allowed=None) -> list[FamilyId]:
    allowed = list(allowed or FamilyId)
    if text is None:
        return allowed
    try:
        fam = FamilyId.parse(text)
    except ValueError as exc:
        raise ConfigError(f"unknown family {text!r}") from exc
    if fam not in allowed:
        raise ConfigError(f"family {fam.value} not supported here")
    return [fam]


def parse_element(text: str, g: liealg.FinLieAlgebra) -> liealg.ExtendedElement:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"element must be name,i,l: {text!r}")
    try:
        a = g.index(parts[0].strip())
        i, l = int(parts[1]), int(parts[2])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad element {text!r}") from exc
    return liealg.ExtendedElement.loop_monomial(a, i, l)


def parse_grid(text: str) -> list[tuple[float, float]]:
    if text == "default":
        return quadrature.default_grid()
    try:
        pts = [tuple(float(v) for v in item.split(":")) for item in text.split(";") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}") from exc
    if not pts or any(len(p) != 2 for p in pts):
        raise ConfigError("grid must be 'default' or 'c:z;c:z;...'")
    return pts


# table serialization


def table_to_json(table: FamilyTable) -> dict:
    return {
        "m": table.m,
        "family": table.family.value,
        "order": table.order,
        "entries": [{"k": k, "coeffs": [str(a) for a in p.coeffs]} for k, p in enumerate(table.polys)],
    }


def table_from_json(data) -> FamilyTable:
    if isinstance(data, str):
        data = json.loads(data)
    polys = tuple(Poly(Fraction(s) for s in e["coeffs"]) for e in sorted(data["entries"], key=lambda e: e["k"]))
    return FamilyTable(int(data["m"]), FamilyId.parse(data["family"]), polys)


def table_to_csv(table: FamilyTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "m", "k", "degree", "coeff"])
    for k, p in enumerate(table.polys):
        for d, a in enumerate(p.coeffs):
            if a:
                w.writerow([table.family.value, table.m, k, d, str(a)])
    return buf.getvalue()


# verification checks


@dataclass
class CheckResult:
    check: str
    params: dict
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"check": self.check, "params": self.params, "ok": self.ok, "detail": self.detail}


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    return run


@_timed
def check_ode(fam: FamilyId, m: int, nmax: int) -> CheckResult:
    bad = odeverify.ode_sweep(fam, m, nmax)
    return CheckResult("ode", {"family": fam.value, "m": m, "nmax": nmax}, not bad, {"failing_n": bad})


@_timed
def check_pde(fam: FamilyId, m: int, order: int, variant: str) -> CheckResult:
    res = odeverify.pde_residual(fam, m, order, variant)
    nonzero = [k for k in range(order + 1) if not res[k].is_zero()]
    bc = odeverify.boundary_ok(build_family(m, fam, order))
    return CheckResult(
        "pde", {"family": fam.value, "m": m, "order": order, "variant": variant},
        not nonzero and bc, {"nonzero_orders": nonzero, "boundary_ok": bc},
    )


@_timed
def check_expansion(fam: FamilyId, m: int, order: int) -> CheckResult:
    res = families.expansion_check(m, fam, order)
    nonzero = [k for k in range(order + 1) if not res[k].is_zero()]
    return CheckResult("expansion", {"family": fam.value, "m": m, "order": order}, not nonzero,
                       {"nonzero_orders": nonzero})


@_timed
def check_szego(m: int, nmax: int) -> CheckResult:
    bad = [n for n in range(nmax + 1) if not families.szego_identity_check(m, n).is_zero()]
    return CheckResult("szego", {"m": m, "nmax": nmax}, not bad, {"failing_n": bad})


@_timed
def check_uniqueness(fam: FamilyId, m: int, nmax: int) -> CheckResult:
    table = build_family(m, fam, nmax)
    dims, bad = {}, []
    for n in range(nmax + 1):
        dim, basis = odeverify.uniqueness_solve(fam, m, n)
        dims[n] = dim
        if dim > 1 or not odeverify.in_span(table[n], basis):
            bad.append(n)
    asserted = m >= 4
    detail = {"dimensions": dims, "violations": bad, "asserted": asserted}
    return CheckResult("uniqueness", {"family": fam.value, "m": m, "nmax": nmax},
                       (not bad) if asserted else True, detail)


@_timed
def check_favard(fam: FamilyId, m: int, N: int) -> CheckResult:
    rep = orthogonality.favard_check(fam, m, N)
    return CheckResult("favard", {"family": fam.value, "m": m, "N": N}, rep.ok,
                       {"bad_products": rep.bad_products, "bad_lambdas": rep.bad_lambdas})


@_timed
def check_gram(fam: FamilyId, m: int, N: int, tol: float) -> CheckResult:
    dev = orthogonality.gram_check(fam, m, N)
    rule = orthogonality.gauss_rule(fam, m, N)
    inside = bool(all(-1 < x < 1 for x in rule.nodes))
    bad_interlace = orthogonality.interlacing_check(fam, m, N)
    return CheckResult(
        "gram", {"family": fam.value, "m": m, "N": N, "tol": tol},
        dev <= tol and inside and not bad_interlace,
        {"deviation": dev, "nodes_inside": inside, "min_node": float(rule.nodes[0]),
         "max_node": float(rule.nodes[-1]), "interlace_failures": bad_interlace},
    )


@_timed
def check_ultraspherical(m: int, nmax: int) -> CheckResult:
    res = orthogonality.ultraspherical_match(m, nmax)
    bad = [n for n, r in enumerate(res) if not r.is_zero()]
    return CheckResult("ultraspherical", {"m": m, "nmax": nmax}, not bad, {"failing_n": bad})


@_timed
def check_jacobi(m: int, rng: int) -> CheckResult:
    ring, g = CurveRing.quartic(m), liealg.sl2()
    sample = liealg.sample_triples(g, 200, (-rng, rng), (0, min(2, m - 1)))
    bad_jacobi = liealg.check_jacobi(ring, g, sample)
    elems = sorted({e for t in sample for e in t[:2]}, key=lambda e: sorted(e.loop))[:40]
    bad_anti = liealg.check_antisymmetry(ring, g, elems)
    return CheckResult("jacobi", {"m": m, "range": rng, "triples": len(sample)},
                       bad_jacobi == 0 and bad_anti == 0,
                       {"bad_triples": bad_jacobi, "bad_antisymmetry_pairs": bad_anti})


@_timed
def check_theorem35(m: int, rng: int) -> CheckResult:
    rep = liealg.verify_theorem35(CurveRing.quartic(m), liealg.sl2(), (-rng, rng), (-rng, rng))
    unexpected = [mm for mm in rep.mismatches if not (mm["sector"] == "module" and mm["part"] == "tensor")]
    return CheckResult(
        "theorem35", {"m": m, "range": rng}, rep.ok,
        {"checked": rep.checked, "documented_mismatches": len(rep.mismatches) - len(unexpected),
         "unexpected_mismatches": [str(u) for u in unexpected[:10]], "notes": list(rep.notes)},
    )


VERIFY_KINDS = ("all", "ode", "pde", "expansion", "uniqueness", "favard", "gram",
                "ultraspherical", "jacobi", "theorem35")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SUPOLY_THREADS", "1")))
    except ValueError:
        return 1


def build_checks(kind: str, ms: list[int], fam_arg, nmax, order, tol, rng, variant) -> list:
    two = (FamilyId.CASE1, FamilyId.CASE2)
    exp = (FamilyId.CASE1, FamilyId.CASE3, FamilyId.CASE4)
    kinds = VERIFY_KINDS[1:] if kind == "all" else (kind,)
    tasks = []
    for k in kinds:
        if k == "ode":
            tasks += [(check_ode, f, m, nmax or 60) for f in parse_family(fam_arg, two) for m in ms]
        elif k == "pde":
            tasks += [(check_pde, f, m, order or 24, variant) for f in parse_family(fam_arg, two) for m in ms]
        elif k == "expansion":
            tasks += [(check_expansion, f, m, order or 20) for f in parse_family(fam_arg, exp) for m in ms]
            tasks += [(check_szego, m, 20) for m in ms]
        elif k == "uniqueness":
            tasks += [(check_uniqueness, f, m, nmax or 30) for f in parse_family(fam_arg, two) for m in ms]
        elif k == "favard":
            tasks += [(check_favard, f, m, nmax or 50) for f in parse_family(fam_arg, two) for m in ms]
        elif k == "gram":
            tasks += [(check_gram, f, m, order or 20, tol or 1e-10) for f in parse_family(fam_arg, two) for m in ms]
        elif k == "ultraspherical":
            tasks += [(check_ultraspherical, m, nmax or 30) for m in ms]
        elif k == "jacobi":
            tasks += [(check_jacobi, m, rng or 3) for m in ms]
        elif k == "theorem35":
            tasks += [(check_theorem35, m, rng or 3) for m in ms]
    return tasks


def run_checks(tasks) -> list[CheckResult]:
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(lambda t: t[0](*t[1:]), tasks))


# output


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_table(args) -> int:
    ms = parse_m_list(args.m)
    if len(ms) != 1:
        raise ConfigError("table takes a single m")
    if args.order is None or args.order < 0:
        raise ConfigError("--order must be >= 0")
    fam = parse_family(args.family or "case1")[0]
    table = build_family(ms[0], fam, args.order)
    _emit(table_to_csv(table) if args.format == "csv" else _dump(table_to_json(table)), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    m = parse_m_list(args.m)[0]
    ring = parse_curve(args.curve, m)
    if args.n is None or args.l is None:
        raise ConfigError("--n and --l are required")
    try:
        w = ring.reduce_form(args.n, args.l)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "json":
        _emit(_dump({"n": args.n, "l": args.l, "terms": w.as_pairs(), "text": str(w)}), args.output)
    else:
        _emit(str(w) + "\n", args.output)
    return EXIT_OK


def cmd_bracket(args) -> int:
    if args.g != "sl2":
        raise ConfigError("only --g sl2 is built in")
    g = liealg.sl2()
    m = parse_m_list(args.m)[0]
    ring = parse_curve(args.curve, m)
    if not args.x or not args.y:
        raise ConfigError("--x and --y are required")
    x, y = parse_element(args.x, g), parse_element(args.y, g)
    try:
        res = liealg.bracket(x, y, ring, g)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "json":
        _emit(_dump({"text": res.format(g), "central": res.central.as_pairs()}), args.output)
    else:
        _emit(res.format(g) + "\n", args.output)
    return EXIT_OK


def cmd_quadrature(args) -> int:
    fam = parse_family(args.family or "case1", (FamilyId.CASE1, FamilyId.CASE2))[0]
    tol = args.tol or 1e-8
    ms = parse_m_list(args.m)
    grid = parse_grid(args.grid)
    rows = []
    try:
        for m in ms:
            rows += quadrature.compare_grid(fam, m, grid, tol=min(tol, 1e-10))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    worst = quadrature.max_deviation(rows)
    if args.format == "json":
        _emit(_dump({"rows": rows, "max_diff": worst, "tol": tol}), args.output)
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=quadrature.CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
        _emit(buf.getvalue(), args.output)
    print(f"max_diff={worst:.3e} tol={tol:.1e}", file=sys.stderr)
    return EXIT_OK if worst <= tol else EXIT_FAIL


def cmd_uniqueness(args) -> int:
    fam = parse_family(args.family or "case1", (FamilyId.CASE1, FamilyId.CASE2))[0]
    m = parse_m_list(args.m)[0]
    if args.n is None or args.n < 0:
        raise ConfigError("--n must be >= 0")
    dim, basis = odeverify.uniqueness_solve(fam, m, args.n, args.r)
    member = build_family(m, fam, args.n)[args.n]
    out = {
        "family": fam.value, "m": m, "n": args.n, "r": args.n if args.r is None else args.r,
        "dimension": dim, "basis": [[str(a) for a in p.coeffs] for p in basis],
        "contains_member": odeverify.in_span(member, basis),
    }
    _emit(_dump(out), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    ms = parse_m_list(args.m)
    tasks = build_checks(args.kind, ms, args.family, args.nmax, args.order, args.tol, args.range, args.pde_variant)
    results = run_checks(tasks)
    ok = all(r.ok for r in results)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "params", "ok", "detail"])
        for r in results:
            w.writerow([r.check, json.dumps(r.params), r.ok, json.dumps(r.detail, default=str)])
        _emit(buf.getvalue(), args.output)
    else:
        _emit(_dump({"ok": ok, "checks": [r.as_dict() for r in results]}), args.output)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.check} {json.dumps(r.params)}", file=sys.stderr)
    if any(r.check == "theorem35" for r in results):
        print("note: " + liealg.MODULE_TENSOR_NOTE, file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="supoly", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, m_default="3"):
        sp.add_argument("--m", default=m_default, help="m (comma list accepted by verify/quadrature)")
        sp.add_argument("--format", choices=("json", "csv", "text"), default=None)
        sp.add_argument("--output", help="write to this file instead of stdout")

    t = sub.add_parser("table", help="generating-series coefficients of a family")
    common(t)
    t.add_argument("--family", default="case1")
    t.add_argument("--order", type=int, default=None)

    r = sub.add_parser("reduce", help="reduce t^n u^l dt to the Kahler basis")
    common(r)
    r.add_argument("--curve", default="quartic", help="'quartic' or a_0,...,a_D (rationals or multiples of c)")
    r.add_argument("--n", type=int)
    r.add_argument("--l", type=int)

    b = sub.add_parser("bracket", help="bracket of two loop monomials")
    common(b)
    b.add_argument("--g", default="sl2")
    b.add_argument("--curve", default="quartic")
    b.add_argument("--x")
    b.add_argument("--y")

    q = sub.add_parser("quadrature", help="integral formula against the series")
    common(q)
    q.add_argument("--family", default="case1")
    q.add_argument("--grid", default="default", help="'default' or 'c:z;c:z;...'")
    q.add_argument("--tol", type=float, default=1e-8)

    u = sub.add_parser("uniqueness", help="polynomial null space of the fourth-order ODE")
    common(u)
    u.add_argument("--family", default="case1")
    u.add_argument("--n", type=int)
    u.add_argument("--r", type=int, default=None, help="degree bound (default n)")

    v = sub.add_parser("verify", help="run verification suites")
    common(v, m_default="3,4,5")
    v.add_argument("kind", choices=VERIFY_KINDS)
    v.add_argument("--family", default=None)
    v.add_argument("--nmax", type=int, default=None)
    v.add_argument("--order", type=int, default=None)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--range", type=int, default=None)
    v.add_argument("--pde-variant", choices=(odeverify.PRINTED_CASE2_CC, odeverify.CORRECTED_CASE2_CC),
                   default=odeverify.PRINTED_CASE2_CC)
    return p


_COMMANDS = {
    "table": cmd_table, "reduce": cmd_reduce, "bracket": cmd_bracket,
    "quadrature": cmd_quadrature, "uniqueness": cmd_uniqueness, "verify": cmd_verify,
}
_DEFAULT_FORMAT = {"table": "json", "reduce": "text", "bracket": "text", "quadrature": "csv",
                   "uniqueness": "json", "verify": "json"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = _DEFAULT_FORMAT[args.command]
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"supoly: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
