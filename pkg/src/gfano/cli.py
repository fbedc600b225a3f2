"""Command-line front end: ``gfano <command> ...``.

Exit status is 0 on success, 1 when a check ran and failed, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog as cat
from . import constraints as C
from .groups import admissible_orders, corollary_orders
from .intring import (
    DegreeMismatchError,
    RingSpec,
    SpecMismatchError,
    ci_anticanonical,
    ci_degree,
)
from .lattice import (
    NotAGroupError,
    PicardLattice,
    SearchBudgetExceeded,
    TrilinearForm,
    invariant_rank,
    isometries_fixing_c1,
    minimal_witness,
    named_isometry,
    trilinear_eval,
)

OK, FAILED, USAGE = 0, 1, 2

ALIASES = {
    "row1": "mm-2.6",
    "row2": "mm-2.12",
    "row3": "mm-2.21",
    "row4": "mm-2.32",
    "row5": "mm-3.1",
    "row6": "mm-3.13",
    "row7": "mm-3.27",
    "row8": "mm-4.1",
    "mm-P1P1P1": "mm-3.27",
}


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


def parse_vector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"not a comma-separated integer list: {text!r}") from None


def parse_classes(text: str | None) -> list[list[int]]:
    if not text:
        return []
    return [parse_vector(part) for part in text.split(";") if part.strip()]


def emit(args, payload, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# -- ring ---------------------------------------------------------------------

def cmd_ring(args) -> int:
    dims = parse_vector(args.ambient)
    try:
        spec = RingSpec(dims)
    except ValueError as e:
        raise UsageError(str(e)) from None
    hyps_md = parse_classes(args.hyps)
    for h in hyps_md:
        if len(h) != spec.k:
            raise UsageError(f"multidegree {h} does not match ambient {dims}")
    # keep the adjunction class nonnegative: at most n_i + 1 in every factor
    for i, n in enumerate(dims):
        total = sum(h[i] for h in hyps_md)
        if total > n + 1:
            raise UsageError(
                f"hypersurface degrees {total} in factor {i + 1} exceed the budget {n + 1}")
    hyps = [spec.divisor(h) for h in hyps_md]
    try:
        if args.cover:
            if args.cls:
                raise UsageError("--class and --cover are exclusive")
            value = cat.cover_minusK3(
                {"ambient": dims, "hyps": hyps_md, "branch": parse_vector(args.cover)})
            what = "double cover -K^D"
        else:
            if args.cls:
                L = spec.divisor(parse_vector(args.cls))
            else:
                L = ci_anticanonical(spec, hyps)
            value = ci_degree(spec, hyps, L)
            what = f"L^{spec.dim - len(hyps)} with L = {list(L.multidegree)}"
    except (DegreeMismatchError, SpecMismatchError, ValueError) as e:
        raise UsageError(str(e)) from None
    emit(args, {"ambient": dims, "hyps": hyps_md, "value": value}, f"{value}\n# {what}")
    return OK


# -- lattice ------------------------------------------------------------------

def resolve_lattice(args) -> PicardLattice:
    if args.form is not None:
        if args.c1 is None:
            raise UsageError("--form needs --c1")
        c1 = parse_vector(args.c1)
        try:
            form = TrilinearForm.from_list(len(c1), parse_vector(args.form))
            return PicardLattice(form, c1, label="inline", check=not args.no_check)
        except ValueError as e:
            raise UsageError(str(e)) from None
    if not args.variety:
        raise UsageError("give --variety or --form/--c1")
    vid = ALIASES.get(args.variety, args.variety)
    entries = load_entries(args)
    entry = next((e for e in entries if e.id == vid), None)
    if entry is None:
        raise UsageError(f"unknown variety {args.variety!r}")
    lat = cat.model_lattice(entry, label=args.variety)
    if lat is None:
        raise UsageError(f"{vid} has no lattice, ci or cover model")
    return lat


def cmd_lattice_aut(args) -> int:
    lat = resolve_lattice(args)
    try:
        group = isometries_fixing_c1(lat, entry_bound=args.entry_bound)
    except (NotAGroupError, SearchBudgetExceeded) as e:
        raise CheckFailed(str(e)) from None
    w = minimal_witness(lat, group=group, entry_bound=args.entry_bound)
    payload = {
        "lattice": lat.label,
        "c1": list(lat.c1),
        "order": len(group),
        "elements": [[list(r) for r in g.matrix] for g in group],
        "witness": None if w is None else {
            "order": w.order,
            "generators": [[list(r) for r in g.matrix] for g in w.generators],
        },
    }
    lines = [f"order {len(group)}"]
    lines += [f"  {[list(r) for r in g.matrix]}" for g in group]
    lines.append("rank-1 witness: " + ("none" if w is None else f"order {w.order}"))
    emit(args, payload, "\n".join(lines))
    return OK


def cmd_lattice_rank(args) -> int:
    lat = resolve_lattice(args)
    try:
        gens = [named_isometry(g, lat.rank) for g in args.gens]
    except ValueError as e:
        raise UsageError(str(e)) from None
    for g in gens:
        bad = g.check(lat)
        if bad:
            raise CheckFailed(f"{[list(r) for r in g.matrix]} is not an isometry fixing c1: {bad}")
    r = invariant_rank(lat, gens)
    emit(args, {"lattice": lat.label, "invariantRank": r}, str(r))
    return OK


def cmd_lattice_eval(args) -> int:
    lat = resolve_lattice(args)
    vecs = parse_classes(args.vecs)
    if len(vecs) != 3 or any(len(v) != lat.rank for v in vecs):
        raise UsageError(f"--vecs needs three vectors of length {lat.rank}")
    value = trilinear_eval(lat, *vecs)
    emit(args, {"lattice": lat.label, "vectors": vecs, "value": value}, str(value))
    return OK


# -- orders and constraints ---------------------------------------------------

def cmd_orders(args) -> int:
    try:
        os_ = corollary_orders(args.N) if args.rho else admissible_orders(args.N)
    except ValueError as e:
        raise UsageError(str(e)) from None
    d = os_.to_dict()
    lines = [", ".join(str(n) for n in sorted(os_.members))]
    for n, flag in sorted(os_.members.items()):
        lines.append(f"  {n}: {flag}")
    for M, flag in os_.divisor_clauses:
        lines.append(f"  any divisor of {M}: {flag}")
    emit(args, d, "\n".join(lines))
    return OK


def _report_out(args, rep: C.ConstraintReport) -> int:
    lines = [f"{c.id}: {'pass' if c.passed else 'FAIL'} {c.witness}" for c in rep.checks]
    emit(args, rep.to_dict(), "\n".join(lines))
    return OK if rep.passed else FAILED


def cmd_constraints(args) -> int:
    which = args.which
    try:
        if which == "disc":
            d = C.conic_discriminant(args.n, args.a, args.c1cubed)
            emit(args, {"degDelta": d, "feasible": d is not None,
                        "emptyDiscriminant": d == 0},
                 "infeasible" if d is None else str(d))
        elif which == "hodge":
            v = C.hodge_conic(args.rhoX, args.rhoZ, args.pa)
            emit(args, {"h12": v}, str(v))
        elif which == "genus":
            v = C.plane_curve_genus(args.d)
            emit(args, {"genus": v}, str(v))
        elif which == "dp":
            rep = C.dp_bundle_check(C.DPBundleInstance(args.n, args.a, args.c1cubed, args.KF2, args.rho))
            return _report_out(args, rep)
        elif which == "product":
            rep = C.product_exclusion(args.KZ2)
            w = rep.checks[0].witness
            emit(args, {"excluded": not rep.passed, **rep.to_dict()},
                 ("excluded" if not rep.passed else "not excluded") + f": {w['reason']}")
        elif which == "rho2":
            cases = C.rho2_birational_analysis(args.M1cubed)
            emit(args, {"cases": [c._asdict() for c in cases]},
                 "\n".join(f"r={c.r} M1^2M2={c.M1sqM2} A1.C1={c.A1C1} c1^3={c.c1cubed}" for c in cases))
        elif which == "adim":
            v = C.anticanonical_dim(args.c1cubed)
            emit(args, {"dim": v}, str(v))
        elif which == "sing":
            v = C.singular_divisor_count(args.half, args.degGamma)
            emit(args, {"r": v}, ", ".join(map(str, v)))
        elif which == "triples":
            t = C.rho3_conic_triples(args.a)
            emit(args, {"triples": [list(x) for x in t]},
                 "\n".join(f"degDelta={d} c1^3={c} h12={h}" for d, c, h in t))
    except ValueError as e:
        raise UsageError(str(e)) from None
    return OK


# -- catalog ------------------------------------------------------------------

def load_entries(args) -> list[cat.CatalogEntry]:
    path = Path(args.catalog) if getattr(args, "catalog", None) else cat.default_catalog_path()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read catalog {path}: {e.strerror}") from None
    try:
        return cat.load_catalog(text)
    except cat.CatalogSchemaError as e:
        raise UsageError(f"{path}: {e}") from None
    except cat.CatalogCrossCheckError as e:
        raise CheckFailed(f"{path}: {e}") from None


def cmd_classify(args) -> int:
    traces = cat.classify(load_entries(args), rho=args.rho, entry_bound=args.entry_bound)
    lines = []
    for t in traces:
        extra = f" [{'; '.join(t.flags)}]" if t.flags else ""
        lines.append(f"{t.id} rho={t.rho} -K^3={t.minusK3} {t.label()}{extra}")
    emit(args, {"traces": [t.to_dict() for t in traces]}, "\n".join(lines))
    return OK


def cmd_verify(args) -> int:
    try:
        entries = load_entries(args)
    except CheckFailed as e:
        rep = cat.TableReport([], [], [], error=str(e))
    else:
        rep = cat.verify_table(entries, entry_bound=args.entry_bound)
    lines = []
    for r in rep.rows:
        mark = "pass" if r["passed"] else "FAIL"
        lines.append(f"row {r['row']}: rho={r['rho']} -K^3={r['minusK3']} "
                     f"{r['entry'] or 'missing'} {mark}")
    for x in rep.extras:
        lines.append(f"extra survivor: {x['entry']} rho={x['rho']} -K^3={x['minusK3']} {x['verdict']}")
    for x in rep.lookup:
        if not x["eliminated"]:
            lines.append(f"open rho=3 triple {x['degDelta']},{x['c1cubed']},{x['h12']} "
                         f"matches {', '.join(x['matches'])}")
    if rep.error:
        lines.append(f"error: {rep.error}")
    n_pass = sum(r["passed"] for r in rep.rows)
    lines.append(f"{n_pass}/{len(cat.TABLE)} rows pass, {rep.survivors} survivors: "
                 + ("OK" if rep.passed else "FAILED"))
    emit(args, rep.to_dict(), "\n".join(lines))
    return OK if rep.passed else FAILED


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--entry-bound", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="gfano", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--entry-bound", type=int, default=3,
                   help="max |entry| in the isometry search (default 3)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("ring", parents=[common], help="intersection numbers on products of P^n")
    r.add_argument("--ambient", required=True, help="factor dimensions, e.g. 2,2,2")
    r.add_argument("--hyps", help="hypersurface multidegrees, e.g. '0,1,1;1,0,1'")
    r.add_argument("--class", dest="cls", help="divisor class to cube (default: -K)")
    r.add_argument("--cover", help="branch multidegree: degree of the double cover instead")
    r.set_defaults(func=cmd_ring)

    lat = sub.add_parser("lattice", help="Picard-lattice isometries")
    lsub = lat.add_subparsers(dest="action", required=True)
    for name, func, helptext in [
        ("aut", cmd_lattice_aut, "isometries fixing c1"),
        ("rank", cmd_lattice_rank, "rank of the invariant sublattice"),
        ("eval", cmd_lattice_eval, "triple product of three vectors"),
    ]:
        q = lsub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("--variety", help="catalog id or alias (row1..row8, mm-P1P1P1)")
        q.add_argument("--form", help="cubic form on sorted index triples")
        q.add_argument("--c1", help="anticanonical class in the lattice basis")
        q.add_argument("--no-check", action="store_true", help="skip the c1^3 parity check")
        q.add_argument("--catalog", help="catalog path (default: bundled)")
        if name == "rank":
            q.add_argument("--gens", nargs="+", required=True,
                           help="generators: swap, cycleK, perm=..., or a matrix 'a,b;c,d'")
        if name == "eval":
            q.add_argument("--vecs", required=True, help="three vectors 'u;v;w'")
        q.set_defaults(func=func)

    o = sub.add_parser("orders", parents=[common], help="admissible group orders")
    o.add_argument("N", type=int)
    o.add_argument("--rho", action="store_true", help="treat N as rho and use rank rho - 1")
    o.set_defaults(func=cmd_orders)

    c = sub.add_parser("constraints", help="numeric lemmas")
    csub = c.add_subparsers(dest="which", required=True)

    def cons(name, *ints, **opts):
        q = csub.add_parser(name, parents=[common])
        for a in ints:
            q.add_argument(a, type=int)
        for a, kw in opts.items():
            q.add_argument(f"--{a}", **kw)
        q.set_defaults(func=cmd_constraints)

    cons("disc", "n", "a", "c1cubed")
    cons("hodge", "rhoX", "rhoZ", "pa")
    cons("genus", "d")
    cons("dp", "n", "a", "c1cubed", "KF2", rho={"type": int, "default": None})
    cons("product", "KZ2")
    cons("rho2", "M1cubed")
    cons("adim", "c1cubed")
    cons("sing", "half", "degGamma")
    cons("triples", a={"type": int, "default": 1})

    for name, func in [("classify", cmd_classify), ("verify", cmd_verify)]:
        q = sub.add_parser(name, parents=[common], help=f"{name} the catalog")
        q.add_argument("--catalog", help="catalog path (default: bundled or $GFANO_CATALOG)")
        if name == "classify":
            q.add_argument("--rho", type=int)
        q.set_defaults(func=func)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.entry_bound < 1:
        parser.error("--entry-bound must be positive")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"gfano: error: {e}", file=sys.stderr)
        return USAGE
    except CheckFailed as e:
        print(f"gfano: check failed: {e}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
