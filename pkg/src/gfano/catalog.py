"""Bundled Mori-Mukai data for rho = 2..5 and the case-elimination pipeline.

``load_catalog`` validates a JSON document and recomputes -K^3 from every
model that determines it. ``classify`` walks each entry through the
numeric lemmas in a fixed order and records every check it makes.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import jsonschema

from . import constraints as C
from .groups import corollary_orders, divisors
from .intring import (
    RingSpec,
    blowup_curve_degree,
    ci_anticanonical,
    ci_degree,
)
from .lattice import (
    PicardLattice,
    TrilinearForm,
    lattice_from_ci,
    lattice_from_cover,
    minimal_witness,
)

CATALOG_ENV = "GFANO_CATALOG"

SURVIVES = "SURVIVES"
ELIMINATED = "ELIMINATED"
PRIOR_WORK = "PRIOR-WORK"
UNRESOLVED = "UNRESOLVED"

NO_APPLICABLE = "no applicable constraint"
NO_WITNESS = "no positive witness"
EMPTY_DISCRIMINANT = "empty discriminant admitted"

# (rho, -K^3) of the families in the main theorem
TABLE = [(1, 2, 12), (2, 2, 20), (3, 2, 28), (4, 2, 48), (5, 3, 12), (6, 3, 30), (7, 3, 48), (8, 4, 24)]


@dataclass(frozen=True)
class BaseFano:
    minusK3: int
    index: int | None = None
    A3: int | None = None


BASES = {
    "P3": BaseFano(64, 4, 1),
    "Q": BaseFano(54, 3, 2),
    "V1": BaseFano(8, 2, 1),
    "V2": BaseFano(16, 2, 2),
    "V3": BaseFano(24, 2, 3),
    "V4": BaseFano(32, 2, 4),
    "V5": BaseFano(40, 2, 5),
    "W": BaseFano(48),
    "V7": BaseFano(56),
    "P1xP2": BaseFano(54),
    "P1xP1xP1": BaseFano(48),
}


class CatalogSchemaError(ValueError):
    """The document is not valid JSON or does not match the catalog schema."""


class CatalogCrossCheckError(ValueError):
    """A stated number disagrees with the one recomputed from a model."""

    def __init__(self, entry_id: str, what: str, stated: int, computed: int):
        self.entry_id = entry_id
        self.what = what
        self.stated = stated
        self.computed = computed
        super().__init__(f"{entry_id}: {what} stated {stated}, computed {computed}")


_multideg = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_dims = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_hyps = {"type": "array", "items": _multideg}


def _kind(name: str, props: dict, required: Sequence[str]) -> dict:
    return {
        "type": "object",
        "properties": {"kind": {"const": name}, **props},
        "required": ["kind", *required],
        "additionalProperties": False,
    }


STRUCTURE_SCHEMA = {
    "oneOf": [
        _kind("conic", {"base": {"type": "string"}, "degDelta": {"type": ["integer", "null"]}},
              ["base", "degDelta"]),
        _kind("dp", {
            "KF2": {"type": ["integer", "null"], "minimum": 1, "maximum": 9},
            "fiber": {
                "type": "object",
                "properties": {"ambient": _dims, "hyps": _hyps},
                "required": ["ambient", "hyps"],
                "additionalProperties": False,
            },
        }, ["KF2"]),
        _kind("blowup", {
            "base": {"type": "string"},
            "center": {"enum": ["curve", "point"]},
            "degMKC": {"type": "integer", "minimum": 1},
            "genus": {"type": "integer", "minimum": 0},
        }, ["center"]),
        _kind("ci", {"ambient": _dims, "hyps": _hyps}, ["ambient", "hyps"]),
        _kind("cover", {"ambient": _dims, "hyps": _hyps, "branch": _multideg},
              ["ambient", "branch"]),
        _kind("product", {"KZ2": {"type": "integer", "minimum": 1, "maximum": 9}}, ["KZ2"]),
        _kind("lattice", {
            "cubic": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
            "c1": _multideg,
        }, ["cubic", "c1"]),
    ]
}

ENTRY_SCHEMA = {
    "type": "object",
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "rho": {"type": "integer", "minimum": 2, "maximum": 10},
        "minusK3": {"type": "integer", "minimum": 2, "multipleOf": 2},
        "h12": {"type": "integer", "minimum": 0},
        "fanoIndex": {"type": "integer", "minimum": 1, "maximum": 4},
        "provenance": {"enum": ["paper", "mori-mukai"]},
        "structures": {"type": "array", "items": STRUCTURE_SCHEMA},
    },
    "required": ["id", "rho", "minusK3", "h12", "fanoIndex", "provenance", "structures"],
    "additionalProperties": False,
}

CATALOG_SCHEMA = {
    "type": "object",
    "properties": {
        "version": {"type": "integer"},
        "entries": {"type": "array", "items": ENTRY_SCHEMA},
    },
    "required": ["version", "entries"],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    rho: int
    minusK3: int
    h12: int
    fanoIndex: int
    provenance: str
    structures: tuple[dict, ...]

    def of_kind(self, kind: str) -> list[dict]:
        return [s for s in self.structures if s["kind"] == kind]

    def to_dict(self) -> dict:
        return {
            "id": self.id, "rho": self.rho, "minusK3": self.minusK3, "h12": self.h12,
            "fanoIndex": self.fanoIndex, "provenance": self.provenance,
            "structures": [dict(s) for s in self.structures],
        }


# -- recomputation from models ------------------------------------------------

def _spec_hyps(ambient, hyps):
    spec = RingSpec(ambient)
    return spec, [spec.divisor(h) for h in hyps]


def ci_minusK3(s: dict) -> int:
    spec, hyps = _spec_hyps(s["ambient"], s["hyps"])
    return ci_degree(spec, hyps, ci_anticanonical(spec, hyps))


def cover_minusK3(s: dict) -> int:
    """Double cover of an ambient (or of a complete intersection in it)."""
    spec, hyps = _spec_hyps(s["ambient"], s.get("hyps", []))
    if any(d % 2 for d in s["branch"]):
        raise ValueError(f"branch {s['branch']} is not divisible by 2")
    md = [k - b // 2 for k, b in zip(ci_anticanonical(spec, hyps).multidegree, s["branch"])]
    return 2 * ci_degree(spec, hyps, spec.divisor(md))


def fiber_KF2(fiber: dict) -> int:
    spec, hyps = _spec_hyps(fiber["ambient"], fiber["hyps"])
    if spec.dim - len(hyps) != 2:
        raise ValueError("a del Pezzo fiber model must be a surface")
    return ci_degree(spec, hyps, ci_anticanonical(spec, hyps))


def blowup_minusK3(s: dict) -> int | None:
    base = BASES.get(s.get("base", ""))
    if base is None:
        return None
    if s["center"] == "point":
        return base.minusK3 - 8
    if "degMKC" not in s or "genus" not in s:
        return None
    return blowup_curve_degree(base.minusK3, s["degMKC"], s["genus"])


def lattice_of(s: dict) -> PicardLattice:
    c1 = list(s["c1"])
    return PicardLattice(TrilinearForm.from_list(len(c1), s["cubic"]), c1)


def model_lattice(entry: CatalogEntry, label: str = "") -> PicardLattice | None:
    """Picard lattice from the best available model: lattice, then ci, then cover."""
    label = label or entry.id
    for s in entry.of_kind("lattice"):
        lat = lattice_of(s)
        return PicardLattice(lat.form, lat.c1, label=label)
    for s in entry.of_kind("ci"):
        spec, hyps = _spec_hyps(s["ambient"], s["hyps"])
        if spec.dim - len(hyps) == 3:
            return lattice_from_ci(spec, hyps, label=label)
    for s in entry.of_kind("cover"):
        if not s.get("hyps") and len(s["ambient"]) and sum(s["ambient"]) == 3:
            spec = RingSpec(s["ambient"])
            return lattice_from_cover(spec, spec.divisor(s["branch"]), label=label)
    return None


def model_degrees(entry: CatalogEntry) -> list[dict]:
    """Every -K^3 this entry's models determine, tagged with its source."""
    out = []
    for s in entry.structures:
        k = s["kind"]
        if k == "ci":
            spec, hyps = _spec_hyps(s["ambient"], s["hyps"])
            if spec.dim - len(hyps) == 3:
                out.append({"model": "ci", "minusK3": ci_minusK3(s)})
        elif k == "cover":
            out.append({"model": "cover", "minusK3": cover_minusK3(s)})
        elif k == "blowup":
            v = blowup_minusK3(s)
            if v is not None:
                out.append({"model": f"blowup-{s['center']}", "minusK3": v})
        elif k == "lattice":
            out.append({"model": "lattice", "minusK3": lattice_of(s).degree})
    return out


def _cross_check(entry: CatalogEntry) -> CatalogEntry:
    for m in model_degrees(entry):
        if m["minusK3"] != entry.minusK3:
            raise CatalogCrossCheckError(entry.id, f"-K^3 ({m['model']})", entry.minusK3, m["minusK3"])
    structs = []
    for s in entry.structures:
        if s["kind"] == "dp" and "fiber" in s:
            k = fiber_KF2(s["fiber"])
            if s["KF2"] is not None and s["KF2"] != k:
                raise CatalogCrossCheckError(entry.id, "K_F^2 (fiber)", s["KF2"], k)
            s = {**s, "KF2": k}
        structs.append(s)
    return CatalogEntry(**{**entry.__dict__, "structures": tuple(structs)})


# -- loading ------------------------------------------------------------------

def default_catalog_path() -> Path:
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("gfano") / "data" / "mm.json"))


def parse_document(text: str) -> dict:
    if not text.strip():
        return {"version": 1, "entries": []}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CatalogSchemaError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return doc


def validate_document(doc: Any) -> None:
    v = jsonschema.Draft202012Validator(CATALOG_SCHEMA)
    errors = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise CatalogSchemaError(f"{where}: {_short_message(e)}")


def _short_message(err: jsonschema.ValidationError) -> str:
    # oneOf failures are noisy; point at the closest sub-error instead
    if err.context:
        best = jsonschema.exceptions.best_match(err.context)
        return best.message
    return err.message


def load_catalog(source: str | dict | os.PathLike | None = None) -> list[CatalogEntry]:
    """Validate and cross-check a catalog given as text, parsed JSON or a path."""
    if source is None:
        source = default_catalog_path()
    if isinstance(source, os.PathLike):
        source = Path(source).read_text(encoding="utf-8")
    doc = parse_document(source) if isinstance(source, str) else source
    validate_document(doc)
    seen = set()
    entries = []
    for raw in doc["entries"]:
        if raw["id"] in seen:
            raise CatalogSchemaError(f"entries: duplicate id {raw['id']}")
        seen.add(raw["id"])
        entry = CatalogEntry(**{**raw, "structures": tuple(raw["structures"])})
        entries.append(_cross_check(entry))
    return entries


def load_document(doc: dict) -> list[CatalogEntry]:
    return load_catalog(doc)


# -- classification -----------------------------------------------------------

@dataclass
class EliminationTrace:
    id: str
    rho: int
    minusK3: int
    steps: list[dict] = field(default_factory=list)
    verdict: str = UNRESOLVED
    decided_by: str | None = None
    flags: list[str] = field(default_factory=list)
    witness: dict | None = None

    @property
    def eliminated(self) -> bool:
        return self.verdict == ELIMINATED

    def label(self) -> str:
        return f"{ELIMINATED}({self.decided_by})" if self.eliminated else self.verdict

    def add(self, step: str, cid: str, passed: bool, **params) -> bool:
        self.steps.append({"step": step, "constraint": cid, "passed": bool(passed), "params": params})
        return passed

    def to_dict(self) -> dict:
        return {
            "id": self.id, "rho": self.rho, "minusK3": self.minusK3,
            "verdict": self.label(), "decidedBy": self.decided_by,
            "flags": self.flags, "witness": self.witness, "steps": self.steps,
        }


def _witness_step(trace: EliminationTrace, lat: PicardLattice, entry_bound: int) -> bool:
    w = minimal_witness(lat, entry_bound=entry_bound)
    if w is None:
        return trace.add("lattice", C.LATTICE_WITNESS, False, rank=lat.rank)
    trace.witness = {
        "order": w.order,
        "generators": [[list(r) for r in g.matrix] for g in w.generators],
    }
    return trace.add("lattice", C.LATTICE_WITNESS, True, rank=lat.rank, order=w.order)


def _conic_step(trace: EliminationTrace, entry: CatalogEntry, s: dict) -> bool:
    c1 = entry.minusK3
    lengths = [n for n in corollary_orders(entry.rho).orbit_lengths() if n in (2, 3)]
    attempts = []
    feasible = False
    for n in lengths:
        for a in range(1, 12 * n // c1 + 1):
            d = C.conic_discriminant(n, a, c1)
            att = {"n": n, "a": a, "degDelta": d}
            attempts.append(att)
            if d is None or (s["degDelta"] is not None and d != s["degDelta"]):
                continue
            if n == 2 and a * a * c1 != 12:
                att["reason"] = "a^2 c1^3 != 12"
                continue
            if n == 3 and d == 0:
                att["reason"] = "empty discriminant with n = 3"
                continue
            feasible = True
            att["h12"] = C.hodge_conic(entry.rho, 1, C.plane_curve_genus(d))
            if att["h12"] == entry.h12:
                if d == 0:
                    trace.flags.append(EMPTY_DISCRIMINANT)
                return trace.add("conic", C.HODGE_CONIC, True, n=n, a=a, degDelta=d, h12=entry.h12)
    cid = C.HODGE_CONIC if feasible else C.EQ_DISC_CURVE
    return trace.add("conic", cid, False, h12=entry.h12, attempts=attempts)


def _dp_attempts(entry: CatalogEntry, s: dict, g: int) -> tuple[bool, str | None, list]:
    """Try every orbit length n | g and fiber degree; return (ok, furthest failure, log)."""
    c1 = entry.minusK3
    degrees = [s["KF2"]] if s["KF2"] is not None else list(range(1, 10))
    log = []
    worst = -1
    for n in divisors(g)[1:]:
        for k in degrees:
            if (n * k) % c1:
                log.append({"n": n, "KF2": k, "failed": C.DP_I})
                worst = max(worst, 0)
                continue
            rep = C.dp_bundle_check(C.DPBundleInstance(n, n * k // c1, c1, k, entry.rho))
            fail = rep.first_failure
            log.append({"n": n, "KF2": k, "a": n * k // c1, "failed": fail})
            if fail is None:
                return True, None, log
            worst = max(worst, C.DP_IDS.index(fail))
    return False, C.DP_IDS[max(worst, 0)], log


def _dp_step(trace: EliminationTrace, entry: CatalogEntry, dps: list[dict]) -> bool:
    orders = corollary_orders(entry.rho).values()
    per_struct = []
    for s in dps:
        ok_orders, worst, logs = [], [], {}
        for g in orders:
            ok, fail, log = _dp_attempts(entry, s, g)
            if ok:
                ok_orders.append(g)
            else:
                worst.append(fail)
            logs[g] = log
        per_struct.append((s, ok_orders, worst))
    for s, ok_orders, worst in per_struct:
        if not ok_orders:
            cid = max(worst, key=C.DP_IDS.index)
            return trace.add("dp", cid, False, KF2=s["KF2"], orders=orders)
    common = set.intersection(*(set(o) for _, o, _ in per_struct))
    if not common:
        return trace.add("dp", C.DP_ORDERS, False,
                         orders={str(s["KF2"]): o for s, o, _ in per_struct})
    return trace.add("dp", C.DP_ORDERS, True, orders=sorted(common))


def _rho2_step(trace: EliminationTrace, entry: CatalogEntry) -> bool:
    blowups = entry.of_kind("blowup")
    if any(b["center"] == "point" for b in blowups):
        return trace.add("rho2", C.RHO2_POINT, False)
    curves = [b for b in blowups if b["center"] == "curve"]
    params = {"bases": [b.get("base") for b in curves]}
    if len(curves) != 2 or curves[0].get("base") != curves[1].get("base"):
        return trace.add("rho2", C.RHO2_R, False, reason="contractions not exchanged", **params)
    base = BASES.get(curves[0].get("base", ""))
    if base is None or base.index is None:
        return trace.add("rho2", C.RHO2_R, False, reason="base index unknown", **params)
    r = base.index
    cases = {c.r: c for c in C.rho2_birational_analysis(base.A3)}
    if r not in cases:
        return trace.add("rho2", C.RHO2_R, False, r=r, reason="A1.C1 <= 0", **params)
    case = cases[r]
    # A.C = -K.C / r on the base
    deg = curves[0]["degMKC"]
    ok = case.c1cubed == entry.minusK3 and case.A1C1 * r == deg
    return trace.add("rho2", C.RHO2_R, ok, r=r, c1cubed=case.c1cubed, A1C1=case.A1C1,
                     degMKC=deg, **params)


def classify_entry(entry: CatalogEntry, entry_bound: int = 3) -> EliminationTrace:
    t = EliminationTrace(entry.id, entry.rho, entry.minusK3)
    lat = model_lattice(entry)

    def finish_eliminated() -> EliminationTrace:
        t.verdict = ELIMINATED
        t.decided_by = t.steps[-1]["constraint"]
        return t

    if entry.fanoIndex >= 2:
        if lat is not None and not _witness_step(t, lat, entry_bound):
            return finish_eliminated()
        t.add("index", C.PRIOR_WORK, True, fanoIndex=entry.fanoIndex)
        t.verdict = PRIOR_WORK
        return t

    for s in entry.of_kind("product"):
        rep = C.product_exclusion(s["KZ2"])
        if not t.add("product", C.PRODUCT_EXCL, rep.passed, **rep.checks[0].witness):
            return finish_eliminated()
    for s in entry.of_kind("conic"):
        if s["base"] == "P2" and not _conic_step(t, entry, s):
            return finish_eliminated()
    dps = entry.of_kind("dp")
    if dps and not _dp_step(t, entry, dps):
        return finish_eliminated()
    if entry.rho == 2 and not entry.of_kind("conic") and not dps:
        if entry.of_kind("blowup") and not _rho2_step(t, entry):
            return finish_eliminated()
    if lat is not None:
        if not _witness_step(t, lat, entry_bound):
            return finish_eliminated()
        t.verdict = SURVIVES
        return t
    t.verdict = UNRESOLVED
    t.flags.append(NO_WITNESS if t.steps else NO_APPLICABLE)
    return t


def classify(entries: Iterable[CatalogEntry], rho: int | None = None,
             entry_bound: int = 3) -> list[EliminationTrace]:
    chosen = [e for e in entries if rho is None or e.rho == rho]
    traces = [classify_entry(e, entry_bound) for e in chosen]
    return sorted(traces, key=lambda t: _id_key(t.id))


def _id_key(eid: str):
    parts = []
    for p in eid.replace("-", ".").split("."):
        parts.append((0, int(p), "") if p.isdigit() else (1, 0, p))
    return parts


# -- lookups and the final table ---------------------------------------------

def rho3_lookup(entries: Iterable[CatalogEntry]) -> list[dict]:
    """Match the open rho = 3 conic-bundle triples against the catalog."""
    rho3 = [e for e in entries if e.rho == 3]
    out = []
    for a in (1, 2):
        for d, c, h in C.rho3_conic_triples(a):
            hits = [e.id for e in rho3 if e.minusK3 == c and e.h12 == h]
            out.append({"a": a, "degDelta": d, "c1cubed": c, "h12": h, "matches": hits,
                        "eliminated": not hits})
    return out


@dataclass
class TableReport:
    rows: list[dict]
    extras: list[dict]
    missing: list[dict]
    lookup: list[dict] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (self.error is None and not self.extras and not self.missing
                and all(r["passed"] for r in self.rows)
                and all(x["eliminated"] for x in self.lookup))

    @property
    def survivors(self) -> int:
        return sum(1 for r in self.rows if r["entry"]) + len(self.extras)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "survivors": self.survivors, "rows": self.rows,
                "extras": self.extras, "missing": self.missing, "rho3Lookup": self.lookup,
                "error": self.error}


def verify_table(entries: Sequence[CatalogEntry], entry_bound: int = 3) -> TableReport:
    by_id = {e.id: e for e in entries}
    traces = classify(entries, entry_bound=entry_bound)
    kept = [t for t in traces if not t.eliminated]
    pool = list(kept)
    rows = []
    for row, rho, k3 in TABLE:
        match = next((t for t in pool if t.rho == rho and t.minusK3 == k3), None)
        if match is None:
            rows.append({"row": row, "rho": rho, "minusK3": k3, "entry": None, "passed": False})
            continue
        pool.remove(match)
        models = model_degrees(by_id[match.id])
        ok = match.verdict in (SURVIVES, PRIOR_WORK) and bool(models) and all(
            m["minusK3"] == k3 for m in models)
        rows.append({"row": row, "rho": rho, "minusK3": k3, "entry": match.id,
                     "verdict": match.label(), "models": models, "passed": ok})
    extras = [{"entry": t.id, "rho": t.rho, "minusK3": t.minusK3, "verdict": t.label(),
               "flags": t.flags} for t in pool]
    # an entry matching an open rho = 3 triple is not ruled out by the conic argument
    lookup = rho3_lookup(entries)
    kept_ids = {t.id for t in kept}
    for hit in sorted({h for x in lookup for h in x["matches"]} - kept_ids, key=_id_key):
        e = by_id[hit]
        extras.append({"entry": hit, "rho": e.rho, "minusK3": e.minusK3, "verdict": UNRESOLVED,
                       "flags": [C.RHO3_LOOKUP]})
    missing = [{"row": r["row"], "rho": r["rho"], "minusK3": r["minusK3"]}
               for r in rows if r["entry"] is None]
    return TableReport(rows, extras, missing, lookup)


def verify_document(doc: Any, entry_bound: int = 3) -> TableReport:
    """verify_table on a raw document; load failures become a failed report."""
    try:
        entries = load_catalog(doc)
    except (CatalogSchemaError, CatalogCrossCheckError) as e:
        return TableReport([], [], [], error=str(e))
    return verify_table(entries, entry_bound)
