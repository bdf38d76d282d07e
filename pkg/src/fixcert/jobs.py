"""Run the claims of a manifest and collect a deterministic report."""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .autgroup import GroupTooLarge, NotAbelian, abelian_type, close_group
from .fixlocus import PreconditionError, verify_fixed_point_witness, verify_no_fixed_points
from .geometry import Variety, is_empty_valid, is_invariant, invariance_failure, is_smooth
from .groebner import Budget, DEFAULT_CAP, Ideal, ResourceCapExceeded, groebner_basis, intersect, radical_membership
from .manifest import Claim, Manifest, find_manifest, load_manifest
from .realcert import PositivityCertificate, check_certificate

__all__ = ["JobOptions", "ClaimResult", "Report", "run_job", "run_paths", "overall_status",
           "VERDICTS", "TRANSFER_ASSUMPTION"]

VERDICTS = ("Pass", "Fail", "CapExceeded", "ConditionalPass", "AssertedOnly")
TRANSFER_ASSUMPTION = ("equivariant-morphism functoriality: the blowup map sends a fixed point "
                       "(or a real point) of the blowup to one of the base")

# lower runs first; derived claims need the fixed-locus and real verdicts of their base
_ORDER = {"smooth": 0, "invariant": 1, "group_type": 2, "no_fixed_points": 3, "fixed_point_witness": 3,
          "real_pointless": 4, "derived_via": 5, "asserted": 6}


@dataclass(frozen=True)
class JobOptions:
    claims: tuple[str, ...] | None = None
    engine: str | None = None
    tier: str = "fast"
    cap: int = DEFAULT_CAP
    group_cap: int = 1024

    def to_dict(self) -> dict:
        d = asdict(self)
        d["claims"] = list(self.claims) if self.claims is not None else None
        return d


@dataclass
class ClaimResult:
    index: int
    kind: str
    verdict: str
    detail: dict = field(default_factory=dict)
    engine: str = ""
    counters: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ClaimResult":
        return cls(**d)


@dataclass
class Report:
    id: str
    example: str
    path: str
    field: int
    status: str
    claims: list[ClaimResult]
    options: dict
    seconds: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["claims"] = [c.to_dict() for c in self.claims]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = dict(d)
        d["claims"] = [ClaimResult.from_dict(c) for c in d["claims"]]
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def claim(self, kind: str) -> ClaimResult:
        for c in self.claims:
            if c.kind == kind:
                return c
        raise KeyError(kind)


def overall_status(verdicts: Sequence[str]) -> str:
    if "Fail" in verdicts:
        return "Fail"
    if "CapExceeded" in verdicts:
        return "CapExceeded"
    if all(v in ("Pass", "ConditionalPass") for v in verdicts):
        return "Pass"
    return "AssertedOnly"


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


# --------------------------------------------------------------------------
# claim handlers; each returns (verdict, detail, engine)


def _smooth(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    V = m.variety_for(p)
    if p.get("tier", "fast") == "full" and opts.tier != "full":
        return "CapExceeded", {"reason": "deferred to tier full"}, ""
    exp_dim = p.get("expected_dimension", m.expected_dimension if "equations" not in p else None)
    sv = is_smooth(V, opts.tier, budget, expected_dimension=exp_dim, route=p.get("route", "auto"))
    detail = {"status": sv.status, "reason": sv.reason, "dimension": sv.dimension, "codim": sv.codim,
              "minors": sv.minors}
    if sv.status == "CapExceeded":
        return "CapExceeded", detail, ""
    expect = p.get("expect", "Smooth")
    if sv.status != expect:
        if sv.witness is not None:
            detail["witness"] = str(sv.witness)
        return "Fail", detail, ""
    if sv.status == "Singular":
        detail["witness"] = str(sv.witness)
        if "witness_point" in p:
            pt = m.parse_point(p["witness_point"])
            on = all(not g.evaluate(pt) for g in sv.witness.generators)
            detail["witness_point_in_singular_locus"] = on
            if not on:
                return "Fail", detail, ""
    return "Pass", detail, ""


def _invariant(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    V = m.variety_for(p)
    gb = groebner_basis(V.ideal, budget=budget)
    bad = []
    for g in m.select_generators(p.get("generators")):
        fail = invariance_failure(V, g.matrix, gb, budget)
        if fail is not None:
            bad.append({"generator": g.label, "equation": str(fail[0]), "remainder": str(fail[1])})
    if bad:
        return "Fail", {"failures": bad}, ""
    return "Pass", {"generators": len(m.select_generators(p.get("generators")))}, ""


def _group_type(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    gens = m.select_generators(p.get("generators"))
    try:
        G = close_group(gens, cap=opts.group_cap, grading=m.ambient.grading, fld=m.field)
    except GroupTooLarge as e:
        return "CapExceeded", {"reason": f"group exceeds {e.cap} elements"}, ""
    t = abelian_type(G)
    expected = [int(x) for x in p["factors"]]
    if isinstance(t, NotAbelian):
        a, b = t.witness
        return "Fail", {"order": G.order, "not_abelian": [G.elements[a].label or str(a),
                                                          G.elements[b].label or str(b)]}, ""
    detail = {"order": G.order, "invariant_factors": list(t.invariant_factors),
              "primary": "".join(f"({q})" for q in t.primary()) or "()",
              "expected": expected}
    return ("Pass" if list(t.invariant_factors) == expected else "Fail"), detail, ""


def _no_fixed_points(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    V = m.variety_for(p)
    gens = m.select_generators(p.get("generators"))
    engine = opts.engine or p.get("engine", "auto")
    notes = []
    try:
        fv = verify_no_fixed_points(V, gens, engine, budget)
    except PreconditionError as e:
        notes.append(f"{engine}: {e}; fell back to auto")
        fv = verify_no_fixed_points(V, gens, "auto", budget)
    detail = {"status": fv.status, "exactness": fv.exactness, "fallbacks": notes + list(fv.fallbacks)}
    if fv.components is not None:
        detail["components"] = fv.components
    if fv.witness:
        detail["witness"] = fv.witness
    if fv.detail:
        detail["reason"] = fv.detail
    if fv.status in ("CapExceeded", "Inconclusive"):
        return "CapExceeded", detail, fv.engine
    if fv.status == "InvarianceFailed":
        return "Fail", detail, fv.engine
    return ("Pass" if fv.status == p.get("expect", "Empty") else "Fail"), detail, fv.engine


def _fixed_point_witness(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    V = m.variety_for(p)
    pt = m.parse_point(p["point"])
    ok = verify_fixed_point_witness(V, m.select_generators(p.get("generators")), pt)
    expect = bool(p.get("expect", True))
    return ("Pass" if ok == expect else "Fail"), {"fixed": ok, "point": [str(x) for x in pt]}, ""


def _real_pointless(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    if "asserted" in p:
        return "AssertedOnly", {"citation": str(p["asserted"])}, ""
    V = m.variety_for(p)
    rep = check_certificate(V, PositivityCertificate.from_tree(p["certificate"]))
    detail = {"status": rep.verdict, "reason": rep.reason, "forced_zero": rep.forced_zero}
    return ("Pass" if rep.verdict == p.get("expect", "CertifiedEmpty") else "Fail"), detail, ""


def _asserted(m: Manifest, p: dict, opts: JobOptions, budget: Budget):
    return "AssertedOnly", {"statement": p["statement"], "citation": p.get("citation", "")}, ""


_HANDLERS = {"smooth": _smooth, "invariant": _invariant, "group_type": _group_type,
             "no_fixed_points": _no_fixed_points, "fixed_point_witness": _fixed_point_witness,
             "real_pointless": _real_pointless, "asserted": _asserted}


# --------------------------------------------------------------------------
# equivariant blowup transfer


def _conjugate_poly(f):
    return f.map_coefficients(f.ring.field.conjugate)


def _derived(m: Manifest, p: dict, opts: JobOptions, budget: Budget, own: dict[str, list[ClaimResult]],
             cache: dict):
    base = m if p["base"] == "self" else load_manifest(find_manifest(str(p["base"]), m.path))
    transfers = p.get("transfers", ["no_fixed_points"])
    base_results = dict(own) if base is m else {}
    if any(t not in base_results for t in transfers):
        key = (str(Path(base.path).resolve()), base.id, opts)
        if key not in cache:
            kinds = tuple(transfers) if base is m else ("no_fixed_points", "real_pointless", "derived_via")
            cache[key] = run_job(base, JobOptions(kinds, opts.engine, opts.tier, opts.cap, opts.group_cap), cache)
        for c in cache[key].claims:
            base_results.setdefault(c.kind, []).append(c)
    comps_src = p["centers"] if "centers" in p else [p["center"]]
    ring = base.ring
    comps = [Ideal(ring, [ring.parse(str(e)) for e in comp]) for comp in comps_src]
    center = comps[0]
    for C in comps[1:]:
        center = intersect(center, C, budget)
    W = Variety(base.ambient, center)
    gens = base.select_generators(p.get("generators"))
    gb = groebner_basis(center, budget=budget)
    checks: dict[str, Any] = {}
    checks["center_invariant"] = all(is_invariant(W, g.matrix, budget, gb=gb) for g in gens)
    checks["center_on_base"] = all(radical_membership(f, C, budget)
                                   for C in comps for f in base.variety.ideal.generators)
    checks["center_nonempty"] = all(not is_empty_valid(C, base.ambient, budget) for C in comps)
    base_ok = {}
    for t in transfers:
        rs = base_results.get(t, [])
        base_ok[t] = [r.verdict for r in rs]
        if t == "real_pointless":
            checks["center_real"] = all(gb.contains(_conjugate_poly(f)) for f in center.generators)
    checks["base_verdicts"] = base_ok
    good_base = all(v and all(x in ("Pass", "ConditionalPass") for x in v) for v in base_ok.values())
    checks["base"] = base.id
    checks["assumption"] = TRANSFER_ASSUMPTION
    passed = good_base and all(checks[k] for k in ("center_invariant", "center_on_base", "center_nonempty"))
    if "center_real" in checks:
        passed = passed and checks["center_real"]
    if not passed and any("CapExceeded" in v for v in base_ok.values()):
        return "CapExceeded", checks, ""
    return ("ConditionalPass" if passed else "Fail"), checks, ""


# --------------------------------------------------------------------------


def run_job(m: Manifest, options: JobOptions | None = None, cache: dict | None = None) -> Report:
    """Run the selected claims of ``m`` in dependency order; failures become verdicts."""
    opts = options or JobOptions()
    cache = cache if cache is not None else {}
    t0 = time.perf_counter()
    selected = [c for c in m.claims if opts.claims is None or c.kind in opts.claims]
    results: dict[int, ClaimResult] = {}
    by_kind: dict[str, list[ClaimResult]] = {}
    for c in sorted(selected, key=lambda c: (_ORDER[c.kind], c.index)):
        budget = Budget(cap=opts.cap)
        t = time.perf_counter()
        try:
            if c.kind == "derived_via":
                verdict, detail, engine = _derived(m, c.params, opts, budget, by_kind, cache)
            else:
                verdict, detail, engine = _HANDLERS[c.kind](m, c.params, opts, budget)
        except ResourceCapExceeded as e:
            verdict, detail, engine = "CapExceeded", {"reason": str(e)}, ""
        if "note" in c.params:
            detail["note"] = str(c.params["note"])
        r = ClaimResult(c.index, c.kind, verdict, _jsonable(detail), engine,
                        {"pair_reductions": budget.used, "bases": budget.bases},
                        round(time.perf_counter() - t, 3))
        results[c.index] = r
        by_kind.setdefault(c.kind, []).append(r)
    claims = [results[k] for k in sorted(results)]
    return Report(m.id, m.example, m.path, m.field.order, overall_status([r.verdict for r in claims]),
                  claims, opts.to_dict(), round(time.perf_counter() - t0, 3))


def _run_path(path: str, opts: JobOptions) -> Report:
    return run_job(load_manifest(path), opts)


def run_paths(paths: Sequence[str], opts: JobOptions, jobs: int = 1) -> list[Report]:
    """Run many manifests, optionally in worker processes; output order follows ``paths``."""
    if jobs <= 1 or len(paths) <= 1:
        cache: dict = {}
        return [run_job(load_manifest(p), opts, cache) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_run_path, paths, [opts] * len(paths)))
