"""Manifest files (``.fxl``): a YAML tree describing one example and its claims.

Top-level keys::

    id, example, title, field, ambient, equations, expected_dimension,
    witness_points, generators, claims, notes

``ambient`` is one of ``projective`` (coords), ``weighted`` (coords, weights),
``product`` (blocks, optional extra) or ``cox`` (coords, weights, irrelevant).
Any kind may add ``singular_strata``.  A generator is a mapping with ``name``
and exactly one of ``map`` (``x1 -> -x1, ...``), ``images`` or ``matrix``.
Every claim is a mapping with a ``kind`` key; see :data:`CLAIM_KINDS`.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .autgroup import AutElement, GradingError, parse_generator, primary_factors
from .cyclotomic import CyclotomicField, OrderMismatch
from .geometry import Ambient, Variety
from .groebner import Ideal
from .poly import Inhomogeneous, PolyParseError, multidegree
from .realcert import PositivityCertificate

__all__ = ["Manifest", "Claim", "ManifestError", "load_manifest", "load_tree", "CLAIM_KINDS", "find_manifest"]

CLAIM_KINDS = {
    "smooth": {"tier", "expect", "witness_point", "equations", "on", "note", "expected_dimension", "route"},
    "invariant": {"equations", "on", "generators", "note"},
    "group_type": {"factors", "primary", "generators", "note"},
    "no_fixed_points": {"engine", "expect", "equations", "on", "generators", "note"},
    "fixed_point_witness": {"point", "expect", "equations", "on", "generators", "note"},
    "real_pointless": {"certificate", "asserted", "equations", "on", "note", "expect"},
    "derived_via": {"construction", "base", "center", "centers", "generators", "transfers", "family", "note"},
    "asserted": {"statement", "citation", "note"},
}

TOP_KEYS = {"id", "example", "title", "field", "ambient", "equations", "expected_dimension",
            "witness_points", "generators", "claims", "notes"}


class ManifestError(ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


@dataclass
class Claim:
    index: int
    kind: str
    params: dict

    @property
    def label(self) -> str:
        return f"{self.index}:{self.kind}"


@dataclass
class Manifest:
    id: str
    example: str
    title: str
    field: CyclotomicField
    ambient: Ambient
    variety: Variety
    equations: list[str]
    expected_dimension: int | None
    witness_points: list[list]
    generators: list[AutElement]
    generator_names: list[str]
    claims: list[Claim]
    notes: str = ""
    path: str = ""
    tree: dict = field(default_factory=dict, repr=False)

    @property
    def ring(self):
        return self.variety.ring

    def select_generators(self, names) -> list[AutElement]:
        if names is None:
            return list(self.generators)
        out = []
        for n in names:
            if n not in self.generator_names:
                raise ManifestError(self.id, f"unknown generator {n!r}")
            out.append(self.generators[self.generator_names.index(n)])
        return out

    def variety_for(self, params: dict) -> Variety:
        """The main variety, the bare ambient (``on: ambient``) or a claim-local subvariety."""
        if params.get("on") == "ambient":
            return Variety(self.ambient, Ideal(self.ring, []))
        if "equations" in params:
            return Variety(self.ambient, Ideal(self.ring, [self.ring.parse(e) for e in params["equations"]]))
        return self.variety

    def parse_point(self, point) -> list:
        return _parse_point(point, self.ring, self.id)


def _parse_point(point, ring, where) -> list:
    if len(point) != ring.nvars:
        raise ManifestError(where, f"point {point} needs {ring.nvars} coordinates")
    out = []
    for x in point:
        try:
            p = ring.parse(str(x))
        except PolyParseError as e:
            raise ManifestError(where, f"bad point coordinate {x!r}: {e}") from None
        if not p.is_constant():
            raise ManifestError(where, f"point coordinate {x!r} is not a constant")
        out.append(p.constant_value())
    return out


def find_manifest(ref: str, near: str | Path | None) -> Path:
    """Resolve a manifest id or path relative to a directory."""
    cand = Path(ref)
    if cand.suffix == ".fxl" and cand.exists():
        return cand
    base = Path(near).parent if near and Path(near).is_file() else Path(near or ".")
    p = base / f"{ref}.fxl"
    if p.exists():
        return p
    raise FileNotFoundError(f"manifest {ref!r} not found next to {base}")


class _Loader(yaml.SafeLoader):
    """YAML 1.2 booleans: only true/false, so keys such as ``on`` stay strings."""


_Loader.yaml_implicit_resolvers = {
    ch: [(tag, rx) for tag, rx in rs if tag != "tag:yaml.org,2002:bool"]
    for ch, rs in yaml.SafeLoader.yaml_implicit_resolvers.items()
}
_Loader.add_implicit_resolver("tag:yaml.org,2002:bool", re.compile(r"^(?:true|True|TRUE|false|False|FALSE)$"),
                              list("tTfF"))


def load_tree(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            tree = yaml.load(fh, Loader=_Loader)
        except yaml.YAMLError as e:
            raise ManifestError(str(path), f"not valid YAML/JSON: {e}") from None
    if not isinstance(tree, dict):
        raise ManifestError(str(path), "top level must be a mapping")
    return tree


def _build_ambient(spec: dict, where: str) -> Ambient:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ManifestError(where, "ambient needs a kind")
    kind = spec["kind"]
    try:
        if kind == "projective":
            coords = spec["coords"]
            amb = Ambient.projective(len(coords) - 1, coords)
        elif kind == "weighted":
            amb = Ambient.weighted(spec["weights"], spec["coords"])
        elif kind == "product":
            amb = Ambient.product(spec["blocks"])
            for ex in spec.get("extra", []):
                amb = amb.with_coordinate(ex["name"], ex["weight"])
        elif kind == "cox":
            amb = Ambient.cox(spec["coords"], spec["weights"], spec["irrelevant"])
        else:
            raise ManifestError(where, f"unknown ambient kind {kind!r}")
    except KeyError as e:
        raise ManifestError(where, f"ambient of kind {kind} is missing {e}") from None
    except ValueError as e:
        if isinstance(e, ManifestError):
            raise
        raise ManifestError(where, f"bad ambient: {e}") from None
    if "singular_strata" in spec:
        strata = tuple(tuple(str(s) for s in st) for st in spec["singular_strata"])
        amb = Ambient(amb.coords, amb.grading, amb.irrelevant, strata, kind=amb.kind)
    if any(p is None for p in amb.grading.pivots()):
        raise ManifestError(where, "every torus factor needs a coordinate of unit weight")
    return amb


def _check_factors(factors, where: str) -> tuple[int, ...]:
    fs = tuple(int(f) for f in factors)
    if any(f <= 1 for f in fs):
        raise ManifestError(where, f"invariant factors must exceed 1, got {list(fs)}")
    for a, b in zip(fs, fs[1:]):
        if b % a:
            raise ManifestError(where, f"invariant factors {list(fs)} are not normalized: {a} does not divide {b}")
    return fs


def load_manifest(path: str | Path) -> Manifest:
    path = str(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    tree = load_tree(path)
    return build_manifest(tree, path)


_LOADING: set[str] = set()


def _load_base(ref: str, path: str, where: str) -> "Manifest":
    try:
        target = str(Path(find_manifest(ref, path)).resolve())
    except FileNotFoundError:
        raise ManifestError(where, f"dangling base reference {ref!r}") from None
    if target in _LOADING:
        raise ManifestError(where, f"cyclic base reference {ref!r}")
    _LOADING.add(target)
    try:
        return load_manifest(target)
    finally:
        _LOADING.discard(target)


def _is_assertion(c) -> bool:
    return isinstance(c, dict) and (c.get("kind") == "asserted"
                                     or (c.get("kind") == "real_pointless" and "asserted" in c))


def build_manifest(tree: dict, path: str = "<memory>") -> Manifest:
    where = f"{path}"
    unknown = set(tree) - TOP_KEYS
    if unknown:
        raise ManifestError(where, f"unknown keys {sorted(unknown)}")
    for key in ("id", "claims"):
        if key not in tree:
            raise ManifestError(where, f"missing key {key!r}")
    mid = str(tree["id"])
    where = f"{path} [{mid}]"
    if "ambient" not in tree:
        # records of statements without equations live on a one-point placeholder
        if not all(_is_assertion(c) for c in tree.get("claims", []) or []):
            raise ManifestError(where, "missing key 'ambient' (only asserted claims may omit it)")
        tree = {**tree, "ambient": {"kind": "projective", "coords": ["x0"]}}
    try:
        fld = CyclotomicField(int(tree.get("field", 1)))
    except (TypeError, ValueError) as e:
        raise ManifestError(where, f"bad field order: {e}") from None
    amb = _build_ambient(tree["ambient"], f"{where} ambient")
    ring = amb.ring(fld)
    eqs = [str(e) for e in tree.get("equations", []) or []]
    polys = []
    for k, e in enumerate(eqs):
        try:
            p = ring.parse(e)
        except (PolyParseError, OrderMismatch) as err:
            raise ManifestError(f"{where} equations[{k}]", str(err)) from None
        deg = multidegree(p, amb.grading)
        if isinstance(deg, Inhomogeneous):
            raise ManifestError(f"{where} equations[{k}]", f"Inhomogeneous: terms of degrees {deg.degrees[0]} and {deg.degrees[1]}")
        polys.append(p)
    V = Variety(amb, Ideal(ring, polys))
    gens, names = [], []
    for k, g in enumerate(tree.get("generators", []) or []):
        gw = f"{where} generators[{k}]"
        if not isinstance(g, dict):
            raise ManifestError(gw, "generator must be a mapping")
        name = str(g.get("name", f"g{k + 1}"))
        forms = [key for key in ("map", "images", "matrix") if key in g]
        if len(forms) != 1:
            raise ManifestError(gw, "give exactly one of map, images, matrix")
        try:
            gens.append(parse_generator(g[forms[0]], ring, amb.grading, name))
        except (GradingError, PolyParseError, OrderMismatch, ValueError) as err:
            raise ManifestError(gw, str(err)) from None
        if name in names:
            raise ManifestError(gw, f"duplicate generator name {name!r}")
        names.append(name)
    claims = []
    for k, c in enumerate(tree.get("claims", []) or []):
        cw = f"{where} claims[{k}]"
        if not isinstance(c, dict) or "kind" not in c:
            raise ManifestError(cw, "claim must be a mapping with a kind")
        kind = c["kind"]
        if kind not in CLAIM_KINDS:
            raise ManifestError(cw, f"unknown claim kind {kind!r}")
        params = {key: v for key, v in c.items() if key != "kind"}
        extra = set(params) - CLAIM_KINDS[kind]
        if extra:
            raise ManifestError(cw, f"unknown keys {sorted(extra)} for claim {kind}")
        _validate_claim(kind, params, ring, amb, names, cw, path)
        claims.append(Claim(k, kind, params))
    wps = []
    for pt in tree.get("witness_points", []) or []:
        wps.append(_parse_point(pt, ring, where))
    exp = tree.get("expected_dimension")
    return Manifest(mid, str(tree.get("example", "")), str(tree.get("title", "")), fld, amb, V, eqs,
                    int(exp) if exp is not None else None, wps, gens, names, claims,
                    str(tree.get("notes", "") or ""), path, tree)


def _validate_claim(kind: str, params: dict, ring, amb, names, where: str, path: str):
    if kind == "derived_via" and params.get("base", "self") != "self":
        # centers and generator names refer to the base manifest
        base = _load_base(str(params["base"]), path, where)
        _check_polys(params, base.ring, base.ambient, base.generator_names, where)
    else:
        _check_polys(params, ring, amb, names, where)
    _check_kind(kind, params, where, path)


def _check_polys(params: dict, ring, amb, names, where: str):
    for key in ("equations", "center"):
        for k, e in enumerate(params.get(key, []) or []):
            try:
                p = ring.parse(str(e))
            except (PolyParseError, OrderMismatch) as err:
                raise ManifestError(f"{where} {key}[{k}]", str(err)) from None
            if isinstance(multidegree(p, amb.grading), Inhomogeneous):
                raise ManifestError(f"{where} {key}[{k}]", "Inhomogeneous")
    for k, comp in enumerate(params.get("centers", []) or []):
        for e in comp:
            try:
                ring.parse(str(e))
            except (PolyParseError, OrderMismatch) as err:
                raise ManifestError(f"{where} centers[{k}]", str(err)) from None
    sel = params.get("generators")
    if sel is not None:
        for n in sel:
            if n not in names:
                raise ManifestError(where, f"unknown generator {n!r}")


def _check_kind(kind: str, params: dict, where: str, path: str):
    if kind == "smooth" and params.get("route", "auto") not in ("auto", "charts"):
        raise ManifestError(where, f"unknown smoothness route {params['route']!r}")
    if kind == "group_type":
        if "factors" not in params:
            raise ManifestError(where, "group_type needs factors")
        fs = _check_factors(params["factors"], where)
        if "primary" in params:
            if tuple(sorted(int(x) for x in params["primary"])) != primary_factors(fs):
                raise ManifestError(where, "primary decomposition does not match the invariant factors")
    if kind == "smooth":
        if params.get("tier", "fast") not in ("fast", "full"):
            raise ManifestError(where, "tier must be fast or full")
        if params.get("expect", "Smooth") not in ("Smooth", "Singular"):
            raise ManifestError(where, "smooth expects Smooth or Singular")
    if kind == "no_fixed_points":
        if params.get("engine", "auto") not in ("auto", "minors", "elimination", "eigenspace"):
            raise ManifestError(where, "unknown engine")
        if params.get("expect", "Empty") not in ("Empty", "Nonempty"):
            raise ManifestError(where, "no_fixed_points expects Empty or Nonempty")
    if kind == "fixed_point_witness" and "point" not in params:
        raise ManifestError(where, "fixed_point_witness needs a point")
    if kind == "real_pointless":
        if ("certificate" in params) == ("asserted" in params):
            raise ManifestError(where, "real_pointless needs exactly one of certificate, asserted")
        if "certificate" in params:
            try:
                PositivityCertificate.from_tree(params["certificate"])
            except (KeyError, TypeError, AttributeError) as err:
                raise ManifestError(where, f"malformed certificate: {err}") from None
    if kind == "derived_via":
        if params.get("construction", "equivariant-blowup") != "equivariant-blowup":
            raise ManifestError(where, "only equivariant-blowup constructions are supported")
        if "base" not in params:
            raise ManifestError(where, "derived_via needs a base")
        if ("center" in params) == ("centers" in params):
            raise ManifestError(where, "give exactly one of center, centers")
        for t in params.get("transfers", ["no_fixed_points"]):
            if t not in ("no_fixed_points", "real_pointless"):
                raise ManifestError(where, f"cannot transfer {t!r}")
    if kind == "asserted" and "statement" not in params:
        raise ManifestError(where, "asserted needs a statement")
