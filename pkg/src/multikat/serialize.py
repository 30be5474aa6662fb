"""JSON input documents: schema checks, parsing into multicategories, and canonical output.

Key formats: profiles ``"a1,a2|b"`` (``"|b"`` for nullary), composites
``"f(g1,g2)"``, symmetric images ``"f@1,0"`` with 0-based permutations, and for
permutative documents ``"g(f)"`` for ``g`` after ``f`` and ``"a,b"`` for tensors.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .multicat import (
    DEFAULT_ARITY_CAP,
    BasedMulticategory,
    TableMulticategory,
    build_E,
    build_I,
    build_terminal,
    build_unit_u,
    object_name,
    power_E,
    wedge,
)
from .permutative import PermutativeCategory, PermutativeError, from_permutative, validate_permutative

SCHEMA_VERSION = 1


class InputError(ValueError):
    """The document cannot be turned into a multicategory."""


class UnreadableInput(InputError):
    """The file could not be read or is not JSON at all."""


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


@lru_cache(maxsize=None)
def input_schema() -> dict:
    text = resources.files("multikat").joinpath("schemas/input.schema.json").read_text("utf-8")
    return json.loads(text)


def load_document(path: str | Path) -> dict:
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise UnreadableInput(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnreadableInput(f"{path} is not JSON: {exc}") from exc
    return doc


def check_schema(doc) -> None:
    validator = jsonschema.Draft202012Validator(input_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        lines = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors[:10]]
        raise InputError("schema violations:\n  " + "\n  ".join(lines))


def parse_profile(key: str) -> tuple[tuple[str, ...], str]:
    left, right = key.split("|")
    return (tuple(left.split(",")) if left else ()), right


def format_profile(source, target) -> str:
    return ",".join(source) + "|" + target


def _parse_call(key: str) -> tuple[str, tuple[str, ...]]:
    head, rest = key[:-1].split("(", 1)
    return head, (tuple(rest.split(",")) if rest else ())


def _parse_sym(key: str) -> tuple[str, tuple[int, ...]]:
    head, perm = key.split("@")
    return head, tuple(int(x) for x in perm.split(","))


@dataclass(frozen=True)
class Loaded:
    multicategory: BasedMulticategory
    kind: str
    name: str
    document: dict


BUILTINS = ("terminal", "E", "E^n", "I", "u", "wedge(E,E)")


def builtin(name: str, arity_cap: int = DEFAULT_ARITY_CAP, n: int | None = None) -> BasedMulticategory:
    if name == "terminal":
        return build_terminal(arity_cap)
    if name == "E":
        return build_E(arity_cap)
    if name == "E^n":
        if n is None:
            raise InputError("builtin E^n needs the parameter n")
        return power_E(n, arity_cap)
    if name == "I":
        return build_I(arity_cap)
    if name == "u":
        return build_unit_u(arity_cap)
    if name == "wedge(E,E)":
        return wedge(build_E(arity_cap), build_E(arity_cap))
    raise InputError(f"unknown builtin {name!r}")


def _parse_multicategory(doc: dict) -> BasedMulticategory:
    cap = doc["arity_cap"]
    objects = tuple(doc["objects"])
    known = set(objects)
    hom: dict = {}
    arity_of: dict[str, int] = {}
    for key, ids in doc["hom"].items():
        source, target = parse_profile(key)
        if len(source) > cap:
            raise InputError(f"profile {key!r} exceeds the arity cap {cap}")
        for a in source + (target,):
            if a not in known:
                raise InputError(f"profile {key!r} mentions undeclared object {a!r}")
        hom[(source, target)] = list(ids)
        for i in ids:
            if i in arity_of:
                raise InputError(f"arrow id {i!r} declared twice")
            arity_of[i] = len(source)
    profile_of = {i: p for p, ids in hom.items() for i in ids}

    def need(i, where):
        if i not in arity_of:
            raise InputError(f"{where} refers to undeclared arrow {i!r}")

    comp: dict = {}
    for key, h in doc["comp"].items():
        f, gs = _parse_call(key)
        for i in (f, *gs, h):
            need(i, f"comp entry {key!r}")
        comp[(f, *gs)] = h
    sym: dict = {}
    for key, h in doc["sym"].items():
        f, sigma = _parse_sym(key)
        need(f, f"sym entry {key!r}")
        need(h, f"sym entry {key!r}")
        if sorted(sigma) != list(range(arity_of[f])):
            raise InputError(f"sym entry {key!r}: not a permutation of {arity_of[f]} inputs")
        sym[(f, sigma)] = h
    units = dict(doc["units"])
    for a, u in units.items():
        if a not in known:
            raise InputError(f"unit given for undeclared object {a!r}")
        need(u, f"unit of {a!r}")
    # unit-law composites may be omitted; explicit entries win
    for f, (source, target) in profile_of.items():
        if target in units:
            comp.setdefault((units[target], f), f)
        if all(a in units for a in source):
            comp.setdefault((f, *(units[a] for a in source)), f)
    base = TableMulticategory(objects, cap, hom, comp, sym, units, name=doc.get("name", "table"))
    if doc["basepoint"] not in known:
        raise InputError(f"basepoint {doc['basepoint']!r} is not an object")
    if len(doc["mu"]) != cap + 1:
        raise InputError(f"mu needs {cap + 1} entries, one per arity 0..{cap}")
    mu = []
    for n, i in enumerate(doc["mu"]):
        need(i, f"mu_{n}")
        mu.append(base.arrow_by_id(i))
    try:
        return BasedMulticategory(base, doc["basepoint"], tuple(mu), name=doc.get("name", "table"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_permutative(doc: dict) -> PermutativeCategory:
    objects = tuple(doc["objects"])
    arrows = {}
    for key, ids in doc["hom"].items():
        (a,), b = parse_profile(key)
        for f in ids:
            if f in arrows:
                raise InputError(f"arrow id {f!r} declared twice")
            arrows[f] = (a, b)
    for a, b in arrows.values():
        for x in (a, b):
            if x not in objects:
                raise InputError(f"hom mentions undeclared object {x!r}")

    def pairs(table):
        return {tuple(key.split(",")): v for key, v in table.items()}

    compose = {}
    for key, h in doc["compose"].items():
        g, (f,) = _parse_call(key)
        compose[(g, f)] = h
    return PermutativeCategory(
        objects,
        doc["unit"],
        arrows,
        compose,
        dict(doc["identities"]),
        pairs(doc["tensor_objects"]),
        pairs(doc["tensor_arrows"]),
        pairs(doc["symmetry"]),
        name=doc.get("name", "permutative"),
    )


def parse_document(doc, arity_cap: int | None = None) -> Loaded:
    """Schema check, then build.  ``arity_cap`` overrides a builtin's or permutative's default."""
    check_schema(doc)
    kind = doc["type"]
    cap = arity_cap or doc.get("arity_cap") or DEFAULT_ARITY_CAP
    if kind == "builtin":
        M = builtin(doc["name"], cap, doc.get("n"))
        name = doc["name"] if doc["name"] != "E^n" else f"E^{doc.get('n')}"
    elif kind == "multicategory":
        if arity_cap is not None and arity_cap != doc["arity_cap"]:
            raise InputError(f"document arity cap {doc['arity_cap']} differs from the requested {arity_cap}")
        M = _parse_multicategory(doc)
        name = M.name
    else:
        P = parse_permutative(doc)
        errs = validate_permutative(P)
        if errs:
            raise InputError("permutative category is invalid:\n  " + "\n  ".join(errs[:20]))
        try:
            M = from_permutative(P, cap, check=False)
        except PermutativeError as exc:
            raise InputError(str(exc)) from exc
        name = P.name
    return Loaded(M, kind, name, doc)


def load(path: str | Path, arity_cap: int | None = None) -> Loaded:
    return parse_document(load_document(path), arity_cap)


# ------------------------------------------------------------------ output


def serialize_multicategory(M: BasedMulticategory) -> dict:
    """A canonical table document for ``M`` (every composite within the cap is listed)."""
    arrows = M.arrows()
    ident = {f: f"a{i}" for i, f in enumerate(arrows)}
    names = {x: object_name(x) for x in M.objects}
    if len(set(names.values())) != len(names):
        raise ValueError("object names collide")
    hom = {}
    for source, target in M.profiles():
        h = M.hom(source, target)
        if h:
            hom[format_profile([names[a] for a in source], names[target])] = [ident[f] for f in h]
    comp = {}
    sym = {}
    for f in arrows:
        for gs in M.composable(f):
            comp[f"{ident[f]}({','.join(ident[g] for g in gs)})"] = ident[M.compose(f, gs)]
        for sigma in itertools.permutations(range(f.arity)):
            if sigma != tuple(range(f.arity)):
                sym[f"{ident[f]}@{','.join(map(str, sigma))}"] = ident[M.permute(f, sigma)]
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "multicategory",
        "name": M.name,
        "arity_cap": M.arity_cap,
        "objects": [names[x] for x in M.objects],
        "basepoint": names[M.basepoint],
        "mu": [ident[m] for m in M.mu],
        "hom": hom,
        "comp": comp,
        "sym": sym,
        "units": {names[a]: ident[M.unit(a)] for a in M.objects},
    }


def serialize_permutative(P: PermutativeCategory) -> dict:
    hom: dict[str, list] = {}
    for f, (a, b) in P.arrows.items():
        hom.setdefault(f"{a}|{b}", []).append(f)
    return {
        "schema_version": SCHEMA_VERSION,
        "type": "permutative",
        "name": P.name,
        "objects": list(P.objects),
        "unit": P.unit,
        "hom": hom,
        "identities": dict(P.identities),
        "compose": {f"{g}({f})": h for (g, f), h in P.compose.items()},
        "tensor_objects": {f"{a},{b}": c for (a, b), c in P.tensor_objects.items()},
        "tensor_arrows": {f"{f},{g}": h for (f, g), h in P.tensor_arrows.items()},
        "symmetry": {f"{a},{b}": c for (a, b), c in P.symmetry.items()},
    }


def canonicalize(doc: dict) -> dict:
    """Key-sorted copy of a document; hom lists keep their order, which fixes arrow order."""
    return json.loads(canonical_json(doc))
