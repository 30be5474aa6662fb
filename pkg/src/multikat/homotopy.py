"""Certificates for weak equivalences of nerves, and the invariants read off a K-theory Gamma-object.

Nothing here decides weak equivalence.  A functor is certified either by an
initial object in every slice (Quillen's Theorem A) or by being an equivalence
of categories; a missing certificate is reported as such, never as a negative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .categories import (
    FiniteCategory,
    Functor,
    Morphism,
    class_of,
    is_groupoid,
    is_initial,
    isomorphic_objects,
    pi0_category,
    product_category,
    slice_category,
)
from .enumeration import (
    DEFAULT_BUDGET,
    endpoint_inclusions,
    hom_category,
    precompose,
    precompose_components,
    thin_multifunctor,
)
from .gamma import GammaObject, fold, rho
from .groups import FiniteMonoid, automorphism_group
from .multicat import BasedMulticategory, build_E, build_I, object_name

INITIAL = "initial-object-per-slice"
EQUIVALENCE = "categorical-equivalence"
ISOMORPHISM = "isomorphism"


@dataclass(frozen=True, eq=False)
class Certificate:
    kind: str
    functor: Functor
    witness: dict

    def __bool__(self) -> bool:
        return True

    def verify(self) -> bool:
        """Re-check the witness from scratch."""
        F = self.functor
        if self.kind == INITIAL:
            for d, (i, c, _) in enumerate(self.witness["initial"]):
                S = slice_category(F, d)
                if S.objects[i][0] != c or not is_initial(S, i):
                    return False
            return True
        return not _equivalence_failure(F, self.witness["inverse_objects"])

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "functor": self.functor.name}
        if self.kind == INITIAL:
            out["initial"] = [{"slice": d, "object": c, "arrow": u} for d, (_, c, u) in enumerate(self.witness["initial"])]
        else:
            out["inverse_objects"] = list(self.witness["inverse_objects"])
        return out


@dataclass(frozen=True)
class NotCertified:
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> dict:
        return {"kind": None, "reason": self.reason}


def theorem_A_certificate(F: Functor) -> Certificate | NotCertified:
    """Least initial object of every slice ``d/F``, if each slice has one."""
    D = F.target
    chosen = []
    for d in range(len(D.objects)):
        S = slice_category(F, d)
        pick = next((i for i in range(len(S.objects)) if is_initial(S, i)), None)
        if pick is None:
            what = "is empty" if not S.objects else "has no initial object"
            return NotCertified(f"slice over object {d} {what}")
        c, u = S.objects[pick]
        chosen.append((pick, c, D.hom(d, F.obj[c]).index(u)))
    return Certificate(INITIAL, F, {"initial": chosen})


def _equivalence_failure(F: Functor, inverse_objects) -> str | None:
    C, D = F.source, F.target
    n = len(C.objects)
    for a, b in itertools.product(range(n), repeat=2):
        images = [F(f) for f in C.hom(a, b)]
        if len(set(images)) != len(images):
            return f"not faithful on hom({a},{b})"
        if len(images) != len(D.hom(F.obj[a], F.obj[b])):
            return f"not full on hom({a},{b})"
    for d, c in enumerate(inverse_objects):
        if c is None or isomorphic_objects(D, F.obj[c], d) is None:
            return f"object {d} of the target is not in the essential image"
    return None


def equivalence_certificate(F: Functor) -> Certificate | NotCertified:
    """Full, faithful and essentially surjective, checked by brute force."""
    C, D = F.source, F.target
    inverse = []
    for d in range(len(D.objects)):
        hit = next((c for c in range(len(C.objects)) if F.obj[c] == d), None)
        if hit is None:
            hit = next((c for c in range(len(C.objects)) if isomorphic_objects(D, F.obj[c], d) is not None), None)
        inverse.append(hit)
    reason = _equivalence_failure(F, inverse)
    if reason is not None:
        return NotCertified(reason)
    bijective = sorted(F.obj) == list(range(len(D.objects)))
    return Certificate(ISOMORPHISM if bijective else EQUIVALENCE, F, {"inverse_objects": tuple(inverse)})


def segal_certificate(X: GammaObject, n: int) -> Certificate | NotCertified:
    if not 2 <= n <= X.L:
        raise ValueError(f"Segal maps are checked for 2 <= n <= {X.L}")
    p = X.segal_map(n)
    first = theorem_A_certificate(p)
    if first:
        return first
    second = equivalence_certificate(p)
    if second:
        return second
    return NotCertified(f"Segal not certified at level {n}: {first.reason}; {second.reason}")


# ------------------------------------------------------------------ pi_0 and pi_1


def object_label(X: GammaObject, n: int, i: int) -> str:
    """Names the modules picked out by a level-``n`` object, one per unit vector."""
    C = X.level(n)
    F = C.functors[i]
    S = C.source
    names = []
    for k in range(n):
        unit = tuple(1 if j == k else 0 for j in range(n))
        names.append(object_name(F.objects[S.object_index(unit)]))
    return ",".join(names) if names else "*"


@dataclass
class Pi0Result:
    ok: bool
    reason: str = ""
    classes: list[list[int]] = field(default_factory=list)
    monoid: FiniteMonoid | None = None

    def to_dict(self, X: GammaObject | None = None) -> dict:
        if not self.ok:
            return {"ok": False, "reason": self.reason}
        out = {"ok": True, **self.monoid.describe()}
        if X is not None:
            out["classes"] = [[object_label(X, 1, i) for i in cls] for cls in self.classes]
        return out


def pi0_monoid(X: GammaObject, cert: Certificate | NotCertified | None = None) -> Pi0Result:
    """The operation on components of level 1 induced by the fold map."""
    if X.L < 2:
        return Pi0Result(False, "level 2 is needed")
    if cert is None:
        cert = segal_certificate(X, 2)
    if not cert:
        return Pi0Result(False, f"no Segal certificate at level 2 ({cert.reason})")
    one = X.level(1)
    classes = pi0_category(one)
    cls = class_of(classes)
    two = X.level(2)
    p1, p2, nabla = X.action(rho(1, 2)), X.action(rho(2, 2)), X.action(fold(2))
    table: dict[tuple[int, int], int] = {}
    for c in range(len(two.objects)):
        key = (cls[p1.obj[c]], cls[p2.obj[c]])
        val = cls[nabla.obj[c]]
        if table.setdefault(key, val) != val:
            return Pi0Result(False, f"product of classes {key} is not well defined", classes)
    k = len(classes)
    missing = [pair for pair in itertools.product(range(k), repeat=2) if pair not in table]
    if missing:
        return Pi0Result(False, f"classes {missing[0]} have no level-2 preimage", classes)
    labels = tuple(object_label(X, 1, c[0]) for c in classes)
    monoid = FiniteMonoid(labels, tuple(tuple(table[(a, b)] for b in range(k)) for a in range(k)))
    if not monoid.is_commutative():
        return Pi0Result(False, "the induced operation is not commutative", classes, monoid)
    if not monoid.is_associative():
        return Pi0Result(False, "the induced operation is not associative", classes, monoid)
    if X.L >= 3:
        three = X.level(3)
        rs = [X.action(rho(i, 3)) for i in (1, 2, 3)]
        f3 = X.action(fold(3))
        for c in range(len(three.objects)):
            a, b, d = (cls[r.obj[c]] for r in rs)
            if cls[f3.obj[c]] != monoid.mul(monoid.mul(a, b), d):
                return Pi0Result(False, "level 3 disagrees with the iterated product", classes, monoid)
    return Pi0Result(True, "", classes, monoid)


def pi1_level(X: GammaObject, n: int) -> list[dict] | str:
    """Automorphism group at the least object of each component, or ``"undefined"``."""
    C = X.level(n)
    if not is_groupoid(C):
        return "undefined"
    out = []
    for component in pi0_category(C):
        a = component[0]
        G = automorphism_group(C, a)
        out.append({"object": object_label(X, n, a), "group": G.name(), "order": G.order, "abelian": G.is_commutative()})
    return out


@dataclass
class KTheoryReport:
    counts: list[dict]
    segal: dict[int, Certificate | NotCertified]
    special: bool
    pi0: Pi0Result
    pi1: dict[int, list | str]
    very_special: bool
    stable_pi0: str | None = None
    stable_pi1: str | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self, X: GammaObject | None = None) -> dict:
        return {
            "levels": self.counts,
            "segal": {str(n): c.to_dict() for n, c in sorted(self.segal.items())},
            "special": self.special,
            "pi0": self.pi0.to_dict(X),
            "pi1": {str(n): v for n, v in sorted(self.pi1.items())},
            "very_special": self.very_special,
            "stable_pi0": self.stable_pi0,
            "stable_pi1": self.stable_pi1,
            **self.extras,
        }


def basepoint_object(X: GammaObject, n: int = 1) -> int:
    """The level-``n`` object sending everything to the basepoint."""
    C = X.level(n)
    M = X.target
    for i, F in enumerate(C.functors):
        if all(y == M.basepoint for y in F.objects):
            return i
    raise LookupError("no constant multifunctor at the basepoint")


def very_special_verdict(X: GammaObject, *, counts: list[dict] | None = None) -> KTheoryReport:
    segal = {n: segal_certificate(X, n) for n in range(2, X.L + 1)}
    special = all(bool(c) for c in segal.values())
    pi0 = pi0_monoid(X, segal.get(2))
    pi1 = {n: pi1_level(X, n) for n in range(1, X.L + 1)}
    abelian = pi0.ok and pi0.monoid.is_group() and pi0.monoid.is_commutative()
    very_special = special and abelian
    report = KTheoryReport(
        counts if counts is not None else [{"level": n, "objects": len(C.objects)} for n, C in sorted(X.levels.items())],
        segal,
        special,
        pi0,
        pi1,
        very_special,
    )
    if very_special and pi1.get(1) != "undefined":
        report.stable_pi0 = pi0.monoid.name()
        home = basepoint_object(X, 1)
        one = X.level(1)
        report.stable_pi1 = automorphism_group(one, home).name()
    if very_special and not report.stable_pi0 == pi0.monoid.name():
        raise AssertionError("stable pi_0 must be the abelian group pi_0")
    return report


# ------------------------------------------------------------------ path object


@dataclass
class PathObjectReport:
    theorem_A: Certificate | NotCertified
    identity_initial: bool
    diagonal: bool
    level1_groupoid: bool
    surjective: bool | None
    isofibration: bool
    counts: dict

    @property
    def legs(self) -> dict[str, bool]:
        return {
            "a": bool(self.theorem_A) and self.identity_initial,
            "b": self.diagonal,
            "c": True if self.surjective is None else self.surjective,
        }

    @property
    def ok(self) -> bool:
        return all(self.legs.values())

    def to_dict(self) -> dict:
        return {
            "theorem_A": self.theorem_A.to_dict(),
            "identity_initial": self.identity_initial,
            "diagonal": self.diagonal,
            "level1_groupoid": self.level1_groupoid,
            "projection_surjective": self.surjective,
            "isofibration": self.isofibration,
            "legs": self.legs,
            "counts": self.counts,
        }


def path_object_check(M: BasedMulticategory, *, budget: int | None = DEFAULT_BUDGET) -> PathObjectReport:
    """The factorization of the diagonal through ``Mult*(I, M)`` at the level of categories."""
    cap = M.arity_cap
    E, I = build_E(cap), build_I(cap)
    base = hom_category(E, M, budget=budget)
    paths = hom_category(I, M, budget=budget)
    collapse = thin_multifunctor(I, E, {0: 0, 1: 1, 2: 1})
    inc1, inc2 = endpoint_inclusions(cap)

    zero_obj = tuple(paths.index[precompose(F, collapse)] for F in base.functors)

    def zero_arr(t: Morphism) -> Morphism:
        return Morphism(zero_obj[t.dom], zero_obj[t.cod], precompose_components(t.data, E, collapse))

    zero_star = Functor(base, paths, zero_obj, zero_arr, "0*")

    square = product_category([base, base], name="J1xJ1")
    proj_obj = tuple(
        square.index[(base.index[precompose(F, inc1)], base.index[precompose(F, inc2)])] for F in paths.functors
    )

    def proj_arr(t: Morphism) -> Morphism:
        top = Morphism(proj_obj[t.dom] // len(base.objects), proj_obj[t.cod] // len(base.objects), precompose_components(t.data, I, inc1))
        bottom = Morphism(proj_obj[t.dom] % len(base.objects), proj_obj[t.cod] % len(base.objects), precompose_components(t.data, I, inc2))
        return Morphism(proj_obj[t.dom], proj_obj[t.cod], (top, bottom))

    projection = Functor(paths, square, proj_obj, proj_arr, "(d0,d1)")

    cert = theorem_A_certificate(zero_star)

    # witness: the identity path at the far end of each path
    identity_initial = True
    for d, F in enumerate(paths.functors):
        S = slice_category(zero_star, d)
        end = base.index[precompose(F, inc2)]
        found = False
        for i, (c, u) in enumerate(S.objects):
            if c == end and precompose_components(u.data, I, inc2) == base.identity(c).data:
                found = is_initial(S, i)
                break
        identity_initial = identity_initial and found

    diagonal = True
    for a in range(len(base.objects)):
        if proj_obj[zero_obj[a]] != square.index[(a, a)]:
            diagonal = False
    for f in base.arrows():
        if projection(zero_star(f)) != Morphism(square.index[(f.dom, f.dom)], square.index[(f.cod, f.cod)], (f, f)):
            diagonal = False

    groupoid = is_groupoid(base)
    surjective = (set(proj_obj) == set(range(len(square.objects)))) if groupoid else None

    # lift every isomorphism out of an object in the image
    isofibration = True
    for x in range(len(paths.objects)):
        y = proj_obj[x]
        for z in range(len(square.objects)):
            for g in square.hom(y, z):
                if isomorphic_objects(square, y, z) is None:
                    continue
                if not any(projection(t) == g for x2 in range(len(paths.objects)) for t in paths.hom(x, x2)):
                    if _is_iso(square, g):
                        isofibration = False
    counts = {
        "base": {"objects": len(base.objects), "arrows": base.arrow_count()},
        "paths": {"objects": len(paths.objects), "arrows": paths.arrow_count()},
        "product": {"objects": len(square.objects)},
    }
    return PathObjectReport(cert, identity_initial, diagonal, groupoid, surjective, isofibration, counts)


def _is_iso(C: FiniteCategory, f: Morphism) -> bool:
    return any(
        C.compose(g, f) == C.identity(f.dom) and C.compose(f, g) == C.identity(f.cod) for g in C.hom(f.cod, f.dom)
    )


# ------------------------------------------------------------------ tensor extraction


@dataclass
class TensorResult:
    ok: bool
    reason: str = ""
    table: dict[tuple[str, str], str] = field(default_factory=dict)
    descends: bool = False
    agrees_with_pi0: bool | None = None
    commutative: bool = False
    associative: bool = False

    def to_dict(self) -> dict:
        if not self.ok:
            return {"ok": False, "reason": self.reason}
        return {
            "ok": True,
            "table": [{"left": a, "right": b, "tensor": c} for (a, b), c in sorted(self.table.items())],
            "descends_to_pi0": self.descends,
            "agrees_with_pi0": self.agrees_with_pi0,
            "commutative_on_pi0": self.commutative,
            "associative_on_pi0": self.associative,
        }


def extract_binary_tensor(X: GammaObject, cert: Certificate | NotCertified) -> TensorResult:
    """``A (x) B`` as the fold image of the chosen initial object over ``(A, B)``."""
    if not cert or cert.kind != INITIAL:
        return TensorResult(False, "tensor not extracted: no initial-object certificate at level 2")
    one = X.level(1)
    P = cert.functor.target
    nabla = X.action(fold(2))
    n1 = len(one.objects)
    product = {}
    for d, (_, c, _) in enumerate(cert.witness["initial"]):
        a, b = P.objects[d]
        product[(a, b)] = nabla.obj[c]
    labels = [object_label(X, 1, i) for i in range(n1)]
    table = {(labels[a], labels[b]): labels[v] for (a, b), v in product.items()}

    classes = pi0_category(one)
    cls = class_of(classes)
    on_classes: dict[tuple[int, int], int] = {}
    descends = True
    for (a, b), v in product.items():
        if on_classes.setdefault((cls[a], cls[b]), cls[v]) != cls[v]:
            descends = False
    k = len(classes)
    commutative = descends and all(on_classes[(x, y)] == on_classes[(y, x)] for x in range(k) for y in range(k))
    associative = descends and all(
        on_classes[(on_classes[(x, y)], z)] == on_classes[(x, on_classes[(y, z)])]
        for x in range(k) for y in range(k) for z in range(k)
    )
    agrees = None
    pi0 = pi0_monoid(X, cert)
    if pi0.ok and descends:
        agrees = all(on_classes[(x, y)] == pi0.monoid.mul(x, y) for x in range(k) for y in range(k))
    return TensorResult(True, "", table, descends, agrees, commutative, associative)
