"""Finite permutative categories and the multicategories they induce."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Hashable, Sequence

from .multicat import (
    DEFAULT_ARITY_CAP,
    Arrow,
    BasedMulticategory,
    Multicategory,
    object_name,
)


class PermutativeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PermutativeCategory:
    """Tables for a small strict symmetric monoidal category.

    Arrow labels are global: ``arrows[f] == (dom, cod)``.  ``compose[(g, f)]``
    is ``g`` after ``f``.
    """

    objects: tuple
    unit: Hashable
    arrows: dict
    compose: dict
    identities: dict
    tensor_objects: dict
    tensor_arrows: dict
    symmetry: dict
    name: str = "P"

    def hom(self, a, b) -> tuple:
        return self._homs().get((a, b), ())

    def _homs(self) -> dict:
        cache = self.__dict__.get("_hom_table")
        if cache is None:
            cache = {}
            for f, (a, b) in self.arrows.items():
                cache.setdefault((a, b), []).append(f)
            cache = {k: tuple(v) for k, v in cache.items()}
            object.__setattr__(self, "_hom_table", cache)
        return cache

    def dom(self, f):
        return self.arrows[f][0]

    def cod(self, f):
        return self.arrows[f][1]

    def comp(self, g, f):
        return self.compose[(g, f)]

    def tensor(self, a, b):
        return self.tensor_objects[(a, b)]

    def tensor_many(self, objs: Sequence) -> Hashable:
        return reduce(self.tensor, objs, self.unit)

    def tensor_arrow(self, f, g):
        return self.tensor_arrows[(f, g)]

    def tensor_arrow_many(self, fs: Sequence):
        return reduce(self.tensor_arrow, fs, self.identities[self.unit])

    def identity_on(self, objs: Sequence):
        return self.identities[self.tensor_many(objs)]

    def permutation_iso(self, objs: Sequence, sigma: Sequence[int]):
        """The symmetry iso from ``objs[sigma[0]] (x) ... `` to ``objs[0] (x) ...``."""
        word = list(sigma)
        iso = self.identity_on([objs[i] for i in word])
        # bubble sort the word back to the identity, one adjacent swap at a time
        changed = True
        while changed:
            changed = False
            for j in range(len(word) - 1):
                if word[j] > word[j + 1]:
                    before = [objs[i] for i in word[:j]]
                    after = [objs[i] for i in word[j + 2:]]
                    c = self.symmetry[(objs[word[j]], objs[word[j + 1]])]
                    step = self.tensor_arrow_many(
                        [self.identity_on(before), c, self.identity_on(after)]
                    )
                    iso = self.comp(step, iso)
                    word[j], word[j + 1] = word[j + 1], word[j]
                    changed = True
        return iso


def validate_permutative(P: PermutativeCategory) -> list[str]:
    """Category, strict monoidal, and symmetry axioms; empty list means valid."""
    errs: list[str] = []
    objs = set(P.objects)
    if P.unit not in objs:
        errs.append(f"unit {P.unit!r} is not an object")
    for f, (a, b) in P.arrows.items():
        if a not in objs or b not in objs:
            errs.append(f"arrow {f!r} has an unknown endpoint")
    if errs:
        return errs
    for a, b in itertools.product(P.objects, repeat=2):
        t = P.tensor_objects.get((a, b))
        if t is None or t not in objs:
            errs.append(f"tensor not closed: {object_name(a)} (x) {object_name(b)}")
    for a in P.objects:
        i = P.identities.get(a)
        if i is None or P.arrows.get(i) != (a, a):
            errs.append(f"missing identity on {object_name(a)}")
    if errs:
        return errs

    def get(table, key, what):
        v = table.get(key)
        if v is None:
            errs.append(f"{what} undefined for {key!r}")
        return v

    arrows = list(P.arrows)
    for f in arrows:
        a, b = P.arrows[f]
        if get(P.compose, (f, P.identities[a]), "composition") != f or get(P.compose, (P.identities[b], f), "composition") != f:
            errs.append(f"unit law fails at {f!r}")
    for f, g in itertools.product(arrows, repeat=2):
        if P.cod(f) != P.dom(g):
            continue
        gf = get(P.compose, (g, f), "composition")
        if gf is not None and P.arrows.get(gf) != (P.dom(f), P.cod(g)):
            errs.append(f"composite {g!r}.{f!r} has the wrong endpoints")
    if errs:
        return errs
    for f, g, h in itertools.product(arrows, repeat=3):
        if P.cod(f) == P.dom(g) and P.cod(g) == P.dom(h):
            if P.comp(h, P.comp(g, f)) != P.comp(P.comp(h, g), f):
                errs.append(f"composition not associative at {h!r},{g!r},{f!r}")
    for a, b, c in itertools.product(P.objects, repeat=3):
        if P.tensor(P.tensor(a, b), c) != P.tensor(a, P.tensor(b, c)):
            errs.append("tensor not strictly associative on objects")
    for a in P.objects:
        if P.tensor(P.unit, a) != a or P.tensor(a, P.unit) != a:
            errs.append(f"unit not strict at {object_name(a)}")
    for f, g in itertools.product(arrows, repeat=2):
        fg = get(P.tensor_arrows, (f, g), "tensor of arrows")
        if fg is not None and P.arrows.get(fg) != (P.tensor(P.dom(f), P.dom(g)), P.tensor(P.cod(f), P.cod(g))):
            errs.append(f"tensor of {f!r},{g!r} has the wrong endpoints")
    if errs:
        return errs
    ident_e = P.identities[P.unit]
    for f in arrows:
        if P.tensor_arrow(ident_e, f) != f or P.tensor_arrow(f, ident_e) != f:
            errs.append(f"unit arrow not strict at {f!r}")
    for f, g, h in itertools.product(arrows, repeat=3):
        if P.tensor_arrow(P.tensor_arrow(f, g), h) != P.tensor_arrow(f, P.tensor_arrow(g, h)):
            errs.append("tensor not strictly associative on arrows")
            break
    for a, b in itertools.product(P.objects, repeat=2):
        if P.tensor_arrow(P.identities[a], P.identities[b]) != P.identities[P.tensor(a, b)]:
            errs.append("tensor does not preserve identities")
    for f1, g1 in itertools.product(arrows, repeat=2):
        for f2, g2 in itertools.product(arrows, repeat=2):
            if P.cod(f1) == P.dom(f2) and P.cod(g1) == P.dom(g2):
                lhs = P.comp(P.tensor_arrow(f2, g2), P.tensor_arrow(f1, g1))
                if lhs != P.tensor_arrow(P.comp(f2, f1), P.comp(g2, g1)):
                    errs.append(f"interchange law fails at {f1!r},{g1!r},{f2!r},{g2!r}")
    for a, b in itertools.product(P.objects, repeat=2):
        c = get(P.symmetry, (a, b), "symmetry")
        if c is None:
            continue
        if P.arrows.get(c) != (P.tensor(a, b), P.tensor(b, a)):
            errs.append(f"symmetry at {object_name(a)},{object_name(b)} has the wrong endpoints")
            continue
        back = P.symmetry.get((b, a))
        if back is not None and P.comp(back, c) != P.identities[P.tensor(a, b)]:
            errs.append(f"symmetry not involutive at {object_name(a)},{object_name(b)}")
    if errs:
        return errs
    for a in P.objects:
        if P.symmetry[(P.unit, a)] != P.identities[a]:
            errs.append(f"symmetry with the unit is not the identity at {object_name(a)}")
    for f, g in itertools.product(arrows, repeat=2):
        a, a2 = P.arrows[f]
        b, b2 = P.arrows[g]
        lhs = P.comp(P.symmetry[(a2, b2)], P.tensor_arrow(f, g))
        rhs = P.comp(P.tensor_arrow(g, f), P.symmetry[(a, b)])
        if lhs != rhs:
            errs.append(f"symmetry not natural at {f!r},{g!r}")
    for a, b, c in itertools.product(P.objects, repeat=3):
        lhs = P.symmetry[(a, P.tensor(b, c))]
        rhs = P.comp(
            P.tensor_arrow(P.identities[b], P.symmetry[(a, c)]),
            P.tensor_arrow(P.symmetry[(a, b)], P.identities[c]),
        )
        if lhs != rhs:
            errs.append(f"hexagon fails at {object_name(a)},{object_name(b)},{object_name(c)}")
    return errs


class PermutativeMulticategory(Multicategory):
    """``M(a_1..a_n; b) = P(a_1 (x) ... (x) a_n, b)``."""

    def __init__(self, P: PermutativeCategory, arity_cap: int = DEFAULT_ARITY_CAP):
        super().__init__(P.objects, arity_cap, name=P.name)
        self.P = P

    def _hom(self, source, target):
        t = self.P.tensor_many(source)
        return tuple(Arrow(source, target, f) for f in self.P.hom(t, target))

    def _compose(self, f, gs):
        if not gs:
            return f
        P = self.P
        inner = reduce(P.tensor_arrow, [g.label for g in gs])
        source = tuple(itertools.chain.from_iterable(g.source for g in gs))
        return Arrow(source, f.target, P.comp(f.label, inner))

    def _permute(self, f, sigma):
        iso = self.P.permutation_iso(f.source, sigma)
        return Arrow(tuple(f.source[s] for s in sigma), f.target, self.P.comp(f.label, iso))

    def _unit(self, a):
        return Arrow((a,), a, self.P.identities[a])


def from_permutative(P: PermutativeCategory, arity_cap: int = DEFAULT_ARITY_CAP, check: bool = True) -> BasedMulticategory:
    """Based at the unit object, with every ``mu_n`` the identity of the unit."""
    if check:
        errs = validate_permutative(P)
        if errs:
            raise PermutativeError("; ".join(errs[:5]))
    base = PermutativeMulticategory(P, arity_cap)
    e = P.unit
    mu = tuple(Arrow((e,) * n, e, P.identities[e]) for n in range(arity_cap + 1))
    return BasedMulticategory(base, e, mu, name=P.name)


# ------------------------------------------------------------------ builders


def discrete_monoid(elements: Sequence, op: Callable, unit, name: str = "") -> PermutativeCategory:
    """A commutative monoid viewed as a discrete permutative category."""
    objects = tuple(str(x) for x in elements)
    to_obj = {x: str(x) for x in elements}
    arrows = {f"id_{o}": (o, o) for o in objects}
    identities = {o: f"id_{o}" for o in objects}
    compose = {(f, f): f for f in arrows}
    tensor_objects = {}
    for x, y in itertools.product(elements, repeat=2):
        z = op(x, y)
        if z not in to_obj:
            raise PermutativeError(f"{x} * {y} = {z} leaves the carrier")
        tensor_objects[(to_obj[x], to_obj[y])] = to_obj[z]
    tensor_arrows = {
        (identities[a], identities[b]): identities[tensor_objects[(a, b)]]
        for a, b in itertools.product(objects, repeat=2)
    }
    symmetry = {(a, b): identities[tensor_objects[(a, b)]] for a, b in itertools.product(objects, repeat=2)}
    return PermutativeCategory(
        objects, str(unit), arrows, compose, identities, tensor_objects, tensor_arrows, symmetry,
        name=name or "discrete",
    )


def discrete_cyclic(n: int) -> PermutativeCategory:
    """The group Z/n as a discrete permutative category."""
    return discrete_monoid(range(n), lambda x, y: (x + y) % n, 0, name=f"Z/{n}")


def saturating(cap: int = 1) -> PermutativeCategory:
    """``{0..cap}`` under truncated addition: a commutative monoid that is not a group."""
    return discrete_monoid(range(cap + 1), lambda x, y: min(x + y, cap), 0, name=f"sat{cap}")


def delooping(n: int) -> PermutativeCategory:
    """B(Z/n): one object, automorphisms Z/n, tensor = addition, trivial symmetry."""
    obj = "*"
    arrows = {str(k): (obj, obj) for k in range(n)}
    compose = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    return PermutativeCategory(
        (obj,), obj, arrows, compose, {obj: "0"}, {(obj, obj): obj}, dict(compose), {(obj, obj): "0"},
        name=f"BZ/{n}",
    )
