"""Finite 1-categories with lazily computed hom-sets.

Objects are addressed by position.  A morphism carries its endpoints and an
opaque, hashable ``data`` payload; two morphisms are equal when all three agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterator, Sequence


@dataclass(frozen=True)
class Morphism:
    dom: int
    cod: int
    data: Hashable


class FiniteCategory:
    def __init__(
        self,
        objects: Sequence,
        hom: Callable[[int, int], Sequence[Morphism]],
        compose: Callable[[Morphism, Morphism], Morphism],
        identity: Callable[[int], Morphism],
        name: str = "",
    ):
        self.objects = tuple(objects)
        self._hom_fn = hom
        self._compose = compose
        self._identity = identity
        self._homs: dict[tuple[int, int], tuple[Morphism, ...]] = {}
        self.name = name

    def __repr__(self) -> str:
        return f"<FiniteCategory {self.name} with {len(self.objects)} objects>"

    def __len__(self) -> int:
        return len(self.objects)

    def hom(self, a: int, b: int) -> tuple[Morphism, ...]:
        got = self._homs.get((a, b))
        if got is None:
            got = tuple(self._hom_fn(a, b))
            self._homs[(a, b)] = got
        return got

    def prefill(self, a: int, b: int, arrows: Sequence[Morphism]) -> None:
        self._homs[(a, b)] = tuple(arrows)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """``g`` after ``f``."""
        if f.cod != g.dom:
            raise ValueError("morphisms are not composable")
        return self._compose(g, f)

    def identity(self, a: int) -> Morphism:
        return self._identity(a)

    def arrows(self) -> Iterator[Morphism]:
        n = len(self.objects)
        for a in range(n):
            for b in range(n):
                yield from self.hom(a, b)

    def arrow_count(self) -> int:
        return sum(1 for _ in self.arrows())

    def has_arrow(self, a: int, b: int) -> bool:
        return bool(self.hom(a, b))

    def is_discrete(self) -> bool:
        n = len(self.objects)
        return all(len(self.hom(a, b)) == (1 if a == b else 0) for a in range(n) for b in range(n))


def table_category(objects: Sequence, arrows: Sequence[Morphism], compose: dict, identities: Sequence[Morphism], name=""):
    """A category from explicit lists; ``compose`` maps ``(g, f)`` to ``g.f``."""
    by_pair: dict[tuple[int, int], list[Morphism]] = {}
    for m in arrows:
        by_pair.setdefault((m.dom, m.cod), []).append(m)
    return FiniteCategory(
        objects,
        lambda a, b: by_pair.get((a, b), ()),
        lambda g, f: compose[(g, f)],
        lambda a: identities[a],
        name=name,
    )


def discrete_category(objects: Sequence, name="") -> FiniteCategory:
    ids = [Morphism(i, i, None) for i in range(len(objects))]
    return table_category(objects, ids, {(m, m): m for m in ids}, ids, name)


def one_object_group(elements: Sequence, op: Callable, identity, name="") -> FiniteCategory:
    arrows = [Morphism(0, 0, x) for x in elements]
    table = {(Morphism(0, 0, g), Morphism(0, 0, f)): Morphism(0, 0, op(g, f)) for g in elements for f in elements}
    return table_category(("*",), arrows, table, [Morphism(0, 0, identity)], name)


def validate_category(C: FiniteCategory) -> list[str]:
    errs = []
    n = len(C.objects)
    for a in range(n):
        ida = C.identity(a)
        if ida not in C.hom(a, a):
            errs.append(f"identity of {a} missing from hom({a},{a})")
    for a, b in itertools.product(range(n), repeat=2):
        for f in C.hom(a, b):
            if C.compose(C.identity(b), f) != f or C.compose(f, C.identity(a)) != f:
                errs.append(f"unit law fails at {f}")
    for a, b, c in itertools.product(range(n), repeat=3):
        for f in C.hom(a, b):
            for g in C.hom(b, c):
                if C.compose(g, f) not in C.hom(a, c):
                    errs.append(f"composite {g}.{f} not in hom({a},{c})")
    for a, b, c, d in itertools.product(range(n), repeat=4):
        for f in C.hom(a, b):
            for g in C.hom(b, c):
                gf = C.compose(g, f)
                for h in C.hom(c, d):
                    if C.compose(h, gf) != C.compose(C.compose(h, g), f):
                        errs.append(f"associativity fails at {h}.{g}.{f}")
    return errs


@dataclass(frozen=True, eq=False)
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    obj: tuple[int, ...]
    arr: Callable[[Morphism], Morphism]
    name: str = ""

    def __call__(self, m: Morphism) -> Morphism:
        return self.arr(m)


def identity_functor(C: FiniteCategory) -> Functor:
    return Functor(C, C, tuple(range(len(C.objects))), lambda m: m, "id")


def compose_functors(G: Functor, F: Functor) -> Functor:
    return Functor(F.source, G.target, tuple(G.obj[x] for x in F.obj), lambda m: G.arr(F.arr(m)))


def check_functor(F: Functor) -> list[str]:
    C, D = F.source, F.target
    errs = []
    for a in range(len(C.objects)):
        if F(C.identity(a)) != D.identity(F.obj[a]):
            errs.append(f"identity at {a} not preserved")
    for f in C.arrows():
        img = F(f)
        if (img.dom, img.cod) != (F.obj[f.dom], F.obj[f.cod]) or img not in D.hom(img.dom, img.cod):
            errs.append(f"{f} sent outside the right hom-set")
    for f in C.arrows():
        for c in range(len(C.objects)):
            for g in C.hom(f.cod, c):
                if F(C.compose(g, f)) != D.compose(F(g), F(f)):
                    errs.append(f"composition not preserved at {g}.{f}")
    return errs


def product_category(factors: Sequence[FiniteCategory], name="") -> FiniteCategory:
    factors = tuple(factors)
    objects = tuple(itertools.product(*(range(len(C.objects)) for C in factors)))
    index = {o: i for i, o in enumerate(objects)}

    def hom(a, b):
        oa, ob = objects[a], objects[b]
        parts = [C.hom(x, y) for C, x, y in zip(factors, oa, ob)]
        return [Morphism(a, b, combo) for combo in itertools.product(*parts)]

    def compose(g, f):
        return Morphism(f.dom, g.cod, tuple(C.compose(gi, fi) for C, gi, fi in zip(factors, g.data, f.data)))

    def identity(a):
        return Morphism(a, a, tuple(C.identity(x) for C, x in zip(factors, objects[a])))

    P = FiniteCategory(objects, hom, compose, identity, name or "x".join(C.name for C in factors))
    P.index = index
    P.factors = factors
    return P


def arrow_category(C: FiniteCategory) -> FiniteCategory:
    """Objects are the arrows of ``C``; morphisms are commuting squares ``(top, bottom)``."""
    objects = tuple(C.arrows())

    def hom(i, j):
        f, g = objects[i], objects[j]
        out = []
        for u in C.hom(f.dom, g.dom):
            gu = C.compose(g, u)
            for v in C.hom(f.cod, g.cod):
                if C.compose(v, f) == gu:
                    out.append(Morphism(i, j, (u, v)))
        return out

    def compose(s2, s1):
        return Morphism(s1.dom, s2.cod, (C.compose(s2.data[0], s1.data[0]), C.compose(s2.data[1], s1.data[1])))

    def identity(i):
        f = objects[i]
        return Morphism(i, i, (C.identity(f.dom), C.identity(f.cod)))

    A = FiniteCategory(objects, hom, compose, identity, f"{C.name}^[1]")
    A.index = {f: i for i, f in enumerate(objects)}
    return A


def slice_category(F: Functor, d: int) -> FiniteCategory:
    """The comma category ``d / F``: pairs ``(c, u: d -> F c)``."""
    C, D = F.source, F.target
    objects = tuple((c, u) for c in range(len(C.objects)) for u in D.hom(d, F.obj[c]))

    def hom(i, j):
        (c, u), (c2, u2) = objects[i], objects[j]
        return [Morphism(i, j, g) for g in C.hom(c, c2) if D.compose(F(g), u) == u2]

    def compose(h2, h1):
        return Morphism(h1.dom, h2.cod, C.compose(h2.data, h1.data))

    def identity(i):
        return Morphism(i, i, C.identity(objects[i][0]))

    return FiniteCategory(objects, hom, compose, identity, f"{d}/F")


def is_initial(C: FiniteCategory, a: int) -> bool:
    return all(len(C.hom(a, b)) == 1 for b in range(len(C.objects)))


def pi0_category(C: FiniteCategory) -> list[list[int]]:
    """Connected components under zig-zags of arrows, each sorted, ordered by least member."""
    n = len(C.objects)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        for b in range(a + 1, n):
            if find(a) == find(b):
                continue
            if C.has_arrow(a, b) or C.has_arrow(b, a):
                parent[find(a)] = find(b)
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    return sorted(classes.values(), key=lambda c: c[0])


def class_of(partition: Sequence[Sequence[int]]) -> dict[int, int]:
    return {x: i for i, cls in enumerate(partition) for x in cls}


def inverse_of(C: FiniteCategory, f: Morphism) -> Morphism | None:
    for g in C.hom(f.cod, f.dom):
        if C.compose(g, f) == C.identity(f.dom) and C.compose(f, g) == C.identity(f.cod):
            return g
    return None


def is_groupoid(C: FiniteCategory) -> bool:
    """Every endomorphism monoid is a group and arrows can be reversed.

    Under those two conditions every arrow is invertible, which avoids an
    inverse search for each arrow.
    """
    n = len(C.objects)
    for a in range(n):
        ends = C.hom(a, a)
        ida = C.identity(a)
        for f in ends:
            if not any(C.compose(g, f) == ida for g in ends):
                return False
    for a in range(n):
        for b in range(n):
            if a != b and C.has_arrow(a, b) and not C.has_arrow(b, a):
                return False
    return True


def isomorphic_objects(C: FiniteCategory, a: int, b: int) -> Morphism | None:
    for f in C.hom(a, b):
        if inverse_of(C, f) is not None:
            return f
    return None
