"""Exhaustive enumeration of based multifunctors and multinatural transformations.

Multifunctors are found by a constraint search: the object map is chosen
first (basepoint forced), then every source arrow is a variable ranging over
its target hom-set.  Units and the basepoint monoid are fixed up front;
assigning any arrow pushes its symmetric-group images and every partial
composite whose other factor is known.  Preserving all partial composites
``f o_i g`` within the cap is equivalent to preserving full composition
because the target's composition is associative and unital.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

from .categories import FiniteCategory, Morphism, arrow_category
from .multicat import (
    Arrow,
    BasedMulticategory,
    CompositionError,
    Multicategory,
    build_E,
    build_I,
    permutations,
)

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The search tree grew past its node budget.  Results are never truncated."""


class Budget:
    def __init__(self, limit: int | None = DEFAULT_BUDGET, what: str = "enumeration"):
        self.limit = limit
        self.used = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"{self.what} exceeded its budget of {self.limit} nodes")


def _base(M):
    return M.base if isinstance(M, BasedMulticategory) else M


class _SourcePlan:
    """Index tables for a source multicategory, shared by all searches out of it."""

    def __init__(self, S: Multicategory):
        arrows = S.arrows()
        idx = {f: i for i, f in enumerate(arrows)}
        self.arrows = arrows
        self.index = idx
        self.src_pos = [tuple(S.object_index(a) for a in f.source) for f in arrows]
        self.tgt_pos = [S.object_index(f.target) for f in arrows]
        self.unit_idx = {S.object_index(a): idx[S.unit(a)] for a in S.objects}
        units = set(self.unit_idx.values())
        self.sym: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in arrows]
        for i, f in enumerate(arrows):
            for sigma in permutations(f.arity)[1:]:
                self.sym[i].append((sigma, idx[S.permute(f, sigma)]))
        self.as_f: list[list[tuple[int, int, int]]] = [[] for _ in arrows]
        self.as_g: list[list[tuple[int, int, int]]] = [[] for _ in arrows]
        decomposable: set[int] = set()
        cap = S.arity_cap
        for i, f in enumerate(arrows):
            if i in units:
                continue
            for slot, a in enumerate(f.source):
                for g in S.arrows_into(a):
                    j = idx[g]
                    if j in units or f.arity + g.arity - 1 > cap:
                        continue
                    h = idx[S.partial(f, slot, g)]
                    self.as_f[i].append((slot, j, h))
                    self.as_g[j].append((i, slot, h))
                    if f.arity >= 2 and g.arity >= 2:
                        decomposable.add(h)
                        decomposable.update(k for _, k in self.sym[h])
        # order: arity, then canonical position
        self.order = sorted((i for i in range(len(arrows)) if i not in units), key=lambda i: (arrows[i].arity, i))
        # naturality need only be checked on arrows generating everything under
        # partial composition and the symmetric action
        self.generators = [i for i, f in enumerate(arrows) if i not in units and (f.arity <= 2 or i not in decomposable)]
        n = len(S.objects)
        profiles_at: list[set] = [set() for _ in range(n)]
        for i, f in enumerate(arrows):
            if i in units:
                continue
            pos = self.src_pos[i] + (self.tgt_pos[i],)
            profiles_at[max(pos)].add((self.src_pos[i], self.tgt_pos[i]))
        self.profiles_at = [sorted(p) for p in profiles_at]


def _plan(S) -> _SourcePlan:
    S = _base(S)
    plan = getattr(S, "_enum_plan", None)
    if plan is None:
        plan = _SourcePlan(S)
        S._enum_plan = plan
    return plan


@dataclass(frozen=True, eq=False)
class Multifunctor:
    source: BasedMulticategory
    target: BasedMulticategory
    objects: tuple  # image of each source object, in source order
    arrows: tuple  # image of each source arrow, in canonical source order

    @property
    def key(self) -> tuple:
        return (self.objects, self.arrows)

    def __eq__(self, other):
        return isinstance(other, Multifunctor) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def obj(self, x: Hashable) -> Hashable:
        return self.objects[self.source.object_index(x)]

    def arr(self, f: Arrow) -> Arrow:
        return self.arrows[self.source.arrow_index(f)]

    def sort_key(self) -> tuple:
        M = self.target
        return (tuple(M.object_index(y) for y in self.objects), tuple(M.arrow_key(a) for a in self.arrows))

    def __repr__(self):
        return f"Multifunctor({self.source.name}->{self.target.name}, objects={self.objects})"


@dataclass(frozen=True)
class MultinatTransformation:
    dom: Multifunctor
    cod: Multifunctor
    components: tuple  # one arrow per source object, in source order

    def at(self, x: Hashable) -> Arrow:
        return self.components[self.dom.source.object_index(x)]


def precompose(F: Multifunctor, H: Multifunctor) -> Multifunctor:
    """``F o H`` for ``H: S' -> S`` and ``F: S -> M``."""
    S = F.source
    objects = tuple(F.objects[S.object_index(y)] for y in H.objects)
    arrows = tuple(F.arrows[S.arrow_index(h)] for h in H.arrows)
    return Multifunctor(H.source, F.target, objects, arrows)


def precompose_components(components: Sequence[Arrow], S: BasedMulticategory, H: Multifunctor) -> tuple:
    return tuple(components[S.object_index(y)] for y in H.objects)


def postcompose(U_obj: Callable, U_arr: Callable, F: Multifunctor, target: BasedMulticategory) -> Multifunctor:
    return Multifunctor(F.source, target, tuple(U_obj(y) for y in F.objects), tuple(U_arr(a) for a in F.arrows))


def thin_multifunctor(S: BasedMulticategory, T: BasedMulticategory, objmap: Mapping) -> Multifunctor:
    """The multifunctor into a thin ``T`` given by an object map (arrows are forced)."""
    images = []
    for f in S.arrows():
        h = T.hom(tuple(objmap[a] for a in f.source), objmap[f.target])
        if len(h) != 1:
            raise ValueError(f"no unique image for {f} in {T.name}")
        images.append(h[0])
    return Multifunctor(S, T, tuple(objmap[x] for x in S.objects), tuple(images))


def identity_multifunctor(S: BasedMulticategory) -> Multifunctor:
    return Multifunctor(S, S, tuple(S.objects), tuple(S.arrows()))


def check_multifunctor(S, M, objmap: Mapping, arrmap: Mapping, based: bool = True) -> list[str]:
    """Every violated multifunctor condition, checked over all composable tuples.

    Independent of the search: used as the oracle for enumeration results.
    """
    Sb, Mb = _base(S), _base(M)
    errs: list[str] = []
    for f in Sb.arrows():
        img = arrmap.get(f)
        want = (tuple(objmap[a] for a in f.source), objmap[f.target])
        if img is None or img not in Mb.hom(*want):
            errs.append(f"{f} has no image in the right hom-set")
    if errs:
        return errs
    for a in Sb.objects:
        if arrmap[Sb.unit(a)] != Mb.unit(objmap[a]):
            errs.append(f"unit of {a!r} not preserved")
    for f in Sb.arrows():
        for sigma in permutations(f.arity)[1:]:
            if arrmap[Sb.permute(f, sigma)] != Mb.permute(arrmap[f], sigma):
                errs.append(f"symmetric action not preserved at {f}, {sigma}")
        for gs in Sb.composable(f):
            lhs = arrmap[Sb.compose(f, gs)]
            rhs = Mb.compose(arrmap[f], tuple(arrmap[g] for g in gs))
            if lhs != rhs:
                errs.append(f"composition not preserved at {f}{gs}")
    if based:
        if objmap[S.basepoint] != M.basepoint:
            errs.append("basepoint not preserved")
        else:
            for n, m in enumerate(S.mu):
                if arrmap[m] != M.mu[n]:
                    errs.append(f"mu_{n} not preserved")
    return errs


def is_multinatural(F: Multifunctor, G: Multifunctor, components: Sequence[Arrow]) -> bool:
    """Full naturality check over every source arrow (oracle for the generator shortcut)."""
    S, M = F.source, F.target
    bp = S.object_index(S.basepoint)
    if components[bp] != M.unit(M.basepoint):
        return False
    for i, c in enumerate(components):
        if c not in M.hom((F.objects[i],), G.objects[i]):
            return False
    for k, f in enumerate(S.arrows()):
        y = S.object_index(f.target)
        lhs = M.compose(components[y], (F.arrows[k],))
        rhs = M.compose(G.arrows[k], tuple(components[S.object_index(a)] for a in f.source))
        if lhs != rhs:
            return False
    return True


def enumerate_based_multifunctors(
    S: BasedMulticategory,
    M: BasedMulticategory,
    *,
    budget: int | None = DEFAULT_BUDGET,
    based: bool = True,
    limit: int | None = None,
) -> list[Multifunctor]:
    """All (based) multifunctors ``S -> M`` within the arity cap, canonically ordered."""
    if S.arity_cap != M.arity_cap:
        raise ValueError("source and target must share the arity cap")
    plan = _plan(S)
    Sb, Mb = _base(S), _base(M)
    counter = Budget(budget, f"multifunctors {S.name}->{M.name}")
    n = len(Sb.objects)
    fixed = {Sb.object_index(S.basepoint): M.basepoint} if based else {}
    pre_mu = [(plan.index[m], M.mu[k]) for k, m in enumerate(S.mu)] if based else []
    found: list[Multifunctor] = []
    arrows = plan.arrows
    objmap: list = [None] * n

    def expected(i):
        return tuple(objmap[p] for p in plan.src_pos[i]), objmap[plan.tgt_pos[i]]

    def propagate(A: dict, stack: list) -> bool:
        while stack:
            i, v = stack.pop()
            cur = A.get(i)
            if cur is not None:
                if cur != v:
                    return False
                continue
            src, tgt = expected(i)
            if v.source != src or v.target != tgt or v not in Mb.hom(src, tgt):
                return False
            A[i] = v
            for sigma, j in plan.sym[i]:
                if j not in A:
                    stack.append((j, Mb.permute(v, sigma)))
                elif A[j] != Mb.permute(v, sigma):
                    return False
            for slot, j, h in plan.as_f[i]:
                g = A.get(j)
                if g is not None:
                    stack.append((h, Mb.partial(v, slot, g)))
            for k, slot, h in plan.as_g[i]:
                f = A.get(k)
                if f is not None:
                    stack.append((h, Mb.partial(f, slot, v)))
        return True

    def search(A: dict) -> None:
        for i in plan.order:
            if i not in A:
                break
        else:
            found.append(Multifunctor(S, M, tuple(objmap), tuple(A[k] for k in range(len(arrows)))))
            return
        for v in Mb.hom(*expected(i)):
            counter.tick()
            A2 = dict(A)
            if propagate(A2, [(i, v)]):
                search(A2)
                if limit is not None and len(found) >= limit:
                    return

    def solve() -> None:
        A: dict = {}
        stack = [(u, Mb.unit(objmap[p])) for p, u in plan.unit_idx.items()] + list(pre_mu)
        try:
            ok = propagate(A, stack)
        except CompositionError:
            ok = False
        if ok:
            search(A)

    def place(pos: int) -> None:
        if limit is not None and len(found) >= limit:
            return
        if pos == n:
            solve()
            return
        candidates = (fixed[pos],) if pos in fixed else Mb.objects
        for y in candidates:
            counter.tick()
            objmap[pos] = y
            if all(
                Mb.hom(tuple(objmap[p] for p in src), objmap[tgt])
                for src, tgt in plan.profiles_at[pos]
            ):
                place(pos + 1)
        objmap[pos] = None

    place(0)
    found.sort(key=Multifunctor.sort_key)
    return found


def enumerate_multinat(
    F: Multifunctor,
    G: Multifunctor,
    *,
    budget: int | None = DEFAULT_BUDGET,
    limit: int | None = None,
) -> list[MultinatTransformation]:
    """All based multinatural transformations ``F => G`` (identity at the basepoint)."""
    if F.source is not G.source or F.target is not G.target:
        raise ValueError("transformations need parallel multifunctors")
    S, M = F.source, F.target
    Mb = _base(M)
    plan = _plan(S)
    counter = Budget(budget, "multinatural transformations")
    n = len(S.objects)
    bp = S.object_index(S.basepoint)
    order = [p for p in range(n) if p != bp]
    rank = {p: r for r, p in enumerate(order)}
    rank[bp] = -1
    checks: list[list[int]] = [[] for _ in range(len(order) + 1)]
    for i in plan.generators:
        r = max(rank[p] for p in plan.src_pos[i] + (plan.tgt_pos[i],))
        checks[r + 1].append(i)
    comps: list = [None] * n
    comps[bp] = Mb.unit(M.basepoint)
    out: list[MultinatTransformation] = []

    def natural_at(i: int) -> bool:
        lhs = Mb.compose(comps[plan.tgt_pos[i]], (F.arrows[i],))
        rhs = Mb.compose(G.arrows[i], tuple(comps[p] for p in plan.src_pos[i]))
        return lhs == rhs

    def dfs(r: int) -> None:
        if limit is not None and len(out) >= limit:
            return
        if r == len(order):
            out.append(MultinatTransformation(F, G, tuple(comps)))
            return
        p = order[r]
        for c in Mb.hom((F.objects[p],), G.objects[p]):
            counter.tick()
            comps[p] = c
            if all(natural_at(i) for i in checks[r + 1]):
                dfs(r + 1)
        comps[p] = None

    if all(natural_at(i) for i in checks[0]):
        dfs(0)
    return out


class HomCategory(FiniteCategory):
    """``Mult_*(S, M)``: based multifunctors and based multinatural transformations."""

    def __init__(self, S: BasedMulticategory, M: BasedMulticategory, budget: int | None = DEFAULT_BUDGET,
                 functors: Sequence[Multifunctor] | None = None):
        if functors is None:
            functors = enumerate_based_multifunctors(S, M, budget=budget)
        self.functors = tuple(functors)
        self.source, self.target = S, M
        self.budget = budget
        self.index = {F: i for i, F in enumerate(self.functors)}
        Mb = _base(M)

        def hom(i, j):
            ts = enumerate_multinat(self.functors[i], self.functors[j], budget=budget)
            return [Morphism(i, j, t.components) for t in ts]

        def compose(g, f):
            return Morphism(f.dom, g.cod, tuple(Mb.compose(gc, (fc,)) for gc, fc in zip(g.data, f.data)))

        def identity(i):
            return Morphism(i, i, tuple(Mb.unit(y) for y in self.functors[i].objects))

        super().__init__(self.functors, hom, compose, identity, name=f"Mult*({S.name},{M.name})")

    def has_arrow(self, a: int, b: int) -> bool:
        if (a, b) in self._homs:
            return bool(self._homs[(a, b)])
        return bool(enumerate_multinat(self.functors[a], self.functors[b], budget=self.budget, limit=1))


def hom_category(S: BasedMulticategory, M: BasedMulticategory, *, budget: int | None = DEFAULT_BUDGET) -> HomCategory:
    return HomCategory(S, M, budget)


# ------------------------------------------------------------------ the arrow lemma


class LemmaFailure(AssertionError):
    pass


@dataclass
class IsoWitness:
    left_objects: int
    left_arrows: int
    right_objects: int
    right_arrows: int
    object_map: tuple[int, ...]
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "left": {"objects": self.left_objects, "arrows": self.left_arrows},
            "right": {"objects": self.right_objects, "arrows": self.right_arrows},
            "object_map": list(self.object_map),
        }


def endpoint_inclusions(cap: int) -> tuple[Multifunctor, Multifunctor]:
    E, I = build_E(cap), build_I(cap)
    return thin_multifunctor(E, I, {0: 0, 1: 1}), thin_multifunctor(E, I, {0: 0, 1: 2})


def check_lemma_arrow(M: BasedMulticategory, *, budget: int | None = DEFAULT_BUDGET) -> IsoWitness:
    """Build the isomorphism ``Mult_*(I, M) -> Mult_*(E, M)^[1]`` explicitly.

    An ``I``-shaped multifunctor goes to the transformation between its two
    module restrictions whose component at the module object is the image of
    the 1-arrow ``1 -> 2``.  Raises :class:`LemmaFailure` if this is not a
    bijection on objects and on every hom-set, or not functorial.
    """
    cap = M.arity_cap
    E, I = build_E(cap), build_I(cap)
    left = hom_category(I, M, budget=budget)
    base = hom_category(E, M, budget=budget)
    right = arrow_category(base)
    inc1, inc2 = endpoint_inclusions(cap)
    step = I.hom((1,), 2)[0]
    e_bp = E.object_index(0)

    def restrict(components, inc):
        return precompose_components(components, I, inc)

    obj_map = []
    for F in left.functors:
        a = base.index[precompose(F, inc1)]
        b = base.index[precompose(F, inc2)]
        comps = [None, None]
        comps[e_bp] = M.unit(M.basepoint)
        comps[1 - e_bp] = F.arr(step)
        arrow = Morphism(a, b, tuple(comps))
        if arrow not in base.hom(a, b):
            raise LemmaFailure(f"{F} does not give a multinatural transformation")
        obj_map.append(right.index[arrow])
    if sorted(obj_map) != list(range(len(right.objects))):
        raise LemmaFailure(f"object map {obj_map} is not a bijection onto {len(right.objects)} objects")

    n = len(left.objects)

    def on_arrow(t: Morphism) -> Morphism:
        fi, fj = right.objects[obj_map[t.dom]], right.objects[obj_map[t.cod]]
        top = Morphism(fi.dom, fj.dom, restrict(t.data, inc1))
        bottom = Morphism(fi.cod, fj.cod, restrict(t.data, inc2))
        return Morphism(obj_map[t.dom], obj_map[t.cod], (top, bottom))

    left_arrows = right_arrows = 0
    for i in range(n):
        for j in range(n):
            src = left.hom(i, j)
            tgt = right.hom(obj_map[i], obj_map[j])
            images = [on_arrow(t) for t in src]
            if len(set(images)) != len(src) or set(images) != set(tgt):
                raise LemmaFailure(f"hom({i},{j}): {len(src)} arrows vs {len(tgt)} squares")
            left_arrows += len(src)
            right_arrows += len(tgt)
    for i, j, k in itertools.product(range(n), repeat=3):
        for f in left.hom(i, j):
            for g in left.hom(j, k):
                if on_arrow(left.compose(g, f)) != right.compose(on_arrow(g), on_arrow(f)):
                    raise LemmaFailure("the comparison does not preserve composition")
    for i in range(n):
        if on_arrow(left.identity(i)) != right.identity(obj_map[i]):
            raise LemmaFailure("the comparison does not preserve identities")
    return IsoWitness(n, left_arrows, len(right.objects), right_arrows, tuple(obj_map))
