"""Finite, arity-capped symmetric multicategories.

A multicategory stores n-arrows for 0 <= n <= ``arity_cap``.  Composition is
only defined when the composite still fits under the cap, and every axiom
check quantifies over that range only.

Permutations are tuples ``sigma`` of 0-based positions.  ``permute(f, sigma)``
sends ``f`` in ``M(a_0, ..., a_{n-1}; b)`` to ``M(a_sigma[0], ..., a_sigma[n-1]; b)``,
so that ``permute(permute(f, s), t) == permute(f, compose_perm(s, t))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence

DEFAULT_ARITY_CAP = 4


class Arrow(NamedTuple):
    source: tuple
    target: Hashable
    label: Hashable = 0

    @property
    def arity(self) -> int:
        return len(self.source)


class CompositionError(ValueError):
    pass


def compose_perm(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """The permutation acting as ``sigma`` followed by ``tau``."""
    return tuple(sigma[t] for t in tau)


def invert_perm(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


@lru_cache(maxsize=None)
def permutations(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(n)))


def block_permutation(sigma: Sequence[int], sizes: Sequence[int]) -> tuple[int, ...]:
    """Lift ``sigma`` on k blocks of the given sizes to the concatenated positions."""
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    out: list[int] = []
    for s in sigma:
        out.extend(range(offsets[s], offsets[s] + sizes[s]))
    return tuple(out)


def insertion_permutation(k: int, slot: int) -> tuple[int, ...]:
    """Move position ``slot`` of ``k + 1`` entries to the front, keeping the rest in order."""
    rest = [p for p in range(k + 1) if p != slot]
    return (slot, *rest)


def object_name(x: Hashable) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (int, str)):
        return str(x)
    if isinstance(x, tuple) and all(isinstance(v, int) for v in x):
        return "".join(map(str, x)) if x else "()"
    if isinstance(x, tuple) and len(x) == 2 and x[0] == "'":
        return object_name(x[1]) + "'"
    if isinstance(x, tuple):
        return "(" + " ".join(object_name(v) for v in x) + ")"
    return str(x)


_COMPOSE_MEMO_SIZE = 1 << 18


class Multicategory:
    """Base class.  Subclasses provide ``_hom``, ``_compose``, ``_permute``, ``_unit``."""

    def __init__(self, objects: Iterable[Hashable], arity_cap: int = DEFAULT_ARITY_CAP, name: str = ""):
        self.objects = tuple(objects)
        if not self.objects:
            raise ValueError("a multicategory needs at least one object")
        if arity_cap < 1:
            raise ValueError("arity_cap must be positive")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object ids")
        self.arity_cap = arity_cap
        self.name = name or type(self).__name__
        self._obj_index = {x: i for i, x in enumerate(self.objects)}
        self._hom_cache: dict[tuple, tuple[Arrow, ...]] = {}
        self._arrows: tuple[Arrow, ...] | None = None
        self._arrow_pos: dict[Arrow, int] | None = None

    def __repr__(self) -> str:
        return f"<{self.name}: {len(self.objects)} objects, cap {self.arity_cap}>"

    # subclass hooks
    def _hom(self, source: tuple, target: Hashable) -> tuple[Arrow, ...]:
        raise NotImplementedError

    def _compose(self, f: Arrow, gs: tuple[Arrow, ...]) -> Arrow:
        raise NotImplementedError

    def _permute(self, f: Arrow, sigma: tuple[int, ...]) -> Arrow:
        raise NotImplementedError

    def _unit(self, a: Hashable) -> Arrow:
        raise NotImplementedError

    # public interface
    def object_index(self, x: Hashable) -> int:
        return self._obj_index[x]

    def has_object(self, x: Hashable) -> bool:
        return x in self._obj_index

    def hom(self, source: Sequence[Hashable], target: Hashable) -> tuple[Arrow, ...]:
        source = tuple(source)
        key = (source, target)
        got = self._hom_cache.get(key)
        if got is None:
            if len(source) > self.arity_cap:
                raise CompositionError(f"profile arity {len(source)} exceeds cap {self.arity_cap}")
            got = tuple(self._hom(source, target))
            self._hom_cache[key] = got
        return got

    def compose(self, f: Arrow, gs: Sequence[Arrow]) -> Arrow:
        gs = tuple(gs)
        key = (f, gs)
        memo = self.__dict__.setdefault("_compose_memo", {})
        got = memo.get(key)
        if got is not None:
            return got
        got = self._checked_compose(f, gs)
        if len(memo) >= _COMPOSE_MEMO_SIZE:
            memo.clear()
        memo[key] = got
        return got

    def _checked_compose(self, f: Arrow, gs: tuple[Arrow, ...]) -> Arrow:
        if len(gs) != f.arity:
            raise CompositionError(f"{f} takes {f.arity} inputs, got {len(gs)}")
        for a, g in zip(f.source, gs):
            if g.target != a:
                raise CompositionError(f"target of {g} does not match input {a!r} of {f}")
        if sum(g.arity for g in gs) > self.arity_cap:
            raise CompositionError("composite exceeds arity cap")
        return self._compose(f, gs)

    def partial(self, f: Arrow, slot: int, g: Arrow) -> Arrow:
        """Compose ``g`` into input ``slot`` of ``f``, units elsewhere."""
        gs = tuple(g if i == slot else self.unit(a) for i, a in enumerate(f.source))
        return self.compose(f, gs)

    def permute(self, f: Arrow, sigma: Sequence[int]) -> Arrow:
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(f.arity)):
            raise CompositionError(f"{sigma} is not a permutation of {f.arity} inputs")
        if sigma == tuple(range(f.arity)):
            return f
        memo = self.__dict__.setdefault("_permute_memo", {})
        got = memo.get((f, sigma))
        if got is None:
            got = self._permute(f, sigma)
            if len(memo) >= _COMPOSE_MEMO_SIZE:
                memo.clear()
            memo[(f, sigma)] = got
        return got

    def unit(self, a: Hashable) -> Arrow:
        return self._unit(a)

    def profiles(self, arity: int | None = None) -> Iterator[tuple[tuple, Hashable]]:
        arities = range(self.arity_cap + 1) if arity is None else (arity,)
        for k in arities:
            for source in itertools.product(self.objects, repeat=k):
                for target in self.objects:
                    yield source, target

    def arrows(self) -> tuple[Arrow, ...]:
        """All arrows within the cap, in canonical order."""
        if self._arrows is None:
            out = []
            for source, target in self.profiles():
                out.extend(self.hom(source, target))
            self._arrows = tuple(out)
            self._arrow_pos = {f: i for i, f in enumerate(out)}
        return self._arrows

    def arrow_index(self, f: Arrow) -> int:
        self.arrows()
        return self._arrow_pos[f]

    def hom_index(self, f: Arrow) -> int:
        return self.hom(f.source, f.target).index(f)

    def arrow_key(self, f: Arrow) -> tuple:
        return (
            f.arity,
            tuple(self._obj_index[a] for a in f.source),
            self._obj_index[f.target],
            self.hom_index(f),
        )

    def is_thin(self) -> bool:
        return all(len(self.hom(s, t)) <= 1 for s, t in self.profiles())

    def arrows_into(self, a: Hashable) -> tuple[Arrow, ...]:
        if not hasattr(self, "_into"):
            into: dict = {x: [] for x in self.objects}
            for f in self.arrows():
                into[f.target].append(f)
            self._into = {x: tuple(v) for x, v in into.items()}
        return self._into[a]

    def composable(self, f: Arrow) -> Iterator[tuple[Arrow, ...]]:
        """Every tuple ``gs`` with ``compose(f, gs)`` defined within the cap."""
        cap = self.arity_cap

        def rec(i: int, used: int) -> Iterator[tuple[Arrow, ...]]:
            if i == f.arity:
                yield ()
                return
            for g in self.arrows_into(f.source[i]):
                if used + g.arity <= cap:
                    for rest in rec(i + 1, used + g.arity):
                        yield (g, *rest)

        yield from rec(0, 0)


class ThinMulticategory(Multicategory):
    """At most one arrow per profile, decided by a predicate on the profile."""

    def __init__(self, objects, rule: Callable[[tuple, Hashable], bool], arity_cap=DEFAULT_ARITY_CAP, name=""):
        super().__init__(objects, arity_cap, name)
        self.rule = rule

    def _hom(self, source, target):
        return (Arrow(source, target),) if self.rule(source, target) else ()

    def _compose(self, f, gs):
        return Arrow(tuple(itertools.chain.from_iterable(g.source for g in gs)), f.target)

    def _permute(self, f, sigma):
        return Arrow(tuple(f.source[s] for s in sigma), f.target)

    def _unit(self, a):
        return Arrow((a,), a)


class ProductMulticategory(Multicategory):
    def __init__(self, left: Multicategory, right: Multicategory, name=""):
        if left.arity_cap != right.arity_cap:
            raise ValueError("arity caps differ")
        objects = tuple(itertools.product(left.objects, right.objects))
        super().__init__(objects, left.arity_cap, name or f"{left.name}x{right.name}")
        self.left, self.right = left, right

    @staticmethod
    def _split(arrow_source):
        return tuple(a for a, _ in arrow_source), tuple(b for _, b in arrow_source)

    def _hom(self, source, target):
        ls, rs = self._split(source)
        return tuple(
            Arrow(source, target, (f.label, g.label))
            for f in self.left.hom(ls, target[0])
            for g in self.right.hom(rs, target[1])
        )

    def _halves(self, f: Arrow) -> tuple[Arrow, Arrow]:
        ls, rs = self._split(f.source)
        return Arrow(ls, f.target[0], f.label[0]), Arrow(rs, f.target[1], f.label[1])

    def _join(self, fl: Arrow, fr: Arrow) -> Arrow:
        return Arrow(tuple(zip(fl.source, fr.source)), (fl.target, fr.target), (fl.label, fr.label))

    def _compose(self, f, gs):
        fl, fr = self._halves(f)
        halves = [self._halves(g) for g in gs]
        return self._join(
            self.left.compose(fl, [h[0] for h in halves]),
            self.right.compose(fr, [h[1] for h in halves]),
        )

    def _permute(self, f, sigma):
        fl, fr = self._halves(f)
        return self._join(self.left.permute(fl, sigma), self.right.permute(fr, sigma))

    def _unit(self, a):
        return self._join(self.left.unit(a[0]), self.right.unit(a[1]))


class TableMulticategory(Multicategory):
    """Explicit tables, as read from an input document.

    ``hom`` maps profiles to arrow ids; ``comp`` maps ``(f, g_1, ..., g_k)`` id
    tuples to ids; ``sym`` maps ``(f, sigma)`` to ids (identity permutations
    are implicit); ``units`` maps objects to ids.
    """

    def __init__(self, objects, arity_cap, hom: dict, comp: dict, sym: dict, units: dict, name="table"):
        super().__init__(objects, arity_cap, name)
        self._by_id: dict[Hashable, Arrow] = {}
        self._table_hom: dict[tuple, tuple[Arrow, ...]] = {}
        for (source, target), ids in hom.items():
            arrows = tuple(Arrow(tuple(source), target, i) for i in ids)
            self._table_hom[(tuple(source), target)] = arrows
            for a in arrows:
                if a.label in self._by_id:
                    raise ValueError(f"arrow id {a.label!r} used twice")
                self._by_id[a.label] = a
        self.comp = dict(comp)
        self.sym = dict(sym)
        self.units = dict(units)

    def arrow_by_id(self, ident) -> Arrow:
        return self._by_id[ident]

    def _hom(self, source, target):
        return self._table_hom.get((source, target), ())

    def _lookup(self, key, what):
        try:
            return self._by_id[self.comp[key] if what == "comp" else self.sym[key]]
        except KeyError:
            raise CompositionError(f"{what} table has no entry for {key!r}") from None

    def _compose(self, f, gs):
        return self._lookup((f.label, *(g.label for g in gs)), "comp")

    def _permute(self, f, sigma):
        return self._lookup((f.label, sigma), "sym")

    def _unit(self, a):
        try:
            return self._by_id[self.units[a]]
        except KeyError:
            raise CompositionError(f"no unit recorded for {a!r}") from None


class FullSubMulticategory(Multicategory):
    def __init__(self, parent: Multicategory, objects, name=""):
        super().__init__(objects, parent.arity_cap, name or f"{parent.name}|sub")
        self.parent = parent

    def _hom(self, source, target):
        return self.parent.hom(source, target)

    def _compose(self, f, gs):
        return self.parent.compose(f, gs)

    def _permute(self, f, sigma):
        return self.parent.permute(f, sigma)

    def _unit(self, a):
        return self.parent.unit(a)


@dataclass(frozen=True, eq=False)
class BasedMulticategory:
    """A multicategory with a chosen commutative monoid: the basepoint."""

    base: Multicategory
    basepoint: Hashable
    mu: tuple[Arrow, ...]
    name: str = field(default="")

    def __post_init__(self):
        if not self.base.has_object(self.basepoint):
            raise ValueError(f"basepoint {self.basepoint!r} is not an object")
        if len(self.mu) != self.base.arity_cap + 1:
            raise ValueError("need one monoid arrow per arity 0..arity_cap")
        b = self.basepoint
        for n, m in enumerate(self.mu):
            if m.source != (b,) * n or m.target != b:
                raise ValueError(f"mu_{n} has the wrong profile")
        if not self.name:
            object.__setattr__(self, "name", self.base.name)

    def __getattr__(self, item):
        # only reached for attributes the dataclass lacks
        if item.startswith("__"):
            raise AttributeError(item)
        return getattr(self.base, item)

    def __repr__(self) -> str:
        return f"<based {self.name}: {len(self.base.objects)} objects, cap {self.base.arity_cap}>"


def based_at(base: Multicategory, basepoint: Hashable, name: str = "") -> BasedMulticategory:
    """Base ``base`` at the unique monoid on ``basepoint`` (hom-sets b^n -> b must be singletons)."""
    mu = []
    for n in range(base.arity_cap + 1):
        h = base.hom((basepoint,) * n, basepoint)
        if len(h) != 1:
            raise ValueError(f"hom(b^{n}; b) has {len(h)} elements; pass mu explicitly")
        mu.append(h[0])
    return BasedMulticategory(base, basepoint, tuple(mu), name)


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    structural: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.structural and not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "structural": list(self.structural), "violations": list(self.violations)}


def _fmt(f: Arrow) -> str:
    src = ",".join(object_name(a) for a in f.source)
    return f"{f.label!s}:({src}|{object_name(f.target)})"


def validate_multicategory(
    M: Multicategory | BasedMulticategory, max_reports: int | None = None, exhaustive: bool = False
) -> ValidationReport:
    """Check the axioms within the arity cap.

    By default composition is checked against iterated one-slot composites,
    and associativity and equivariance only for one-slot composites; together
    with the unit laws this implies every nested instance.  ``exhaustive``
    checks every nested instance directly instead.  Structural problems (bad
    profiles, unknown objects, missing table entries) are reported apart from
    equational failures.
    """
    based = M if isinstance(M, BasedMulticategory) else None
    M = based.base if based else M
    rep = ValidationReport()
    cap = M.arity_cap

    def full() -> bool:
        return max_reports is not None and len(rep.structural) + len(rep.violations) >= max_reports

    def safe(fn, *args):
        try:
            return fn(*args)
        except CompositionError as exc:
            rep.structural.append(str(exc))
            return None

    for source, target in M.profiles():
        for f in M.hom(source, target):
            if f.source != source or f.target != target:
                rep.structural.append(f"arrow {_fmt(f)} filed under the wrong profile")
    if rep.structural:
        return rep

    def in_hom(f: Arrow) -> bool:
        if not all(M.has_object(a) for a in f.source + (f.target,)) or f.arity > cap:
            return False
        return f in M.hom(f.source, f.target)

    for a in M.objects:
        u = safe(M.unit, a)
        if u is None:
            continue
        if u.source != (a,) or u.target != a or not in_hom(u):
            rep.structural.append(f"unit of {object_name(a)} is not in hom({object_name(a)};{object_name(a)})")

    arrows = M.arrows()
    for f in arrows:
        if full():
            return rep
        # units
        u = M.unit(f.target)
        left = safe(M.compose, u, (f,))
        if left is not None and left != f:
            rep.violations.append(f"left unit law fails at {_fmt(f)}")
        right = safe(M.compose, f, tuple(M.unit(a) for a in f.source))
        if right is not None and right != f:
            rep.violations.append(f"right unit law fails at {_fmt(f)}")
        # symmetric group action
        n = f.arity
        images = {}
        for sigma in permutations(n):
            img = safe(M.permute, f, sigma)
            if img is None:
                continue
            if img.source != tuple(f.source[s] for s in sigma) or img.target != f.target or not in_hom(img):
                rep.structural.append(f"sigma{sigma} sends {_fmt(f)} outside the permuted hom-set")
                continue
            images[sigma] = img
        for sigma, tau in itertools.product(images, repeat=2):
            img = images[sigma]
            lhs = safe(M.permute, img, tau)
            rhs = images.get(compose_perm(sigma, tau))
            if lhs is not None and rhs is not None and lhs != rhs:
                rep.violations.append(f"action not functorial at {_fmt(f)} for {sigma},{tau}")
        # composition: closure, associativity, equivariance
        for gs in M.composable(f):
            h = safe(M.compose, f, gs)
            if h is None:
                continue
            if not in_hom(h):
                rep.violations.append(f"composite of {_fmt(f)} lands outside its hom-set")
                continue
            if exhaustive:
                _check_assoc(M, f, gs, h, M.composable(h), rep, safe)
                _check_equivariance(M, f, gs, h, images, rep, safe)
            elif _is_partial(M, gs):
                _check_assoc(M, f, gs, h, _partial_tuples(M, h), rep, safe)
                _check_equivariance(M, f, gs, h, images, rep, safe)
            else:
                step = _iterated_partial(M, f, gs, safe)
                if step is not None and step != h:
                    rep.violations.append(
                        f"composite {_fmt(f)}({', '.join(_fmt(g) for g in gs)}) differs from its one-slot composites"
                    )
    if based is not None and not rep.structural:
        _check_basepoint(based, rep)
    return rep


def _is_partial(M, gs) -> bool:
    return sum(1 for g in gs if g != M.unit(g.target)) <= 1


def _partial_tuples(M, h):
    """Tuples of units with one non-unit arrow, composable with ``h``."""
    units = tuple(M.unit(a) for a in h.source)
    for j, a in enumerate(h.source):
        for k in M.arrows_into(a):
            if k != units[j] and h.arity + k.arity - 1 <= M.arity_cap:
                yield units[:j] + (k,) + units[j + 1:]


def _iterated_partial(M, f, gs, safe):
    # nullary inserts first, then by arity, so intermediate arities stay within the cap
    start = list(range(len(gs)))
    cur = f
    for i in sorted(range(len(gs)), key=lambda i: gs[i].arity):
        cur = safe(M.partial, cur, start[i], gs[i])
        if cur is None:
            return None
        for j in range(len(gs)):
            if j > i:
                start[j] += gs[i].arity - 1
    return cur


def _check_assoc(M, f, gs, h, tuples, rep, safe):
    for hs in tuples:
        lhs = safe(M.compose, h, hs)
        if lhs is None:
            continue
        pos = 0
        inner = []
        for g in gs:
            block = hs[pos: pos + g.arity]
            pos += g.arity
            inner.append(safe(M.compose, g, block))
        if any(x is None for x in inner):
            continue
        if sum(x.arity for x in inner) > M.arity_cap:
            continue
        rhs = safe(M.compose, f, tuple(inner))
        if rhs is not None and rhs != lhs:
            rep.violations.append(
                f"associativity fails at {_fmt(f)}({', '.join(_fmt(g) for g in gs)})({', '.join(_fmt(x) for x in hs)})"
            )


def _check_equivariance(M, f, gs, h, images, rep, safe):
    sizes = [g.arity for g in gs]
    for sigma, fs in images.items():
        lhs = safe(M.compose, fs, tuple(gs[s] for s in sigma))
        rhs = safe(M.permute, h, block_permutation(sigma, sizes))
        if lhs is not None and rhs is not None and lhs != rhs:
            rep.violations.append(f"equivariance (outer {sigma}) fails at {_fmt(f)}")
    for i, g in enumerate(gs):
        for tau in permutations(g.arity)[1:]:
            gt = safe(M.permute, g, tau)
            if gt is None:
                continue
            lhs = safe(M.compose, f, gs[:i] + (gt,) + gs[i + 1:])
            offset = sum(sizes[:i])
            total = sum(sizes)
            perm = tuple(range(offset)) + tuple(offset + t for t in tau) + tuple(range(offset + g.arity, total))
            rhs = safe(M.permute, h, perm)
            if lhs is not None and rhs is not None and lhs != rhs:
                rep.violations.append(f"equivariance (inner slot {i}, {tau}) fails at {_fmt(f)}")


def _check_basepoint(B: BasedMulticategory, rep: ValidationReport):
    try:
        ok = monoid_check(B, B.basepoint, B.mu)
    except (CompositionError, ValueError) as exc:
        rep.structural.append(f"basepoint data: {exc}")
        return
    if not ok:
        rep.violations.append("basepoint data is not a commutative monoid")


# ------------------------------------------------------------ monoids, modules


def monoid_check(M: BasedMulticategory | Multicategory, a: Hashable, mu: Sequence[Arrow]) -> bool:
    """True iff ``mu`` makes ``a`` a commutative monoid (within the cap)."""
    base = M.base if isinstance(M, BasedMulticategory) else M
    cap = base.arity_cap
    mu = tuple(mu)
    if len(mu) != cap + 1:
        raise ValueError("need one arrow per arity 0..arity_cap")
    for n, m in enumerate(mu):
        if m.source != (a,) * n or m.target != a:
            raise ValueError(f"mu_{n} has profile {m.source}->{m.target}")
        if m not in base.hom(m.source, m.target):
            raise ValueError(f"mu_{n} is not an arrow of the multicategory")
    if mu[1] != base.unit(a):
        return False
    for n, m in enumerate(mu):
        if any(base.permute(m, s) != m for s in permutations(n)):
            return False
    for k in range(cap + 1):
        for ms in itertools.product(range(cap + 1), repeat=k):
            total = sum(ms)
            if total > cap:
                continue
            if base.compose(mu[k], tuple(mu[m] for m in ms)) != mu[total]:
                return False
    return True


def monoid_candidates(M: BasedMulticategory | Multicategory) -> Iterator[tuple[Hashable, tuple[Arrow, ...]]]:
    base = M.base if isinstance(M, BasedMulticategory) else M
    for a in base.objects:
        homs = [base.hom((a,) * n, a) for n in range(base.arity_cap + 1)]
        for mu in itertools.product(*homs):
            yield a, mu


@dataclass(frozen=True)
class ModuleDatum:
    m: Hashable
    lambda1: Arrow


def module_action(M: BasedMulticategory, d: ModuleDatum, k: int) -> Arrow:
    """The derived action ``(b^k, m) -> m``."""
    return M.compose(d.lambda1, (M.mu[k], M.unit(d.m)))


def module_assignment(M: BasedMulticategory, d: ModuleDatum, E: BasedMulticategory) -> dict[Arrow, Arrow]:
    """Images of all arrows of ``E`` under the multifunctor determined by ``d``."""
    obj = {0: M.basepoint, 1: d.m}
    out = {}
    for f in E.arrows():
        if f.target == 0:
            out[f] = M.mu[f.arity]
            continue
        k = f.arity - 1
        pos = f.source.index(1)
        base_arrow = module_action(M, d, k)
        # base_arrow has its m-input last; move it to position ``pos``
        sigma = [None] * f.arity
        sigma[pos] = k
        rest = iter(range(k))
        for i in range(f.arity):
            if i != pos:
                sigma[i] = next(rest)
        out[f] = M.permute(base_arrow, tuple(sigma))
        assert out[f].source == tuple(obj[x] for x in f.source)
    return out


def module_check(M: BasedMulticategory, d: ModuleDatum) -> bool:
    """True iff ``d`` is a module over the basepoint monoid (within the cap)."""
    b = M.basepoint
    lam = d.lambda1
    if lam.source != (b, d.m) or lam.target != d.m or lam not in M.hom(lam.source, lam.target):
        raise ValueError(f"action arrow must have profile ({b!r}, {d.m!r}; {d.m!r})")
    one_b, one_m = M.unit(b), M.unit(d.m)
    if M.compose(lam, (M.mu[0], one_m)) != one_m:
        return False
    if M.arity_cap >= 3:
        twice = M.compose(lam, (one_b, lam))
        if twice != M.compose(lam, (M.mu[2], one_m)):
            return False
        if M.permute(twice, (1, 0, 2)) != twice:
            return False
    from .enumeration import check_multifunctor  # local: enumeration imports this module

    E = build_E(M.arity_cap)
    try:
        arr = module_assignment(M, d, E)
    except CompositionError:
        return False
    objmap = {0: b, 1: d.m}
    return not check_multifunctor(E, M, objmap, arr)


def module_candidates(M: BasedMulticategory) -> Iterator[ModuleDatum]:
    b = M.basepoint
    for m in M.objects:
        for lam in M.hom((b, m), m):
            yield ModuleDatum(m, lam)


def modules(M: BasedMulticategory) -> list[ModuleDatum]:
    return [d for d in module_candidates(M) if module_check(M, d)]


# -------------------------------------------------------------- constructors


def _terminal_rule(source, target):
    return True


@lru_cache(maxsize=None)
def build_terminal(arity_cap: int = DEFAULT_ARITY_CAP) -> BasedMulticategory:
    base = ThinMulticategory(("*",), _terminal_rule, arity_cap, name="*")
    return based_at(base, "*")


def _e_rule(source, target):
    return sum(source) == target


@lru_cache(maxsize=None)
def build_E(arity_cap: int = DEFAULT_ARITY_CAP) -> BasedMulticategory:
    base = ThinMulticategory((0, 1), _e_rule, arity_cap, name="E")
    return based_at(base, 0)


def _power_rule(source, target):
    return all(sum(col) == t for col, t in zip(zip(*source), target)) if source else not any(target)


@lru_cache(maxsize=None)
def power_E(n: int, arity_cap: int = DEFAULT_ARITY_CAP) -> BasedMulticategory:
    """E^n by the direct formula: objects {0,1}^n, an arrow iff coordinatewise sums match."""
    if n < 0:
        raise ValueError("n must be non-negative")
    objects = tuple(itertools.product((0, 1), repeat=n))
    base = ThinMulticategory(objects, _power_rule, arity_cap, name=f"E^{n}")
    return based_at(base, (0,) * n)


def _i_rule(source, target):
    nonzero = [a for a in source if a != 0]
    if target == 0:
        return not nonzero
    if target == 1:
        return nonzero == [1]
    return len(nonzero) == 1


@lru_cache(maxsize=None)
def build_I(arity_cap: int = DEFAULT_ARITY_CAP) -> BasedMulticategory:
    base = ThinMulticategory((0, 1, 2), _i_rule, arity_cap, name="I")
    return based_at(base, 0)


def _u_rule(source, target):
    if target == "*":
        return all(a == "*" for a in source)
    return source == ("[0]",)


@lru_cache(maxsize=None)
def build_unit_u(arity_cap: int = DEFAULT_ARITY_CAP) -> BasedMulticategory:
    base = ThinMulticategory(("*", "[0]"), _u_rule, arity_cap, name="u")
    return based_at(base, "*")


def cartesian_product(M: BasedMulticategory, N: BasedMulticategory) -> BasedMulticategory:
    P = ProductMulticategory(M.base, N.base)
    mu = tuple(P._join(a, b) for a, b in zip(M.mu, N.mu))
    return BasedMulticategory(P, (M.basepoint, N.basepoint), mu)


class WedgeMulticategory(Multicategory):
    """Two based multicategories glued along their basepoints.

    Left objects keep their ids, right non-basepoint objects become ``("'", y)``.
    Hom-sets of all-basepoint profiles come from the left factor; both factors
    must have exactly one arrow there.
    """

    def __init__(self, M: BasedMulticategory, N: BasedMulticategory):
        if M.arity_cap != N.arity_cap:
            raise ValueError("arity caps differ")
        for X in (M, N):
            for n in range(X.arity_cap + 1):
                if len(X.hom((X.basepoint,) * n, X.basepoint)) != 1:
                    raise ValueError("wedge needs basepoint hom-sets that are singletons")
        right = tuple(("'", y) for y in N.objects if y != N.basepoint)
        super().__init__(M.objects + right, M.arity_cap, name=f"{M.name}v{N.name}")
        self.M, self.N = M, N

    def _side(self, objs) -> str | None:
        sides = {("R" if isinstance(x, tuple) and len(x) == 2 and x[0] == "'" else "L")
                 for x in objs if x != self.M.basepoint}
        if len(sides) > 1:
            return None
        return sides.pop() if sides else "*"

    def _to_right(self, x):
        return self.N.basepoint if x == self.M.basepoint else x[1]

    def _from_right(self, y):
        return self.M.basepoint if y == self.N.basepoint else ("'", y)

    def _lift(self, f: Arrow) -> Arrow:
        if f.target == self.N.basepoint and all(y == self.N.basepoint for y in f.source):
            m = self.M.mu[f.arity]
            return Arrow(m.source, m.target, ("L", m.label))
        return Arrow(tuple(self._from_right(y) for y in f.source), self._from_right(f.target), ("R", f.label))

    def _lower(self, f: Arrow) -> Arrow:
        return Arrow(tuple(self._to_right(x) for x in f.source), self._to_right(f.target), f.label[1])

    def _hom(self, source, target):
        side = self._side(source + (target,))
        if side in ("L", "*"):
            return tuple(Arrow(source, target, ("L", f.label)) for f in self.M.hom(source, target))
        if side == "R":
            rs = tuple(self._to_right(x) for x in source)
            return tuple(self._lift(f) for f in self.N.hom(rs, self._to_right(target)))
        return ()

    def _strip(self, f: Arrow) -> Arrow:
        return Arrow(f.source, f.target, f.label[1])

    def _compose(self, f, gs):
        side = self._side(f.source + (f.target,) + tuple(itertools.chain.from_iterable(g.source for g in gs)))
        if side == "R":
            # basepoint-profile arrows must be re-read on the right side
            rg = [self._as_right(g) for g in gs]
            return self._lift(self.N.compose(self._as_right(f), rg))
        out = self.M.compose(self._strip(f), [self._strip(g) for g in gs])
        return Arrow(out.source, out.target, ("L", out.label))

    def _as_right(self, f: Arrow) -> Arrow:
        if f.label[0] == "R":
            return self._lower(f)
        return self.N.mu[f.arity]

    def _permute(self, f, sigma):
        if f.label[0] == "R":
            return self._lift(self.N.permute(self._lower(f), sigma))
        out = self.M.permute(self._strip(f), sigma)
        return Arrow(out.source, out.target, ("L", out.label))

    def _unit(self, a):
        if self._side((a,)) == "R":
            return self._lift(self.N.unit(self._to_right(a)))
        u = self.M.unit(a)
        return Arrow(u.source, u.target, ("L", u.label))


def wedge(M: BasedMulticategory, N: BasedMulticategory) -> BasedMulticategory:
    W = WedgeMulticategory(M, N)
    mu = tuple(Arrow(m.source, m.target, ("L", m.label)) for m in M.mu)
    return BasedMulticategory(W, M.basepoint, mu)


def full_sub(M: BasedMulticategory, objects: Sequence[Hashable]) -> BasedMulticategory:
    if M.basepoint not in objects:
        raise ValueError("a based sub-multicategory must contain the basepoint")
    return BasedMulticategory(FullSubMulticategory(M.base, objects), M.basepoint, M.mu)


# ---------------------------------------------------------------- modules_of


class ModulesMulticategory(Multicategory):
    """Modules over the basepoint monoid and the action-compatible arrows between them."""

    def __init__(self, M: BasedMulticategory, data: Sequence[ModuleDatum]):
        super().__init__(data, M.arity_cap, name=f"Mod({M.name})")
        self.M = M

    def compatible(self, f: Arrow, sources: Sequence[ModuleDatum], target: ModuleDatum) -> bool:
        M = self.M
        k = len(sources)
        if k + 1 > M.arity_cap:
            return True
        one_b = M.unit(M.basepoint)
        lhs = M.compose(target.lambda1, (one_b, f))
        for i, d in enumerate(sources):
            inner = tuple(d.lambda1 if j == i else M.unit(d2.m) for j, d2 in enumerate(sources))
            rhs = M.permute(M.compose(f, inner), insertion_permutation(k, i))
            if lhs != rhs:
                return False
        return True

    def _hom(self, source, target):
        underlying = self.M.hom(tuple(d.m for d in source), target.m)
        return tuple(Arrow(source, target, f) for f in underlying if self.compatible(f, source, target))

    def _compose(self, f, gs):
        out = self.M.compose(f.label, [g.label for g in gs])
        return Arrow(tuple(itertools.chain.from_iterable(g.source for g in gs)), f.target, out)

    def _permute(self, f, sigma):
        return Arrow(tuple(f.source[s] for s in sigma), f.target, self.M.permute(f.label, sigma))

    def _unit(self, a):
        return Arrow((a,), a, self.M.unit(a.m))


def modules_of(M: BasedMulticategory) -> BasedMulticategory:
    """The multicategory of modules over the basepoint monoid of ``M``."""
    data = modules(M)
    base = ModulesMulticategory(M, data)
    b = ModuleDatum(M.basepoint, M.mu[2])
    if b not in data:
        raise ValueError("the basepoint monoid does not act on itself; input is not a valid based multicategory")
    mu = tuple(Arrow((b,) * n, b, m) for n, m in enumerate(M.mu))
    return BasedMulticategory(base, b, mu, name=base.name)


def forget_modules(MM: BasedMulticategory):
    """Object and arrow maps of the forgetful multifunctor ``modules_of(M) -> M``."""
    return (lambda d: d.m), (lambda f: f.label)
