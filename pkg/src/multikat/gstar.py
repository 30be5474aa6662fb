"""The based category of finite lists of finite pointed sets, and the inclusion of Gamma.

A morphism ``(n_1..n_m) -> (k_1..k_t)`` is an injection ``f: m -> t`` together
with based maps ``alpha_i`` from ``n_j`` (when ``f(j) = i``) or from ``1`` (when
``i`` is not hit) into ``k_i``.  Any family with a zero component is the base
morphism, and any list with a zero entry is the zero object ``(0)``.
Based maps ``n+ -> k+`` are tuples of the images of ``1..n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .gamma import PointedMap, gamma_maps

MAX_ENTRY = 4
MAX_LENGTH = 3
ZERO = (0,)


def normalize_object(ns) -> tuple[int, ...]:
    ns = tuple(int(n) for n in ns)
    if any(n < 0 for n in ns):
        raise ValueError("list entries must be natural numbers")
    return ZERO if 0 in ns else ns


@dataclass(frozen=True, order=True)
class GStarMorphism:
    dom: tuple[int, ...]
    cod: tuple[int, ...]
    injection: tuple[int, ...] | None  # None marks the base morphism
    alphas: tuple[tuple[int, ...], ...] = ()

    @property
    def is_base(self) -> bool:
        return self.injection is None

    def __str__(self):
        if self.is_base:
            return f"0:{self.dom}->{self.cod}"
        return f"({self.injection}, {self.alphas})"


def base_morphism(A, B) -> GStarMorphism:
    return GStarMorphism(normalize_object(A), normalize_object(B), None)


def _domain_size(A: tuple[int, ...], f: tuple[int, ...], i: int) -> int:
    """Size of the source of ``alpha_i``: ``n_j`` if ``f(j) = i``, else 1."""
    for j, fj in enumerate(f):
        if fj == i:
            return A[j]
    return 1


def _injections(m: int, t: int):
    return itertools.permutations(range(t), m)


def _based_maps(n: int, k: int):
    return itertools.product(range(k + 1), repeat=n)


def _is_zero(alpha: tuple[int, ...]) -> bool:
    return not any(alpha)


def make_morphism(A, B, injection, alphas) -> GStarMorphism:
    """Normal form of ``(injection, alphas)``, collapsing to the base morphism when needed."""
    A, B = normalize_object(A), normalize_object(B)
    if A == ZERO or B == ZERO:
        return base_morphism(A, B)
    injection, alphas = tuple(injection), tuple(tuple(a) for a in alphas)
    if len(injection) != len(A) or len(set(injection)) != len(injection) or any(not 0 <= i < len(B) for i in injection):
        raise ValueError(f"{injection} is not an injection {len(A)} -> {len(B)}")
    if len(alphas) != len(B):
        raise ValueError("need one map per target entry")
    for i, alpha in enumerate(alphas):
        if len(alpha) != _domain_size(A, injection, i) or any(not 0 <= v <= B[i] for v in alpha):
            raise ValueError(f"component {i} is not a based map into {B[i]}")
    if any(_is_zero(a) for a in alphas):
        return base_morphism(A, B)
    return GStarMorphism(A, B, injection, alphas)


def raw_hom_size(A, B) -> int:
    """Number of pairs ``(f, alphas)`` before the quotient (oracle for the hom-set size)."""
    A, B = tuple(A), tuple(B)
    total = 0
    for f in _injections(len(A), len(B)):
        size = 1
        for i, k in enumerate(B):
            size *= (k + 1) ** _domain_size(A, f, i)
        total += size
    return total


def build_gstar_hom(A, B, *, check_bounds: bool = True) -> list[GStarMorphism]:
    """All morphisms ``A -> B`` in normal form: the base morphism first, then lexicographic."""
    A, B = normalize_object(A), normalize_object(B)
    if check_bounds and any(len(X) > MAX_LENGTH or any(n > MAX_ENTRY for n in X) for X in (A, B)):
        raise ValueError(f"lists are limited to length {MAX_LENGTH} and entries {MAX_ENTRY}")
    out = [base_morphism(A, B)]
    if A == ZERO or B == ZERO:
        return out
    for f in _injections(len(A), len(B)):
        # only nonzero components: families through 0 are the base morphism
        choices = [
            [a for a in _based_maps(_domain_size(A, f, i), k) if not _is_zero(a)] for i, k in enumerate(B)
        ]
        for alphas in itertools.product(*choices):
            out.append(GStarMorphism(A, B, f, alphas))
    return out


def identity_gstar(A) -> GStarMorphism:
    A = normalize_object(A)
    if A == ZERO:
        return base_morphism(A, A)
    return GStarMorphism(A, A, tuple(range(len(A))), tuple(tuple(range(1, n + 1)) for n in A))


def _after(beta: tuple[int, ...], alpha: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(0 if v == 0 else beta[v - 1] for v in alpha)


def compose_gstar(g: GStarMorphism, f: GStarMorphism) -> GStarMorphism:
    """``g`` after ``f``."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose {g} after {f}")
    if f.is_base or g.is_base:
        return base_morphism(f.dom, g.cod)
    inj = tuple(g.injection[i] for i in f.injection)
    preimage = {l: i for i, l in enumerate(g.injection)}
    alphas = []
    for l, beta in enumerate(g.alphas):
        i = preimage.get(l)
        alphas.append(beta if i is None else _after(beta, f.alphas[i]))
    return make_morphism(f.dom, g.cod, inj, alphas)


def include_gamma(phi: PointedMap) -> GStarMorphism:
    """``i(phi) = (id_1, {phi})`` from ``(m)`` to ``(n)``."""
    return make_morphism((phi.m,), (phi.n,), (0,), (phi.images,))


def check_i_fully_faithful(bound: int) -> bool:
    """``Gamma(m, n) -> G*((m), (n))`` is bijective and functorial for ``m, n <= bound``."""
    if bound > MAX_ENTRY:
        raise ValueError(f"bound is limited to {MAX_ENTRY}")
    for m in range(bound + 1):
        for n in range(bound + 1):
            images = [include_gamma(phi) for phi in gamma_maps(m, n)]
            if len(set(images)) != len(images) or set(images) != set(build_gstar_hom((m,), (n,))):
                return False
    for m, n, p in itertools.product(range(bound + 1), repeat=3):
        for phi in gamma_maps(m, n):
            for psi in gamma_maps(n, p):
                if include_gamma(phi.then(psi)) != compose_gstar(include_gamma(psi), include_gamma(phi)):
                    return False
    return True


def gstar_objects(max_entry: int, max_length: int, max_total: int | None = None) -> list[tuple[int, ...]]:
    """Normalized objects with bounded entries, length and entry sum, zero object first."""
    seen = {ZERO}
    out = [ZERO]
    for length in range(max_length + 1):
        for ns in itertools.product(range(1, max_entry + 1), repeat=length):
            if ns not in seen and (max_total is None or sum(ns) <= max_total):
                seen.add(ns)
                out.append(ns)
    return out


def check_gstar_category(max_entry: int = 2, max_length: int = 3, max_total: int | None = 3) -> list[str]:
    """Unit laws, closure and associativity over every composable triple in the fragment."""
    objs = gstar_objects(max_entry, max_length, max_total)
    homs = {(a, b): build_gstar_hom(a, b) for a in objs for b in objs}
    errs: list[str] = []
    for (a, b), fs in homs.items():
        for f in fs:
            if compose_gstar(identity_gstar(b), f) != f or compose_gstar(f, identity_gstar(a)) != f:
                errs.append(f"unit law fails at {f}")
    table: dict[tuple[GStarMorphism, GStarMorphism], GStarMorphism] = {}
    for a, b, c in itertools.product(objs, repeat=3):
        hom_ac = set(homs[(a, c)])
        for f in homs[(a, b)]:
            for g in homs[(b, c)]:
                gf = table[(g, f)] = compose_gstar(g, f)
                if gf not in hom_ac:
                    errs.append(f"{g} o {f} is not a normal-form morphism")
    if errs:
        return errs
    for a, b, c, d in itertools.product(objs, repeat=4):
        for f in homs[(a, b)]:
            for g in homs[(b, c)]:
                gf = table[(g, f)]
                for h in homs[(c, d)]:
                    if table[(h, gf)] != table[(table[(h, g)], f)]:
                        errs.append(f"associativity fails at {h}, {g}, {f}")
    return errs
