"""Skeletal finite pointed sets, the E-power restriction maps, and the K-theory Gamma-object."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .categories import Functor, Morphism, product_category
from .enumeration import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    HomCategory,
    Multifunctor,
    precompose,
    precompose_components,
    thin_multifunctor,
)
from .multicat import DEFAULT_ARITY_CAP, BasedMulticategory, power_E

MAX_GAMMA = 6
DEFAULT_LEVELS = 3


@dataclass(frozen=True)
class PointedMap:
    """A based map ``m+ -> n+``; ``images[i-1]`` is the image of ``i``, with 0 the basepoint."""

    m: int
    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.m or any(not 0 <= v <= self.n for v in self.images):
            raise ValueError(f"not a pointed map {self.m}+ -> {self.n}+: {self.images}")

    def __call__(self, i: int) -> int:
        return 0 if i == 0 else self.images[i - 1]

    def then(self, psi: "PointedMap") -> "PointedMap":
        """``psi`` after ``self``."""
        if psi.m != self.n:
            raise ValueError("pointed maps are not composable")
        return PointedMap(self.m, psi.n, tuple(psi(v) for v in self.images))

    def __str__(self):
        return f"{self.m}+->{self.n}+:" + "".join(map(str, self.images))


def identity_map(n: int) -> PointedMap:
    return PointedMap(n, n, tuple(range(1, n + 1)))


def rho(i: int, n: int) -> PointedMap:
    """The projection ``n+ -> 1+`` keeping only ``i``."""
    return PointedMap(n, 1, tuple(1 if j == i else 0 for j in range(1, n + 1)))


def fold(n: int) -> PointedMap:
    return PointedMap(n, 1, (1,) * n)


def gamma_maps(m: int, n: int) -> list[PointedMap]:
    """All ``(n+1)**m`` pointed maps ``m+ -> n+`` in lexicographic order of images."""
    if m > MAX_GAMMA or n > MAX_GAMMA or m < 0 or n < 0:
        raise ValueError(f"pointed sets are limited to size {MAX_GAMMA}")
    return [PointedMap(m, n, imgs) for imgs in itertools.product(range(n + 1), repeat=m)]


@lru_cache(maxsize=None)
def restriction_multifunctor(phi: PointedMap, arity_cap: int = DEFAULT_ARITY_CAP) -> Multifunctor:
    """``phi*: E^n -> E^m`` with ``x_i = y_phi(i)`` and ``y_0 = 0``."""
    src, tgt = power_E(phi.n, arity_cap), power_E(phi.m, arity_cap)
    objmap = {y: tuple(0 if phi(i) == 0 else y[phi(i) - 1] for i in range(1, phi.m + 1)) for y in src.objects}
    return thin_multifunctor(src, tgt, objmap)


class GammaObject:
    """Levels ``0..L`` of ``Mult*(E^n, M)`` with covariant actions of pointed maps."""

    def __init__(self, target: BasedMulticategory, levels: dict[int, HomCategory]):
        self.target = target
        self.levels = dict(levels)
        self.L = max(self.levels)
        self._actions: dict[PointedMap, Functor] = {}

    def level(self, n: int) -> HomCategory:
        if n not in self.levels:
            raise KeyError(f"level {n} was not computed")
        return self.levels[n]

    def action(self, phi: PointedMap) -> Functor:
        """``J(phi)``: precomposition with ``phi*``, from level ``m`` to level ``n``."""
        got = self._actions.get(phi)
        if got is not None:
            return got
        A, B = self.level(phi.m), self.level(phi.n)
        star = restriction_multifunctor(phi, self.target.arity_cap)
        src = A.source
        obj = tuple(B.index[precompose(F, star)] for F in A.functors)

        def arr(t: Morphism, obj=obj) -> Morphism:
            return Morphism(obj[t.dom], obj[t.cod], precompose_components(t.data, src, star))

        got = Functor(A, B, obj, arr, str(phi))
        self._actions[phi] = got
        return got

    def segal_map(self, n: int) -> Functor:
        """``p_n = (J(rho_1), ..., J(rho_n))`` into the n-fold power of level 1."""
        C = self.level(n)
        P = product_category([self.level(1)] * n, name=f"J1^{n}")
        projections = [self.action(rho(i, n)) for i in range(1, n + 1)]
        obj = tuple(P.index[tuple(p.obj[c] for p in projections)] for c in range(len(C.objects)))

        def arr(t: Morphism) -> Morphism:
            return Morphism(obj[t.dom], obj[t.cod], tuple(p(t) for p in projections))

        return Functor(C, P, obj, arr, f"p_{n}")


def k_theory(
    M: BasedMulticategory,
    L: int = DEFAULT_LEVELS,
    *,
    budget: int | None = DEFAULT_BUDGET,
    jobs: int = 1,
) -> GammaObject:
    if M.arity_cap < L + 1:
        raise ValueError(f"levels up to {L} need arity cap at least {L + 1}")
    if L > MAX_GAMMA:
        raise ValueError(f"at most {MAX_GAMMA} levels")

    def level(n: int) -> HomCategory:
        try:
            return HomCategory(power_E(n, M.arity_cap), M, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"level {n}: {exc}") from exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            built = list(pool.map(level, range(L + 1)))
    else:
        built = [level(n) for n in range(L + 1)]
    return GammaObject(M, dict(enumerate(built)))


def check_gamma_functoriality(X: GammaObject, bound: int = 3, arrow_limit: int | None = 20000) -> list[str]:
    """Identities and composites of pointed maps act correctly up to ``bound``.

    Objects are always checked.  Arrows are checked at levels whose arrow
    count is at most ``arrow_limit`` (``None`` checks everything).
    """
    top = min(bound, X.L)
    errs: list[str] = []

    def small(n: int) -> bool:
        if arrow_limit is None:
            return True
        C = X.level(n)
        total = 0
        for a in range(len(C.objects)):
            for b in range(len(C.objects)):
                total += len(C.hom(a, b))
                if total > arrow_limit:
                    return False
        return True

    checked = {n: small(n) for n in range(top + 1)}
    for n in range(top + 1):
        J = X.action(identity_map(n))
        C = X.level(n)
        if J.obj != tuple(range(len(C.objects))):
            errs.append(f"identity of {n}+ moves objects")
        if checked[n] and any(J(f) != f for f in C.arrows()):
            errs.append(f"identity of {n}+ moves arrows")
    for m, n, p in itertools.product(range(top + 1), repeat=3):
        arrows = list(X.level(m).arrows()) if checked[m] else []
        for phi in gamma_maps(m, n):
            Jphi = X.action(phi)
            for psi in gamma_maps(n, p):
                Jpsi, Jboth = X.action(psi), X.action(phi.then(psi))
                if Jboth.obj != tuple(Jpsi.obj[x] for x in Jphi.obj):
                    errs.append(f"objects: J({psi} o {phi}) != J({psi}) o J({phi})")
                    continue
                for f in arrows:
                    if Jboth(f) != Jpsi(Jphi(f)):
                        errs.append(f"arrows: J({psi} o {phi}) != J({psi}) o J({phi})")
                        break
    return errs


def level_counts(X: GammaObject) -> list[dict]:
    return [{"level": n, "objects": len(C.objects), "arrows": C.arrow_count()} for n, C in sorted(X.levels.items())]

