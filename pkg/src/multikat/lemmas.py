"""Per-input structural checks, each returning a row for the lemma table."""

from __future__ import annotations

from dataclasses import dataclass, field

from .enumeration import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    HomCategory,
    LemmaFailure,
    Multifunctor,
    check_lemma_arrow,
    enumerate_based_multifunctors,
)
from .gstar import check_i_fully_faithful
from .homotopy import path_object_check
from .multicat import (
    BasedMulticategory,
    build_E,
    build_terminal,
    forget_modules,
    modules,
    modules_of,
    monoid_candidates,
    monoid_check,
    power_E,
    wedge,
)

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass
class LemmaRow:
    input: str
    lemma: str
    status: str
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"input": self.input, "lemma": self.lemma, "status": self.status, "detail": self.detail, **self.data}


def monoid_bijection(M: BasedMulticategory, budget=DEFAULT_BUDGET) -> tuple[bool, str]:
    T = build_terminal(M.arity_cap)
    functors = len(enumerate_based_multifunctors(T, M, budget=budget, based=False))
    passing = sum(1 for a, mu in monoid_candidates(M) if monoid_check(M, a, mu))
    return functors == passing, f"{functors} multifunctors / {passing} monoids"


def module_bijection(M: BasedMulticategory, budget=DEFAULT_BUDGET) -> tuple[bool, str]:
    E = build_E(M.arity_cap)
    functors = len(enumerate_based_multifunctors(E, M, budget=budget))
    passing = len(modules(M))
    return functors == passing, f"{functors} multifunctors / {passing} modules"


def wedge_bijection(M: BasedMulticategory, budget=DEFAULT_BUDGET) -> tuple[bool, str]:
    E = build_E(M.arity_cap)
    pairs = len(enumerate_based_multifunctors(wedge(E, E), M, budget=budget))
    single = len(enumerate_based_multifunctors(E, M, budget=budget))
    return pairs == single**2, f"{pairs} from E v E / {single}^2"


def modules_levelwise(M: BasedMulticategory, levels: int, budget=DEFAULT_BUDGET) -> tuple[bool, str]:
    """Postcomposition with the forgetful multifunctor is an isomorphism at each level."""
    MM = modules_of(M)
    U_obj, U_arr = forget_modules(MM)
    sizes = []
    for n in range(levels + 1):
        S = power_E(n, M.arity_cap)
        A = HomCategory(S, MM, budget)
        B = HomCategory(S, M, budget)
        images = [
            B.index.get(Multifunctor(S, M, tuple(U_obj(y) for y in F.objects), tuple(U_arr(a) for a in F.arrows)))
            for F in A.functors
        ]
        if None in images or sorted(images) != list(range(len(B.objects))):
            return False, f"level {n}: objects do not correspond ({len(A.objects)} vs {len(B.objects)})"
        arrows = 0
        for i in range(len(A.objects)):
            for j in range(len(A.objects)):
                mapped = [tuple(U_arr(c) for c in t.data) for t in A.hom(i, j)]
                target = [t.data for t in B.hom(images[i], images[j])]
                if len(set(mapped)) != len(mapped) or set(mapped) != set(target):
                    return False, f"level {n}: hom({i},{j}) does not correspond"
                arrows += len(mapped)
        sizes.append(f"{len(A.objects)}/{arrows}")
    return True, "levels " + " ".join(sizes)


def lemma_rows(name: str, M: BasedMulticategory, *, levels: int = 3, budget=DEFAULT_BUDGET) -> list[LemmaRow]:
    rows: list[LemmaRow] = []

    def run(lemma, fn):
        try:
            ok, detail, data = fn()
        except BudgetExceeded as exc:
            rows.append(LemmaRow(name, lemma, SKIP, f"budget: {exc}"))
            return
        except LemmaFailure as exc:
            rows.append(LemmaRow(name, lemma, FAIL, str(exc)))
            return
        rows.append(LemmaRow(name, lemma, PASS if ok else FAIL, detail, data))

    def arrow():
        w = check_lemma_arrow(M, budget=budget)
        detail = f"{w.left_objects}/{w.right_objects} objects, {w.left_arrows}/{w.right_arrows} arrows"
        return True, detail, {"counts": w.to_dict()}

    def wrap(fn, *args):
        return lambda: (*fn(*args), {})

    def path():
        rep = path_object_check(M, budget=budget)
        legs = rep.legs
        detail = ", ".join(f"{k}={'ok' if v else 'fails'}" for k, v in legs.items())
        return rep.ok, detail, {"path_object": rep.to_dict()}

    run("lemma_arrow", arrow)
    run("monoid_bijection", wrap(monoid_bijection, M, budget))
    run("module_bijection", wrap(module_bijection, M, budget))
    run("wedge_bijection", wrap(wedge_bijection, M, budget))
    run("modules_levelwise", wrap(modules_levelwise, M, min(levels, M.arity_cap - 1), budget))
    run("path_object", path)
    return rows


def global_rows(bound: int = 3) -> list[LemmaRow]:
    ok = check_i_fully_faithful(bound)
    return [LemmaRow("-", "i_fully_faithful", PASS if ok else FAIL, f"bound {bound}")]
