from __future__ import annotations

import pytest

from multikat.categories import arrow_category, one_object_group, validate_category
from multikat.enumeration import (
    BudgetExceeded,
    check_lemma_arrow,
    check_multifunctor,
    endpoint_inclusions,
    enumerate_based_multifunctors,
    enumerate_multinat,
    hom_category,
    identity_multifunctor,
    precompose,
    thin_multifunctor,
)
from multikat.multicat import build_E, build_I, build_terminal, power_E, wedge
from multikat.permutative import delooping, discrete_cyclic, from_permutative

import oracles

CAP = 3


def small(name):
    return {
        "terminal": build_terminal(CAP),
        "E": build_E(CAP),
        "I": build_I(CAP),
        "Z/2": from_permutative(discrete_cyclic(2), CAP),
        "BZ/3": from_permutative(delooping(3), CAP),
    }[name]


NAMES = ["terminal", "E", "I", "Z/2", "BZ/3"]


@pytest.mark.parametrize("name", NAMES)
def test_counts_match_brute_force(name):
    M = small(name)
    T, E = build_terminal(CAP), build_E(CAP)
    assert len(enumerate_based_multifunctors(T, M, based=False)) == oracles.count_multifunctors(T, M, based=False)
    assert len(enumerate_based_multifunctors(E, M)) == oracles.count_multifunctors(E, M)


@pytest.mark.parametrize("name", ["terminal", "E", "I", "Z/2"])
def test_wedge_counts_match_brute_force(name):
    M = small(name)
    W = wedge(build_E(CAP), build_E(CAP))
    assert len(enumerate_based_multifunctors(W, M)) == oracles.count_multifunctors(W, M)


def test_frozen_counts():
    # frozen from the oracle above
    assert len(enumerate_based_multifunctors(build_terminal(4), build_E(4))) == 1
    assert len(enumerate_based_multifunctors(build_E(4), build_E(4))) == 2
    Z2 = from_permutative(discrete_cyclic(2), 4)
    assert len(enumerate_based_multifunctors(power_E(2, 4), Z2)) == 4
    BZ3 = from_permutative(delooping(3), 4)
    assert len(enumerate_based_multifunctors(build_terminal(4), BZ3, based=False)) == 3


def test_enumerated_functors_pass_the_checker():
    M = small("BZ/3")
    S = power_E(2, CAP)
    for F in enumerate_based_multifunctors(S, M):
        objmap = dict(zip(S.objects, F.objects))
        arrmap = dict(zip(S.arrows(), F.arrows))
        assert check_multifunctor(S, M, objmap, arrmap) == []


def test_enumeration_is_deterministic_and_sorted():
    M = small("BZ/3")
    S = power_E(2, CAP)
    a = enumerate_based_multifunctors(S, M)
    b = enumerate_based_multifunctors(S, M)
    assert [F.key for F in a] == [F.key for F in b]
    keys = [F.sort_key() for F in a]
    assert keys == sorted(keys)


def test_limit_and_budget():
    S = power_E(3, 4)
    BZ3 = from_permutative(delooping(3), 4)
    assert len(enumerate_based_multifunctors(S, BZ3, limit=5)) == 5
    with pytest.raises(BudgetExceeded):
        enumerate_based_multifunctors(S, BZ3, budget=10)


def _as_dicts(F):
    S = F.source
    return dict(zip(S.objects, F.objects)), dict(zip(S.arrows(), F.arrows))


def test_multinat_counts_against_brute_force():
    BZ3 = small("BZ/3")
    E = build_E(CAP)
    (F,) = enumerate_based_multifunctors(E, BZ3)
    assert len(enumerate_multinat(F, F)) == oracles.count_multinat(E, BZ3, *_as_dicts(F), *_as_dicts(F)) == 3
    EE = build_E(CAP)
    F0, F1 = enumerate_based_multifunctors(E, EE)
    assert len(enumerate_multinat(F0, F1)) == oracles.count_multinat(E, EE, *_as_dicts(F0), *_as_dicts(F1)) == 0
    T = build_terminal(CAP)
    (G,) = enumerate_based_multifunctors(E, T)
    assert len(enumerate_multinat(G, G)) == 1


def test_hom_categories():
    H = hom_category(build_E(CAP), build_E(CAP))
    assert len(H.objects) == 2 and H.arrow_count() == 2
    B = hom_category(build_E(CAP), small("BZ/3"))
    assert len(B.objects) == 1 and B.arrow_count() == 3
    for name in NAMES:
        Z = hom_category(power_E(0, CAP), small(name))
        assert len(Z.objects) == 1 and Z.arrow_count() == 1
    assert validate_category(B) == []
    assert validate_category(hom_category(build_I(CAP), small("BZ/3"))) == []


def test_arrow_category_counts_against_square_oracle():
    C = one_object_group(range(3), lambda a, b: (a + b) % 3, 0)
    A = arrow_category(C)

    def hom(a, b):
        return [(a, b, g) for g in range(3)]

    def compose(g, f):
        return (f[0], g[1], (f[2] + g[2]) % 3)

    objs, squares = oracles.arrow_category_counts([0], hom, compose)
    assert len(A.objects) == objs == 3
    assert A.arrow_count() == squares == 27


def test_lemma_arrow_counts():
    w = check_lemma_arrow(build_E(4))
    assert (w.left_objects, w.left_arrows, w.right_objects, w.right_arrows) == (2, 2, 2, 2)
    w = check_lemma_arrow(build_terminal(4))
    assert (w.left_objects, w.left_arrows) == (1, 1)
    w = check_lemma_arrow(from_permutative(delooping(3), 4))
    # both sides are the arrow category of the one-object group Z/3
    assert (w.left_objects, w.right_objects) == (3, 3)
    assert w.left_arrows == w.right_arrows == 27


def test_precomposition_closure():
    """Restricting along I -> E and E v E -> I stays inside the enumerated sets."""
    E, I = build_E(CAP), build_I(CAP)
    W = wedge(E, E)
    proj = thin_multifunctor(I, E, {0: 0, 1: 1, 2: 1})
    into_I = thin_multifunctor(W, I, dict(zip(W.objects, (0, 1, 2))))
    for name in NAMES:
        M = small(name)
        on_I = set(enumerate_based_multifunctors(I, M))
        on_W = set(enumerate_based_multifunctors(W, M))
        for F in enumerate_based_multifunctors(E, M):
            assert precompose(F, proj) in on_I
        for G in on_I:
            assert precompose(G, into_I) in on_W
        inc1, inc2 = endpoint_inclusions(CAP)
        on_E = set(enumerate_based_multifunctors(E, M))
        for G in on_I:
            assert precompose(G, inc1) in on_E and precompose(G, inc2) in on_E


def test_identity_multifunctor_is_enumerated():
    E = build_E(CAP)
    assert identity_multifunctor(E) in set(enumerate_based_multifunctors(E, E))
