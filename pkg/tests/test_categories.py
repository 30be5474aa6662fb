from __future__ import annotations

import itertools

from multikat.categories import (
    Functor,
    Morphism,
    arrow_category,
    check_functor,
    discrete_category,
    identity_functor,
    is_groupoid,
    is_initial,
    one_object_group,
    pi0_category,
    product_category,
    slice_category,
    table_category,
    validate_category,
)
from multikat.groups import FiniteMonoid, automorphism_group, cyclic

import oracles


def _chain():
    """0 -> 1 <- 2 with identities: three objects, a zigzag."""
    ids = [Morphism(i, i, f"id{i}") for i in range(3)]
    f, g = Morphism(0, 1, "f"), Morphism(2, 1, "g")
    arrows = ids + [f, g]
    comp = {}
    for m in arrows:
        comp[(ids[m.cod], m)] = m
        comp[(m, ids[m.dom])] = m
    return table_category(("a", "b", "c"), arrows, comp, ids, "chain")


def test_pi0_examples():
    assert len(pi0_category(discrete_category(["x", "y"]))) == 2
    assert len(pi0_category(one_object_group(range(3), lambda a, b: (a + b) % 3, 0))) == 1
    A = arrow_category(discrete_category(["x", "y"]))
    assert len(A.objects) == 2 and A.arrow_count() == 2
    assert len(pi0_category(A)) == 2
    C = _chain()
    edges = [(m.dom, m.cod) for m in C.arrows()]
    assert len(pi0_category(C)) == oracles.components(3, edges) == 1


def test_slice_of_identity_has_initial_object():
    C = _chain()
    F = identity_functor(C)
    for d in range(3):
        S = slice_category(F, d)
        assert any(is_initial(S, i) for i in range(len(S.objects)))


def test_slice_counts_against_double_loop():
    C = _chain()
    F = identity_functor(C)
    for d in range(3):
        S = slice_category(F, d)
        objs = [(c, u) for c in range(3) for u in C.hom(d, c)]
        arrows = 0
        for (c1, u1), (c2, u2) in itertools.product(objs, repeat=2):
            arrows += sum(1 for h in C.hom(c1, c2) if C.compose(h, u1) == u2)
        assert len(S.objects) == len(objs)
        assert S.arrow_count() == arrows


def test_products_and_validation():
    G = one_object_group(range(3), lambda a, b: (a + b) % 3, 0)
    P = product_category([G, G])
    assert len(P.objects) == 1 and P.arrow_count() == 9
    assert validate_category(P) == []
    assert is_groupoid(P) and not is_groupoid(_chain())
    assert check_functor(identity_functor(P)) == []


def test_check_functor_catches_bad_images():
    C = discrete_category(["x", "y"])
    bad = Functor(C, C, (0, 1), lambda m: Morphism(0, 0, None), "bad")
    assert check_functor(bad)


def test_monoid_names():
    assert cyclic(1).name() == "0"
    assert cyclic(2).name() == "Z/2"
    assert cyclic(6).name() == "Z/2 x Z/3"
    assert cyclic(4).abelian_invariants() == [4]
    klein = FiniteMonoid.from_operation(list(itertools.product(range(2), repeat=2)),
                                        lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2))
    assert klein.name() == "Z/2 x Z/2"
    sat = FiniteMonoid.from_operation(range(2), lambda a, b: min(a + b, 1))
    assert not sat.is_group() and sat.is_commutative()
    assert sat.name() == "commutative monoid of order 2"


def test_automorphism_group_of_one_object_group():
    G = one_object_group(range(3), lambda a, b: (a + b) % 3, 0)
    assert automorphism_group(G, 0).name() == "Z/3"
