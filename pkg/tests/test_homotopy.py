from __future__ import annotations

import pytest

from multikat.categories import (
    Functor,
    Morphism,
    discrete_category,
    identity_functor,
    is_groupoid,
    one_object_group,
    pi0_category,
    table_category,
)
from multikat.gamma import k_theory
from multikat.groups import automorphism_group
from multikat.homotopy import (
    EQUIVALENCE,
    INITIAL,
    ISOMORPHISM,
    equivalence_certificate,
    extract_binary_tensor,
    path_object_check,
    pi0_monoid,
    pi1_level,
    segal_certificate,
    theorem_A_certificate,
    very_special_verdict,
)
from multikat.multicat import build_E, build_I, build_terminal, power_E
from multikat.permutative import delooping, discrete_cyclic, saturating

import oracles


def _doubled_groupoid():
    """Two isomorphic objects; every hom-set is a copy of Z/2."""
    arrows, comp = [], {}
    for a in range(2):
        for b in range(2):
            for g in range(2):
                arrows.append(Morphism(a, b, g))
    for f in arrows:
        for g in arrows:
            if f.cod == g.dom:
                comp[(g, f)] = Morphism(f.dom, g.cod, (f.data + g.data) % 2)
    ids = [Morphism(a, a, 0) for a in range(2)]
    return table_category(("x", "y"), arrows, comp, ids, "pair")


# ---------------------------------------------------------------- certificates


def test_identity_has_both_certificates():
    C = _doubled_groupoid()
    a = theorem_A_certificate(identity_functor(C))
    b = equivalence_certificate(identity_functor(C))
    assert a and a.kind == INITIAL and a.verify()
    assert b and b.kind == ISOMORPHISM and b.verify()


def test_empty_source_has_no_certificate():
    empty = discrete_category([])
    D = discrete_category(["x"])
    F = Functor(empty, D, (), lambda m: m, "empty")
    assert not theorem_A_certificate(F)
    assert not equivalence_certificate(F)


def test_skeleton_inclusion_is_an_equivalence():
    G = one_object_group(range(2), lambda a, b: (a + b) % 2, 0)
    C = _doubled_groupoid()
    F = Functor(G, C, (0,), lambda m: Morphism(0, 0, m.data), "skeleton")
    cert = equivalence_certificate(F)
    assert cert and cert.kind == EQUIVALENCE and cert.verify()


def test_collapsing_non_isomorphic_objects_fails():
    C = discrete_category(["x", "y"])
    D = discrete_category(["z"])
    F = Functor(C, D, (0, 0), lambda m: Morphism(0, 0, None), "collapse")
    assert not equivalence_certificate(F)


# ---------------------------------------------------------------- Segal maps


def test_Z2_segal_map_is_isomorphism_of_discrete_categories(J_Z2):
    p = J_Z2.segal_map(2)
    assert len(p.source.objects) == len(p.target.objects) == 4
    cert = equivalence_certificate(p)
    assert cert.kind == ISOMORPHISM
    assert segal_certificate(J_Z2, 2).verify()


def test_BZ3_segal_map_is_equivalence_of_connected_groupoids(J_BZ3):
    p = J_BZ3.segal_map(2)
    C, D = p.source, p.target
    assert is_groupoid(C) and is_groupoid(D)
    assert len(pi0_category(C)) == len(pi0_category(D)) == 1
    assert automorphism_group(C, 0).name() == automorphism_group(D, 0).name() == "Z/3 x Z/3"
    cert = equivalence_certificate(p)
    assert cert.kind == EQUIVALENCE and cert.verify()
    for n in (2, 3):
        assert segal_certificate(J_BZ3, n).verify()


def test_E_level_two_has_three_objects(J_E):
    """1 + 1 has no target in E, so one of the four pairs of modules has no preimage."""
    assert len(J_E.level(2).objects) == oracles.count_multifunctors(power_E(2, 3), build_E(3)) == 3
    assert len(J_E.segal_map(2).target.objects) == 4
    assert not segal_certificate(J_E, 2)


@pytest.mark.parametrize("fixture", ["J_Z2", "J_BZ3", "J_sat1"])
def test_theorem_A_preserves_components(request, fixture):
    X = request.getfixturevalue(fixture)
    for n in (2, 3):
        cert = segal_certificate(X, n)
        assert cert
        assert len(pi0_category(cert.functor.source)) == len(pi0_category(cert.functor.target))


def test_segal_range():
    with pytest.raises(ValueError):
        segal_certificate(k_theory(build_terminal(4), 2), 3)


# ---------------------------------------------------------------- pi_0, pi_1, verdicts


def test_pi0_examples(J_Z2, J_sat1, J_BZ3):
    assert pi0_monoid(J_Z2).monoid.name() == "Z/2"
    sat = pi0_monoid(J_sat1).monoid
    assert not sat.is_group() and sat.is_commutative()
    # truncated addition on {0, 1}: 1 + 1 = 1
    one = sat.labels.index("1")
    assert sat.mul(one, one) == one
    assert pi0_monoid(J_BZ3).monoid.name() == "0"


@pytest.mark.parametrize("fixture,P", [("J_Z2", discrete_cyclic(2)), ("J_sat1", saturating()), ("J_BZ3", delooping(3))])
def test_pi0_agrees_with_tensor_classes(request, fixture, P):
    X = request.getfixturevalue(fixture)
    monoid = pi0_monoid(X).monoid
    k, table, _ = oracles.tensor_classes(P)
    assert monoid.order == k
    if k > 1:
        # discrete inputs: classes are named by the objects of P
        name = {lab: i for i, lab in enumerate(monoid.labels)}
        for a in P.objects:
            for b in P.objects:
                assert monoid.labels[monoid.mul(name[a], name[b])] == P.tensor(a, b)


def test_pi1(J_BZ3, J_Z2):
    assert pi1_level(J_BZ3, 1)[0]["group"] == "Z/3"
    assert pi1_level(J_BZ3, 2)[0]["group"] == "Z/3 x Z/3"
    assert all(entry["group"] == "0" for entry in pi1_level(J_Z2, 1))
    assert pi1_level(k_theory(build_I(4), 1), 1) == "undefined"


@pytest.mark.parametrize(
    "fixture,special,very,pi0,pi1",
    [("J_Z2", True, True, "Z/2", "0"), ("J_BZ3", True, True, "0", "Z/3"), ("J_sat1", True, False, None, None)],
)
def test_verdicts(request, fixture, special, very, pi0, pi1):
    r = very_special_verdict(request.getfixturevalue(fixture))
    assert (r.special, r.very_special, r.stable_pi0, r.stable_pi1) == (special, very, pi0, pi1)
    if r.very_special:
        assert r.special and r.pi0.monoid.is_group() and r.pi0.monoid.is_commutative()


# ---------------------------------------------------------------- path object


@pytest.mark.parametrize("name", ["terminal", "BZ/3", "I", "u"])
def test_path_object_passes(samples, name):
    rep = path_object_check(samples[name])
    assert rep.ok, rep.to_dict()


@pytest.mark.parametrize("name", ["E", "Z/2", "wedge(E,E)"])
def test_path_object_first_two_legs(samples, name):
    rep = path_object_check(samples[name])
    assert rep.legs["a"] and rep.legs["b"]
    assert rep.theorem_A.verify()
    # level 1 is discrete here, so a projection that is not onto pairs of modules fails leg c
    assert rep.level1_groupoid and rep.surjective is False


def test_identity_paths_are_initial(samples):
    for name in ("E", "Z/2", "BZ/3"):
        assert path_object_check(samples[name]).identity_initial


# ---------------------------------------------------------------- tensor


def test_tensor_on_Z2_is_addition(J_Z2):
    t = extract_binary_tensor(J_Z2, segal_certificate(J_Z2, 2))
    assert t.ok and t.descends and t.agrees_with_pi0
    for (a, b), c in t.table.items():
        assert int(c) == (int(a) + int(b)) % 2


def test_tensor_not_extracted_without_initial_objects(J_E, J_BZ3):
    assert not extract_binary_tensor(J_E, segal_certificate(J_E, 2)).ok
    eq = equivalence_certificate(J_BZ3.segal_map(2))
    assert not extract_binary_tensor(J_BZ3, eq).ok


def test_tensor_on_terminal_is_trivial():
    X = k_theory(build_terminal(4), 2)
    t = extract_binary_tensor(X, segal_certificate(X, 2))
    assert t.ok and list(t.table.values()) == ["*"]
