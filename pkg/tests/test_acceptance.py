"""The twelve acceptance criteria, one test each, at exact tolerance.

Each test records a one-line verdict; the lines are printed as they happen
(visible with ``-s``) and collected in the terminal summary.
"""
from __future__ import annotations

import contextlib
import itertools
import json

from multikat import cli
from multikat.categories import is_groupoid, pi0_category
from multikat.enumeration import check_lemma_arrow, enumerate_based_multifunctors
from multikat.gamma import check_gamma_functoriality, k_theory
from multikat.groups import automorphism_group
from multikat.gstar import check_gstar_category, check_i_fully_faithful
from multikat.homotopy import (
    EQUIVALENCE,
    INITIAL,
    equivalence_certificate,
    extract_binary_tensor,
    path_object_check,
    pi0_monoid,
    segal_certificate,
    very_special_verdict,
)
from multikat.lemmas import module_bijection, modules_levelwise, monoid_bijection
from multikat.multicat import build_E, build_terminal, cartesian_product, power_E
from multikat.serialize import serialize_multicategory

import oracles

CAP = 4
RESULTS: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str):
    try:
        yield
    except BaseException as exc:
        detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        line = f"criterion {number:2d} FAIL  {title}: {detail}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"criterion {number:2d} PASS  {title}"
    RESULTS.append(line)
    print(line)


def _flatten(x):
    out = []
    while isinstance(x, tuple):
        out.append(x[0])
        x = x[1]
    return (*out, x)


def test_criterion_01_power_E_combinatorics():
    with criterion(1, "E^n equals iterated products; presence rule by brute force"):
        E = build_E(CAP)
        iterated = E
        for n in (1, 2, 3):
            if n > 1:
                iterated = cartesian_product(E, iterated)
            direct = power_E(n, CAP)
            counts = oracles.profile_counts(direct.objects, CAP, oracles.power_rule)
            for k in range(CAP + 1):
                present = 0
                for source in itertools.product(iterated.objects, repeat=k):
                    flat_source = tuple(_flatten(x) for x in source)
                    for target in iterated.objects:
                        flat_target = _flatten(target)
                        a = len(iterated.hom(source, target))
                        b = len(direct.hom(flat_source, flat_target))
                        assert a == b <= 1, (n, source, target)
                        assert bool(b) == oracles.power_rule(flat_source, flat_target)
                        present += b
                assert present == counts[k] == (k + 1) ** n


# frozen from the brute-force multifunctor oracle
MONOIDS = {"terminal": 1, "E": 1, "I": 1, "Z/2": 1, "BZ/3": 3}
MODULES = {"terminal": 1, "E": 2, "I": 3, "Z/2": 2, "BZ/3": 1}


def test_criterion_02_bijection_lemmas(samples):
    with criterion(2, "|Mult(*,M)| = monoids and |Mult*(E,M)| = modules"):
        T, E = build_terminal(CAP), build_E(CAP)
        for name in MONOIDS:
            M = samples[name]
            ok, detail = monoid_bijection(M)
            assert ok, f"{name}: {detail}"
            ok, detail = module_bijection(M)
            assert ok, f"{name}: {detail}"
            assert len(enumerate_based_multifunctors(T, M, based=False)) == MONOIDS[name], name
            assert len(enumerate_based_multifunctors(E, M)) == MODULES[name], name


def test_criterion_03_lemma_arrow(samples):
    with criterion(3, "arrow lemma isomorphism; B(Z/3) has 3 objects and 9 arrows per side"):
        for name in ("terminal", "E", "I", "Z/2", "BZ/3"):
            w = check_lemma_arrow(samples[name])
            assert (w.left_objects, w.left_arrows) == (w.right_objects, w.right_arrows), name
        w = check_lemma_arrow(samples["BZ/3"])
        assert (w.left_objects, w.right_objects) == (3, 3)
        assert (w.left_arrows, w.right_arrows) == (9, 9), f"arrow counts are {w.left_arrows} and {w.right_arrows}"


def test_criterion_04_gamma_functoriality(J_E, J_Z2):
    with criterion(4, "J(M) respects composition and identities for m,n,p <= 3"):
        for X in (J_E, J_Z2):
            assert check_gamma_functoriality(X, bound=3, arrow_limit=None) == []


def test_criterion_05_segal_certificates(J_Z2, J_sat1, J_BZ3, J_E):
    with criterion(5, "Segal maps certified for n = 2, 3 on permutative inputs and on E"):
        for name, X in (("Z/2", J_Z2), ("sat1", J_sat1), ("BZ/3", J_BZ3)):
            for n in (2, 3):
                cert = segal_certificate(X, n)
                assert cert and cert.verify(), f"{name} level {n}"
        p = J_BZ3.segal_map(2)
        assert is_groupoid(p.source) and is_groupoid(p.target)
        assert len(pi0_category(p.source)) == len(pi0_category(p.target)) == 1
        assert automorphism_group(p.source, 0).name() == automorphism_group(p.target, 0).name() == "Z/3 x Z/3"
        eq = equivalence_certificate(p)
        assert eq.kind == EQUIVALENCE and eq.verify()
        for n in (2, 3):
            cert = segal_certificate(J_E, n)
            assert cert, f"E level {n}: {cert.reason}"


def test_criterion_06_eilenberg_maclane(J_Z2, J_BZ3):
    with criterion(6, "Z/2 gives pi0 Z/2, pi1 0; B(Z/3) gives pi0 0, pi1 Z/3"):
        r = very_special_verdict(J_Z2)
        assert (r.very_special, r.stable_pi0, r.stable_pi1) == (True, "Z/2", "0")
        r = very_special_verdict(J_BZ3)
        assert (r.very_special, r.stable_pi0, r.stable_pi1) == (True, "0", "Z/3")


def test_criterion_07_fibrancy(J_sat1):
    with criterion(7, "saturating monoid is special but not very special"):
        r = very_special_verdict(J_sat1)
        assert r.special is True and r.very_special is False
        assert not r.pi0.monoid.is_group()


def test_criterion_08_path_object(samples):
    with criterion(8, "path object passes all three legs on E, Z/2, B(Z/3)"):
        for name in ("E", "Z/2", "BZ/3"):
            rep = path_object_check(samples[name])
            assert rep.theorem_A.kind == INITIAL and rep.theorem_A.verify(), name
            assert rep.identity_initial, name
            assert rep.legs == {"a": True, "b": True, "c": True}, f"{name}: legs {rep.legs}"


def test_criterion_09_coreflection(E, Z2):
    with criterion(9, "J(modules_of(M)) is levelwise isomorphic to J(M)"):
        for name, M in (("E", E), ("Z/2", Z2)):
            ok, detail = modules_levelwise(M, 3)
            assert ok, f"{name}: {detail}"


def test_criterion_10_gstar():
    with criterion(10, "Gamma -> G* fully faithful; G* composition associative"):
        assert check_i_fully_faithful(3)
        assert check_gstar_category() == []


def test_criterion_11_tensor(J_Z2, J_sat1, J_BZ3, J_E):
    with criterion(11, "binary tensor on Z/2 is addition; descent agrees with pi0"):
        t = extract_binary_tensor(J_Z2, segal_certificate(J_Z2, 2))
        assert t.ok and t.descends
        assert t.table == {(a, b): str((int(a) + int(b)) % 2) for a, b in t.table}
        assert len(t.table) == 4
        terminal = k_theory(build_terminal(CAP), 2)
        compared = 0
        for X in (J_Z2, J_sat1, J_BZ3, J_E, terminal):
            cert = segal_certificate(X, 2)
            t = extract_binary_tensor(X, cert)
            if t.ok and pi0_monoid(X, cert).ok:
                assert t.agrees_with_pi0
                compared += 1
        assert compared >= 3


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_criterion_12_determinism_and_robustness(data_dir, tmp_path, capsys):
    with criterion(12, "byte-identical reports; faults caught; budget exits 2 without output"):
        outputs = []
        for run, jobs in enumerate(("1", "1", "3")):
            target = tmp_path / f"z2-{run}.json"
            code, _, _ = _run(["ktheory", str(data_dir / "z2.json"), "--jobs", jobs, "--out", str(target)], capsys)
            assert code == 0
            outputs.append(target.read_bytes())
        assert len(set(outputs)) == 1

        doc = serialize_multicategory(build_E(3))
        doc["hom"]["0,1|1"].append("fresh")
        target = doc["hom"]["0,1|1"][0]
        victim = next(k for k, v in doc["comp"].items() if v == target and not k.startswith(target))
        doc["comp"][victim] = "fresh"
        broken = tmp_path / "broken.json"
        broken.write_text(json.dumps(doc))
        code, out, _ = _run(["validate", str(broken)], capsys)
        assert code == 1 and "violation:" in out

        report = tmp_path / "budget.json"
        code, out, err = _run(["ktheory", str(data_dir / "bz3.json"), "--budget", "50", "--out", str(report)], capsys)
        assert code == 2 and "budget" in err
        assert out == "" and not report.exists()
