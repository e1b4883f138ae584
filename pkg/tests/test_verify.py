import json

import numpy as np
import pytest

from gf2sums.field import make_field
from gf2sums.ksum import kloosterman_table
from gf2sums.verify import (
    ARGUMENT_ZERO,
    HYPOTHESIS_EXCLUDED,
    TheoremId,
    conjecture_scan,
    conjecture_xi,
    expected_residue,
    family_a_values,
    family_xi_values,
    verify_corrected_theorem,
    verify_cube_root_theorem,
    verify_divisibility_family_a,
    verify_divisibility_family_xi,
)
from oracles import kloosterman_direct

REASONS = {HYPOTHESIS_EXCLUDED, ARGUMENT_ZERO}


def test_expected_residue():
    assert expected_residue(3) == 3
    assert expected_residue(4) == 7
    assert expected_residue(1) == 3


def _check_partition(rep):
    assert rep.cases_checked + rep.cases_skipped_degenerate == rep.cases_total
    assert len(rep.skipped) == rep.cases_skipped_degenerate
    assert all(s.reason in REASONS for s in rep.skipped)
    assert rep.passed == (not rep.violations)


@pytest.mark.parametrize("m", [3, 4])
def test_corrected_theorem_small(m):
    rep = verify_corrected_theorem(make_field(m))
    _check_partition(rep)
    assert rep.passed
    assert rep.cases_total == 4**m
    skipped = {(s.inputs["b"], s.inputs["c"]) for s in rep.skipped}
    assert {("0x0", "0x0"), ("0x0", "0x1")} <= skipped
    assert all("mu2_bruteforce" in s.detail and "mu2_closed" in s.detail for s in rep.skipped)


def test_family_a_m3_anchor():
    f = make_field(3)
    a = int(family_a_values(f, np.array([0b010], dtype=np.uint32))[0])
    assert a == 0b111  # alpha^5
    arg = f.pow(a, 4) ^ f.pow(a, 3)
    assert kloosterman_direct(arg, f.poly) == 3
    rep = verify_divisibility_family_a(f)
    _check_partition(rep)
    assert rep.passed and rep.cases_checked == 6


def test_family_a_m2_checks_nothing():
    rep = verify_divisibility_family_a(make_field(2))
    assert rep.cases_checked == 0 and rep.cases_total == 4 and rep.passed
    assert rep.skip_reasons() == {HYPOTHESIS_EXCLUDED: 2, ARGUMENT_ZERO: 2}


@pytest.mark.parametrize("m", range(2, 11))
def test_families_pass(m):
    f = make_field(m)
    for rep in (verify_divisibility_family_a(f), verify_divisibility_family_xi(f)):
        _check_partition(rep)
        assert rep.passed, rep.violations[:3]


@pytest.mark.parametrize("m", range(1, 11))
def test_xi_identity(m):
    f = make_field(m)
    bs = f.elements()
    a = family_a_values(f, bs)
    lhs = np.uint32(1) ^ a ^ f.mul_vec(a, a)
    assert np.array_equal(lhs, family_xi_values(f, bs))


def test_cube_root_anchors():
    rep = verify_cube_root_theorem(make_field(2))
    assert rep.passed and rep.cases_checked == 2
    f2 = make_field(2)
    for w in f2.cube_roots_of_unity():
        assert f2.trace(w) == 1
        assert kloosterman_direct(w, f2.poly) == -1
    f4 = make_field(4)
    w = f4.cube_roots_of_unity()[0]
    assert f4.trace(w) == 0
    assert kloosterman_direct(w, f4.poly) % 12 == 7
    assert verify_cube_root_theorem(f4).passed
    rep = verify_cube_root_theorem(make_field(3))
    assert rep.cases_total == rep.cases_checked == 0
    assert rep.passed and "vacuous" in rep.notes[0]


@pytest.mark.parametrize("m", range(2, 17, 2))
def test_cube_roots_share_k(m):
    f = make_field(m)
    t = kloosterman_table(f)
    w0, w1 = f.cube_roots_of_unity()
    assert f.square(w0) == w1
    assert t[w0] == t[w1]


def test_conjecture_xi_conventions():
    f = make_field(6)
    bs = f.elements()
    a = family_a_values(f, bs)
    assert np.array_equal(conjecture_xi(f, a, 1), family_xi_values(f, bs))
    assert np.array_equal(conjecture_xi(f, a, 0), np.uint32(1) ^ a)
    # power2: n = 0 gives a + a = 0, n = 1 gives a^2
    assert np.all(conjecture_xi(f, a, 0, "power2") == 0)
    assert np.array_equal(conjecture_xi(f, a, 1, "power2"), f.mul_vec(a, a))
    n3 = np.uint32(1) ^ f.mul_vec(a, a)
    a4 = f.mul_vec(f.mul_vec(a, a), f.mul_vec(a, a))
    n3 ^= a4 ^ f.mul_vec(a4, f.mul_vec(a, a)) ^ a
    assert np.array_equal(conjecture_xi(f, a, 3), n3)
    with pytest.raises(ValueError):
        conjecture_xi(f, a, 1, "odd")


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_conjecture_n1_matches_family_xi(m):
    f = make_field(m)
    scan = conjecture_scan(f, 1)
    fam = verify_divisibility_family_xi(f)
    at_n1 = sorted(v.inputs["b"] for v in scan.violations if v.inputs["n"] == "0x1")
    assert at_n1 == sorted(v.inputs["b"] for v in fam.violations)
    checked_n1 = scan.cases_checked - conjecture_scan(f, 0).cases_checked
    assert checked_n1 == fam.cases_checked


def test_conjecture_counterexample_is_real():
    f = make_field(4)
    rep = conjecture_scan(f, 3)
    assert not rep.passed
    v = rep.violations[0]
    assert v.inputs == {"b": "0x8", "n": "0x3", "xi": "0xa"}
    xi = int(v.inputs["xi"], 16)
    arg = f.pow(xi, 4) ^ f.pow(xi, 3)
    assert kloosterman_direct(arg, f.poly) % 12 == 11 == v.observed


def test_conjecture_counterexamples_representation_independent():
    a = conjecture_scan(make_field(8, 0x11B), 8)
    b = conjecture_scan(make_field(8, 0x11D), 8)
    assert len(a.violations) == len(b.violations) > 0


def test_conjecture_power2_reading_clean():
    for m in range(2, 11):
        assert conjecture_scan(make_field(m), 8, exponent="power2").passed


def test_conjecture_odd_m_clean():
    for m in (3, 5, 7, 9):
        assert conjecture_scan(make_field(m), 8).passed


def test_violations_sorted():
    rep = conjecture_scan(make_field(6), 8)
    keys = [v.sort_key() for v in rep.violations]
    assert keys == sorted(keys)


def test_hook_forces_violations():
    f = make_field(5)
    rep = verify_divisibility_family_a(f, expected_hook=lambda m: 7)
    assert not rep.passed and len(rep.violations) == rep.cases_checked
    rep = verify_cube_root_theorem(make_field(4), expected_hook=lambda tr: 0)
    assert len(rep.violations) == 2


def test_report_deterministic():
    f = make_field(6)
    for fn in (verify_divisibility_family_a, verify_divisibility_family_xi, verify_cube_root_theorem):
        assert fn(f).to_text(include_elapsed=False) == fn(f).to_text(include_elapsed=False)
    assert (
        conjecture_scan(f, 4).to_text(include_elapsed=False)
        == conjecture_scan(f, 4).to_text(include_elapsed=False)
    )


def test_report_serialization_fields():
    rep = verify_corrected_theorem(make_field(3))
    doc = json.loads(rep.to_text())
    for key in ("theorem_id", "m", "poly", "cases_total", "cases_checked",
                "cases_skipped_degenerate", "violations", "elapsed"):
        assert key in doc
    assert doc["theorem_id"] == TheoremId.CORRECTED_THEOREM.value
    assert doc["poly"] == "0xb"
