from itertools import permutations

import pytest
from hypothesis import given

from rauzy.invariants import (ArfMismatch, InvariantTriple, abar, arf, chi, chi_restricted,
                              cycle_data, cycle_invariant, even_part_count, expected_abar,
                              invariant_triple, perm_type, sign)
from rauzy.perm import Permutation, ReducibleError, apply_L, apply_R, apply_word

from conftest import irreducibles


def test_worked_cycle_invariant():
    cd = cycle_data("4 5 1 2 6 3")
    assert (cd.lam, cd.rank) == ((2, 2), 1)
    assert invariant_triple("4 5 1 2 6 3").short() == "22|1"


def test_worked_subset_term():
    s, subset = [2, 5, 1, 4, 7, 8, 3, 9, 6], [1, 2, 6, 8, 9]
    c = chi_restricted(s, subset)
    assert c == 8
    assert (-1) ** (c + len(subset)) == -1


def test_identity_has_only_a_rank_path():
    cd = cycle_data("1 2 3 4")
    assert cd.lam == () and cd.rank == 3
    assert arf("1 2 3 4") == (-4, -4)


def test_reducible_has_no_cycle_data():
    with pytest.raises(ReducibleError):
        cycle_data("4 3 2 1")


@given(irreducibles())
def test_dimension_formula(p):
    lam, r = cycle_invariant(p)
    assert r + sum(lam) == p.n - 1
    assert r >= 1 or p.n == 1


@given(irreducibles())
def test_components_partition_the_arcs(p):
    cd = cycle_data(p)
    tops = list(cd.rank_path.tops) + [a for c in cd.cycles for a in c.tops]
    bottoms = list(cd.rank_path.bottoms) + [b for c in cd.cycles for b in c.bottoms]
    assert sorted(tops) == list(range(1, p.n + 1))
    assert sorted(bottoms) == list(range(1, p.n + 1))


@given(irreducibles(2, 10))
def test_arf_dichotomy(p):
    lam, r = cycle_invariant(p)
    assert even_part_count(lam, r) % 2 == 0
    assert expected_abar(lam, r, p.n).admits(abar(p))


@given(irreducibles(2, 9))
def test_invariants_survive_moves(p):
    t = invariant_triple(p)
    for q in (apply_L(p), apply_R(p), apply_word(p, "LRRL")):
        u = invariant_triple(q)
        assert u.key() == t.key()


@given(irreducibles(2, 9))
def test_full_chi_counts_noncrossing_pairs(p):
    assert chi(p) == chi_restricted(p, range(1, p.n + 1))


def test_sign_is_zero_exactly_with_even_parts():
    for q in permutations(range(1, 7)):
        p = Permutation(q)
        try:
            lam, r = cycle_invariant(p)
        except ReducibleError:
            continue
        assert (sign(p) == 0) == (even_part_count(lam, r) > 0)


def test_expected_abar_rejects_impossible_invariants():
    with pytest.raises(ValueError):
        expected_abar((2,), 1, 5)  # dimension formula
    with pytest.raises(ValueError):
        expected_abar((2,), 1, 4)  # odd number of even entries
    assert expected_abar((3,), 1, 5).magnitude == 2 ** 3
    assert expected_abar((2, 2), 1, 6).admits(0)


def test_sign_reports_mismatch_beyond_theory():
    # a reducible permutation has no expected value
    with pytest.raises((ArfMismatch, ReducibleError, ValueError)):
        sign("2 3 1")


def test_short_form():
    assert InvariantTriple((), 5, 1).short() == "∅|5+"
    assert InvariantTriple((3, 3), 1, -1).short() == "33|1-"
    assert InvariantTriple((11, 2), 1, 0).short() == "11,2|1"


def test_type_of_worked_example():
    t = perm_type("4 5 1 2 6 3")
    assert t.kind in ("X", "H") and str(t) == "X(1,2)"
