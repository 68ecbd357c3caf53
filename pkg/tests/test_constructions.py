import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from rauzy.acceptance import random_irreducible
from rauzy.constructions import (BASE_GADGETS, ConstructionError, NoI2XError, X213_PRINTED,
                                 attach_Cp, attach_Cp_pair, attach_Cpj, base_X, build_i2x,
                                 build_i2x_traced, cross_block, cross_delta, exceptional_id,
                                 exceptional_idp, exceptional_invariant, find_base_gadget,
                                 insert_edges, opposite_sign_pair, predict_double_edge,
                                 predict_one_edge, substitute_block, valid_invariants,
                                 validate_request)
from rauzy.dynamics import is_i2x
from rauzy.invariants import cycle_data, cycle_invariant, invariant_triple
from rauzy.labelling import consecutive_bottom
from rauzy.perm import Permutation, is_irreducible

from conftest import irreducibles


def test_insert_edges_shape():
    q = insert_edges("2 1", 1, 1, 1)
    assert q == Permutation.parse("3 1 2")
    assert insert_edges("2 1", 0, 1, 1) == Permutation.parse("2 1")
    with pytest.raises(ConstructionError):
        insert_edges("2 1", 1, 3, 1)


@given(irreducibles(2, 8), st.data())
def test_edge_predictors_match_direct_computation(p, data):
    alpha = data.draw(st.integers(1, p.n))
    beta = data.draw(st.integers(1, p.n))
    cd = cycle_data(p)
    for count, predict in ((1, predict_one_edge), (2, predict_double_edge)):
        pred = predict(cd, alpha, beta)
        q = insert_edges(p, count, alpha, beta)
        if pred.covered and is_irreducible(q):
            assert cycle_invariant(q) == pred.invariant()


def test_opposite_sign_pair_worked_host():
    p = Permutation.parse("4 5 1 2 6 3")
    for i in (1, 2, 3):
        x, y = opposite_sign_pair(p, 2, 1, consecutive_bottom(p, 1), i)
        tx, ty = invariant_triple(x), invariant_triple(y)
        assert (tx.lam, tx.rank) == (ty.lam, ty.rank)
        assert tx.sign == -ty.sign != 0


def test_opposite_sign_pair_needs_two_even_components():
    with pytest.raises(ConstructionError):
        opposite_sign_pair("1 3 5 2 6 4", 1, 1, 2, 1)
    with pytest.raises(ConstructionError):
        opposite_sign_pair("4 5 1 2 6 3", 2, 1, 1, 4)


def test_base_gadget_search_reproduces_frozen_blocks():
    for param, block in BASE_GADGETS.items():
        assert find_base_gadget(cross_delta(param)) == block


@pytest.mark.parametrize("param", range(0, 13))
def test_cross_gadget_adds_the_tabled_cycles(param):
    rng = random.Random(param)
    for _ in range(25):
        host = random_irreducible(rng.randint(2, 7), rng)
        edge = rng.randint(1, host.n)
        q = attach_Cp(host, edge, param, check=False)
        lam0, r0 = cycle_invariant(host)
        lam1, r1 = cycle_invariant(q)
        assert r1 == r0
        assert Counter(lam1) == Counter(lam0) + Counter(cross_delta(param))


def test_cross_delta_table():
    assert [cross_delta(p) for p in range(8)] == [
        (1,), (1, 1), (3,), (2, 2), (5,), (3, 3), (7,), (4, 4)]
    with pytest.raises(ConstructionError):
        cross_delta(-1)


@pytest.mark.parametrize("param,j", [(3, 1), (3, 2), (3, 3), (7, 1), (7, 3)])
def test_cross_gadget_with_extra_edges(param, j):
    q = attach_Cpj("4 5 1 2 6 3", 1, param, j)
    assert Counter(cycle_invariant(q)[0]) - Counter((2, 2)) == Counter(cross_delta(param + j))


@pytest.mark.parametrize("p1,p2", [(2, 0), (4, 0), (4, 2), (6, 2)])
def test_pair_attachment_adds_two_even_cycles(p1, p2):
    q = attach_Cp_pair("1 3 5 2 6 4", 2, p1, p2)
    assert Counter(cycle_invariant(q)[0]) - Counter(cycle_invariant("1 3 5 2 6 4")[0]) \
        == Counter((p1 + 2, p2 + 2))
    with pytest.raises(ConstructionError):
        attach_Cp_pair("2 1", 1, 2, 2)


def test_substitute_block_keeps_the_rest():
    assert substitute_block("2 1", 1, (2, 1)) == Permutation.parse("3 2 1")
    assert cross_block(2) == insert_edges(cross_block(0), 2, 2, 1).images


def test_base_family_shape():
    assert base_X(1, 2) == Permutation.parse("1 2 4 5 3")
    assert invariant_triple(X213_PRINTED).key() == ((2, 2, 2), 2, 0)


@pytest.mark.parametrize("n", range(3, 13))
def test_exceptional_classes_closed_form(n):
    assert invariant_triple(exceptional_id(n)).key() == exceptional_invariant("Id", n).key()
    assert invariant_triple(exceptional_idp(n)).key() == exceptional_invariant("Id'", n).key()


def test_valid_invariants_respect_the_parity_rule():
    for n in range(3, 12):
        for t in valid_invariants(n):
            assert t.rank + sum(t.lam) == n - 1 and 1 not in t.lam
            validate_request(t.lam, t.rank, t.sign)


@pytest.mark.parametrize("lam,r,s", [((2,), 1, 1), ((), 2, 1), ((3,), 1, 0), ((1, 3), 1, 1), ((), 0, 1)])
def test_invalid_requests_are_refused(lam, r, s):
    with pytest.raises(ConstructionError):
        validate_request(lam, r, s)


@pytest.mark.parametrize("lam,r,s", [((), 9, 1), ((), 9, -1), ((3, 3), 3, 1), ((4, 2), 1, 0),
                                      ((5,), 3, -1), ((2, 2), 5, 0), ((3,), 7, 1)])
def test_builder_postconditions(lam, r, s):
    trace = build_i2x_traced(lam, r, s)
    q = trace.perm
    assert invariant_triple(q).key() == (lam, r, s)
    assert is_i2x(q)
    assert q not in (exceptional_id(q.n), exceptional_idp(q.n))
    assert trace.route in ("construction", "sign-search", "search", "seeded-base", "seed-grow")


@pytest.mark.parametrize("lam,r,s", [((2,), 2, 0), ((2, 2), 1, 0), ((), 5, 1), ((3,), 3, 1)])
def test_builder_reports_missing_classes(lam, r, s):
    with pytest.raises(NoI2XError):
        build_i2x(lam, r, s)
