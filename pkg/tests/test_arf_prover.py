import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from rauzy.acceptance import random_irreducible
from rauzy.arf_prover import (IdentitySpec, MarkedPermutation, ProverError, Term,
                              _finite_sum, _twist_vector, _vector, brute_force_identity,
                              check_identity, decomposition_sum, dump_identity,
                              enumerate_identities, finite_arf, function_table, instantiate,
                              load_fixtures, load_identity, q_matrix, solve_coefficients,
                              term_function)
from rauzy.invariants import arf
from rauzy.perm import Permutation

FIXTURES = load_fixtures()


@st.composite
def marked(draw, max_k=2, max_l=2, max_edges=4, twist=True):
    k = draw(st.integers(0, max_k))
    l = draw(st.integers(0, max_l))
    ends = draw(st.lists(st.tuples(st.integers(0, k + 1), st.integers(0, l + 1)), max_size=max_edges))
    bottom_rank, top_rank = {}, {}
    order_b = draw(st.permutations(range(len(ends))))
    order_t = draw(st.permutations(range(len(ends))))
    xs, ys = [0] * len(ends), [0] * len(ends)
    for e in order_b:
        bottom_rank[ends[e][0]] = xs[e] = bottom_rank.get(ends[e][0], 0) + 1
    for e in order_t:
        top_rank[ends[e][1]] = ys[e] = top_rank.get(ends[e][1], 0) + 1
    edges = tuple((i, x, j, y) for (i, j), x, y in zip(ends, xs, ys))
    pm = tuple(draw(st.permutations(range(1, k + 2)))) if twist else ()
    pp = tuple(draw(st.permutations(range(1, l + 2)))) if twist else ()
    return MarkedPermutation(k, l, edges, pm, pp)


@st.composite
def host_and_slots(draw, m):
    n = draw(st.integers(max(m.k, m.l, 1) + 1, 6))
    host = Permutation(tuple(draw(st.permutations(range(1, n + 1)))))
    bs = sorted(draw(st.lists(st.integers(1, n - 1), min_size=m.k, max_size=m.k, unique=True)))
    ts = sorted(draw(st.lists(st.integers(1, n - 1), min_size=m.l, max_size=m.l, unique=True)))
    return host, bs, ts


def _slow_finite_arf(m, w, flavor):
    """Straight from the definition: one term per edge subset u."""
    es = m.edges
    total = 0
    for mask in range(1 << len(es)):
        u = [a for a in range(len(es)) if mask >> a & 1]
        chi = sum(1 for a, b in combinations(u, 2)
                  if (es[a][:2] < es[b][:2]) == (es[a][2:] < es[b][2:]))
        lin = 0
        for a in u:
            i, _, j, _ = es[a]
            for c in range(m.cells):
                p, q = divmod(c, m.l + 1)
                lin += int(w[c]) * ((i < p + 1) == (j < q + 1))
        sgn = chi + lin + (len(u) if flavor == "Abar" else 0)
        total += (-1) ** sgn
    return total


def test_worked_q_row():
    m = MarkedPermutation(1, 4, ((0, 1, 0, 1), (0, 2, 3, 1), (0, 3, 1, 1), (1, 1, 4, 1), (1, 2, 2, 1)))
    row = q_matrix(m)[m.edges.index((1, 2, 2, 1))]
    assert row.tolist() == [1, 1, 0, 0, 0, 0, 0, 1, 1, 1]


@given(marked())
def test_q_entries_follow_the_crossing_rule(m):
    q = q_matrix(m)
    for r, (ie, _, je, _) in enumerate(m.edges):
        for c in range(m.cells):
            i, j = divmod(c, m.l + 1)
            assert q[r, c] == ((ie < i + 1) == (je < j + 1))


@given(marked(twist=False), st.data())
def test_finite_sum_matches_definition(m, data):
    v = data.draw(st.integers(0, (1 << m.cells) - 1))
    w = _vector(v, m.cells)
    for flavor in ("A", "Abar"):
        want = _slow_finite_arf(m, w, flavor)
        assert finite_arf(m, v, flavor) == want
        assert _finite_sum(m, _twist_vector(m, w), flavor) == want


@given(marked(), st.data())
def test_decomposition_matches_direct_arf(m, data):
    host, bs, ts = data.draw(host_and_slots(m))
    a, ab = arf(instantiate(m, host, bs, ts))
    assert decomposition_sum(m, host, bs, ts, "A") == a
    assert decomposition_sum(m, host, bs, ts, "Abar") == ab


def test_marked_permutation_validation():
    with pytest.raises(ProverError):
        MarkedPermutation(1, 1, ((1, 1, 1, 1), (1, 1, 1, 2)))  # repeated bottom rank
    with pytest.raises(ProverError):
        MarkedPermutation(1, 1, ((3, 1, 1, 1),))
    with pytest.raises(ProverError):
        MarkedPermutation(1, 1, (), (1, 1))
    m = MarkedPermutation(1, 1, ((1, 1, 0, 1),), (2, 1), (1, 2))
    assert m.twisted and m.cells == 4


def test_flavor_names():
    m = MarkedPermutation(0, 0, ((0, 1, 1, 1),))
    assert finite_arf(m, 0, "Ā") == finite_arf(m, 0, "Abar")
    with pytest.raises(ProverError):
        finite_arf(m, 0, "B")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_is_proved_and_survives_brute_force(name):
    spec = FIXTURES[name]
    assert check_identity(spec).holds
    rng = random.Random(name)
    for _ in range(15):
        n = rng.randint(max(spec.k, spec.l) + 1, 6)
        host = random_irreducible(n, rng) if n > 1 else Permutation((1,))
        bs = sorted(rng.sample(range(1, n), spec.k))
        ts = sorted(rng.sample(range(1, n), spec.l))
        assert brute_force_identity(spec, host, bs, ts) == 0


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_perturbed_fixture_is_refuted_with_a_witness(name):
    res = check_identity(FIXTURES[name].perturbed())
    assert not res.holds and res.witness is not None and res.residual != 0


def test_opposite_sign_coefficients_are_forced():
    spec = FIXTURES["opposite_sign_single"]
    basis = solve_coefficients([t.marked for t in spec.terms])
    assert basis == [(Fraction(1), Fraction(1), Fraction(-2))]


def test_triple_coefficient_off_by_one_fails():
    spec = FIXTURES["opposite_sign_triple"]
    assert [t.coef for t in spec.terms] == [1, 1, -3, -3, 4]
    terms = list(spec.terms)
    terms[-1] = Term(Fraction(5), terms[-1].marked, terms[-1].flavor)
    res = check_identity(IdentitySpec(spec.k, spec.l, tuple(terms), spec.flavor))
    assert not res.holds and res.witness is not None


def test_swapped_blocks_recovered_per_component():
    for name in ("swapped_blocks_abar", "swapped_blocks_a"):
        spec = FIXTURES[name]
        basis = solve_coefficients([t.marked for t in spec.terms], spec.flavors())
        assert basis == [tuple(t.coef for t in spec.terms)]


def test_literal_sum_rejects_the_swapped_block_identity():
    spec = FIXTURES["swapped_blocks_abar"]
    assert check_identity(spec).holds
    assert not check_identity(spec, twist=False).holds


def test_corner_opposite_sign_relation():
    corner = lambda e: MarkedPermutation(0, 0, e)
    big = corner(((0, 1, 0, 1), (0, 2, 1, 1), (1, 1, 1, 2)))
    mid = corner(((0, 1, 1, 1), (1, 1, 1, 2), (1, 2, 0, 1)))
    small = corner(((0, 1, 1, 1), (1, 1, 1, 2)))
    spec = IdentitySpec(0, 0, (Term(Fraction(1), big), Term(Fraction(1), mid), Term(Fraction(-2), small)))
    assert check_identity(spec).holds
    # on the corners the middle term vanishes on its own
    assert not function_table(mid).any()
    found = enumerate_identities(2, 3, 0, 0)
    pairs = {frozenset((t.marked, t.coef) for t in s.terms) for s in found}
    assert frozenset({(small, Fraction(1)), (big, Fraction(-1, 2))}) in pairs


def test_enumeration_is_self_consistent():
    found = enumerate_identities(2, 2, 0, 0)
    assert len(found) == 39
    for s in found:
        assert check_identity(s).holds
        assert all(t.coef != 0 for t in s.terms)


def test_single_term_identities_are_vanishing_terms():
    for s in enumerate_identities(1, 3, 0, 0):
        assert len(s.terms) == 1
        assert not function_table(s.terms[0].marked).any()


def test_enumeration_refuses_huge_bounds():
    with pytest.raises(ProverError):
        enumerate_identities(9, 9, 3, 3)


@given(st.lists(marked(max_k=1, max_l=1, max_edges=3, twist=False), min_size=2, max_size=4,
                unique_by=lambda m: m.edges), st.data())
def test_solved_coefficients_are_identities(ms, data):
    k, l = ms[0].k, ms[0].l
    ms = [m for m in ms if (m.k, m.l) == (k, l)]
    for vec in solve_coefficients(ms):
        spec = IdentitySpec(k, l, tuple(Term(c, m) for c, m in zip(vec, ms)))
        assert check_identity(spec).holds
        host, bs, ts = data.draw(host_and_slots(ms[0]))
        assert brute_force_identity(spec, host, bs, ts) == 0


def test_json_round_trip(tmp_path):
    spec = FIXTURES["swapped_blocks_sum"]
    again = load_identity(dump_identity(spec))
    assert again.to_json() == spec.to_json()
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"x": spec.to_json()}))
    assert list(load_fixtures(path)) == ["x"]


def test_term_function_untwisted_abar_sign():
    m = MarkedPermutation(1, 0, ((1, 1, 1, 1),))
    for v in range(1 << m.cells):
        w = _vector(v, m.cells)
        assert term_function(m, v, "Abar") == finite_arf(m, v, "Abar") * (-1) ** int(w.sum())
        assert term_function(m, v, "A") == finite_arf(m, v, "A")
