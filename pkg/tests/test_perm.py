import pytest
from hypothesis import given

from rauzy.perm import (Permutation, ReducibleError, apply_L, apply_L_inv, apply_L_via_gamma,
                        apply_R, apply_R_inv, apply_R_via_gamma, apply_word, as_perm, compose,
                        identity, is_irreducible, parse_word, reflect, rotate)

from conftest import irreducibles, perms


def test_parse_and_text_round_trip():
    p = Permutation.parse("4, 5 1 2 6 3")
    assert p.images == (4, 5, 1, 2, 6, 3)
    assert Permutation.parse(p.to_text()) == p
    assert p(1) == 4 and p.n == 6


@pytest.mark.parametrize("bad", [(1, 1), (0, 1), (2, 3)])
def test_rejects_non_bijections(bad):
    with pytest.raises(ValueError):
        Permutation(bad)


def test_small_moves():
    p = Permutation.parse("1 2 3")
    assert apply_L(p) == Permutation.parse("1 3 2")
    assert apply_R(p) == Permutation.parse("2 1 3")


def test_reducible_input_is_refused():
    with pytest.raises(ReducibleError):
        apply_L(Permutation.parse("3 4 1 2"))
    with pytest.raises(ReducibleError):
        apply_word("2 3 1", "R")


def test_irreducibility_counts():
    from itertools import permutations
    counts = [sum(is_irreducible(q) for q in permutations(range(1, n + 1))) for n in range(1, 8)]
    # indecomposable permutations, counted independently by the standard recursion
    f = [1]
    for n in range(1, 8):
        f.append(f[-1] * n)
    ind = [0] * 8
    for n in range(1, 8):
        ind[n] = f[n] - sum(f[k] * ind[n - k] for k in range(1, n))
    assert counts == ind[1:]


@given(irreducibles())
def test_inverse_moves_undo_moves(p):
    assert apply_L_inv(apply_L(p)) == p
    assert apply_L(apply_L_inv(p)) == p
    assert apply_R_inv(apply_R(p)) == p
    assert apply_R(apply_R_inv(p)) == p


@given(irreducibles())
def test_moves_keep_irreducibility(p):
    assert is_irreducible(apply_L(p)) and is_irreducible(apply_R(p))


@given(irreducibles())
def test_piecewise_rule_matches_cycle_composition(p):
    assert apply_L(p) == apply_L_via_gamma(p)
    assert apply_R(p) == apply_R_via_gamma(p)


@given(irreducibles())
def test_half_turn_conjugates_L_to_R(p):
    assert rotate(rotate(p)) == p
    assert rotate(apply_L(rotate(p))) == apply_R(p)


def test_left_right_reflection_is_not_the_conjugating_symmetry():
    # the mirror c.sigma.c does not turn L into R; only the half-turn does
    fails = 0
    from itertools import permutations
    for q in permutations(range(1, 5)):
        p = Permutation(q)
        if is_irreducible(p) and is_irreducible(reflect(p)):
            if reflect(apply_L(reflect(p))) != apply_R(p):
                fails += 1
    assert fails > 0


@given(perms())
def test_compose_with_inverse_is_identity(p):
    assert compose(p, p.inverse()) == identity(p.n)


def test_word_parsing():
    assert parse_word("LRl R^-1") == ("L", "R", "L'", "R'")
    assert parse_word("L' R-1 r⁻¹") == ("L'", "R'", "R")
    with pytest.raises(ValueError):
        parse_word("LX")


@given(irreducibles(), )
def test_word_then_inverse_word_returns(p):
    w = "LLRLRR"
    back = " ".join(x + "'" for x in reversed(w))
    assert apply_word(apply_word(p, w), back) == p


def test_as_perm_accepts_text_and_sequences():
    assert as_perm("2 1") == as_perm([2, 1]) == Permutation((2, 1))
