from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from rauzy.labelling import (ConsistentLabelling, Label, LabellingError, apply_labelled_word,
                             canonical_labelling, consecutive_bottom, consecutive_top,
                             count_labellings, enumerate_labellings, exchange_op, labelled_L,
                             labelled_L_inv, labelled_R, labelled_R_inv, shift_op,
                             top_from_bottom, verify_all_properties, verify_consistent)
from rauzy.perm import Permutation, apply_word, is_irreducible

from conftest import irreducibles

words = st.text(alphabet="LRlr", min_size=0, max_size=12)


@pytest.mark.parametrize("text", ["brk[0]", "trk[3]", "b[1,2,1]", "t[0,3,2]"])
def test_label_text_round_trip(text):
    assert str(Label.parse(text)) == text


def test_bad_label_text():
    with pytest.raises(ValueError):
        Label.parse("x[1]")


@given(irreducibles())
def test_canonical_labelling_is_consistent(p):
    lab = canonical_labelling(p)
    assert verify_consistent(p, lab)
    assert verify_all_properties(p, lab)
    assert top_from_bottom(p, lab.pi_b) == lab.pi_t


@given(irreducibles(), words)
def test_labelled_moves_keep_consistency(p, w):
    q, lab = apply_labelled_word(p, canonical_labelling(p), w)
    assert q == apply_word(p, w)
    assert verify_consistent(q, lab) and verify_all_properties(q, lab)


@given(irreducibles())
def test_labelled_inverses(p):
    lab = canonical_labelling(p)
    for fwd, back in ((labelled_L, labelled_L_inv), (labelled_R, labelled_R_inv)):
        q, l2 = fwd(p, lab)
        assert back(q, l2) == (p, lab)


@given(irreducibles())
def test_L_keeps_bottom_labels_and_R_keeps_top_labels(p):
    lab = canonical_labelling(p)
    assert labelled_L(p, lab)[1].pi_b == lab.pi_b
    assert labelled_R(p, lab)[1].pi_t == lab.pi_t


def test_two_consistency_checks_agree_exhaustively():
    for n in range(2, 6):
        for q in permutations(range(1, n + 1)):
            p = Permutation(q)
            if not is_irreducible(p):
                continue
            for lab in enumerate_labellings(p):
                assert verify_consistent(p, lab) == verify_all_properties(p, lab) is True
            # a broken labelling: swap two bottom labels
            lab = canonical_labelling(p)
            bad = ConsistentLabelling((lab.pi_b[1], lab.pi_b[0]) + lab.pi_b[2:], lab.pi_t)
            assert verify_consistent(p, bad) == verify_all_properties(p, bad)


def test_labelling_count_formula():
    # 22|1 has two cycles of length 2: 2! * 2^2 labellings
    p = Permutation.parse("4 5 1 2 6 3")
    assert count_labellings(p) == 8
    labs = enumerate_labellings(p)
    assert len(labs) == 8 and len(set(labs)) == 8


def test_shift_and_exchange():
    p = Permutation.parse("4 5 1 2 6 3")
    lab = canonical_labelling(p)
    assert shift_op(shift_op(lab, 2, 1, 1), 2, 1, 1) == lab
    assert exchange_op(exchange_op(lab, 2, 1, 2), 2, 1, 2) == lab
    assert verify_consistent(p, exchange_op(lab, 2, 1, 2))
    with pytest.raises(LabellingError):
        shift_op(lab, 3, 1, 1)


def test_inconsistent_labelling_is_refused():
    p = Permutation.parse("4 5 1 2 6 3")
    lab = canonical_labelling(p)
    bad = ConsistentLabelling(lab.pi_b[::-1], lab.pi_t)
    with pytest.raises(LabellingError):
        labelled_L(p, bad)


@given(irreducibles())
def test_consecutive_arcs_follow_the_components(p):
    for beta in range(1, p.n + 1):
        nxt = consecutive_bottom(p, beta)
        assert (nxt is None) == (beta == p.n)
    for alpha in range(1, p.n + 1):
        nxt = consecutive_top(p, alpha)
        assert nxt is None or 1 <= nxt <= p.n
