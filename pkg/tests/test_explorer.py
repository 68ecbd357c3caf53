from itertools import permutations

import pytest

from rauzy.dynamics import orbit
from rauzy.explorer import (KNOWN_CENSUS, ExplorerError, census_row, enumerate_classes,
                            verify_arf_theorem, verify_classification)
from rauzy.invariants import invariant_triple
from rauzy.perm import Permutation, is_irreducible

# classes and irreducible permutations per size
COUNTS = {3: (1, 3), 4: (2, 13), 5: (4, 71), 6: (7, 461), 7: (13, 3447), 8: (21, 29093)}


@pytest.mark.parametrize("n", range(3, 9))
def test_class_and_irreducible_counts(n):
    rep = enumerate_classes(n)
    assert (len(rep.classes), rep.irreducible_count) == COUNTS[n]
    assert sum(c.size for c in rep.classes) == rep.irreducible_count


@pytest.mark.parametrize("n", range(3, 7))
def test_classes_match_plain_orbit_search(n):
    seen, sizes = set(), []
    for q in permutations(range(1, n + 1)):
        if q not in seen and is_irreducible(Permutation(q)):
            o = orbit(Permutation(q))
            seen |= o
            sizes.append(len(o))
    rep = enumerate_classes(n)
    assert sorted(sizes) == sorted(c.size for c in rep.classes)
    for c in rep.classes:
        assert invariant_triple(c.rep).key() == c.invariant.key()


@pytest.mark.parametrize("n", sorted(KNOWN_CENSUS))
def test_census_matches_table(n):
    rep = enumerate_classes(n)
    assert rep.ok, [v.details for v in rep.verdicts if not v.ok]
    got = census_row(rep)
    assert [sorted(x) for x in got] == [sorted(x) for x in KNOWN_CENSUS[n]]


def test_exceptional_tags():
    rep = enumerate_classes(7)
    tags = {c.tag: c.invariant.short() for c in rep.classes if c.tag}
    assert tags == {"Id": "3|3+", "Id'": "5|1+"}


def test_classification_at_eight():
    verdicts = verify_classification(8)
    assert all(v.ok for v in verdicts)
    carved = next(v for v in verdicts if v.name.startswith("carved out"))
    assert any(line.startswith("Id ") for line in carved.details)


def test_classification_at_nine_follows_the_rule():
    rep = enumerate_classes(9)
    assert rep.ok
    assert not any("table" in v.name for v in rep.verdicts)


@pytest.mark.parametrize("n", range(2, 10))
def test_arf_dichotomy_exhaustive(n):
    assert verify_arf_theorem(n).ok


def test_size_limits():
    with pytest.raises(ExplorerError):
        enumerate_classes(10)
    with pytest.raises(ExplorerError):
        enumerate_classes(1)
    with pytest.raises(ExplorerError):
        verify_arf_theorem(10)


def test_report_text_and_json():
    rep = enumerate_classes(6)
    text = rep.text()
    assert "census 6 | ∅|5+ | 22|1 | ∅|5-" in text
    assert text.count("PASS") == len(rep.verdicts)
    data = rep.to_json()
    assert data["irreducible"] == 461 and len(data["classes"]) == 7
