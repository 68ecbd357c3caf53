"""Cycle invariant, arc structure, X/H type and the Arf sums.

Arc positions: top arc 1 is the extra arc left of top vertex 1, top arc
a >= 2 sits between top vertices a-1 and a. Bottom arc b <= n-1 sits between
bottom vertices b and b+1, bottom arc n is the extra arc on the right.
Lengths count top arcs; the rank path owns the extra top arc, so its length
is one less than the number of top arcs it visits.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .perm import PermLike, ReducibleError, as_perm, is_irreducible

__all__ = [
    "Component", "CycleData", "PermType", "InvariantTriple",
    "cycle_data", "cycle_invariant", "perm_type", "chi", "chi_restricted",
    "arf", "abar", "sign", "invariant_triple", "expected_abar", "ExpectedAbar",
    "even_part_count", "ArfMismatch", "batch_invariants",
]


class ArfMismatch(ArithmeticError):
    """Abar is nonzero but not of the magnitude forced by the cycle invariant."""


@dataclass(frozen=True)
class Component:
    """A cycle or the rank path, as top and bottom arcs in walk order.

    bottoms[k] follows tops[k]; tops[k+1] follows bottoms[k].
    """
    tops: tuple[int, ...]
    bottoms: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.tops)


@dataclass(frozen=True)
class PermType:
    kind: str  # "X" or "H"
    a: int
    b: int

    def to_json(self):
        return {self.kind: [self.a, self.b]}

    def __str__(self):
        return f"{self.kind}({self.a},{self.b})"


@dataclass(frozen=True)
class CycleData:
    n: int
    cycles: tuple[Component, ...]
    rank_path: Component
    mark_owner: Optional[int]  # None: rank path; otherwise index into cycles
    mark_step: int  # top arcs visited by the mark owner before the mark
    perm_type: PermType

    @property
    def rank(self) -> int:
        return self.rank_path.length - 1

    @property
    def lam(self) -> tuple[int, ...]:
        return tuple(sorted((c.length for c in self.cycles), reverse=True))

    @property
    def principal(self) -> Optional[Component]:
        if self.mark_owner is None:
            return None
        return self.cycles[self.mark_owner]

    def top_owner(self) -> dict[int, Optional[int]]:
        """top arc -> cycle index (None for the rank path)."""
        out = {a: None for a in self.rank_path.tops}
        for k, c in enumerate(self.cycles):
            out.update({a: k for a in c.tops})
        return out

    def bottom_owner(self) -> dict[int, Optional[int]]:
        out = {b: None for b in self.rank_path.bottoms}
        for k, c in enumerate(self.cycles):
            out.update({b: k for b in c.bottoms})
        return out


def cycle_data(p: PermLike) -> CycleData:
    p = as_perm(p)
    if not is_irreducible(p):
        raise ReducibleError(f"reducible permutation {p.to_text()}")
    n = p.n
    inv = p.inverse().images
    cid, order, lengths, mark, mark_pos = _kernels.arc_walk(p.images)
    groups: dict[int, list[int]] = {}
    for a in range(1, n + 1):
        groups.setdefault(int(cid[a]), []).append(a)
    comps = []
    for c in range(len(lengths)):
        tops = tuple(sorted(groups[c], key=lambda a: order[a]))
        comps.append(Component(tops, tuple(inv[a - 1] for a in tops)))
    rank_path, cycles = comps[0], tuple(comps[1:])
    r = rank_path.length - 1
    if mark == 0:
        owner = None
        # r1 counts the rank arcs before the mark, the extra top arc included
        ptype = PermType("H", mark_pos, r + 1 - mark_pos)
    elif mark > 0:
        owner = mark - 1
        ptype = PermType("X", r, cycles[owner].length)
    else:  # n = 1: nothing crosses the mark
        owner = None
        ptype = PermType("X", r, 0)
    return CycleData(n, cycles, rank_path, owner, mark_pos, ptype)


def cycle_invariant(p: PermLike) -> tuple[tuple[int, ...], int]:
    cd = cycle_data(p)
    return cd.lam, cd.rank


def perm_type(p: PermLike) -> PermType:
    return cycle_data(p).perm_type


def chi(p: PermLike) -> int:
    """Number of non-crossing pairs i < j, sigma(i) < sigma(j)."""
    s = as_perm(p).images
    return sum(1 for i, j in combinations(range(len(s)), 2) if s[i] < s[j])


def chi_restricted(p: PermLike, subset: Iterable[int]) -> int:
    """chi of the edges with bottom endpoints in subset (1-based)."""
    s = as_perm(p).images
    idx = sorted(subset)
    return sum(1 for i, j in combinations(idx, 2) if s[i - 1] < s[j - 1])


def arf(p: PermLike, cap: int = _kernels.ARF_CAP) -> tuple[int, int]:
    """(A, Abar) over all edge subsets, exact."""
    return _kernels.arf_sums(as_perm(p).images, cap)


def abar(p: PermLike, cap: int = _kernels.ARF_CAP) -> int:
    return arf(p, cap)[1]


def even_part_count(lam: Iterable[int], rank: int) -> int:
    return sum(1 for x in list(lam) + [rank] if x % 2 == 0)


@dataclass(frozen=True)
class ExpectedAbar:
    magnitude: int
    either_sign: bool  # True when the value is +magnitude or -magnitude

    def admits(self, value: int) -> bool:
        if not self.either_sign:
            return value == self.magnitude
        return abs(value) == self.magnitude


def expected_abar(lam: Iterable[int], rank: int, n: int) -> ExpectedAbar:
    lam = list(lam)
    if rank + sum(lam) != n - 1:
        raise ValueError(f"dimension formula fails: {rank} + {sum(lam)} != {n - 1}")
    evens = even_part_count(lam, rank)
    if evens % 2:
        raise ValueError(f"invalid invariant: {evens} even parts in lambda and rank")
    if evens:
        return ExpectedAbar(0, False)
    return ExpectedAbar(2 ** ((n + len(lam)) // 2), True)


def sign(p: PermLike, cap: int = _kernels.ARF_CAP) -> int:
    p = as_perm(p)
    lam, r = cycle_invariant(p)
    value = abar(p, cap)
    expect = expected_abar(lam, r, p.n)
    if not expect.admits(value):
        raise ArfMismatch(f"Abar={value} for {p.to_text()}, expected {expect}")
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class InvariantTriple:
    lam: tuple[int, ...]
    rank: int
    sign: int
    n: int = 0
    ptype: Optional[PermType] = field(default=None, compare=False)

    def key(self):
        return (self.lam, self.rank, self.sign)

    def to_json(self) -> dict:
        out = {"lambda": list(self.lam), "rank": self.rank, "sign": self.sign, "n": self.n}
        if self.ptype is not None:
            out["type"] = self.ptype.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def short(self) -> str:
        """Compact 'lambda|r s' form, e.g. '22|1' or '∅|5+'."""
        lam = "".join(map(str, self.lam)) if self.lam else "∅"
        if any(x >= 10 for x in self.lam):
            lam = ",".join(map(str, self.lam))
        s = {1: "+", -1: "-", 0: ""}[self.sign]
        return f"{lam}|{self.rank}{s}"

    def multiplicities(self) -> Counter:
        return Counter(self.lam)


def invariant_triple(p: PermLike, cap: int = _kernels.ARF_CAP) -> InvariantTriple:
    p = as_perm(p)
    cd = cycle_data(p)
    return InvariantTriple(cd.lam, cd.rank, sign(p, cap), p.n, cd.perm_type)


def batch_invariants(perms: np.ndarray):
    """(lam rows, rank, htype, abar) for many permutations at once."""
    lam, rank, htype = _kernels.batch_cycle_invariants(perms)
    return lam, rank, htype, _kernels.batch_abar(perms)
