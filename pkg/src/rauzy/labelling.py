"""Consistent labellings of arcs and the labelled dynamics.

A labelling is a pair (pi_b, pi_t) of tuples: pi_b[beta - 1] is the label of
bottom arc beta, pi_t[alpha - 1] the label of top arc alpha.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass
from math import factorial, prod
from typing import Iterable, NamedTuple, Optional

from .invariants import cycle_data
from .perm import (PermLike, Permutation, apply_L, apply_R, as_perm, gamma_b,
                   gamma_t, parse_word, apply_L_inv, apply_R_inv)

__all__ = [
    "Label", "ConsistentLabelling", "consecutive_bottom", "consecutive_top",
    "canonical_labelling", "top_from_bottom", "verify_consistent",
    "verify_all_properties", "shift_op", "exchange_op", "labelled_L",
    "labelled_R", "labelled_L_inv", "labelled_R_inv", "apply_labelled_word",
    "count_labellings", "enumerate_labellings", "cycle_copies", "LabellingError",
]


class LabellingError(ValueError):
    pass


class Label(NamedTuple):
    side: str  # "b" or "t"
    idx: int
    length: int = 0  # 0 marks a rank label
    copy: int = 0

    @property
    def is_rank(self) -> bool:
        return self.length == 0

    def flip(self) -> "Label":
        return self._replace(side="t" if self.side == "b" else "b")

    def __str__(self):
        if self.is_rank:
            return f"{self.side}rk[{self.idx}]"
        return f"{self.side}[{self.idx},{self.length},{self.copy}]"

    @classmethod
    def parse(cls, text: str) -> "Label":
        text = text.strip()
        m = re.fullmatch(r"([bt])rk\[(\d+)\]", text)
        if m:
            return cls(m.group(1), int(m.group(2)))
        m = re.fullmatch(r"([bt])\[(\d+),(\d+),(\d+)\]", text)
        if m:
            return cls(m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4)))
        raise ValueError(f"bad label {text!r}")


@dataclass(frozen=True)
class ConsistentLabelling:
    pi_b: tuple[Label, ...]
    pi_t: tuple[Label, ...]

    def bottom(self, beta: int) -> Label:
        return self.pi_b[beta - 1]

    def top(self, alpha: int) -> Label:
        return self.pi_t[alpha - 1]

    def find_bottom(self, label: Label) -> int:
        return self.pi_b.index(label) + 1

    def find_top(self, label: Label) -> int:
        return self.pi_t.index(label) + 1

    def relabel(self, f) -> "ConsistentLabelling":
        return ConsistentLabelling(tuple(map(f, self.pi_b)), tuple(map(f, self.pi_t)))

    def to_json(self) -> dict:
        return {"bottom": [str(x) for x in self.pi_b], "top": [str(x) for x in self.pi_t]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def consecutive_bottom(p: PermLike, beta: int) -> Optional[int]:
    """The bottom arc following beta in its cycle; None at the end of the rank path."""
    s = as_perm(p)
    n = s.n
    if beta == n:
        return None
    inv = s.inverse()
    v = s(beta + 1)
    return inv(v + 1) if v < n else inv(s(1) + 1)


def consecutive_top(p: PermLike, alpha: int) -> Optional[int]:
    s = as_perm(p)
    n = s.n
    beta = s.inverse()(alpha)
    if beta == n:
        return None
    v = s(beta + 1)
    return v + 1 if v < n else s(1) + 1


def cycle_copies(p: PermLike):
    """Cycles grouped by length, copies ordered by smallest bottom arc.

    Returns {length: [Component, ...]} with copy j at index j - 1.
    """
    cd = cycle_data(p)
    groups: dict[int, list] = {}
    for c in cd.cycles:
        groups.setdefault(c.length, []).append(c)
    for v in groups.values():
        v.sort(key=lambda c: min(c.bottoms))
    return groups


def canonical_labelling(p: PermLike) -> ConsistentLabelling:
    """Rank labels in path order; copy j of each length ordered by smallest
    bottom arc, index 0 on that smallest bottom arc."""
    p = as_perm(p)
    cd = cycle_data(p)
    pi_b: list[Optional[Label]] = [None] * p.n
    pi_t: list[Optional[Label]] = [None] * p.n
    for k, (a, b) in enumerate(zip(cd.rank_path.tops, cd.rank_path.bottoms)):
        pi_t[a - 1] = Label("t", k)
        pi_b[b - 1] = Label("b", k)
    for length, comps in cycle_copies(p).items():
        for j, c in enumerate(comps, 1):
            k0 = c.bottoms.index(min(c.bottoms))
            for k, (a, b) in enumerate(zip(c.tops, c.bottoms)):
                idx = (k - k0) % length
                pi_t[a - 1] = Label("t", idx, length, j)
                pi_b[b - 1] = Label("b", idx, length, j)
    return ConsistentLabelling(tuple(pi_b), tuple(pi_t))


def top_from_bottom(p: PermLike, pi_b: Iterable[Label]) -> tuple[Label, ...]:
    """The unique top labelling matching pi_b across every edge."""
    p = as_perm(p)
    pi_b = tuple(pi_b)
    inv = p.inverse()
    return tuple(pi_b[inv(a) - 1].flip() for a in range(1, p.n + 1))


def _succ_label(x: Label, rank: int) -> Optional[Label]:
    if x.is_rank:
        return x._replace(idx=x.idx + 1) if x.idx < rank else None
    return x._replace(idx=(x.idx + 1) % x.length)


def verify_consistent(p: PermLike, lab: ConsistentLabelling) -> bool:
    """Reduced criterion: consecutivity on bottom arcs, matching across
    edges, and top arc 1 labelled trk[0]."""
    p = as_perm(p)
    n = p.n
    if len(lab.pi_b) != n or len(lab.pi_t) != n:
        return False
    if any(x.side != "b" for x in lab.pi_b) or any(x.side != "t" for x in lab.pi_t):
        return False
    if lab.pi_t[0] != Label("t", 0):
        return False
    for i in range(1, n + 1):
        if lab.top(p(i)) != lab.bottom(i).flip():
            return False
    rank = sum(1 for x in lab.pi_b if x.is_rank) - 1
    for beta in range(1, n + 1):
        nxt = consecutive_bottom(p, beta)
        want = _succ_label(lab.bottom(beta), rank)
        if nxt is None:
            if want is not None:
                return False
        elif want is None or lab.bottom(nxt) != want:
            return False
    return len(set(lab.pi_b)) == n


def verify_all_properties(p: PermLike, lab: ConsistentLabelling) -> bool:
    """Check the four defining properties separately, against the cycle data."""
    p = as_perm(p)
    cd = cycle_data(p)
    if len(set(lab.pi_b)) != p.n or len(set(lab.pi_t)) != p.n:
        return False
    mult = Counter(c.length for c in cd.cycles)
    # 4: rank arcs in path order
    for k, (a, b) in enumerate(zip(cd.rank_path.tops, cd.rank_path.bottoms)):
        if lab.top(a) != Label("t", k) or lab.bottom(b) != Label("b", k):
            return False
    for c in cd.cycles:
        # 1: one alphabet per cycle, a legitimate copy index
        bl = [lab.bottom(b) for b in c.bottoms]
        tl = [lab.top(a) for a in c.tops]
        keys = {(x.length, x.copy) for x in bl + tl}
        if len(keys) != 1:
            return False
        length, copy = keys.pop()
        if length != c.length or not 1 <= copy <= mult[length]:
            return False
        # 2: consecutive arcs carry consecutive indices, both sides
        for seq in (bl, tl):
            for k in range(len(seq)):
                if seq[(k + 1) % len(seq)].idx != (seq[k].idx + 1) % length:
                    return False
    # 3: bottom arc i and top arc sigma(i) share the index
    for i in range(1, p.n + 1):
        if lab.bottom(i).flip() != lab.top(p(i)):
            return False
    return True


def _require(p, lab):
    if not verify_consistent(p, lab):
        raise LabellingError("labelling is not consistent")


def shift_op(lab: ConsistentLabelling, length: int, copy: int, m: int) -> ConsistentLabelling:
    """Shift the indices of copy `copy` of the length-`length` cycles by m (mod length)."""
    if not any(x.length == length and x.copy == copy for x in lab.pi_b):
        raise LabellingError(f"no cycle copy ({length},{copy})")

    def f(x: Label) -> Label:
        if x.length == length and x.copy == copy:
            return x._replace(idx=(x.idx + m) % length)
        return x
    return lab.relabel(f)


def exchange_op(lab: ConsistentLabelling, length: int, j1: int, j2: int) -> ConsistentLabelling:
    for j in (j1, j2):
        if not any(x.length == length and x.copy == j for x in lab.pi_b):
            raise LabellingError(f"no cycle copy ({length},{j})")

    def f(x: Label) -> Label:
        if x.length == length and x.copy in (j1, j2):
            return x._replace(copy=j2 if x.copy == j1 else j1)
        return x
    return lab.relabel(f)


def _compose_positions(labels: tuple, g: Permutation) -> tuple:
    return tuple(labels[g(k) - 1] for k in range(1, len(labels) + 1))


def labelled_L(p: PermLike, lab: ConsistentLabelling, check: bool = True):
    p = as_perm(p)
    if check:
        _require(p, lab)
    g = gamma_t(p.n, p(1))
    return apply_L(p), ConsistentLabelling(lab.pi_b, _compose_positions(lab.pi_t, g))


def labelled_R(p: PermLike, lab: ConsistentLabelling, check: bool = True):
    p = as_perm(p)
    if check:
        _require(p, lab)
    g = gamma_b(p.n, p.inverse()(p.n))
    return apply_R(p), ConsistentLabelling(_compose_positions(lab.pi_b, g), lab.pi_t)


def labelled_L_inv(p: PermLike, lab: ConsistentLabelling, check: bool = True):
    p = as_perm(p)
    if check:
        _require(p, lab)
    q = apply_L_inv(p)
    g = gamma_t(p.n, q(1)).inverse()
    return q, ConsistentLabelling(lab.pi_b, _compose_positions(lab.pi_t, g))


def labelled_R_inv(p: PermLike, lab: ConsistentLabelling, check: bool = True):
    p = as_perm(p)
    if check:
        _require(p, lab)
    q = apply_R_inv(p)
    g = gamma_b(p.n, q.inverse()(p.n)).inverse()
    return q, ConsistentLabelling(_compose_positions(lab.pi_b, g), lab.pi_t)


_LABELLED = {"L": labelled_L, "R": labelled_R, "L'": labelled_L_inv, "R'": labelled_R_inv}


def apply_labelled_word(p: PermLike, lab: ConsistentLabelling, w, check: bool = True):
    p = as_perm(p)
    for letter in parse_word(w):
        p, lab = _LABELLED[letter](p, lab, check)
    return p, lab


def count_labellings(p: PermLike) -> int:
    """prod over lengths l of m_l! * l^m_l."""
    mult = Counter(cycle_data(p).lam)
    return prod(factorial(m) * length ** m for length, m in mult.items())


def _generator_moves(lab: ConsistentLabelling):
    copies = sorted({(x.length, x.copy) for x in lab.pi_b if not x.is_rank})
    for length, j in copies:
        yield shift_op(lab, length, j, 1)
        if j > 1:
            yield exchange_op(lab, length, j - 1, j)


def enumerate_labellings(p: PermLike, cap: int = 10 ** 6) -> list[ConsistentLabelling]:
    """All consistent labellings, as the shift/exchange orbit of the canonical one."""
    expected = count_labellings(p)
    if expected > cap:
        raise LabellingError(f"{expected} labellings exceed the cap {cap}")
    start = canonical_labelling(p)
    seen = {start}
    queue = deque([start])
    while queue:
        lab = queue.popleft()
        for nxt in _generator_moves(lab):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return sorted(seen, key=lambda x: x.pi_b)
