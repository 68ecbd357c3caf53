"""Colorings, the boosted dynamics, standard families and monodromy.

An edge is named by its bottom endpoint i (it joins bottom i to top sigma(i)).
A coloring is the set of gray edges; the reduction keeps the black ones.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .invariants import PermType, cycle_invariant, perm_type
from .labelling import (ConsistentLabelling, Label, canonical_labelling,
                        exchange_op, labelled_L, labelled_R, shift_op)
from .perm import (PermLike, Permutation, ReducibleError, apply_L, apply_R,
                   as_perm, gamma_b, identity, is_irreducible, parse_word)

__all__ = [
    "ReducedPair", "reduce", "boost_step", "d", "predict_d_invariant", "standard_family",
    "is_standard", "is_shift_irreducible", "shift_irreducible_by_type",
    "is_i2x", "pivots", "is_proper", "BoostResult", "boost", "orbit",
    "MonodromyReport", "monodromy_group", "generated_labellings",
    "predicted_two_point", "family_members_in_id", "BoostError",
    "MonodromyLimitError",
]


class BoostError(ValueError):
    pass


class MonodromyLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class ReducedPair:
    host: Permutation
    gray: frozenset[int]
    reduced: Permutation
    bottom_slot: dict  # original bottom vertex -> reduced vertex or None
    top_slot: dict
    gray_arcs: dict  # gray edge -> (top arc, bottom arc) of the reduction, or None


def reduce(host: PermLike, gray: Iterable[int]) -> ReducedPair:
    host = as_perm(host)
    gray = frozenset(gray)
    n = host.n
    if any(not 1 <= e <= n for e in gray):
        raise ValueError("gray edge out of range")
    if len(gray) == n:
        raise ValueError("cannot gray every edge")
    black = [i for i in range(1, n + 1) if i not in gray]
    black_tops = sorted(host(i) for i in black)
    top_rank = {v: k for k, v in enumerate(black_tops, 1)}
    reduced = Permutation(tuple(top_rank[host(i)] for i in black))
    bottom_slot = {i: (black.index(i) + 1 if i not in gray else None) for i in range(1, n + 1)}
    top_slot = {v: top_rank.get(v) for v in range(1, n + 1)}
    k = len(black)
    arcs = {}
    for e in gray:
        beta = sum(1 for i in black if i < e)
        alpha = 1 + sum(1 for v in black_tops if v < host(e))
        arcs[e] = (alpha, beta) if 1 <= beta and alpha <= k else None
    return ReducedPair(host, gray, reduced, bottom_slot, top_slot, arcs)


def d(p: PermLike) -> Permutation:
    """Drop the edge ending at top vertex 1 and relabel."""
    p = as_perm(p)
    if p.n < 2:
        raise ValueError("d needs size at least 2")
    j = p.images.index(1)
    return Permutation(tuple(v - 1 for k, v in enumerate(p.images) if k != j))


def predict_d_invariant(lam: Iterable[int], rank: int, ptype: PermType):
    """Invariant and type of d(sigma) for a standard sigma, from sigma's data."""
    lam = list(lam)
    if ptype.kind == "X":
        i = ptype.b
        if i not in lam:
            raise ValueError("principal cycle length missing from lambda")
        lam.remove(i)
        return tuple(sorted(lam, reverse=True)), rank + i - 1, PermType("H", i, rank)
    r1, r2 = ptype.a, ptype.b
    new = sorted(lam + [r1 - 1], reverse=True)
    return tuple(new), r2 - 1, PermType("X", r2 - 1, r1 - 1)


def is_standard(p: PermLike) -> bool:
    return as_perm(p)(1) == 1


def standard_family(p: PermLike) -> list[Permutation]:
    p = as_perm(p)
    if not is_standard(p) or not is_irreducible(p):
        raise ValueError("standard family needs an irreducible sigma with sigma(1) = 1")
    out = [p]
    for _ in range(p.n - 2):
        out.append(apply_L(out[-1]))
    return out


def _excluded_indices(p: Permutation) -> set[int]:
    n = p.n
    return {(n - p(2)) % (n - 1), (n - p(n) + 1) % (n - 1)}


def is_shift_irreducible(p: PermLike) -> bool:
    """Every d(L^i sigma) outside the two forced exceptions is irreducible."""
    p = as_perm(p)
    fam = standard_family(p)
    skip = _excluded_indices(p)
    return all(is_irreducible(d(q)) for i, q in enumerate(fam) if i not in skip)


def shift_irreducible_by_type(p: PermLike) -> bool:
    """Same question, asked through the X/H types of the family members:
    d must be irreducible on every X(r,i) member and on H(r-j+1,j), 1<j<r."""
    p = as_perm(p)
    r = cycle_invariant(p)[1]
    for q in standard_family(p):
        t = perm_type(q)
        if t.kind == "X" or 1 < t.b < r:
            if not is_irreducible(d(q)):
                return False
    return True


def is_i2x(p: PermLike) -> bool:
    p = as_perm(p)
    return p.n >= 2 and p(1) == 1 and p(2) == 2 and is_irreducible(p) and is_shift_irreducible(p)


def pivots(p: PermLike) -> tuple[int, int]:
    """The two pivot edges, by bottom endpoint: 1 and sigma^-1(n)."""
    p = as_perm(p)
    return 1, p.inverse()(p.n)


def is_proper(p: PermLike, gray: Iterable[int]) -> bool:
    return not (set(gray) & set(pivots(p)))


def _move_edge(p: Permutation, x: int, letter: str) -> int:
    """Bottom position of edge x after one raw L or R step."""
    if letter == "L":
        return x
    j = p.inverse()(p.n)
    if x == 1:
        return j - 1
    if 2 <= x <= j - 1:
        return x - 1
    return x


_RAW = {"L": apply_L, "R": apply_R}


@dataclass
class BoostResult:
    host: Permutation
    gray: frozenset[int]
    exponents: list[int]
    reduced: Permutation
    labelling: Optional[ConsistentLabelling] = None
    gray_labels_before: dict = field(default_factory=dict)
    gray_labels_after: dict = field(default_factory=dict)
    identity_map: dict = field(default_factory=dict)  # initial gray edge -> final position

    @property
    def labels_tracked(self) -> bool:
        return self.gray_labels_before == {
            e0: self.gray_labels_after[self.identity_map[e0]] for e0 in self.gray_labels_before}


def _gray_labels(rp: ReducedPair, lab: ConsistentLabelling) -> dict:
    out = {}
    for e, arcs in rp.gray_arcs.items():
        if arcs is None:
            out[e] = None
        else:
            a, b = arcs
            out[e] = (lab.top(a), lab.bottom(b))
    return out


def boost_step(host: Permutation, track: dict, letter: str, limit: int):
    """Apply letter until no tracked gray edge is a pivot.

    track maps a key to the gray edge's current bottom position. Returns
    (new host, new track, exponent)."""
    k = 0
    while True:
        track = {e0: _move_edge(host, x, letter) for e0, x in track.items()}
        host = _RAW[letter](host, check=False)
        k += 1
        if is_proper(host, track.values()):
            return host, track, k
        if k > limit:
            raise BoostError("no proper power found")


def boost(host: PermLike, gray: Iterable[int], w, labelling: Optional[ConsistentLabelling] = None,
          max_power: Optional[int] = None) -> BoostResult:
    """Lift a word on the reduction to the colored host.

    Each letter H is applied alpha >= 1 times, alpha minimal with a proper
    result. The labelling (default: canonical) of the reduction is carried
    along by the labelled dynamics so gray edges can be checked against it.
    """
    host = as_perm(host)
    gray = frozenset(gray)
    if not is_proper(host, gray):
        raise BoostError("start state is not proper")
    rp = reduce(host, gray)
    if not is_irreducible(rp.reduced):
        raise BoostError("reduction is reducible")
    tau = rp.reduced
    lab = labelling if labelling is not None else canonical_labelling(tau)
    before = _gray_labels(rp, lab)
    track = {e: e for e in gray}
    exps = []
    limit = max_power if max_power is not None else 4 * host.n * host.n
    for letter in parse_word(w):
        if letter not in _RAW:
            raise BoostError("boosted words use L and R only")
        host, track, k = boost_step(host, track, letter, limit)
        exps.append(k)
        tau, lab = (labelled_L if letter == "L" else labelled_R)(tau, lab, check=False)
    gray = frozenset(track.values())
    rp2 = reduce(host, gray)
    return BoostResult(host, gray, exps, rp2.reduced, lab, before, _gray_labels(rp2, lab), track)


def orbit(p: PermLike, limit: int = 10 ** 7) -> set[tuple[int, ...]]:
    """All permutations reachable from p under L and R."""
    p = as_perm(p)
    seen = {p.images}
    queue = deque([p])
    while queue:
        q = queue.popleft()
        for nxt in (apply_L(q, check=False), apply_R(q, check=False)):
            if nxt.images not in seen:
                seen.add(nxt.images)
                if len(seen) > limit:
                    raise MonodromyLimitError("orbit limit exceeded")
                queue.append(nxt)
    return seen


def family_members_in_id(p: PermLike, id_class: Optional[set] = None) -> int:
    """How many members of the standard family of p have d(member) in the
    class of the identity of size n-1."""
    p = as_perm(p)
    if id_class is None:
        id_class = orbit(identity(p.n - 1))
    return sum(1 for q in standard_family(p) if d(q).images in id_class)


# ------------------------------------------------------------- monodromy

def _label_maps(lab: ConsistentLabelling):
    """Generator label maps of the predicted monodromy group."""
    copies = sorted({(x.length, x.copy) for x in lab.pi_b if not x.is_rank})
    gens = []
    lengths = Counter(length for length, _ in copies)
    for length, m in lengths.items():
        for j1 in range(1, m + 1):
            for j2 in range(j1 + 1, m + 1):
                gens.append(("exchange", (length, j1, j2)))
    for length, j in copies:
        gens.append(("shift", (length, j, 1 if length % 2 else 2)))
    evens = [c for c in copies if c[0] % 2 == 0]
    for a in range(len(evens)):
        for b in range(a + 1, len(evens)):
            gens.append(("pair", (evens[a], evens[b])))
    return gens


def _apply_gen(lab: ConsistentLabelling, gen) -> ConsistentLabelling:
    kind, args = gen
    if kind == "exchange":
        return exchange_op(lab, *args)
    if kind == "shift":
        return shift_op(lab, *args)
    (l1, j1), (l2, j2) = args
    return shift_op(shift_op(lab, l1, j1, 1), l2, j2, 1)


def generated_labellings(lab: ConsistentLabelling) -> set[tuple[Label, ...]]:
    """Bottom labellings reachable from lab through the predicted generators."""
    gens = _label_maps(lab)
    seen = {lab.pi_b}
    queue = deque([lab])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = _apply_gen(cur, g)
            if nxt.pi_b not in seen:
                seen.add(nxt.pi_b)
                queue.append(nxt)
    return seen


def predicted_two_point(p: PermLike, lab: ConsistentLabelling) -> dict:
    """For each bottom arc, the set of labels it can carry after a loop,
    as predicted by the case split on even cycles."""
    evens = {(x.length, x.copy) for x in lab.pi_b if not x.is_rank and x.length % 2 == 0}
    lone_even = next(iter(evens)) if len(evens) == 1 else None
    alphabet = set(lab.pi_b)
    out = {}
    for beta, x in enumerate(lab.pi_b, 1):
        if x.is_rank:
            out[beta] = {x}
        elif lone_even is not None and (x.length, x.copy) == lone_even:
            out[beta] = {y for y in alphabet if (y.length, y.copy) == lone_even
                         and (y.idx - x.idx) % 2 == 0}
        else:
            out[beta] = {y for y in alphabet if y.length == x.length}
    return out


@dataclass
class MonodromyReport:
    perm: Permutation
    class_size: int
    reachable: set
    generated: set
    generator_status: dict
    two_point_observed: dict
    two_point_predicted: dict
    labelled_states: int

    @property
    def group_matches(self) -> bool:
        return self.reachable == self.generated

    @property
    def two_point_matches(self) -> bool:
        return self.two_point_observed == self.two_point_predicted

    @property
    def is_closed(self) -> bool:
        return closed_under_composition(self.reachable)

    def to_json(self) -> dict:
        return {
            "perm": self.perm.to_text(),
            "class_size": self.class_size,
            "labelled_states": self.labelled_states,
            "reachable_labellings": len(self.reachable),
            "generated_labellings": len(self.generated),
            "group_matches": self.group_matches,
            "generators": {k: v for k, v in self.generator_status.items()},
            "two_point": {
                str(beta): sorted(str(x) for x in labels)
                for beta, labels in sorted(self.two_point_observed.items())},
            "two_point_matches": self.two_point_matches,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def closed_under_composition(labellings: set) -> bool:
    """Reachable labellings are g∘Pi for g in a group; check closure on the g's."""
    labs = list(labellings)
    if not labs:
        return True
    base = labs[0]
    pos = {x: k for k, x in enumerate(base)}
    maps = {tuple(pos[x] for x in lab) for lab in labs}
    # each lab is base∘pi for a position permutation pi; the set of pi must be a group
    for a in maps:
        for b in maps:
            if tuple(a[b[k]] for k in range(len(a))) not in maps:
                return False
    return True


def monodromy_group(p: PermLike, lab: Optional[ConsistentLabelling] = None,
                    limit: int = 5 * 10 ** 6) -> MonodromyReport:
    """BFS over labelled states of the class of p; collect the labellings that
    come back to p, and compare with the group the generators produce."""
    p = as_perm(p)
    if not is_irreducible(p):
        raise ReducibleError(p.to_text())
    lab = lab if lab is not None else canonical_labelling(p)
    alphabet = sorted(set(lab.pi_b))
    code = {x: k for k, x in enumerate(alphabet)}
    start = (p.images, tuple(code[x] for x in lab.pi_b))
    seen = {start}
    queue = deque([start])
    perms = set()
    while queue:
        s, pb = queue.popleft()
        perms.add(s)
        sp = Permutation(s)
        n = len(s)
        # L keeps pi_b; R composes it with gamma_b(sigma^-1(n))
        nl = (apply_L(sp, check=False).images, pb)
        j = s.index(n) + 1
        g = gamma_b(n, j).images
        nr = (apply_R(sp, check=False).images, tuple(pb[g[k] - 1] for k in range(n)))
        for st in (nl, nr):
            if st not in seen:
                seen.add(st)
                if len(seen) > limit:
                    raise MonodromyLimitError(f"more than {limit} labelled states")
                queue.append(st)
    reachable = {tuple(alphabet[c] for c in pb) for s, pb in seen if s == p.images}
    generated = generated_labellings(lab)
    status = {}
    for gen in _label_maps(lab):
        kind, args = gen
        name = f"{kind}{args}"
        status[name] = _apply_gen(lab, gen).pi_b in reachable
    observed: dict[int, set] = {beta: set() for beta in range(1, p.n + 1)}
    for pb in reachable:
        for beta, x in enumerate(pb, 1):
            observed[beta].add(x)
    return MonodromyReport(p, len(perms), reachable, generated, status, observed,
                           predicted_two_point(p, lab), len(seen))
