"""Edge insertion, cross gadgets, base families and the I2X builder.

Arc positions follow ``invariants``: top arc a sits just left of top vertex a
(a = 1 is the extra arc), bottom arc b sits just right of bottom vertex b.
Inserting i parallel edges within (alpha, beta) creates bottom vertices
beta+1..beta+i joined to top vertices alpha..alpha+i-1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .dynamics import is_shift_irreducible
from .invariants import (CycleData, InvariantTriple, cycle_data, cycle_invariant,
                         even_part_count, sign)
from .labelling import ConsistentLabelling, Label, consecutive_bottom
from .perm import PermLike, Permutation, as_perm, identity, is_irreducible

__all__ = [
    "validate_request",
    "InsertionSpec", "insert_edges", "insert_edges_by_label", "EdgePrediction",
    "predict_one_edge", "predict_double_edge", "opposite_sign_pair",
    "cross_block", "cross_block_j", "BASE_GADGETS", "find_base_gadget",
    "substitute_block", "attach_Cp", "attach_Cpj", "attach_Cp_pair",
    "cross_delta", "base_X", "base_X3", "X213_PRINTED", "exceptional_id",
    "exceptional_idp", "exceptional_invariant", "valid_invariants",
    "build_i2x", "build_i2x_traced", "search_i2x", "ConstructionError",
    "NoI2XError",
]


class ConstructionError(RuntimeError):
    """A construction missed its own postcondition or got bad arguments."""


class NoI2XError(ConstructionError):
    """No non-exceptional I2X permutation carries the requested invariant."""


# ------------------------------------------------------------ insertion

@dataclass(frozen=True)
class InsertionSpec:
    count: int
    alpha: int
    beta: int


def insert_edges(p: PermLike, spec: Union[InsertionSpec, int], alpha: Optional[int] = None,
                 beta: Optional[int] = None) -> Permutation:
    """sigma|_{i,alpha,beta}: i consecutive, mutually parallel edges within the two arcs."""
    if isinstance(spec, InsertionSpec):
        i, alpha, beta = spec.count, spec.alpha, spec.beta
    else:
        i = spec
    s = as_perm(p).images
    n = len(s)
    if i < 0 or not (1 <= alpha <= n and 1 <= beta <= n):
        raise ConstructionError(f"arcs out of range: i={i}, alpha={alpha}, beta={beta}, n={n}")
    out = [0] * (n + i)
    for v, w in enumerate(s, 1):
        out[(v if v <= beta else v + i) - 1] = w if w < alpha else w + i
    for k in range(1, i + 1):
        out[beta + k - 1] = alpha + k - 1
    return Permutation(tuple(out))


def insert_edges_by_label(p: PermLike, lab: ConsistentLabelling, i: int,
                          top_label: Union[Label, str], bottom_label: Union[Label, str]) -> Permutation:
    if isinstance(top_label, str):
        top_label = Label.parse(top_label)
    if isinstance(bottom_label, str):
        bottom_label = Label.parse(bottom_label)
    try:
        alpha = lab.find_top(top_label)
        beta = lab.find_bottom(bottom_label)
    except ValueError:
        raise ConstructionError(f"unknown label {top_label} or {bottom_label}") from None
    return insert_edges(p, i, alpha, beta)


@dataclass(frozen=True)
class EdgePrediction:
    case: str  # cycle-cycle, rank-cycle, same-cycle, same-rank, uncovered
    lam: Optional[tuple[int, ...]] = None
    rank: Optional[int] = None

    @property
    def covered(self) -> bool:
        return self.case != "uncovered"

    def invariant(self):
        return (self.lam, self.rank)


def _owners(cd: CycleData, alpha: int, beta: int):
    to, bo = cd.top_owner(), cd.bottom_owner()
    if alpha not in to or beta not in bo:
        raise ConstructionError(f"arc out of range: alpha={alpha}, beta={beta}")
    return to[alpha], bo[beta]


def _length(cd: CycleData, owner):
    return cd.rank if owner is None else cd.cycles[owner].length


def _without(cd: CycleData, owners) -> list[int]:
    return [c.length for k, c in enumerate(cd.cycles) if k not in owners]


def _desc(xs) -> tuple[int, ...]:
    return tuple(sorted(xs, reverse=True))


def predict_one_edge(cd: CycleData, alpha: int, beta: int) -> EdgePrediction:
    ca, cb = _owners(cd, alpha, beta)
    if ca == cb:
        return EdgePrediction("uncovered")
    if ca is not None and cb is not None:
        merged = _length(cd, ca) + _length(cd, cb) + 1
        return EdgePrediction("cycle-cycle", _desc(_without(cd, {ca, cb}) + [merged]), cd.rank)
    c = ca if ca is not None else cb
    return EdgePrediction("rank-cycle", _desc(_without(cd, {c})), cd.rank + _length(cd, c) + 1)


def predict_double_edge(cd: CycleData, alpha: int, beta: int) -> EdgePrediction:
    ca, cb = _owners(cd, alpha, beta)
    grow = Counter({ca: 2} if ca == cb else {ca: 1, cb: 1})
    lam = [c.length + grow.get(k, 0) for k, c in enumerate(cd.cycles)]
    case = ("same-rank" if ca is None else "same-cycle") if ca == cb else \
        ("rank-cycle" if None in (ca, cb) else "cycle-cycle")
    return EdgePrediction(case, _desc(lam), cd.rank + grow.get(None, 0))


def _even_components(cd: CycleData):
    out = [k for k, c in enumerate(cd.cycles) if c.length % 2 == 0]
    if cd.rank % 2 == 0:
        out.append(None)
    return out


def opposite_sign_pair(p: PermLike, alpha: int, beta: int, beta_next: int, i: int):
    """(sigma|_{i,alpha,beta}, sigma|_{i,alpha,beta_next}): same cycle invariant, opposite signs."""
    p = as_perm(p)
    if not 1 <= i <= 3:
        raise ConstructionError("opposite_sign_pair needs 1 <= i <= 3")
    cd = cycle_data(p)
    evens = _even_components(cd)
    if len(evens) != 2:
        raise ConstructionError(f"need exactly two even components, found {len(evens)}")
    ca, cb = _owners(cd, alpha, beta)
    if ca not in evens or cb not in evens or ca == cb:
        raise ConstructionError("alpha and beta must sit on the two different even components")
    if beta_next not in (consecutive_bottom(p, beta), _previous_bottom(p, beta)):
        raise ConstructionError(f"bottom arcs {beta} and {beta_next} are not consecutive")
    return insert_edges(p, i, alpha, beta), insert_edges(p, i, alpha, beta_next)


def _previous_bottom(p: Permutation, beta: int) -> Optional[int]:
    for b in range(1, p.n + 1):
        if consecutive_bottom(p, b) == beta:
            return b
    return None


# ------------------------------------------------------------ cross gadgets

# Smallest blocks whose substitution for one edge adds {1} and {1, 1}; found by
# find_base_gadget and frozen here (the test suite re-runs the search).
BASE_GADGETS = {0: (2, 1), 1: (3, 2, 1)}


def substitute_block(p: PermLike, edge: int, block: Sequence[int]) -> Permutation:
    """Replace edge (edge, sigma(edge)) by the pattern `block`."""
    s = as_perm(p).images
    n, m = len(s), len(block)
    if not 1 <= edge <= n:
        raise ConstructionError(f"no edge {edge} in a permutation of size {n}")
    t = s[edge - 1]
    out = []
    for v, w in enumerate(s, 1):
        if v == edge:
            out.extend(t + b - 1 for b in block)
        else:
            out.append(w if w < t else w + m - 1)
    return Permutation(tuple(out))


def cross_delta(param: int) -> tuple[int, ...]:
    """Cycles added by a C_param attachment."""
    if param < 0:
        raise ConstructionError("cross parameter must be nonnegative")
    k, j = divmod(param, 4)
    return {0: (param + 1,), 1: (2 * k + 1,) * 2, 2: (param + 1,), 3: (2 * k + 2,) * 2}[j]


@lru_cache(maxsize=None)
def cross_block(param: int) -> tuple[int, ...]:
    """C_param: a base gadget grown by double edges inside its parallel bundle."""
    if param < 0:
        raise ConstructionError("cross parameter must be nonnegative")
    if param in BASE_GADGETS:
        return BASE_GADGETS[param]
    return insert_edges(cross_block(param - 2), 2, 2, 1).images


def cross_block_j(param: int, j: int) -> tuple[int, ...]:
    """C_{param,j}: j parallel edges within the first top arc and third bottom arc of C_param."""
    if param % 4 != 3 or not 1 <= j <= 3:
        raise ConstructionError("C_{p,j} needs p = 3 mod 4 and 1 <= j <= 3")
    return insert_edges(cross_block(param), j, 2, 3).images


def find_base_gadget(delta: Sequence[int], max_size: int = 3, hosts: Iterable = None):
    """Smallest block adding exactly `delta` cycles on every test host, rank unchanged."""
    hosts = [as_perm(h) for h in (hosts or ("1 2", "1 3 2", "2 1 3", "2 4 1 3", "4 5 1 2 6 3"))]
    want = Counter(delta)
    for m in range(1, max_size + 1):
        for block in permutations(range(1, m + 1)):
            ok = True
            for h in hosts:
                base = cycle_invariant(h)
                for e in range(1, h.n + 1):
                    q = substitute_block(h, e, block)
                    if not is_irreducible(q):
                        continue
                    lam, r = cycle_invariant(q)
                    if r != base[1] or Counter(lam) - Counter(base[0]) != want \
                            or Counter(base[0]) - Counter(lam):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return block
    return None


def _check_added(before: PermLike, after: Permutation, parts: Sequence[int], what: str):
    lam0, r0 = cycle_invariant(before)
    lam1, r1 = cycle_invariant(after)
    want = _desc(list(lam0) + list(parts))
    if (lam1, r1) != (want, r0):
        raise ConstructionError(f"{what}: got {(lam1, r1)}, expected {(want, r0)}")


def attach_Cp(p: PermLike, edge: int, param: int, check: bool = True) -> Permutation:
    q = substitute_block(p, edge, cross_block(param))
    if check:
        _check_added(p, q, cross_delta(param), f"C_{param}")
    return q


def attach_Cpj(p: PermLike, edge: int, param: int, j: int, check: bool = True) -> Permutation:
    q = substitute_block(p, edge, cross_block_j(param, j))
    if check:
        _check_added(p, q, cross_delta(param + j), f"C_{{{param},{j}}}")
    return q


def attach_Cp_pair(p: PermLike, edge: int, p1: int, p2: int, check: bool = True) -> Permutation:
    """Add two even cycles p1+2 and p2+2 (p1 > p2, both even)."""
    if p1 <= p2 or p1 % 2 or p2 % 2 or p2 < 0:
        raise ConstructionError("pair attachment needs even p1 > p2 >= 0")
    p = as_perm(p)
    t = p(edge)
    q = substitute_block(p, edge, cross_block(p1))
    q = substitute_block(q, edge + 1, cross_block(p2))
    # double edge: inside C_p2 on top, inside C_p1 on the bottom
    q = insert_edges(q, 2, t + 2, edge)
    if check:
        _check_added(p, q, (p1 + 2, p2 + 2), f"C_{p1} u C_{p2}")
    return q


# ------------------------------------------------------------ base families

def base_X(p: int, q: int) -> Permutation:
    if p < 0 or q < 0:
        raise ConstructionError("sizes must be nonnegative")
    return Permutation(tuple([1, 2] + [2 + p + j for j in range(1, q + 1)]
                             + [2 + j for j in range(1, p + 1)]))


def base_X3(p: int, q: int, r: int) -> Permutation:
    if min(p, q, r) < 0:
        raise ConstructionError("sizes must be nonnegative")
    return Permutation(tuple([1, 2] + [2 + p + q + j for j in range(1, r + 1)]
                             + [2 + p + j for j in range(1, q + 1)]
                             + [2 + j for j in range(1, p + 1)]))


# the ({2,2,2}, 2) base is printed with nine entries, one more than X_{2,1,3}
X213_PRINTED = Permutation((1, 2, 7, 8, 9, 6, 3, 4, 5))


# ------------------------------------------------------------ exceptional classes

def exceptional_id(n: int) -> Permutation:
    if n < 1:
        raise ConstructionError("id_n needs n >= 1")
    return identity(n)


def exceptional_idp(n: int) -> Permutation:
    """id'_n = 1 2 4 5 ... n 3 (for n = 3 this is the identity)."""
    if n < 3:
        raise ConstructionError("id'_n needs n >= 3")
    return Permutation(tuple([1, 2] + list(range(4, n + 1)) + [3]))


_ID_SIGN = {0: 1, 1: 0, 2: -1, 3: -1, 4: -1, 5: 0, 6: 1, 7: 1}
_IDP_SIGN = {0: 1, 1: 1, 2: 0, 3: -1, 4: -1, 5: -1, 6: 0, 7: 1}


def exceptional_invariant(which: str, n: int) -> InvariantTriple:
    """Closed-form invariant of the Id or Id' class (not computed from a member)."""
    if which in ("id", "Id"):
        if n < 2:
            raise ConstructionError("closed form needs n >= 2")
        lam, r = ((), n - 1) if n % 2 == 0 else (((n - 1) // 2,), (n - 1) // 2)
        return InvariantTriple(lam, r, _ID_SIGN[n % 8], n)
    if which in ("idp", "Id'", "id'"):
        if n < 3:
            raise ConstructionError("Id' needs n >= 3")
        lam = ((n - 2) // 2,) * 2 if n % 2 == 0 else (n - 2,)
        return InvariantTriple(lam, 1, _IDP_SIGN[n % 8], n)
    raise ValueError(f"unknown exceptional class {which!r}")


# ------------------------------------------------------------ valid invariants

def _partitions(total: int, smallest: int = 2, largest: Optional[int] = None):
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for x in range(min(total, largest), smallest - 1, -1):
        for rest in _partitions(total - x, smallest, x):
            yield (x,) + rest


def valid_invariants(n: int) -> list[InvariantTriple]:
    """Invariants the generic rule admits at size n: no part 1, an even number of
    even parts in lambda u {r}, sign 0 exactly when some part is even."""
    out = []
    for r in range(1, n):
        for lam in _partitions(n - 1 - r):
            evens = even_part_count(lam, r)
            if evens % 2:
                continue
            signs = (0,) if evens else (1, -1)
            out.extend(InvariantTriple(lam, r, s, n) for s in signs)
    return out


# ------------------------------------------------------------ I2X builder

@dataclass(frozen=True)
class BuildTrace:
    perm: Permutation
    route: str  # construction, sign-search, search, seeded-base, seed-grow
    base: Optional[Permutation] = None


def validate_request(lam, rank, sgn):
    lam = _desc(int(x) for x in lam)
    rank = int(rank)
    if isinstance(sgn, str):
        sgn = {"+": 1, "-": -1, "0": 0, "+1": 1, "-1": -1}[sgn.strip()]
    sgn = int(sgn)
    if rank < 1 or any(x < 1 for x in lam):
        raise ConstructionError("rank and parts must be positive")
    if 1 in lam:
        raise ConstructionError("parts equal to 1 are outside the classification")
    evens = even_part_count(lam, rank)
    if evens % 2:
        raise ConstructionError("odd number of even parts in lambda and rank: no such class")
    if evens and sgn != 0:
        raise ConstructionError("sign must be 0 when an even part is present")
    if not evens and sgn == 0:
        raise ConstructionError("sign must be +1 or -1 when every part is odd")
    return lam, rank, sgn


def _postcondition(q: Permutation, lam, rank, sgn, sign_cap: int) -> bool:
    n = q.n
    if q(1) != 1 or n < 3 or q(2) != 2:
        return False
    if cycle_invariant(q) != (lam, rank):
        return False
    if q in (exceptional_id(n), exceptional_idp(n)):
        return False
    if not is_shift_irreducible(q):
        return False
    return sign(q, sign_cap) == sgn


def _odd_attachments(parts: Sequence[int]) -> list[int]:
    """Cross parameters adding the odd parts: singles first, then pairs."""
    mult = Counter(parts)
    out = [x - 1 for x in sorted(mult) if mult[x] % 2]
    for x in sorted(mult):
        out.extend([2 * x - 1] * (mult[x] // 2))
    return out


def _even_attachments(parts: Sequence[int]) -> list[tuple]:
    """("C", p) for equal pairs, ("pair", p1, p2) for the rest."""
    mult = Counter(parts)
    out, loose = [], []
    for x in sorted(mult):
        out.extend([("C", 2 * x - 1)] * (mult[x] // 2))
        if mult[x] % 2:
            loose.append(x)
    if len(loose) % 2:
        raise ConstructionError("even parts do not pair up")
    for a, b in zip(loose[1::2], loose[0::2]):
        out.append(("pair", a - 2, b - 2))
    return out


def _widen_pair(base: Permutation, small: int, big: int) -> Optional[Permutation]:
    """Grow one of two equal even cycles of `base` from `small` to `big` with
    parallel double edges inside it, keeping sigma(1) = 1, sigma(2) = 2."""
    lam0, r0 = cycle_invariant(base)
    want = list(lam0)
    want.remove(small)
    want = _desc(want + [big])
    cd = cycle_data(base)
    for c in cd.cycles:
        if c.length != small:
            continue
        for a in c.tops:
            for b in c.bottoms:
                if a < 3 or b < 2:
                    continue
                q = insert_edges(base, big - small, a, b)
                if cycle_invariant(q) == (want, r0) and is_shift_irreducible(q):
                    return q
    return None


def _choose_base(lam, rank):
    """Base permutation and the parts it already carries."""
    odd = sorted(x for x in lam if x % 2)
    even = sorted(x for x in lam if x % 2 == 0)
    if rank % 2:
        if odd and rank in (1, 3):
            x = odd[0]
            b = base_X(1, x - 1) if rank == 1 else base_X3(2, 1, x - 1)
            return b, (x,)
        if rank >= 5:
            return base_X(2, rank - 3), ()
        if not even:
            return None, ()
        pairs = [x for x in even if even.count(x) >= 2]
        x = pairs[0] if pairs else even[0]
        pick = lambda m: base_X(1, 2 * m - 1) if rank == 1 else base_X3(2, 1, 2 * m - 1)
        if pairs:
            return pick(x), (x, x)
        y = even[1]
        b = _widen_pair(pick(x), x, y)
        return b, ((x, y) if b is not None else ())
    m = even[-1]
    if m > rank:
        return base_X(2 * rank - 1, m - rank), (m,)
    if m < rank:
        return base_X(rank - m, 2 * m - 1), (m,)
    if rank > 2:
        return base_X3(rank - 2, 3, rank - 2), (rank,)
    if odd:
        return base_X3(3, odd[0] - 3, 3), (2, odd[0])
    if even.count(2) >= 3:
        return X213_PRINTED, (2, 2, 2)
    return None, ()


def _attach_rest(base: Permutation, lam, used):
    """Attach the parts of lam missing from `used` on the last edge.

    Returns (sigma_1, previous, last_param); last_param is set only when the
    final attachment was a single C_p, the case the sign twin needs.
    """
    extra = Counter(used) - Counter(lam)
    if +extra:
        return None
    rest = list((Counter(lam) - Counter(used)).elements())
    cur, prev, last = base, None, None
    for kind, *args in _even_attachments([x for x in rest if x % 2 == 0]):
        prev, last = cur, None
        cur = attach_Cp(cur, cur.n, args[0]) if kind == "C" else attach_Cp_pair(cur, cur.n, *args)
    for param in _odd_attachments([x for x in rest if x % 2]):
        prev, last = cur, param
        cur = attach_Cp(cur, cur.n, param)
    return cur, prev, last


def _sign_partners(q: Permutation):
    """Permutations with q's cycle invariant built by opposite-sign insertions:
    drop a run of 1 or 3 parallel edges, then put it back next to a consecutive arc."""
    n = q.n
    s = q.images
    seen = set()
    for i in (1, 3):
        for b in range(3, n - i + 2):
            if any(s[b + k - 1] != s[b - 1] + k for k in range(i)):
                continue
            t = s[b - 1]
            keep = [v for k, v in enumerate(s, 1) if not b <= k < b + i]
            tau = Permutation(tuple(v if v < t else v - i for v in keep))
            if not is_irreducible(tau):
                continue
            cd = cycle_data(tau)
            evens = _even_components(cd)
            if len(evens) != 2:
                continue
            to, bo = cd.top_owner(), cd.bottom_owner()
            for alpha in range(3, tau.n + 1):
                for beta in range(2, tau.n + 1):
                    if to[alpha] not in evens or bo[beta] not in evens or to[alpha] == bo[beta]:
                        continue
                    for nb in (consecutive_bottom(tau, beta), _previous_bottom(tau, beta)):
                        if nb is None or nb < 2:
                            continue
                        for cand in opposite_sign_pair(tau, alpha, beta, nb, i):
                            if cand not in seen:
                                seen.add(cand)
                                yield cand


@lru_cache(maxsize=16)
def _standard_pool(n: int):
    rows = np.array([(1, 2) + t for t in permutations(range(3, n + 1))], dtype=np.int64)
    lam, rank, _ = _kernels.batch_cycle_invariants(rows)
    return rows, lam, rank


SEARCH_CAP = 11


def search_i2x(lam, rank, sgn, sign_cap: int = _kernels.ARF_CAP) -> Optional[Permutation]:
    """Lexicographically first non-exceptional I2X permutation with the invariant."""
    lam, rank, sgn = _desc(lam), int(rank), int(sgn)
    n = 1 + rank + sum(lam)
    if n < 3:
        return None
    if n > SEARCH_CAP:
        raise ConstructionError(f"search refused above size {SEARCH_CAP}")
    rows, lams, ranks = _standard_pool(n)
    want = np.zeros(lams.shape[1], dtype=np.int64)
    want[: len(lam)] = lam
    hits = np.nonzero((ranks == rank) & np.all(lams == want[None, :], axis=1))[0]
    for h in hits:
        q = Permutation(tuple(int(v) for v in rows[h]))
        if _postcondition(q, lam, rank, sgn, sign_cap):
            return q
    return None


SEED_CAP = 9


def _seed_targets(lam, rank):
    """Smaller invariants, each component shrunk by an even amount, largest first."""
    comps = [rank] + list(lam)
    mins = [1] + [2 if x % 2 == 0 else 3 for x in lam]
    out = []

    def rec(k, cur):
        if k == len(comps):
            if 1 + sum(cur) <= SEED_CAP:
                out.append(tuple(cur))
            return
        for v in range(comps[k], mins[k] - 1, -2):
            rec(k + 1, cur + [v])
    rec(0, [])
    out.sort(key=lambda c: -sum(c))
    return [(c[1:], c[0]) for c in out]


def _grow(q: Permutation, length: Optional[int], amount: int) -> Optional[Permutation]:
    """Insert `amount` (even) parallel edges inside the rank path (length None)
    or inside a cycle of the given length, which then grows by `amount`.
    Keeps sigma(1) = 1, sigma(2) = 2 and asks for a shift-irreducible result."""
    if q is None or amount == 0:
        return q
    cd = cycle_data(q)
    lam = list(cd.lam)
    if length is None:
        comp, want = cd.rank_path, (cd.lam, cd.rank + amount)
    else:
        comp = min((c for c in cd.cycles if c.length == length), key=lambda c: min(c.bottoms))
        lam.remove(length)
        want = (_desc(lam + [length + amount]), cd.rank)
    for a in comp.tops:
        for b in comp.bottoms:
            if a < 3 or b < 2:
                continue
            cand = insert_edges(q, amount, a, b)
            if cycle_invariant(cand) == want and is_shift_irreducible(cand):
                return cand
    return None


def _seeded(lam, rank, sign_cap):
    """Non-exceptional I2X permutations with cycle invariant (lam, rank), any sign:
    exhaustive search when small, otherwise a searched seed grown by double edges."""
    lam = _desc(lam)
    n = 1 + rank + sum(lam)
    evens = even_part_count(lam, rank)
    signs = (0,) if evens else (1, -1)
    if n <= SEARCH_CAP:
        for s in signs:
            q = search_i2x(lam, rank, s, sign_cap)
            if q is not None:
                yield q
        return
    for seed_lam, seed_rank in _seed_targets(lam, rank):
        seed_d = _desc(seed_lam)
        if even_part_count(seed_d, seed_rank) % 2:
            continue
        seed_signs = (0,) if even_part_count(seed_d, seed_rank) else (1, -1)
        for s in seed_signs:
            q = search_i2x(seed_d, seed_rank, s, sign_cap)
            if q is None:
                continue
            q = _grow(q, None, rank - seed_rank)
            # largest cycles first, so a grown cycle never matches a later length
            for want, have in sorted(zip(lam, seed_lam), key=lambda t: -t[1]):
                q = _grow(q, have, want - have)
            if q is not None:
                yield q


def _finish(cur, prev, last, lam, rank, sgn, sign_cap):
    """sigma_1 or one of its opposite-sign siblings meeting every postcondition."""
    candidates = [cur]
    if sgn and prev is not None and last is not None and last > 2:
        k, j = divmod(last, 4)
        if j < 3 and k > 0:
            candidates.append(attach_Cpj(prev, prev.n, last - (j + 1), j + 1))
    for q in candidates:
        if _postcondition(q, lam, rank, sgn, sign_cap):
            return q, "construction"
    if sgn or cur in (exceptional_idp(cur.n),):
        for q in _sign_partners(cur):
            if _postcondition(q, lam, rank, sgn, sign_cap):
                return q, "sign-search"
    return None, None


def build_i2x_traced(lam, rank, sgn, sign_cap: int = _kernels.ARF_CAP,
                     allow_search: bool = True) -> BuildTrace:
    lam, rank, sgn = validate_request(lam, rank, sgn)
    n = 1 + rank + sum(lam)
    if n > sign_cap:
        raise ConstructionError(f"size {n} exceeds the brute-force sign cap {sign_cap}")
    base, used = _choose_base(lam, rank)
    if base is not None:
        built = _attach_rest(base, lam, used)
        if built is not None:
            q, route = _finish(*built, lam, rank, sgn, sign_cap)
            if q is not None:
                return BuildTrace(q, route, base)
    if not allow_search:
        raise ConstructionError(f"construction failed for {InvariantTriple(lam, rank, sgn, n).short()}")
    if n <= SEARCH_CAP:
        q = search_i2x(lam, rank, sgn, sign_cap)
        if q is not None:
            return BuildTrace(q, "search")
        raise NoI2XError(f"no non-exceptional I2X permutation with invariant "
                         f"{InvariantTriple(lam, rank, sgn, n).short()} at size {n}")
    # the formula base missed a postcondition: replace it and attach the rest again
    if base is not None:
        for alt in _seeded(used, rank, sign_cap):
            built = _attach_rest(alt, lam, used)
            if built is None:
                continue
            q, _ = _finish(*built, lam, rank, sgn, sign_cap)
            if q is not None:
                return BuildTrace(q, "seeded-base", alt)
    for q0 in _seeded(lam, rank, sign_cap):
        q, _ = _finish(q0, None, None, lam, rank, sgn, sign_cap)
        if q is not None:
            return BuildTrace(q, "seed-grow", q0)
    raise ConstructionError(f"construction failed for {InvariantTriple(lam, rank, sgn, n).short()}")


def build_i2x(lam, rank, sgn, sign_cap: int = _kernels.ARF_CAP) -> Permutation:
    """A standard sigma with sigma(2) = 2, the requested invariant, a
    shift-irreducible standard family, and outside Id_n / Id'_n."""
    return build_i2x_traced(lam, rank, sgn, sign_cap).perm
