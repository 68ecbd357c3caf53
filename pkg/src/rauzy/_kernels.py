"""Hot loops, each with a numba and a pure-numpy implementation.

Set RAUZY_DISABLE_NUMBA=1 to force the numpy path (also used when numba is
missing). Both paths return identical results; tests compare them directly.

Conventions: permutations are int64 arrays of 1-based images.
"""

from __future__ import annotations

import math
import os
from itertools import permutations

import numpy as np

_FLAG = os.environ.get("RAUZY_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

try:
    if not NUMBA_REQUESTED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

ARF_CAP = 28
_LOW_BITS = 20


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def noncross_masks(images: np.ndarray) -> np.ndarray:
    """nc[k] has bit j set iff edges j and k (0-based) do not cross."""
    s = np.asarray(images, dtype=np.int64)
    n = s.shape[0]
    idx = np.arange(n)
    same = (idx[:, None] < idx[None, :]) == (s[:, None] < s[None, :])
    np.fill_diagonal(same, False)
    weights = np.left_shift(np.int64(1), idx.astype(np.int64))
    return (same * weights[None, :]).sum(axis=1).astype(np.int64)


# ---------------------------------------------------------------- Arf sums

@njit(cache=True)
def _popparity(x):
    p = 0
    while x:
        x &= x - 1
        p ^= 1
    return p


@njit(cache=True)
def _arf_gray_numba(nc, n):
    # chi parity is updated by the parity of (current subset & nc[b])
    mask = 0
    chi = 0
    size = 0
    a = 1
    abar = 1
    total = 1 << n
    for g in range(1, total):
        b = 0
        t = g
        while (t & 1) == 0:
            t >>= 1
            b += 1
        chi ^= _popparity(mask & nc[b])
        mask ^= 1 << b
        size ^= 1
        if chi:
            a -= 1
        else:
            a += 1
        if chi ^ size:
            abar -= 1
        else:
            abar += 1
    return a, abar


def _arf_numpy(nc: np.ndarray, n: int) -> tuple[int, int]:
    low = min(n, _LOW_BITS)
    # parities of chi and |I| over all subsets of the low edges, by doubling
    chi = np.zeros(1, dtype=np.uint8)
    card = np.zeros(1, dtype=np.uint8)
    for k in range(low):
        ids = np.arange(chi.shape[0], dtype=np.int64)
        lowmask = np.int64(nc[k] & ((1 << low) - 1))
        extra = (np.bitwise_count(ids & lowmask) & 1).astype(np.uint8)
        chi = np.concatenate([chi, chi ^ extra])
        card = np.concatenate([card, card ^ 1])
    ids = np.arange(chi.shape[0], dtype=np.int64)
    a = abar = 0
    high = n - low
    for h in range(1 << high):
        members = [low + t for t in range(high) if (h >> t) & 1]
        hmask = sum(1 << m for m in members)
        chi_h = 0
        cross = 0
        for m in members:
            chi_h ^= bin(int(nc[m]) & hmask).count("1") & 1
            cross ^= int(nc[m]) & ((1 << low) - 1)
        mixed = (np.bitwise_count(ids & np.int64(cross)) & 1).astype(np.uint8)
        par = chi ^ mixed ^ np.uint8(chi_h)
        sizepar = card ^ np.uint8(len(members) & 1)
        a += int(chi.shape[0] - 2 * int(par.sum()))
        b = par ^ sizepar
        abar += int(chi.shape[0] - 2 * int(b.sum()))
    return a, abar


def arf_sums(images, cap: int = ARF_CAP) -> tuple[int, int]:
    """(A, Abar) summed over all 2^n edge subsets."""
    s = np.asarray(images, dtype=np.int64)
    n = int(s.shape[0])
    if n > cap:
        raise ValueError(f"size {n} exceeds the Arf cap {cap}")
    nc = noncross_masks(s)
    if HAVE_NUMBA:
        a, abar = _arf_gray_numba(nc, n)
        return int(a), int(abar)
    return _arf_numpy(nc, n)


@njit(cache=True)
def _batch_abar_numba(perms):
    m, n = perms.shape
    out = np.empty(m, dtype=np.int64)
    nc = np.zeros(n, dtype=np.int64)
    for row in range(m):
        for k in range(n):
            acc = 0
            for j in range(n):
                if j != k and ((j < k) == (perms[row, j] < perms[row, k])):
                    acc |= 1 << j
            nc[k] = acc
        out[row] = _arf_gray_numba(nc, n)[1]
    return out


def batch_abar(perms: np.ndarray) -> np.ndarray:
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if perms.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if HAVE_NUMBA:
        return _batch_abar_numba(perms)
    n = perms.shape[1]
    # all subsets at once: chi parity via doubling, vectorised over rows
    m = perms.shape[0]
    idx = np.arange(n)
    same = (idx[None, :, None] < idx[None, None, :]) == (perms[:, :, None] < perms[:, None, :])
    same[:, idx, idx] = False
    weights = np.left_shift(np.int64(1), idx.astype(np.int64))
    nc = (same * weights[None, None, :]).sum(axis=2)
    chi = np.zeros((m, 1), dtype=np.uint8)
    card = np.zeros(1, dtype=np.uint8)
    for k in range(n):
        ids = np.arange(chi.shape[1], dtype=np.int64)
        extra = (np.bitwise_count(ids[None, :] & nc[:, k:k + 1]) & 1).astype(np.uint8)
        chi = np.concatenate([chi, chi ^ extra], axis=1)
        card = np.concatenate([card, card ^ 1])
    par = chi ^ card[None, :]
    return (chi.shape[1] - 2 * par.sum(axis=1, dtype=np.int64)).astype(np.int64)


# ------------------------------------------------------------ arc cycles

@njit(cache=True)
def _arc_walk_numba(s):
    n = s.shape[0]
    inv = np.empty(n + 1, dtype=np.int64)
    for i in range(n):
        inv[s[i]] = i + 1
    cid = np.full(n + 1, -1, dtype=np.int64)
    order = np.zeros(n + 1, dtype=np.int64)
    length = np.zeros(n + 1, dtype=np.int64)
    mark = -1
    mark_pos = -1
    ncyc = 0
    # rank path first: from top arc 1 until bottom arc n
    for start in range(1, n + 1):
        if cid[start] != -1:
            continue
        c = ncyc
        ncyc += 1
        a = start
        k = 0
        while True:
            cid[a] = c
            order[a] = k
            k += 1
            beta = inv[a]
            if beta == n:
                break
            v = s[beta]
            if v == n:
                mark = c
                mark_pos = k
                a = s[0] + 1
            else:
                a = v + 1
            if a == start:
                break
        length[c] = k
    return cid, order, length[:ncyc], mark, mark_pos


def _arc_walk_numpy(s):
    n = s.shape[0]
    inv = np.empty(n + 1, dtype=np.int64)
    inv[s] = np.arange(1, n + 1)
    cid = np.full(n + 1, -1, dtype=np.int64)
    order = np.zeros(n + 1, dtype=np.int64)
    lengths = []
    mark = mark_pos = -1
    s0 = int(s[0])
    for start in range(1, n + 1):
        if cid[start] != -1:
            continue
        c = len(lengths)
        a, k = start, 0
        while True:
            cid[a] = c
            order[a] = k
            k += 1
            beta = int(inv[a])
            if beta == n:
                break
            v = int(s[beta])
            if v == n:
                mark, mark_pos = c, k
                a = s0 + 1
            else:
                a = v + 1
            if a == start:
                break
        lengths.append(k)
    return cid, order, np.asarray(lengths, dtype=np.int64), mark, mark_pos


def arc_walk(images):
    """Walk the doubled-edge construction along top arcs.

    Top arc a leads to bottom arc beta = sigma^-1(a), which leads to top arc
    sigma(beta+1)+1, or to sigma(1)+1 through the -1 mark when
    sigma(beta+1) = n. Component 0 is the rank path (starts at the extra top
    arc 1, ends at the extra bottom arc n).

    Returns (cid, order, lengths, mark, mark_pos): cid[a], order[a] give the
    component and step index of top arc a (index 0 unused); lengths counts
    top arcs per component; mark is the component crossing the -1 mark and
    mark_pos the number of top arcs visited before crossing it.
    """
    s = np.ascontiguousarray(images, dtype=np.int64)
    if HAVE_NUMBA:
        cid, order, lengths, mark, pos = _arc_walk_numba(s)
        return cid, order, lengths, int(mark), int(pos)
    return _arc_walk_numpy(s)


@njit(cache=True)
def _batch_cycle_numba(perms, width):
    m, n = perms.shape
    lam = np.zeros((m, width), dtype=np.int64)
    rank = np.zeros(m, dtype=np.int64)
    htype = np.zeros(m, dtype=np.bool_)
    for row in range(m):
        cid, order, length, mark, pos = _arc_walk_numba(perms[row])
        rank[row] = length[0] - 1
        htype[row] = mark == 0
        ls = np.sort(length[1:])[::-1]
        for t in range(ls.shape[0]):
            lam[row, t] = ls[t]
    return lam, rank, htype


def batch_cycle_invariants(perms: np.ndarray):
    """Cycle invariants of many permutations.

    Returns (lam, rank, htype): lam is zero-padded, sorted descending.
    """
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    m, n = perms.shape
    width = max(1, n)
    if HAVE_NUMBA:
        return _batch_cycle_numba(perms, width)
    lam = np.zeros((m, width), dtype=np.int64)
    rank = np.zeros(m, dtype=np.int64)
    htype = np.zeros(m, dtype=bool)
    for row in range(m):
        _, _, length, mark, _ = _arc_walk_numpy(perms[row])
        rank[row] = length[0] - 1
        htype[row] = mark == 0
        ls = np.sort(length[1:])[::-1]
        lam[row, : ls.shape[0]] = ls
    return lam, rank, htype


# ------------------------------------------------- whole-space enumeration

def all_permutations(n: int) -> np.ndarray:
    """All n! permutations in lexicographic order (row index = Lehmer rank)."""
    if n > 10:
        raise ValueError("refusing to materialise more than 10! permutations")
    out = np.array(list(permutations(range(1, n + 1))), dtype=np.int64)
    return out.reshape(math.factorial(n), n)


def irreducible_mask(perms: np.ndarray) -> np.ndarray:
    m, n = perms.shape
    if n == 1:
        return np.ones(m, dtype=bool)
    pmin = np.minimum.accumulate(perms, axis=1)[:, : n - 1]
    ks = np.arange(1, n)
    return ~np.any(pmin >= (n - ks + 1)[None, :], axis=1)


def batch_L(perms: np.ndarray) -> np.ndarray:
    n = perms.shape[1]
    a = perms[:, :1]
    return np.where(perms <= a, perms, np.where(perms < n, perms + 1, a + 1))


def batch_R(perms: np.ndarray) -> np.ndarray:
    m, n = perms.shape
    j = np.argmax(perms == n, axis=1)  # 0-based position of n
    cols = np.arange(n)[None, :]
    src = np.where(cols < j[:, None] - 1, cols + 1, cols)
    src = np.where(cols == j[:, None] - 1, 0, src)
    return np.take_along_axis(perms, src, axis=1)


def lehmer_rank(perms: np.ndarray) -> np.ndarray:
    m, n = perms.shape
    fac = np.array([math.factorial(n - 1 - i) for i in range(n)], dtype=np.int64)
    smaller = (perms[:, None, :] < perms[:, :, None])
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    counts = (smaller & upper[None]).sum(axis=2)
    return counts @ fac


@njit(cache=True)
def _components_numba(nbr, alive):
    m = nbr.shape[0]
    comp = np.full(m, -1, dtype=np.int64)
    stack = np.empty(m, dtype=np.int64)
    c = 0
    for s in range(m):
        if not alive[s] or comp[s] != -1:
            continue
        top = 0
        stack[0] = s
        comp[s] = c
        top = 1
        while top:
            top -= 1
            x = stack[top]
            for t in range(nbr.shape[1]):
                y = nbr[x, t]
                if comp[y] == -1:
                    comp[y] = c
                    stack[top] = y
                    top += 1
        c += 1
    return comp


def _components_numpy(nbr, alive):
    m = nbr.shape[0]
    lab = np.arange(m)
    while True:
        new = lab.copy()
        for t in range(nbr.shape[1]):
            np.minimum.at(new, nbr[:, t], lab)
            new = np.minimum(new, lab[nbr[:, t]])
        new = new[new]
        if np.array_equal(new, lab):
            break
        lab = new
    comp = np.full(m, -1, dtype=np.int64)
    roots = np.unique(lab[alive])
    comp[alive] = np.searchsorted(roots, lab[alive])
    return comp


def orbit_components(n: int):
    """Label the L/R orbits of all irreducible permutations of size n.

    Returns (perms, alive, comp): perms are all n! permutations by rank,
    alive marks the irreducible ones, comp[rank] is an orbit index (-1 for
    reducible), numbered by the smallest member in lexicographic order.
    """
    perms = all_permutations(n)
    alive = irreducible_mask(perms)
    m = perms.shape[0]
    nbr = np.tile(np.arange(m)[:, None], (1, 2))
    live = perms[alive]
    nbr[alive, 0] = lehmer_rank(batch_L(live))
    nbr[alive, 1] = lehmer_rank(batch_R(live))
    nbr = np.ascontiguousarray(nbr, dtype=np.int64)
    if HAVE_NUMBA:
        comp = _components_numba(nbr, alive)
    else:
        comp = _components_numpy(nbr, alive)
    return perms, alive, comp
