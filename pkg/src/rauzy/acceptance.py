"""The twelve acceptance checks, each returning a Verdict.

Shared by tests/test_acceptance.py and the ``verify-all`` command.
"""

from __future__ import annotations

import random
import time
from typing import Callable

import numpy as np

from . import _kernels
from .arf_prover import MarkedPermutation, brute_force_identity, check_identity, load_fixtures, q_matrix
from .constructions import (ConstructionError, NoI2XError, build_i2x, exceptional_id, exceptional_idp,
                            exceptional_invariant, insert_edges, insert_edges_by_label,
                            predict_double_edge, predict_one_edge, valid_invariants)
from .dynamics import (boost_step, is_proper, is_shift_irreducible, monodromy_group,
                       MonodromyLimitError, reduce)
from .explorer import KNOWN_CENSUS, Verdict, enumerate_classes, verify_arf_theorem
from .invariants import abar, chi_restricted, cycle_data, cycle_invariant, invariant_triple
from .labelling import (Label, canonical_labelling, count_labellings, enumerate_labellings,
                        labelled_L, labelled_R, verify_all_properties)
from .perm import Permutation, apply_L, apply_R, is_irreducible

__all__ = ["CRITERIA", "run_all", "random_irreducible"]


def random_irreducible(n: int, rng: random.Random) -> Permutation:
    while True:
        s = list(range(1, n + 1))
        rng.shuffle(s)
        p = Permutation(tuple(s))
        if is_irreducible(p):
            return p


def _irreducibles(n: int):
    perms = _kernels.all_permutations(n)
    for row in perms[_kernels.irreducible_mask(perms)]:
        yield Permutation(tuple(int(x) for x in row))


def census(max_n: int = 8, **_) -> Verdict:
    bad = []
    for n in range(4, min(max_n, 8) + 1):
        rep = enumerate_classes(n)
        bad += [f"n={n}: {v.name}: {v.details}" for v in rep.verdicts if not v.ok]
    return Verdict("1 class census n=4..8 equals the small-size table", not bad, bad)


def exceptional_tables(**_) -> Verdict:
    bad = []
    for n in range(3, 13):
        for which, p in (("Id", exceptional_id(n)), ("Id'", exceptional_idp(n))):
            got = invariant_triple(p).key()
            want = exceptional_invariant(which, n).key()
            if got != want:
                bad.append(f"{which}_{n}: {got} != {want}")
    return Verdict("2 exceptional classes Id_n, Id'_n, 3<=n<=12", not bad, bad)


def worked_figures(**_) -> Verdict:
    bad = []
    if cycle_invariant([4, 5, 1, 2, 6, 3]) != ((2, 2), 1):
        bad.append("cycle invariant of 4 5 1 2 6 3")
    s, subset = [2, 5, 1, 4, 7, 8, 3, 9, 6], [1, 2, 6, 8, 9]
    chi = chi_restricted(s, subset)
    if chi != 8 or (-1) ** (len(subset) + chi) != -1:
        bad.append(f"subset term: chi={chi}")
    m = MarkedPermutation(1, 4, ((0, 1, 0, 1), (0, 2, 3, 1), (0, 3, 1, 1), (1, 1, 4, 1), (1, 2, 2, 1)))
    row = q_matrix(m)[m.edges.index((1, 2, 2, 1))].tolist()
    if row != [1, 1, 0, 0, 0, 0, 0, 1, 1, 1]:
        bad.append(f"Q row {row}")
    return Verdict("3 worked figures (cycle invariant, subset term, Q row)", not bad, bad)


def arf_values(max_n: int = 8, **_) -> Verdict:
    bad = []
    for n in range(2, max_n + 1):
        v = verify_arf_theorem(n)
        if not v.ok:
            bad += v.details
    return Verdict(f"4 Arf value dichotomy for every irreducible n=2..{max_n}", not bad, bad)


def invariance(seed: int = 0, words: int = 1000, length: int = 50, **_) -> Verdict:
    rng = random.Random(seed)
    bad = []
    for _w in range(words):
        n = rng.randint(3, 12)
        p = random_irreducible(n, rng)
        path = [p]
        for _ in range(length):
            p = apply_L(p) if rng.random() < 0.5 else apply_R(p)
            path.append(p)
        arr = np.array([q.images for q in path], dtype=np.int64)
        ab = _kernels.batch_abar(arr)
        lam, rank, _ = _kernels.batch_cycle_invariants(arr)
        if len(set(ab.tolist())) != 1 or len({(tuple(r), k) for r, k in zip(lam.tolist(), rank.tolist())}) != 1:
            bad.append(f"word from {path[0]} changes an invariant")
    return Verdict(f"5 invariants constant along {words} random words of length {length}", not bad, bad)


def prover_fixtures(seed: int = 0, hosts: int = 50, **_) -> Verdict:
    rng = random.Random(seed)
    bad = []
    fixtures = load_fixtures()
    for name, spec in fixtures.items():
        if not check_identity(spec):
            bad.append(f"{name}: not proved")
        pert = check_identity(spec.perturbed())
        if pert.holds or pert.witness is None:
            bad.append(f"{name}: perturbed copy still passes")
        for _ in range(hosts):
            n = rng.randint(max(spec.k, spec.l) + 1, 7)
            host = random_irreducible(n, rng) if rng.random() < 0.5 else Permutation(tuple(rng.sample(range(1, n + 1), n)))
            bs = sorted(rng.sample(range(1, n), spec.k))
            ts = sorted(rng.sample(range(1, n), spec.l))
            if brute_force_identity(spec, host, bs, ts) != 0:
                bad.append(f"{name}: fails on host {host} slots {bs} {ts}")
                break
    return Verdict(f"6 Arf identity fixtures ({len(fixtures)}): proved, perturbations refuted, "
                   f"{hosts} brute-force hosts each", not bad, bad)


def rank_corner_edges(seed: int = 0, samples: int = 300, **_) -> Verdict:
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        tau = random_irreducible(rng.randint(2, 7), rng)
        lab = canonical_labelling(tau)
        r = cycle_data(tau).rank
        base = abar(tau)
        for i in range(r + 1):
            q = insert_edges_by_label(tau, lab, 1, Label("t", 0), Label("b", r - i))
            want = 0 if i % 2 == 0 else 2 * base
            if abar(q) != want:
                bad.append(f"{tau} i={i}: {abar(q)} != {want}")
    return Verdict("7 corner-to-rank edge: Abar is 0 or twice Abar(tau) by parity of i", not bad, bad)


def edge_insertion(seed: int = 0, cases: int = 2000, **_) -> Verdict:
    rng = random.Random(seed)
    bad = []
    for count, predict in ((1, predict_one_edge), (2, predict_double_edge)):
        done = 0
        while done < cases:
            n = rng.randint(2, 10 - count)
            p = random_irreducible(n, rng)
            alpha, beta = rng.randint(1, n), rng.randint(1, n)
            pred = predict(cycle_data(p), alpha, beta)
            q = insert_edges(p, count, alpha, beta)
            if not pred.covered or not is_irreducible(q):
                continue
            done += 1
            got = cycle_invariant(q)
            if got != pred.invariant():
                bad.append(f"{count} edge(s) {p} a={alpha} b={beta}: {got} != {pred.invariant()}")
    return Verdict(f"8 one- and two-edge insertion predictors on {cases} covered irreducible cases each", not bad, bad)


def labelling_counts(max_n: int = 7, **_) -> Verdict:
    bad = []
    for n in range(2, max_n + 1):
        for p in _irreducibles(n):
            labs = enumerate_labellings(p)
            if len(labs) != count_labellings(p) or not all(verify_all_properties(p, lab) for lab in labs):
                bad.append(f"{p}: {len(labs)} vs {count_labellings(p)}")
    return Verdict(f"9 labelling counts, every irreducible n<={max_n}", not bad, bad)


def monodromy(max_n: int = 7, limit: int = 2 * 10 ** 6, **_) -> Verdict:
    bad, notes = [], []
    for n in range(3, max_n + 1):
        for c in enumerate_classes(n).classes:
            try:
                rep = monodromy_group(c.rep, limit=limit)
            except MonodromyLimitError:
                notes.append(f"skipped (state limit) {c.rep}")
                continue
            line = (f"n={n} {c.invariant.short()} {c.tag or ('λ∋1' if c.has_one else '')}: "
                    f"group {'ok' if rep.group_matches else 'differs'}, "
                    f"2-point {'ok' if rep.two_point_matches else 'differs'}")
            if c.tag or c.has_one:
                notes.append("carved out: " + line)
            elif not (rep.group_matches and rep.two_point_matches):
                bad.append(line)
    return Verdict("10 labelling monodromy equals the generated group, 2-point split, n<=7",
                   not bad, bad + notes)


def _absent(n: int) -> set:
    if n not in KNOWN_CENSUS:
        return set()
    return {t.short() for t in valid_invariants(n)} - set(KNOWN_CENSUS[n][2])


def i2x_builder(max_size: int = 10, **_) -> Verdict:
    bad = []
    built = 0
    for n in range(3, max_size + 1):
        skip = _absent(n)
        for t in valid_invariants(n):
            try:
                q = build_i2x(t.lam, t.rank, t.sign)
            except NoI2XError:
                if t.short() not in skip:
                    bad.append(f"{t.short()} n={n}: no I2X found")
                continue
            except ConstructionError as e:
                bad.append(f"{t.short()} n={n}: {e}")
                continue
            if t.short() in skip:
                bad.append(f"{t.short()} n={n}: built {q} for an invariant outside the census")
                continue
            built += 1
            ok = (invariant_triple(q).key() == t.key() and is_shift_irreducible(q)
                  and q != exceptional_id(n) and q != exceptional_idp(n) and q(1) == 1 and q(2) == 2)
            if not ok:
                bad.append(f"{t.short()} n={n}: {q} fails a postcondition")
    return Verdict(f"11 I2X builder, {built} valid invariants n<={max_size}", not bad, bad)


def boosted_dynamics(max_n: int = 7, depth: int = 6, **_) -> Verdict:
    """Every word of length <= depth from every proper one-gray-edge host:
    reduction commutes with boosting, gray labels are preserved. Checked
    stepwise along the word tree; a state is re-expanded only when reached
    with more remaining depth than before."""
    bad = []
    starts = 0
    for n in range(3, max_n + 1):
        for host in _irreducibles(n):
            for g in range(1, n + 1):
                if not is_proper(host, {g}):
                    continue
                rp = reduce(host, {g})
                if not is_irreducible(rp.reduced):
                    continue
                starts += 1
                tau = rp.reduced
                lab = canonical_labelling(tau)
                best: dict = {}
                stack = [(host, g, tau, lab, depth)]
                while stack:
                    h, e, t, lb, left = stack.pop()
                    key = (h.images, e, lb.pi_b)
                    if best.get(key, -1) >= left:
                        continue
                    best[key] = left
                    if left == 0:
                        continue
                    before = _gray_label(reduce(h, {e}), e, lb)
                    for letter in "LR":
                        h2, tr, _ = boost_step(h, {0: e}, letter, 4 * n * n)
                        e2 = tr[0]
                        t2, lb2 = (labelled_L if letter == "L" else labelled_R)(t, lb, check=False)
                        rp2 = reduce(h2, {e2})
                        if rp2.reduced != t2:
                            bad.append(f"{h} gray {e} {letter}: reduction {rp2.reduced} != {t2}")
                        elif _gray_label(rp2, e2, lb2) != before:
                            bad.append(f"{h} gray {e} {letter}: gray label moved")
                        else:
                            stack.append((h2, e2, t2, lb2, left - 1))
                    if len(bad) > 10:
                        return Verdict("12 boosted dynamics", False, bad)
    return Verdict(f"12 boosted dynamics: {starts} proper one-gray-edge hosts n<={max_n}, "
                   f"words up to length {depth}", not bad, bad)


def _gray_label(rp, e, lab):
    arcs = rp.gray_arcs[e]
    return None if arcs is None else (lab.top(arcs[0]), lab.bottom(arcs[1]))


CRITERIA: list[tuple[str, Callable[..., Verdict]]] = [
    ("census", census), ("exceptional", exceptional_tables), ("figures", worked_figures),
    ("arf-values", arf_values), ("invariance", invariance), ("prover", prover_fixtures),
    ("rank-corner", rank_corner_edges), ("edge-insertion", edge_insertion),
    ("labelling-counts", labelling_counts), ("monodromy", monodromy),
    ("i2x", i2x_builder), ("boost", boosted_dynamics),
]


def run_all(max_n: int = 8, echo: Callable[[str], None] = print) -> list[Verdict]:
    """max_n bounds the exhaustive census and Arf sweeps; the other checks use their own sizes."""
    out = []
    for name, fn in CRITERIA:
        t0 = time.perf_counter()
        v = fn(max_n=max_n) if name in ("census", "arf-values") else fn()
        echo(f"{v.line()}  ({time.perf_counter() - t0:.1f}s)")
        for d in v.details[:10] if not v.ok else []:
            echo(f"    {d}")
        out.append(v)
    return out
