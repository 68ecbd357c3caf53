"""Exhaustive class census for small n and the classification checks."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .constructions import exceptional_id, exceptional_idp, valid_invariants
from .invariants import InvariantTriple, even_part_count, expected_abar
from .perm import Permutation

__all__ = [
    "ClassRow", "ClassReport", "Verdict", "enumerate_classes",
    "verify_classification", "verify_arf_theorem", "KNOWN_CENSUS",
    "census_row", "CLASS_CAP", "ExplorerError",
]

CLASS_CAP = 9


class ExplorerError(ValueError):
    pass


# Invariants of the classes with no part 1 in lambda, n = 4..8:
# (Id column, Id' column, the others).
KNOWN_CENSUS = {
    4: (["∅|3-"], [], []),
    5: (["2|2"], ["3|1-"], []),
    6: (["∅|5+"], ["22|1"], ["∅|5-"]),
    7: (["3|3+"], ["5|1+"], ["2|4", "4|2", "3|3-", "5|1-"]),
    8: (["∅|7+"], ["33|1+"], ["22|3", "32|2", "42|1", "33|1-", "∅|7+", "∅|7-"]),
}


@dataclass(frozen=True)
class ClassRow:
    rep: Permutation
    size: int
    invariant: InvariantTriple
    tag: str  # "Id", "Id'" or ""
    has_one: bool

    def to_json(self) -> dict:
        return {"representative": self.rep.to_text(), "size": self.size,
                "invariant": self.invariant.short(), "lambda": list(self.invariant.lam),
                "rank": self.invariant.rank, "sign": self.invariant.sign,
                "exceptional": self.tag or None, "lambda_has_one": self.has_one}


@dataclass
class Verdict:
    name: str
    ok: bool
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}"


@dataclass
class ClassReport:
    n: int
    classes: list[ClassRow]
    verdicts: list[Verdict]
    irreducible_count: int

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def to_json(self) -> dict:
        return {"n": self.n, "irreducible": self.irreducible_count,
                "classes": [c.to_json() for c in self.classes],
                "verdicts": {v.name: {"ok": v.ok, "details": v.details} for v in self.verdicts}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def text(self) -> str:
        """One line per class, then the census in the 'lambda|r s' syntax."""
        out = [f"n={self.n}: {len(self.classes)} classes, {self.irreducible_count} irreducible permutations"]
        w = max(len(c.rep.to_text()) for c in self.classes)
        for c in self.classes:
            flags = " ".join(x for x in (c.tag, "λ∋1" if c.has_one else "") if x)
            out.append(f"  {c.rep.to_text():<{w}}  {c.size:>7}  {c.invariant.short():<10} {flags}".rstrip())
        idc, idpc, rest = census_row(self)
        out.append(f"census {self.n} | {' '.join(idc) or '-'} | {' '.join(idpc) or '-'} | {' '.join(rest)}".rstrip())
        out.extend(v.line() for v in self.verdicts)
        return "\n".join(out)


def census_row(report: ClassReport) -> tuple[list[str], list[str], list[str]]:
    """The report's classes without parts 1, split like KNOWN_CENSUS."""
    cols: dict[str, list[str]] = {"Id": [], "Id'": [], "": []}
    for c in report.classes:
        if not c.has_one:
            cols[c.tag].append(c.invariant.short())
    return cols["Id"], cols["Id'"], cols[""]


def _class_invariants(perms: np.ndarray):
    lam, rank, _ = _kernels.batch_cycle_invariants(perms)
    ab = _kernels.batch_abar(perms)
    return lam, rank, ab


def _triple(lam_row, rank: int, ab: int, n: int) -> InvariantTriple:
    lam = tuple(int(x) for x in lam_row if x)
    ab = int(ab)
    return InvariantTriple(lam, int(rank), (ab > 0) - (ab < 0), n)


def enumerate_classes(n: int, cap: int = CLASS_CAP) -> ClassReport:
    if n < 2:
        raise ExplorerError("sizes below 2 have no dynamics")
    if n > cap:
        raise ExplorerError(f"n={n} exceeds the enumeration cap {cap}")
    perms, alive, comp = _kernels.orbit_components(n)
    idx = np.flatnonzero(alive)
    live = perms[idx]
    lam, rank, ab = _class_invariants(live)
    comps = comp[idx]
    keys = [(tuple(lam[r]), int(rank[r]), int(np.sign(ab[r]))) for r in range(len(idx))]
    per_class: dict[int, Counter] = defaultdict(Counter)
    first: dict[int, int] = {}
    for r, c in enumerate(comps):
        per_class[int(c)][keys[r]] += 1
        first.setdefault(int(c), r)
    id_comp = int(comp[_rank_of(exceptional_id(n), n)])
    idp = exceptional_idp(n)
    idp_comp = int(comp[_rank_of(idp, n)]) if n >= 3 else -2
    rows, constant = [], []
    for c in sorted(per_class, key=lambda c: first[c]):
        cnt = per_class[c]
        r = first[c]
        trip = _triple(lam[r], rank[r], ab[r], n)
        if len(cnt) != 1:
            constant.append(f"class of {Permutation(tuple(live[r])).to_text()} carries {len(cnt)} invariants")
        tag = "Id" if c == id_comp else ("Id'" if c == idp_comp else "")
        rows.append(ClassRow(Permutation(tuple(int(x) for x in live[r])), sum(cnt.values()), trip, tag,
                             1 in trip.lam))
    report = ClassReport(n, rows, [], len(idx))
    report.verdicts.append(Verdict("invariants constant on classes", not constant, constant))
    report.verdicts.append(_rule_verdict(report))
    if n in KNOWN_CENSUS:
        report.verdicts.append(_census_verdict(report))
    return report


def _rank_of(p: Permutation, n: int) -> int:
    return int(_kernels.lehmer_rank(np.array([p.images], dtype=np.int64))[0])


def _rule_counts(n: int) -> Counter:
    return Counter((t.lam, t.rank) for t in valid_invariants(n))


def _rule_verdict(report: ClassReport) -> Verdict:
    """Non-exceptional classes without parts 1: per (lambda, r), the count the
    generic rule gives (n >= 9), or at most that count (n <= 8); signs must be
    0 iff some part is even, and the two classes of an all-odd invariant must
    have opposite signs."""
    n = report.n
    rule = _rule_counts(n)
    seen: dict[tuple, list[int]] = defaultdict(list)
    for c in report.classes:
        if c.tag or c.has_one:
            continue
        seen[(c.invariant.lam, c.invariant.rank)].append(c.invariant.sign)
    bad = []
    for key in sorted(set(rule) | set(seen)):
        signs = seen.get(key, [])
        want = rule.get(key, 0)
        lam, r = key
        if len(signs) > want or (n >= 9 and len(signs) != want):
            bad.append(f"{InvariantTriple(lam, r, 0).short()}: {len(signs)} classes, rule says {want}")
            continue
        evens = even_part_count(lam, r)
        if evens and any(signs):
            bad.append(f"{key}: nonzero sign with even parts")
        if not evens and (0 in signs or len(set(signs)) != len(signs)):
            bad.append(f"{key}: signs {signs} not distinct and nonzero")
    return Verdict("class count per invariant follows the even-part rule", not bad, bad)


def _census_verdict(report: ClassReport) -> Verdict:
    got = census_row(report)
    want = KNOWN_CENSUS[report.n]
    bad = []
    for name, g, w in zip(("Id", "Id'", "others"), got, want):
        if Counter(g) != Counter(w):
            bad.append(f"{name}: got {sorted(g)}, expected {sorted(w)}")
    return Verdict("census equals the small-size table", not bad, bad)


def verify_classification(n: int, cap: int = CLASS_CAP) -> list[Verdict]:
    """Same invariant <=> same class, with the carve-outs reported."""
    report = enumerate_classes(n, cap)
    out = list(report.verdicts)
    by_inv: dict[tuple, list[ClassRow]] = defaultdict(list)
    for c in report.classes:
        if not c.tag and not c.has_one:
            by_inv[c.invariant.key()].append(c)
    clash = [f"{k}: {len(v)} classes" for k, v in by_inv.items() if len(v) > 1]
    out.append(Verdict("same invariant implies same class", not clash, clash))
    carve = [f"{c.tag or 'λ∋1'} {c.rep.to_text()} {c.invariant.short()} size {c.size}"
             for c in report.classes if c.tag or c.has_one]
    out.append(Verdict("carved out (exceptional or part 1), listed", True, carve))
    return out


def verify_arf_theorem(n: int, cap: int = CLASS_CAP) -> Verdict:
    """Even number of even parts in lambda u {r}, and Abar in {0, ±2^((n+l)/2)}
    as the parity dictates, for every irreducible permutation of size n."""
    if n > cap:
        raise ExplorerError(f"n={n} exceeds the cap {cap}")
    perms = _kernels.all_permutations(n)
    live = perms[_kernels.irreducible_mask(perms)]
    lam, rank, ab = _class_invariants(live)
    bad = []
    for r in range(live.shape[0]):
        parts = tuple(int(x) for x in lam[r] if x)
        evens = even_part_count(parts, int(rank[r]))
        if evens % 2:
            bad.append(f"{live[r].tolist()}: odd number of even parts")
        elif not expected_abar(parts, int(rank[r]), n).admits(int(ab[r])):
            bad.append(f"{live[r].tolist()}: Abar={int(ab[r])}")
        if len(bad) > 20:
            break
    return Verdict(f"Arf values n={n} ({live.shape[0]} permutations)", not bad, bad)


def known_census_lines(n: int) -> Optional[str]:
    if n not in KNOWN_CENSUS:
        return None
    a, b, c = KNOWN_CENSUS[n]
    return f"{n} | {' '.join(a) or '-'} | {' '.join(b) or '-'} | {' '.join(c)}"
