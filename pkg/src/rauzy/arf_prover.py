"""Automatic Arf identities on marked permutations.

A marked permutation has k bottom marks and l top marks cutting an
arbitrary host into regions; a finite edge set E' hangs on the marks.
Edge e = (i, x, j, y): bottom mark i, rank x inside it, top mark j, rank y.
Marks 0 and k+1 (or l+1) are the corners. The host only enters through the
parity matrix v of its edge counts between regions, so an identity between
Arf sums of such configurations holds for every host iff it holds for all
2^((k+1)(l+1)) vectors v.
"""

from __future__ import annotations

import json
from math import comb
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice, permutations, product
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .perm import PermLike, Permutation, as_perm

__all__ = [
    "MarkedPermutation", "IdentitySpec", "Term", "CheckResult", "q_matrix",
    "finite_arf", "term_function", "function_table", "check_identity",
    "solve_coefficients", "enumerate_identities", "instantiate",
    "decomposition_sum", "host_twist", "brute_force_identity",
    "load_identity", "dump_identity", "load_fixtures", "ProverError",
    "MAX_CELLS", "EDGE_CAP",
]

MAX_CELLS = 20
EDGE_CAP = 20
FLAVORS = ("A", "Abar")


class ProverError(ValueError):
    pass


def _identity(m: int) -> tuple[int, ...]:
    return tuple(range(1, m + 1))


@dataclass(frozen=True)
class MarkedPermutation:
    k: int
    l: int
    edges: tuple[tuple[int, int, int, int], ...]
    pi_minus: tuple[int, ...] = ()
    pi_plus: tuple[int, ...] = ()

    def __post_init__(self):
        edges = tuple(sorted(tuple(int(t) for t in e) for e in self.edges))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "pi_minus", tuple(self.pi_minus) or _identity(self.k + 1))
        object.__setattr__(self, "pi_plus", tuple(self.pi_plus) or _identity(self.l + 1))
        if self.k < 0 or self.l < 0:
            raise ProverError("mark counts must be nonnegative")
        if sorted(self.pi_minus) != list(_identity(self.k + 1)):
            raise ProverError(f"pi_minus must permute 1..{self.k + 1}")
        if sorted(self.pi_plus) != list(_identity(self.l + 1)):
            raise ProverError(f"pi_plus must permute 1..{self.l + 1}")
        bottoms: dict[int, list[int]] = {}
        tops: dict[int, list[int]] = {}
        for i, x, j, y in edges:
            if not (0 <= i <= self.k + 1 and 0 <= j <= self.l + 1):
                raise ProverError(f"edge {(i, x, j, y)} uses a mark outside 0..k+1 / 0..l+1")
            bottoms.setdefault(i, []).append(x)
            tops.setdefault(j, []).append(y)
        for side, marks in (("bottom", bottoms), ("top", tops)):
            for mark, ranks in marks.items():
                if sorted(ranks) != list(range(1, len(ranks) + 1)):
                    raise ProverError(f"{side} mark {mark}: ranks {sorted(ranks)} are not 1..{len(ranks)}")

    @property
    def cells(self) -> int:
        return (self.k + 1) * (self.l + 1)

    @property
    def twisted(self) -> bool:
        return self.pi_minus != _identity(self.k + 1) or self.pi_plus != _identity(self.l + 1)

    def to_json(self) -> dict:
        out = {"edges": [list(e) for e in self.edges]}
        if self.twisted:
            out["pi_minus"] = list(self.pi_minus)
            out["pi_plus"] = list(self.pi_plus)
        return out

    def __str__(self):
        es = ",".join(f"({i}.{x},{j}.{y})" for i, x, j, y in self.edges)
        tw = f" pi-={self.pi_minus} pi+={self.pi_plus}" if self.twisted else ""
        return f"sigma_{{{self.k},{self.l}}}{{{es}}}{tw}"


def q_matrix(m: MarkedPermutation) -> np.ndarray:
    """Q[e, (i-1)(l+1) + (j-1)] = 1 iff edge e does not cross the segment
    from bottom region i to top region j, i.e. (i_e < i) == (j_e < j)."""
    out = np.zeros((len(m.edges), m.cells), dtype=np.uint8)
    for r, (ie, _, je, _) in enumerate(m.edges):
        for i in range(1, m.k + 2):
            for j in range(1, m.l + 2):
                out[r, (i - 1) * (m.l + 1) + (j - 1)] = (ie < i) == (je < j)
    return out


def _chi_pairs(m: MarkedPermutation) -> list[tuple[int, int]]:
    """Pairs of E' edges that do not cross."""
    es = m.edges
    out = []
    for a, b in combinations(range(len(es)), 2):
        ba, bb = es[a][:2], es[b][:2]
        ta, tb = es[a][2:], es[b][2:]
        if (ba < bb) == (ta < tb):
            out.append((a, b))
    return out


def _vector(v, cells: int) -> np.ndarray:
    if isinstance(v, (int, np.integer)):
        return np.array([(int(v) >> c) & 1 for c in range(cells)], dtype=np.uint8)
    arr = np.asarray(v, dtype=np.uint8).reshape(-1) & 1
    if arr.size != cells:
        raise ProverError(f"v has {arr.size} entries, expected {cells}")
    return arr


def _twist_vector(m: MarkedPermutation, v: np.ndarray) -> np.ndarray:
    """P_{pi-}^{-1} v P_{pi+}: entry (p, q) reads v at (pi-(p), pi+(q))."""
    mat = v.reshape(m.k + 1, m.l + 1)
    rows = np.array(m.pi_minus) - 1
    cols = np.array(m.pi_plus) - 1
    return mat[rows][:, cols].reshape(-1)


def _check_flavor(flavor: str) -> str:
    if flavor in ("Abar", "Ā", "abar", "bar"):
        return "Abar"
    if flavor in ("A", "a"):
        return "A"
    raise ProverError(f"unknown flavor {flavor!r}")


def finite_arf(m: MarkedPermutation, v, flavor: str = "Abar", cap: int = EDGE_CAP) -> int:
    """sum over u in GF(2)^{E'} of (-1)^{chi_u + (u, Q w)} (times (-1)^{|u|} for Abar),
    with w = v, or its pi-permuted version for twisted configurations."""
    flavor = _check_flavor(flavor)
    ne = len(m.edges)
    if ne > cap:
        raise ProverError(f"{ne} edges exceed the cap {cap}")
    w = _vector(v, m.cells)
    if m.twisted:
        w = _twist_vector(m, w)
    return _finite_sum(m, w, flavor)


def _finite_sum(m: MarkedPermutation, w: np.ndarray, flavor: str) -> int:
    ne = len(m.edges)
    if ne == 0:
        return 1
    lin = (q_matrix(m).astype(np.int64) @ w.astype(np.int64)) & 1
    if flavor == "Abar":
        lin = lin ^ 1
    us = np.arange(1 << ne, dtype=np.int64)
    bits = (us[:, None] >> np.arange(ne)[None, :]) & 1
    par = (bits @ lin) & 1
    for a, b in _chi_pairs(m):
        par ^= bits[:, a] & bits[:, b]
    return int(len(us) - 2 * par.sum())


def host_twist(m: MarkedPermutation, v) -> int:
    """Parity change of the host's own non-crossing count when its regions are
    permuted by (pi-, pi+): a quadratic form in v."""
    if not m.twisted:
        return 0
    v = _vector(v, m.cells)
    k1, l1 = m.k + 1, m.l + 1
    pos_b = {r: p for p, r in enumerate(m.pi_minus, 1)}
    pos_t = {r: p for p, r in enumerate(m.pi_plus, 1)}
    cells = [(a, b) for a in range(1, k1 + 1) for b in range(1, l1 + 1) if v[(a - 1) * l1 + b - 1]]
    par = 0
    for (a, b), (c, d) in combinations(cells, 2):
        flip_b = a != c and ((a < c) != (pos_b[a] < pos_b[c]))
        flip_t = b != d and ((b < d) != (pos_t[b] < pos_t[d]))
        par ^= flip_b ^ flip_t
    return par


def term_function(m: MarkedPermutation, v, flavor: str = "Abar", twist: bool = True) -> int:
    """The term's contribution per host class v, normalised against the host
    weight (-1)^chi_I: Abar carries the host's (-1)^|I| = (-1)^|v| and a
    permuted host its own parity change."""
    flavor = _check_flavor(flavor)
    val = finite_arf(m, v, flavor)
    w = _vector(v, m.cells)
    sgn = 0
    if flavor == "Abar":
        sgn ^= int(w.sum()) & 1
    if twist:
        sgn ^= host_twist(m, w)
    return -val if sgn else val


def function_table(m: MarkedPermutation, flavor: str = "Abar", twist: bool = True) -> np.ndarray:
    if m.cells > MAX_CELLS:
        raise ProverError(f"(k+1)(l+1) = {m.cells} exceeds {MAX_CELLS}")
    return np.array([term_function(m, v, flavor, twist) for v in range(1 << m.cells)], dtype=np.int64)


# ------------------------------------------------------------ identities

@dataclass(frozen=True)
class Term:
    coef: Fraction
    marked: MarkedPermutation
    flavor: Optional[str] = None  # overrides the identity's flavor

    def to_json(self) -> dict:
        out = {"coef": str(self.coef), **self.marked.to_json()}
        if self.flavor:
            out["flavor"] = self.flavor
        return out


@dataclass(frozen=True)
class IdentitySpec:
    k: int
    l: int
    terms: tuple[Term, ...]
    flavor: str = "Abar"
    name: str = ""

    def __post_init__(self):
        for t in self.terms:
            if (t.marked.k, t.marked.l) != (self.k, self.l):
                raise ProverError(f"term {t.marked} does not share (k, l) = ({self.k}, {self.l})")
        _check_flavor(self.flavor)

    def flavors(self) -> list[str]:
        return [_check_flavor(t.flavor or self.flavor) for t in self.terms]

    @property
    def mixed(self) -> bool:
        return len(set(self.flavors())) > 1

    def perturbed(self, delta: Fraction = Fraction(1)) -> "IdentitySpec":
        """Shift the coefficient of a term that does not vanish identically;
        if every term vanishes, append delta times the empty configuration."""
        terms = list(self.terms)
        live = [i for i, (t, f) in enumerate(zip(terms, self.flavors()))
                if function_table(t.marked, f).any()]
        if live:
            t = terms[live[0]]
            terms[live[0]] = Term(t.coef + delta, t.marked, t.flavor)
        else:
            terms.append(Term(Fraction(delta), MarkedPermutation(self.k, self.l, ())))
        return IdentitySpec(self.k, self.l, tuple(terms), self.flavor, self.name + " (perturbed)")

    def to_json(self) -> dict:
        out = {"k": self.k, "l": self.l, "flavor": self.flavor,
               "terms": [t.to_json() for t in self.terms]}
        if self.name:
            out["name"] = self.name
        return out


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: Optional[tuple[int, ...]] = None
    residual: Fraction = Fraction(0)

    def __bool__(self):
        return self.holds


def _bits(v: int, cells: int) -> tuple[int, ...]:
    return tuple((v >> c) & 1 for c in range(cells))


def check_identity(spec: IdentitySpec, twist: bool = True) -> CheckResult:
    """Does sum K_i f_i(v) vanish for every v? On failure, the first bad v."""
    cells = (spec.k + 1) * (spec.l + 1)
    if cells > MAX_CELLS:
        raise ProverError(f"(k+1)(l+1) = {cells} exceeds {MAX_CELLS}")
    tables = [function_table(t.marked, f, twist) for t, f in zip(spec.terms, spec.flavors())]
    for v in range(1 << cells):
        total = sum((t.coef * int(tab[v]) for t, tab in zip(spec.terms, tables)), Fraction(0))
        if total != 0:
            return CheckResult(False, _bits(v, cells), total)
    return CheckResult(True)


def _kernel(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    """Exact rational null space of the row system."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            vec[pc] = -mat[row][fc]
        basis.append(vec)
    return basis


def _normalise(vec: list[Fraction]) -> tuple[Fraction, ...]:
    lead = next(x for x in vec if x != 0)
    return tuple(x / lead for x in vec)


def solve_coefficients(terms: Sequence[MarkedPermutation], flavor="Abar",
                       twist: bool = True) -> list[tuple[Fraction, ...]]:
    """Basis of all rational x with sum x_i f_i(v) = 0 for every v.

    `flavor` is one flavor for all terms or a sequence with one per term."""
    terms = list(terms)
    if not terms:
        return []
    flavors = [flavor] * len(terms) if isinstance(flavor, str) else list(flavor)
    if len({(t.k, t.l) for t in terms}) != 1:
        raise ProverError("terms must share (k, l)")
    tables = [function_table(t, f, twist) for t, f in zip(terms, flavors)]
    rows = [list(r) for r in {tuple(int(tab[v]) for tab in tables) for v in range(len(tables[0]))}]
    return [_normalise(b) for b in _kernel(rows, len(terms))]


def _edge_sets(k: int, l: int, size: int):
    """All E' with `size` edges on (k, l) marks, up to the rank bookkeeping."""
    ends = [(i, j) for i in range(k + 2) for j in range(l + 2)]
    seen = set()
    for combo in product(ends, repeat=size):
        # every order inside a mark is realised by ranking the edges
        groups_b: dict[int, list[int]] = {}
        groups_t: dict[int, list[int]] = {}
        for idx, (i, j) in enumerate(combo):
            groups_b.setdefault(i, []).append(idx)
            groups_t.setdefault(j, []).append(idx)
        for rb in product(*[list(_orders(g)) for g in groups_b.values()]):
            xr = {}
            for order in rb:
                for pos, idx in enumerate(order, 1):
                    xr[idx] = pos
            for rt in product(*[list(_orders(g)) for g in groups_t.values()]):
                yr = {}
                for order in rt:
                    for pos, idx in enumerate(order, 1):
                        yr[idx] = pos
                edges = tuple(sorted((combo[e][0], xr[e], combo[e][1], yr[e]) for e in range(size)))
                if edges not in seen:
                    seen.add(edges)
                    yield edges


def _orders(group):
    return permutations(group)


ENUM_BUDGET = 2_000_000
CONFIG_BUDGET = 5_000
TABLE_BUDGET = 50_000_000


def enumerate_identities(max_terms: int, max_edges: int, k: int, l: int,
                         flavor: str = "Abar", budget: int = ENUM_BUDGET) -> list[IdentitySpec]:
    """Minimal identities: term sets of size <= max_terms whose only relation
    (up to scale) uses every term, on configurations with <= max_edges edges."""
    cells = (k + 1) * (l + 1)
    if cells > MAX_CELLS:
        raise ProverError(f"(k+1)(l+1) = {cells} exceeds {MAX_CELLS}")
    configs = []
    for size in range(max_edges + 1):
        for e in _edge_sets(k, l, size):
            configs.append(MarkedPermutation(k, l, e))
            if len(configs) > CONFIG_BUDGET:
                raise ProverError(f"more than {CONFIG_BUDGET} configurations within the bounds")
    if len(configs) << cells > TABLE_BUDGET:
        raise ProverError(f"{len(configs)} configurations x 2^{cells} vectors exceed {TABLE_BUDGET}")
    n_sets = sum(_binom(len(configs), t) for t in range(1, max_terms + 1))
    if n_sets > budget:
        raise ProverError(f"{n_sets} term sets exceed the enumeration budget {budget}")
    tab = np.array([function_table(c, flavor) for c in configs], dtype=np.float64)
    tab = np.unique(tab, axis=1)  # repeated v columns add no equations
    found: list[IdentitySpec] = []
    for size in range(1, max_terms + 1):
        combos = combinations(range(len(configs)), size)
        while True:
            chunk = np.array(list(islice(combos, 50_000)), dtype=np.int64).reshape(-1, size)
            if not len(chunk):
                break
            # a minimal relation among `size` terms has rank size - 1 and full support
            ranks = np.linalg.matrix_rank(tab[chunk])
            for idxs in chunk[ranks == size - 1]:
                rows = [list(map(int, r)) for r in np.unique(tab[idxs].T, axis=0)]
                basis = _kernel(rows, size)
                if len(basis) != 1 or any(x == 0 for x in basis[0]):
                    continue
                coefs = _normalise(basis[0])
                found.append(IdentitySpec(k, l, tuple(Term(c, configs[i]) for c, i in zip(coefs, idxs)), flavor))
    return found


def _binom(n: int, r: int) -> int:
    return comb(n, r)


# ------------------------------------------------------------ instantiation

def _regions(n: int, slots: Sequence[int], count: int) -> list[list[int]]:
    slots = list(slots)
    if len(slots) != count:
        raise ProverError(f"expected {count} mark slots, got {len(slots)}")
    if any(b <= a for a, b in zip(slots, slots[1:])) or (slots and (slots[0] < 1 or slots[-1] > n - 1)):
        raise ProverError(f"mark slots {slots} must increase strictly inside 1..{n - 1}")
    cuts = [0] + slots + [n]
    return [list(range(cuts[r] + 1, cuts[r + 1] + 1)) for r in range(count + 1)]


def _line(regions, order, edges, side_index, rank_index, count):
    """Item sequence on one side: ('h', vertex) for host, ('e', idx) for E'."""
    at: dict[int, list[tuple[int, int]]] = {}
    for idx, e in enumerate(edges):
        at.setdefault(e[side_index], []).append((e[rank_index], idx))
    seq = [("e", idx) for _, idx in sorted(at.get(0, []))]
    for p in range(1, count + 2):
        seq += [("h", v) for v in regions[order[p - 1] - 1]]
        seq += [("e", idx) for _, idx in sorted(at.get(p, []))]
    return seq


def instantiate(m: MarkedPermutation, host: PermLike, bottom_mark_slots: Sequence[int],
                top_mark_slots: Sequence[int]) -> Permutation:
    """Concrete permutation: host regions laid out in pi order, E' at the marks.

    Bottom region p of the result holds host bottom region pi-(p); likewise on top.
    A slot s places the mark just right of host vertex s.
    """
    host = as_perm(host)
    n = host.n
    breg = _regions(n, bottom_mark_slots, m.k)
    treg = _regions(n, top_mark_slots, m.l)
    bottom = _line(breg, m.pi_minus, m.edges, 0, 1, m.k)
    top = _line(treg, m.pi_plus, m.edges, 2, 3, m.l)
    top_pos = {}
    for pos, (kind, val) in enumerate(top, 1):
        top_pos[(kind, val)] = pos
    out = []
    for kind, val in bottom:
        out.append(top_pos[("h", host(val))] if kind == "h" else top_pos[("e", val)])
    return Permutation(tuple(out))


def _arf_pair(p: Permutation) -> tuple[int, int]:
    return _kernels.arf_sums(p.images)


def decomposition_sum(m: MarkedPermutation, host: PermLike, bottom_mark_slots, top_mark_slots,
                      flavor: str = "A") -> int:
    """sum over host subsets I of (-1)^{chi_I} (times (-1)^{|I|} for Abar) f(v(I)),
    chi_I taken in the instantiated permutation; equals A or Abar of it."""
    flavor = _check_flavor(flavor)
    host = as_perm(host)
    n = host.n
    breg = _regions(n, bottom_mark_slots, m.k)
    treg = _regions(n, top_mark_slots, m.l)
    region_b = {v: r for r, reg in enumerate(breg) for v in reg}
    region_t = {v: r for r, reg in enumerate(treg) for v in reg}
    inst = instantiate(m, host, bottom_mark_slots, top_mark_slots)
    # host edge b sits at an instantiated bottom position; recover it from the layout
    bottom = _line(breg, m.pi_minus, m.edges, 0, 1, m.k)
    pos = {val: p for p, (kind, val) in enumerate(bottom, 1) if kind == "h"}
    cache: dict[tuple, int] = {}
    total = 0
    for mask in range(1 << n):
        I = [b for b in range(1, n + 1) if mask >> (b - 1) & 1]
        v = [0] * m.cells
        for b in I:
            v[region_b[b] * (m.l + 1) + region_t[host(b)]] ^= 1
        chi = 0
        for a, b in combinations(I, 2):
            pa, pb = pos[a], pos[b]
            chi += (pa < pb) == (inst(pa) < inst(pb))
        key = tuple(v)
        if key not in cache:
            cache[key] = finite_arf(m, key, flavor)
        sgn = chi + (len(I) if flavor == "Abar" else 0)
        total += -cache[key] if sgn & 1 else cache[key]
    return total


def brute_force_identity(spec: IdentitySpec, host: PermLike, bottom_mark_slots, top_mark_slots) -> Fraction:
    """sum K_i F_i(instantiation_i) with exact Arf sums; zero when the identity holds."""
    total = Fraction(0)
    for t, f in zip(spec.terms, spec.flavors()):
        a, abar = _arf_pair(instantiate(t.marked, host, bottom_mark_slots, top_mark_slots))
        total += t.coef * (abar if f == "Abar" else a)
    return total


# ------------------------------------------------------------ JSON

def _term_from_json(obj: dict, k: int, l: int) -> Term:
    coef = Fraction(str(obj.get("coef", "1")))
    mp = MarkedPermutation(k, l, tuple(tuple(e) for e in obj.get("edges", [])),
                           tuple(obj.get("pi_minus", ())), tuple(obj.get("pi_plus", ())))
    return Term(coef, mp, obj.get("flavor"))


def load_identity(obj) -> IdentitySpec:
    if isinstance(obj, str):
        obj = json.loads(obj)
    k, l = int(obj["k"]), int(obj["l"])
    flavor = obj.get("flavor", "Abar")
    terms = tuple(_term_from_json(t, k, l) for t in obj["terms"])
    return IdentitySpec(k, l, terms, _check_flavor(flavor), obj.get("name", ""))


def dump_identity(spec: IdentitySpec) -> str:
    return json.dumps(spec.to_json(), indent=2)


def load_fixtures(path=None) -> dict[str, IdentitySpec]:
    """The curated identity encodings shipped with the package."""
    if path is None:
        from importlib.resources import files
        text = files("rauzy").joinpath("data/identities.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    return {name: load_identity({**obj, "name": name}) for name, obj in data.items()}
