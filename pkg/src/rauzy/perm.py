"""Permutations in one-line notation and the Rauzy operators L and R.

Everything here is 1-based: ``Permutation((4, 5, 1, 2, 6, 3))`` sends 1 to 4.
A permutation is drawn as a strip with bottom vertices 1..n and top vertices
1..n, edge i joining bottom i to top sigma(i).

>>> p = Permutation.parse("1 2 3")
>>> apply_L(p)
Permutation('1 3 2')
>>> apply_R(p)
Permutation('2 1 3')
>>> apply_word(p, "LL") == p
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "Permutation", "PermLike", "as_perm", "identity",
    "is_irreducible", "compose",
    "gamma_L", "gamma_R", "gamma_t", "gamma_b",
    "apply_L", "apply_R", "apply_L_inv", "apply_R_inv",
    "apply_L_via_gamma", "apply_R_via_gamma", "rotate", "reflect",
    "parse_word", "apply_word", "ReducibleError",
]


class ReducibleError(ValueError):
    """Raised when an operator that lives on irreducible permutations gets a reducible one."""


@dataclass(frozen=True, slots=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.images)
        if not imgs:
            raise ValueError("a permutation has size at least 1")
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a bijection on 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        parts = text.replace(",", " ").split()
        if not parts:
            raise ValueError("empty permutation text")
        return cls(tuple(int(x) for x in parts))

    def to_text(self) -> str:
        return " ".join(map(str, self.images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.images):
            raise IndexError(i)
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, 1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def __iter__(self):
        return iter(self.images)

    def __len__(self):
        return len(self.images)

    def __repr__(self):
        return f"Permutation('{self.to_text()}')"

    def __str__(self):
        return self.to_text()


PermLike = Union[Permutation, Sequence[int], str]


def as_perm(p: PermLike) -> Permutation:
    if isinstance(p, Permutation):
        return p
    if isinstance(p, str):
        return Permutation.parse(p)
    return Permutation(tuple(p))


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def is_irreducible(p: PermLike) -> bool:
    """True iff no prefix sigma(1..k), k < n, is the top segment {n-k+1..n}."""
    s = as_perm(p).images
    n = len(s)
    low = n + 1
    for k in range(1, n):
        low = min(low, s[k - 1])
        if low >= n - k + 1:
            return False
    return True


def compose(a: PermLike, b: PermLike) -> Permutation:
    """Return a∘b, i.e. i -> a(b(i))."""
    a, b = as_perm(a).images, as_perm(b).images
    if len(a) != len(b):
        raise ValueError("size mismatch")
    return Permutation(tuple(a[v - 1] for v in b))


def _from_cycle(n: int, cycle: Iterable[int]) -> Permutation:
    img = list(range(1, n + 1))
    cyc = list(cycle)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        img[a - 1] = b
    return Permutation(tuple(img))


def _check_index(n: int, i: int):
    if n < 1 or not 1 <= i <= n:
        raise ValueError(f"index {i} out of range 1..{n}")


def gamma_L(n: int, i: int) -> Permutation:
    """The cycle (i-1 i-2 ... 1)."""
    _check_index(n, i)
    return _from_cycle(n, range(i - 1, 0, -1))


def gamma_R(n: int, i: int) -> Permutation:
    """The cycle (i+1 i+2 ... n)."""
    _check_index(n, i)
    return _from_cycle(n, range(i + 1, n + 1))


def gamma_t(n: int, i: int) -> Permutation:
    """The cycle (i+1 n n-1 ... i+2)."""
    _check_index(n, i)
    if i >= n - 1:
        return identity(n)
    return _from_cycle(n, [i + 1] + list(range(n, i + 1, -1)))


def gamma_b(n: int, i: int) -> Permutation:
    """The cycle (1 2 ... i-1)."""
    _check_index(n, i)
    return _from_cycle(n, range(1, i))


def _require_irreducible(p: Permutation):
    if not is_irreducible(p):
        raise ReducibleError(f"reducible permutation {p.to_text()}")


def apply_L(p: PermLike, check: bool = True) -> Permutation:
    p = as_perm(p)
    if check:
        _require_irreducible(p)
    s, n = p.images, p.n
    a = s[0]
    return Permutation(tuple(v if v <= a else (v + 1 if v < n else a + 1) for v in s))


def apply_L_inv(p: PermLike, check: bool = True) -> Permutation:
    p = as_perm(p)
    if check:
        _require_irreducible(p)
    s, n = p.images, p.n
    a = s[0]
    return Permutation(tuple(v if v <= a else (n if v == a + 1 else v - 1) for v in s))


def apply_R(p: PermLike, check: bool = True) -> Permutation:
    p = as_perm(p)
    if check:
        _require_irreducible(p)
    s = p.images
    j = s.index(p.n) + 1
    if j == 1:
        return p
    t = list(s)
    t[: j - 2] = s[1: j - 1]
    t[j - 2] = s[0]
    return Permutation(tuple(t))


def apply_R_inv(p: PermLike, check: bool = True) -> Permutation:
    p = as_perm(p)
    if check:
        _require_irreducible(p)
    s = p.images
    j = s.index(p.n) + 1
    if j == 1:
        return p
    t = list(s)
    t[0] = s[j - 2]
    t[1: j - 1] = s[: j - 2]
    return Permutation(tuple(t))


def apply_L_via_gamma(p: PermLike) -> Permutation:
    """L as gamma_t(sigma(1))^-1 ∘ sigma; independent of the piecewise rule."""
    p = as_perm(p)
    _require_irreducible(p)
    return compose(gamma_t(p.n, p(1)).inverse(), p)


def apply_R_via_gamma(p: PermLike) -> Permutation:
    """R as sigma ∘ gamma_b(sigma^-1(n))."""
    p = as_perm(p)
    _require_irreducible(p)
    return compose(p, gamma_b(p.n, p.inverse()(p.n)))


def rotate(p: PermLike) -> Permutation:
    """Half-turn of the diagram: c∘sigma^-1∘c with c(i) = n+1-i.

    It swaps the roles of top and bottom, so rotate∘L∘rotate = R.
    """
    p = as_perm(p)
    n = p.n
    inv = p.inverse().images
    return Permutation(tuple(n + 1 - inv[n - i] for i in range(1, n + 1)))


def reflect(p: PermLike) -> Permutation:
    """c∘sigma∘c: left-right reflection keeping bottom at the bottom."""
    p = as_perm(p)
    n = p.n
    return Permutation(tuple(n + 1 - p.images[n - i] for i in range(1, n + 1)))


_OPS = {"L": apply_L, "R": apply_R, "L'": apply_L_inv, "R'": apply_R_inv}
_TOKEN = re.compile(r"\s*([LRlr])(\^-1|-1|'|⁻¹)?")


def parse_word(w: Union[str, Sequence[str]]) -> tuple[str, ...]:
    """Parse an operator word into letters from {L, R, L', R'}.

    Lowercase letters and the suffixes ', -1, ^-1 all denote inverses:
    ``parse_word("LRl R^-1") == ("L", "R", "L'", "R'")``.
    """
    if not isinstance(w, str):
        out = tuple(w)
        for x in out:
            if x not in _OPS:
                raise ValueError(f"bad letter {x!r}")
        return out
    out, pos, w = [], 0, w.strip()
    while pos < len(w):
        m = _TOKEN.match(w, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse operator word at {w[pos:]!r}")
        ch, suf = m.group(1), m.group(2)
        inv = ch.islower() or suf is not None
        if ch.islower() and suf is not None:
            inv = False
        out.append(ch.upper() + ("'" if inv else ""))
        pos = m.end()
        while pos < len(w) and w[pos] in " ,":
            pos += 1
    return tuple(out)


def apply_word(p: PermLike, w) -> Permutation:
    """Apply the letters of w left to right."""
    p = as_perm(p)
    for letter in parse_word(w):
        p = _OPS[letter](p)
    return p
