"""Combinatorics of the category FI on the standard sets 1..n.

Injections are stored by their image list ``(f(1), ..., f(m))``.  Permutations
carry a word in adjacent transpositions ``s_i = (i i+1)`` read as a composite
``s_{w[0]} o s_{w[1]} o ... o s_{w[-1]}``, which is how module matrices are
multiplied out in :mod:`fihom.fimodule`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import perm
from typing import Iterable, Sequence


class CompositionError(ValueError):
    """Raised when two injections are not composable."""


class ZeroWedge(ValueError):
    """Raised when a wedge monomial repeats an index and hence vanishes."""


@dataclass(frozen=True)
class Injection:
    m: int
    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(self.image))
        if len(self.image) != self.m:
            raise ValueError(f"image has length {len(self.image)}, expected {self.m}")
        if self.m > self.n:
            raise ValueError(f"no injection [{self.m}] -> [{self.n}]")
        if len(set(self.image)) != self.m:
            raise ValueError(f"image {self.image} is not injective")
        if any(not 1 <= v <= self.n for v in self.image):
            raise ValueError(f"image {self.image} leaves 1..{self.n}")

    def __call__(self, j: int) -> int:
        return self.image[j - 1]

    @classmethod
    def identity(cls, n: int) -> "Injection":
        return cls(n, n, tuple(range(1, n + 1)))

    @classmethod
    def standard(cls, m: int, n: int) -> "Injection":
        """The inclusion [m] -> [n], j -> j."""
        return cls(m, n, tuple(range(1, m + 1)))

    @classmethod
    def coface(cls, m: int, q: int) -> "Injection":
        """The increasing injection [m] -> [m+1] whose image misses ``q``."""
        if not 1 <= q <= m + 1:
            raise ValueError(f"coface index {q} outside 1..{m + 1}")
        return cls(m, m + 1, tuple(j if j < q else j + 1 for j in range(1, m + 1)))

    def to_json(self) -> list[int]:
        return list(self.image)

    @classmethod
    def from_json(cls, values: Sequence[int], n: int) -> "Injection":
        return cls(len(values), n, tuple(int(v) for v in values))


@dataclass(frozen=True)
class Permutation:
    n: int
    word: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if any(not 1 <= i <= self.n - 1 for i in self.word):
            raise ValueError(f"word {self.word} uses a transposition outside S_{self.n}")

    def one_line(self) -> tuple[int, ...]:
        """Values ``(sigma(1), ..., sigma(n))``."""
        values = list(range(1, self.n + 1))
        # sigma(j) = s_{w0}(s_{w1}(...s_{wk}(j)))
        for i in reversed(self.word):
            values = [_swap(v, i) for v in values]
        return tuple(values)

    @classmethod
    def from_one_line(cls, values: Sequence[int]) -> "Permutation":
        """Bubble-sort ``values``; the recorded swaps give a reduced word."""
        n = len(values)
        if sorted(values) != list(range(1, n + 1)):
            raise ValueError(f"{values} is not a permutation of 1..{n}")
        arr = list(values)
        swaps = []
        changed = True
        while changed:
            changed = False
            for i in range(n - 1):
                if arr[i] > arr[i + 1]:
                    arr[i], arr[i + 1] = arr[i + 1], arr[i]
                    swaps.append(i + 1)
                    changed = True
        # values o s_{i1} o ... o s_{ik} = id, so values = s_{ik} o ... o s_{i1}
        return cls(n, tuple(reversed(swaps)))


def _swap(v: int, i: int) -> int:
    if v == i:
        return i + 1
    if v == i + 1:
        return i
    return v


def compose_injections(g: Injection, f: Injection) -> Injection:
    """Return ``g o f``."""
    if f.n != g.m:
        raise CompositionError(f"cannot compose [{g.m}]->[{g.n}] after [{f.m}]->[{f.n}]")
    return Injection(f.m, g.n, tuple(g.image[v - 1] for v in f.image))


def factor_injection(f: Injection, complement: Sequence[int] | None = None) -> tuple[Permutation, int]:
    """Write ``f = sigma o (standard inclusion [m] -> [n])``.

    ``sigma`` sends ``m+1..n`` onto the complement of the image, increasingly
    unless another ordering of the complement is passed in.
    Returns ``(sigma, n - m)``.
    """
    rest = sorted(set(range(1, f.n + 1)) - set(f.image))
    if complement is not None:
        if sorted(complement) != rest:
            raise ValueError(f"{complement} is not an ordering of the complement {rest}")
        rest = list(complement)
    return Permutation.from_one_line(list(f.image) + rest), f.n - f.m


def enumerate_injections(m: int, n: int) -> list[Injection]:
    """All injections [m] -> [n] in lexicographic order of their image lists."""
    if m > n or m < 0:
        return []
    return [Injection(m, n, img) for img in permutations(range(1, n + 1), m)]


def count_injections(m: int, n: int) -> int:
    return perm(n, m) if 0 <= m <= n else 0


@dataclass(frozen=True)
class WedgeIndex:
    n: int
    subset: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(self.subset))
        if any(b <= a for a, b in zip(self.subset, self.subset[1:])):
            raise ValueError(f"{self.subset} is not strictly increasing")
        if any(not 1 <= v <= self.n for v in self.subset):
            raise ValueError(f"{self.subset} leaves 1..{self.n}")


def sorted_wedge_sign(values: Iterable[int], n: int | None = None) -> tuple[WedgeIndex, int]:
    """Canonicalize ``v1 ^ v2 ^ ... ^ va`` to increasing order.

    Returns the sorted index and the sign of the sorting permutation.
    Raises :class:`ZeroWedge` if an index repeats.
    """
    vals = list(values)
    if len(set(vals)) != len(vals):
        raise ZeroWedge(f"repeated index in {vals}")
    sign = 1
    # insertion sort, one sign flip per adjacent swap
    for i in range(1, len(vals)):
        j = i
        while j > 0 and vals[j - 1] > vals[j]:
            vals[j - 1], vals[j] = vals[j], vals[j - 1]
            sign = -sign
            j -= 1
    top = n if n is not None else (max(vals) if vals else 0)
    return WedgeIndex(top, tuple(vals)), sign
