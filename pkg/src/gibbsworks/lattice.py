"""Lattice points of Z^d, finite boxes, norms and sphere counts.

Points are plain tuples of ints. Every finite region is a :class:`Box`, whose
points are kept sorted lexicographically (first coordinate most significant);
that order fixes every enumeration order in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Point = tuple[int, ...]

FULL = "full"
NONNEG = "nonneg"


def sup_norm(i: Sequence[int]) -> int:
    return max((abs(c) for c in i), default=0)


def one_norm(i: Sequence[int]) -> int:
    return sum(abs(c) for c in i)


def are_neighbors(i: Sequence[int], j: Sequence[int]) -> bool:
    return one_norm(sub(i, j)) == 1


def add(i: Sequence[int], j: Sequence[int]) -> Point:
    return tuple(a + b for a, b in zip(i, j))


def sub(i: Sequence[int], j: Sequence[int]) -> Point:
    return tuple(a - b for a, b in zip(i, j))


def neg(i: Sequence[int]) -> Point:
    return tuple(-a for a in i)


def origin(d: int) -> Point:
    return (0,) * d


def unit(n: int, d: int) -> Point:
    """The unit vector e_n (0-based axis ``n``)."""
    return tuple(1 if l == n else 0 for l in range(d))


def sphere_count(n: int, d: int) -> int:
    """Number of points k of Z^d with ||k|| = n, i.e. (2n+1)^d - (2n-1)^d."""
    if n < 1:
        raise ValueError("sphere_count needs n >= 1")
    return (2 * n + 1) ** d - (2 * n - 1) ** d


@dataclass(frozen=True)
class Box:
    """A finite, duplicate-free, sorted set of lattice points.

    ``kind`` is ``"centered"`` for the boxes built by :func:`centered_box`
    (with ``radius`` holding n) and ``"explicit"`` otherwise.
    """

    points: tuple[Point, ...]
    dim: int
    kind: str = field(default="explicit", compare=False)
    radius: int | None = field(default=None, compare=False)

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], dim: int | None = None) -> Box:
        pts = sorted({tuple(int(c) for c in p) for p in points})
        if dim is None:
            if not pts:
                raise ValueError("dimension required for an empty box")
            dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise ValueError(f"all points must have dimension {dim}")
        return cls(tuple(pts), dim)

    @classmethod
    def interval(cls, a: int, b: int) -> Box:
        """The 1D box {a, ..., b} (empty when b < a)."""
        return cls.of(((i,) for i in range(a, b + 1)), dim=1)

    @classmethod
    def cube(cls, lo: int, hi: int, d: int) -> Box:
        return cls.of(itertools.product(range(lo, hi + 1), repeat=d), dim=d)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self._set

    @cached_property
    def _set(self) -> frozenset[Point]:
        return frozenset(self.points)

    @cached_property
    def _index(self) -> dict[Point, int]:
        return {p: k for k, p in enumerate(self.points)}

    def index(self, p: Point) -> int:
        return self._index[p]

    def issubset(self, other: Box) -> bool:
        return self._set <= other._set

    def isdisjoint(self, other: Box) -> bool:
        return self._set.isdisjoint(other._set)

    def translate(self, j: Sequence[int]) -> Box:
        return Box.of((add(p, j) for p in self.points), dim=self.dim)

    def union(self, other: Box) -> Box:
        return Box.of(self._set | other._set, dim=self.dim)

    def minus(self, other: Box) -> Box:
        return Box.of(self._set - other._set, dim=self.dim)

    def intersection(self, other: Box) -> Box:
        return Box.of(self._set & other._set, dim=self.dim)

    def dilate(self, other: Box) -> Box:
        """Minkowski sum {p + q : p in self, q in other}."""
        return Box.of((add(p, q) for p in self.points for q in other.points), dim=self.dim)

    def reflect(self) -> Box:
        return Box.of((neg(p) for p in self.points), dim=self.dim)

    def difference_set(self) -> Box:
        """{p - q : p, q in self}; contains the origin when nonempty."""
        return self.dilate(self.reflect())

    def max_norm(self) -> int:
        return max((sup_norm(p) for p in self.points), default=0)

    def is_interval(self) -> bool:
        if self.dim != 1:
            return False
        if not self.points:
            return True
        return len(self.points) == self.points[-1][0] - self.points[0][0] + 1

    def hull(self) -> Box:
        """Smallest axis-parallel rectangle containing the box."""
        if not self.points:
            return self
        ranges = [
            range(min(p[l] for p in self.points), max(p[l] for p in self.points) + 1)
            for l in range(self.dim)
        ]
        return Box.of(itertools.product(*ranges), dim=self.dim)

    def __repr__(self) -> str:
        if self.kind == "centered":
            return f"Box(centered n={self.radius}, d={self.dim})"
        if self.dim == 1 and self.is_interval() and self.points:
            return f"Box({self.points[0][0]}..{self.points[-1][0]})"
        return f"Box({list(self.points)})"


def centered_box(n: int, d: int, kind: str = FULL) -> Box:
    """Lambda_n = {i : ||i|| < n} on Z^d (``kind="full"``) or Z_+^d (``"nonneg"``)."""
    if n < 0 or d < 1:
        raise ValueError("centered_box needs n >= 0 and d >= 1")
    if kind == FULL:
        coords = range(-(n - 1), n)
    elif kind == NONNEG:
        coords = range(0, n)
    else:
        raise ValueError(f"unknown lattice kind {kind!r}")
    pts = tuple(itertools.product(coords, repeat=d)) if n > 0 else ()
    return Box(pts, d, kind="centered", radius=n)


def closed_ball(N: int, d: int) -> Box:
    """B_N = {i : ||i|| <= N}, exposed as Lambda_{N+1}."""
    return centered_box(N + 1, d)
