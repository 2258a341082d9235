"""Alphabets, patterns, subshifts of finite type and framed configurations.

A point of a subshift X is represented by a :class:`FramedConfiguration`: a
finite pattern glued onto a periodic admissible background. Since the
background is itself a point of X, membership of a framed configuration in an
SFT only depends on the forbidden-pattern translates that meet the frame, so it
is decided exactly by a finite scan in every dimension.

Membership of a *finite pattern* in the language X_Lambda is a different
question. For d = 1 it is decided exactly through the essential transition
graph; for d >= 2 the best available notion is local admissibility on a collar
around Lambda, which over-approximates X_Lambda.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import CapExceeded, EmptySubshift
from .lattice import Box, Point, add, centered_box, origin, sub, sup_norm, unit

DEFAULT_CAP = 1 << 22


def default_cap() -> int:
    value = os.environ.get("GIBBSWORKS_CAP")
    return int(value) if value else DEFAULT_CAP


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    @classmethod
    def of(cls, symbols: Iterable) -> Alphabet:
        return cls(tuple(str(s) for s in symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol) -> int:
        return self.symbols.index(str(symbol))

    @cached_property
    def values(self) -> tuple[float, ...]:
        """Numeric value of each symbol (its name if numeric, else its index)."""
        try:
            return tuple(float(s) for s in self.symbols)
        except ValueError:
            return tuple(float(k) for k in range(len(self.symbols)))

    def render(self, values: Sequence[int]) -> str:
        names = [self.symbols[v] for v in values]
        sep = "" if all(len(s) == 1 for s in self.symbols) else ","
        return sep.join(names)


@dataclass(frozen=True)
class Pattern:
    """Symbol indices on the points of a box, aligned with ``domain.points``."""

    domain: Box
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.domain):
            raise ValueError("pattern values must match its domain")

    @classmethod
    def from_dict(cls, mapping: Mapping[Point, int], dim: int | None = None) -> Pattern:
        box = Box.of(mapping.keys(), dim=dim)
        return cls(box, tuple(int(mapping[p]) for p in box.points))

    @classmethod
    def word(cls, values: Sequence[int], start: int = 0) -> Pattern:
        """A 1D pattern on {start, ..., start + len(values) - 1}."""
        return cls(Box.interval(start, start + len(values) - 1), tuple(int(v) for v in values))

    @classmethod
    def empty(cls, dim: int) -> Pattern:
        return cls(Box((), dim), ())

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, p: Point) -> int:
        return self.values[self.domain.index(p)]

    def get(self, p: Point, default=None):
        t = self.domain._index.get(p)
        return default if t is None else self.values[t]

    def items(self) -> Iterator[tuple[Point, int]]:
        return zip(self.domain.points, self.values)

    def as_dict(self) -> dict[Point, int]:
        return dict(self.items())

    def restrict(self, box: Box) -> Pattern:
        if not box.issubset(self.domain):
            raise ValueError("restriction box is not inside the pattern domain")
        return Pattern(box, tuple(self[p] for p in box.points))

    def translate(self, j: Sequence[int]) -> Pattern:
        """The pattern carrying the same values on ``domain + j``."""
        return Pattern(self.domain.translate(j), self.values)

    def to_string(self, alphabet: Alphabet) -> str:
        return alphabet.render(self.values)


def juxtapose(eta: Pattern, zeta: Pattern) -> Pattern:
    """The pattern on the union of both domains restricting to ``eta`` and ``zeta``."""
    if not eta.domain.isdisjoint(zeta.domain):
        raise ValueError("juxtaposed patterns must have disjoint domains")
    mapping = eta.as_dict()
    mapping.update(zeta.as_dict())
    dim = eta.domain.dim
    return Pattern.from_dict(mapping, dim=dim)


# A rule is a forbidden family on a common tuple of offsets.
Rule = tuple[tuple[Point, ...], frozenset]


def _translates(
    rules: Sequence[Rule],
    points: Iterable[Point],
    resolvable: Callable[[Point], bool],
) -> Iterator[tuple[tuple[Point, ...], frozenset]]:
    """Every rule translate meeting ``points`` whose sites are all resolvable."""
    points = list(points)
    for offsets, bad in rules:
        seen = set()
        for p in points:
            for o in offsets:
                j = sub(p, o)
                if j in seen:
                    continue
                seen.add(j)
                sites = tuple(add(q, j) for q in offsets)
                if all(resolvable(s) for s in sites):
                    yield sites, bad


def _search(
    points: Sequence[Point],
    n_symbols: int,
    rules: Sequence[Rule],
    fixed: Callable[[Point], int | None] | None = None,
    prefix_ok: Callable[[list[int], int], bool] | None = None,
    first_only: bool = False,
) -> list[tuple[int, ...]]:
    """Depth-first enumeration of fillings of ``points`` avoiding every rule.

    Sites outside ``points`` are read from ``fixed`` (``None`` means the site
    is unavailable and translates touching it are ignored). Output is in
    lexicographic order of the value tuples.
    """
    pos = {p: t for t, p in enumerate(points)}

    def resolvable(s):
        return s in pos or (fixed is not None and fixed(s) is not None)

    checks: list[list] = [[] for _ in points]
    for sites, bad in _translates(rules, points, resolvable):
        template = tuple((pos[s], 0) if s in pos else (None, fixed(s)) for s in sites)
        last = max(t for t, _ in template if t is not None)
        checks[last].append((template, bad))

    n = len(points)
    vals = [0] * n
    out: list[tuple[int, ...]] = []

    def ok(t):
        for template, bad in checks[t]:
            key = tuple(vals[u] if u is not None else c for u, c in template)
            if key in bad:
                return False
        return prefix_ok is None or prefix_ok(vals, t)

    def rec(t):
        if t == n:
            out.append(tuple(vals))
            return first_only
        for a in range(n_symbols):
            vals[t] = a
            if ok(t) and rec(t + 1):
                return True
        return False

    rec(0)
    return out


@dataclass(frozen=True)
class PeriodicBackground:
    """An axis-periodic configuration: ``value(i) = tile[(i + offset) mod periods]``."""

    tile: tuple[int, ...]
    periods: tuple[int, ...]
    offset: tuple[int, ...] = ()

    def __post_init__(self):
        if math.prod(self.periods) != len(self.tile):
            raise ValueError("tile size must equal the product of the periods")
        if not self.offset:
            object.__setattr__(self, "offset", (0,) * len(self.periods))

    @classmethod
    def constant(cls, symbol: int, d: int) -> PeriodicBackground:
        return cls((int(symbol),), (1,) * d)

    @classmethod
    def word(cls, values: Sequence[int]) -> PeriodicBackground:
        """The 1D configuration repeating ``values`` with ``x_0 = values[0]``."""
        return cls(tuple(int(v) for v in values), (len(values),))

    @property
    def dim(self) -> int:
        return len(self.periods)

    def value(self, i: Sequence[int]) -> int:
        idx = 0
        for c, o, p in zip(i, self.offset, self.periods):
            idx = idx * p + (c + o) % p
        return self.tile[idx]

    def shifted(self, j: Sequence[int]) -> PeriodicBackground:
        off = tuple((o + c) % p for o, c, p in zip(self.offset, j, self.periods))
        return PeriodicBackground(self.tile, self.periods, off)

    def fundamental_box(self) -> Box:
        return Box.of(_rect(self.periods), dim=self.dim)

    def as_pattern(self, box: Box) -> Pattern:
        return Pattern(box, tuple(self.value(p) for p in box.points))

    def same_as(self, other: PeriodicBackground) -> bool:
        if self.dim != other.dim:
            return False
        lcm = tuple(math.lcm(a, b) for a, b in zip(self.periods, other.periods))
        return all(self.value(p) == other.value(p) for p in _rect(lcm))


def _rect(sizes: Sequence[int]) -> Iterator[Point]:
    return itertools.product(*(range(s) for s in sizes))


@dataclass(frozen=True)
class SubshiftSpec:
    """A subshift of finite type over ``alphabet`` on Z^d.

    The rule is either a list of forbidden patterns or one 0/1 transition
    matrix per axis (``matrices[n][a][b] == 1`` iff ``b`` may follow ``a``
    along e_n).
    """

    alphabet: Alphabet
    dimension: int
    forbidden: tuple[Pattern, ...] = ()
    matrices: tuple[tuple[tuple[int, ...], ...], ...] | None = None
    background: PeriodicBackground | None = None
    name: str = ""

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.forbidden and self.matrices is not None:
            raise ValueError("give forbidden patterns or matrices, not both")
        for p in self.forbidden:
            if p.domain.dim != self.dimension or not len(p):
                raise ValueError("forbidden patterns must be nonempty and match the dimension")
        if self.matrices is not None:
            k = len(self.alphabet)
            if len(self.matrices) != self.dimension:
                raise ValueError("need one transition matrix per axis")
            for m in self.matrices:
                if len(m) != k or any(len(row) != k for row in m):
                    raise ValueError("transition matrices must be square over the alphabet")
                if any(v not in (0, 1) for row in m for v in row):
                    raise ValueError("transition matrices must have 0/1 entries")
        if self.background is not None:
            self.check_background(self.background)

    # -- constructors -----------------------------------------------------

    @classmethod
    def full_shift(cls, symbols: Iterable, d: int = 1, name: str = "full") -> SubshiftSpec:
        alphabet = Alphabet.of(symbols)
        return cls(alphabet, d, background=PeriodicBackground.constant(0, d), name=name)

    @classmethod
    def from_matrices(cls, symbols: Iterable, matrices, name: str = "") -> SubshiftSpec:
        mats = tuple(tuple(tuple(int(v) for v in row) for row in m) for m in matrices)
        return cls(Alphabet.of(symbols), len(mats), matrices=mats, name=name)

    @classmethod
    def golden_mean(cls) -> SubshiftSpec:
        return cls(
            Alphabet.of("01"),
            1,
            forbidden=(Pattern.word([1, 1]),),
            background=PeriodicBackground.constant(0, 1),
            name="golden_mean",
        )

    @classmethod
    def even_shift_truncated(cls, n: int) -> SubshiftSpec:
        """The even-shift forbidden patterns that fit on Lambda_n."""
        family = tuple(even_shift_pattern(k) for k in range(1, n))
        return cls(
            Alphabet.of("01"),
            1,
            forbidden=family,
            background=PeriodicBackground.constant(0, 1),
            name=f"even_shift<{n}",
        )

    def with_background(self, background: PeriodicBackground) -> SubshiftSpec:
        return SubshiftSpec(
            self.alphabet, self.dimension, self.forbidden, self.matrices, background, self.name
        )

    # -- derived structure ------------------------------------------------

    @cached_property
    def rules(self) -> tuple[Rule, ...]:
        grouped: dict[tuple[Point, ...], set] = {}
        for p in self.forbidden:
            grouped.setdefault(p.domain.points, set()).add(p.values)
        if self.matrices is not None:
            d = self.dimension
            k = len(self.alphabet)
            for n, m in enumerate(self.matrices):
                offsets = (origin(d), unit(n, d))
                bad = {(a, b) for a in range(k) for b in range(k) if m[a][b] == 0}
                if bad:
                    grouped.setdefault(offsets, set()).update(bad)
        return tuple((offs, frozenset(bad)) for offs, bad in sorted(grouped.items()))

    @cached_property
    def window(self) -> Box:
        """Smallest centered box containing every forbidden domain ({0, e_n} for matrices)."""
        d = self.dimension
        if self.matrices is not None:
            return Box.of([origin(d)] + [unit(n, d) for n in range(d)], dim=d)
        r = max((p.domain.max_norm() for p in self.forbidden), default=0)
        return centered_box(r + 1, d)

    @cached_property
    def collar(self) -> Box:
        """Offsets reaching every site of a rule translate that meets a given site."""
        return self.window.difference_set()

    @cached_property
    def reach(self) -> Box:
        """Union of O - O over rule domains O: sites a violation through a given site can touch."""
        d = self.dimension
        pts = {origin(d)}
        for offsets, _ in self.rules:
            pts.update(sub(p, q) for p in offsets for q in offsets)
        return Box.of(pts, dim=d)

    def padded_forbidden(self) -> tuple[Pattern, ...]:
        """The forbidden family rewritten on the single window box.

        Only patterns whose domain fits in the window are padded, so the
        padded family defines the same subshift. Scanning uses :attr:`rules`
        directly, which also catches occurrences in domains smaller than the
        window.
        """
        w = self.window
        pts = w.points
        out = []
        for offsets, bad in self.rules:
            idx = [pts.index(o) for o in offsets]
            free = [t for t in range(len(pts)) if t not in idx]
            for values in sorted(bad):
                for fill in _rect([len(self.alphabet)] * len(free)):
                    v = [0] * len(pts)
                    for t, a in zip(idx, values):
                        v[t] = a
                    for t, a in zip(free, fill):
                        v[t] = a
                    out.append(Pattern(w, tuple(v)))
        return tuple(sorted(set(out), key=lambda p: p.values))

    # -- admissibility ----------------------------------------------------

    def check_background(self, bg: PeriodicBackground) -> None:
        if bg.dim != self.dimension or any(v >= len(self.alphabet) for v in bg.tile):
            raise ValueError("background does not match the spec")
        region = bg.fundamental_box().dilate(self.collar)
        if not is_locally_admissible(bg.as_pattern(region), self):
            raise ValueError("background is not admissible")

    @cached_property
    def default_background(self) -> PeriodicBackground:
        if self.background is not None:
            return self.background
        candidates: list[PeriodicBackground] = [
            PeriodicBackground.constant(a, self.dimension) for a in range(len(self.alphabet))
        ]
        if self.dimension == 1:
            for period in range(2, 7):
                for tile in _rect([len(self.alphabet)] * period):
                    candidates.append(PeriodicBackground.word(tile))
        for bg in candidates:
            try:
                self.check_background(bg)
            except ValueError:
                continue
            return bg
        raise EmptySubshift("no periodic admissible background found")

    @cached_property
    def memory(self) -> int:
        """Block length k of the 1D state graph: max(span of rule domains - 1, 1)."""
        span = max((o[-1][0] - o[0][0] + 1 for o, _ in self.rules), default=1)
        return max(span - 1, 1)

    @cached_property
    def essential_states(self) -> frozenset[tuple[int, ...]]:
        """Length-``memory`` words lying on a bi-infinite path (d = 1 only)."""
        if self.dimension != 1:
            raise ValueError("essential graph only exists for d = 1")
        k = self.memory
        nsym = len(self.alphabet)
        states = set(_search(Box.interval(0, k - 1).points, nsym, self.rules))
        succ = {s: set() for s in states}
        pred = {s: set() for s in states}
        for s in states:
            for a in range(nsym):
                t = s[1:] + (a,)
                if t in states and is_locally_admissible(Pattern.word(s + (a,)), self):
                    succ[s].add(t)
                    pred[t].add(s)
        alive = set(states)
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                if not (succ[s] & alive) or not (pred[s] & alive):
                    alive.discard(s)
                    changed = True
        return frozenset(alive)

    def adjacency(self) -> list[list[int]]:
        """0/1 symbol transition matrix of the essential graph (d = 1, memory 1)."""
        if self.dimension != 1 or self.memory != 1:
            raise ValueError("adjacency needs a 1D spec with window {0, 1}")
        ess = self.essential_states
        k = len(self.alphabet)
        return [
            [
                int((a,) in ess and (b,) in ess and is_locally_admissible(Pattern.word([a, b]), self))
                for b in range(k)
            ]
            for a in range(k)
        ]


def even_shift_pattern(n: int) -> Pattern:
    """The pattern on Lambda_{n+1} with 1 at -n and n and 0 in between."""
    box = centered_box(n + 1, 1)
    return Pattern(box, tuple(1 if abs(p[0]) == n else 0 for p in box.points))


def is_locally_admissible(p: Pattern, spec: SubshiftSpec) -> bool:
    """True iff no forbidden translate lies entirely inside ``p``'s domain."""
    lookup = p.domain._index
    vals = p.values
    for sites, bad in _translates(spec.rules, p.domain.points, lookup.__contains__):
        if tuple(vals[lookup[s]] for s in sites) in bad:
            return False
    return True


def is_admissible_1d(word: Pattern, spec: SubshiftSpec) -> bool:
    """Exact membership of a word in the language of a 1D SFT."""
    if spec.dimension != 1:
        raise ValueError("is_admissible_1d needs a one-dimensional spec")
    if not word.domain.is_interval():
        raise ValueError("word must live on an interval")
    ess = spec.essential_states
    if not ess:
        return False
    if not is_locally_admissible(word, spec):
        return False
    k = spec.memory
    v = word.values
    if len(v) < k:
        return any(s[: len(v)] == v for s in ess)
    return all(v[t : t + k] in ess for t in range(len(v) - k + 1))


def _check_cap(nsym: int, size: int, cap: int | None) -> None:
    cap = default_cap() if cap is None else cap
    if nsym ** size > cap:
        raise CapExceeded(f"{nsym}^{size} patterns exceed the cap {cap}")


def enumerate_patterns(spec: SubshiftSpec, box: Box, cap: int | None = None) -> list[Pattern]:
    """Lexicographically ordered admissible patterns on ``box``.

    Exact (X_box) for d = 1. For d >= 2 a pattern is kept when it extends to a
    locally admissible pattern on ``box`` dilated by the collar.
    """
    nsym = len(spec.alphabet)
    if len(box) == 0:
        if spec.dimension == 1 and not spec.essential_states:
            return []
        return [Pattern.empty(box.dim)]
    if spec.dimension == 1:
        hull = box.hull()
        _check_cap(nsym, len(hull), cap)
        ess = spec.essential_states
        k = spec.memory
        n = len(hull)

        def prefix_ok(vals, t):
            if t >= k - 1:
                return tuple(vals[t - k + 1 : t + 1]) in ess
            if t == n - 1:
                w = tuple(vals[: t + 1])
                return any(s[: t + 1] == w for s in ess)
            return True

        words = _search(hull.points, nsym, spec.rules, prefix_ok=prefix_ok)
        if hull == box:
            return [Pattern(box, w) for w in words]
        idx = [hull.index(p) for p in box.points]
        projected = sorted({tuple(w[t] for t in idx) for w in words})
        return [Pattern(box, w) for w in projected]

    _check_cap(nsym, len(box), cap)
    candidates = _search(box.points, nsym, spec.rules)
    if not spec.rules:
        return [Pattern(box, w) for w in candidates]
    ring = box.dilate(spec.collar).minus(box)
    out = []
    for w in candidates:
        fixed = dict(zip(box.points, w))
        if _search(ring.points, nsym, spec.rules, fixed=fixed.get, first_only=True):
            out.append(Pattern(box, w))
    return out


def admissible_fillings(
    spec: SubshiftSpec, region: Box, context: Callable[[Point], int], cap: int | None = None
) -> list[tuple[int, ...]]:
    """Fillings of ``region`` that create no forbidden translate with ``context`` outside it.

    When ``context`` is a point of X this is exactly the set of eta with
    ``eta x_{region^c}`` in X.
    """
    _check_cap(len(spec.alphabet), len(region), cap)
    return _search(region.points, len(spec.alphabet), spec.rules, fixed=context)


class FramedConfiguration:
    """A pattern on a finite frame glued onto a periodic background."""

    __slots__ = ("interior", "background")

    def __init__(self, interior: Pattern, background: PeriodicBackground):
        if interior.domain.dim != background.dim:
            raise ValueError("interior and background dimensions differ")
        self.interior = interior
        self.background = background

    @classmethod
    def of(cls, spec: SubshiftSpec, pattern: Pattern | None = None, background=None):
        bg = spec.default_background if background is None else background
        if background is not None:
            spec.check_background(bg)
        if pattern is None:
            pattern = Pattern.empty(spec.dimension)
        return cls(pattern, bg)

    @property
    def frame(self) -> Box:
        return self.interior.domain

    @property
    def dim(self) -> int:
        return self.background.dim

    def value(self, i: Point) -> int:
        t = self.interior.domain._index.get(i)
        if t is not None:
            return self.interior.values[t]
        return self.background.value(i)

    def restrict(self, box: Box) -> Pattern:
        return Pattern(box, tuple(self.value(p) for p in box.points))

    def glue(self, pattern: Pattern) -> FramedConfiguration:
        """The configuration equal to ``pattern`` on its domain and to ``self`` elsewhere."""
        if len(pattern) == 0:
            return self
        mapping = self.interior.as_dict()
        mapping.update(pattern.as_dict())
        return FramedConfiguration(Pattern.from_dict(mapping, dim=self.dim), self.background)

    def diff_points(self, other: FramedConfiguration) -> list[Point]:
        if not self.background.same_as(other.background):
            raise ValueError("configurations have distinct backgrounds")
        region = self.frame.union(other.frame)
        return [p for p in region.points if self.value(p) != other.value(p)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FramedConfiguration):
            return NotImplemented
        try:
            return not self.diff_points(other)
        except ValueError:
            return False

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FramedConfiguration(frame={self.frame!r}, values={self.interior.values})"


def shift(x: FramedConfiguration, j: Sequence[int]) -> FramedConfiguration:
    """sigma^j(x): the configuration whose value at i is x at i + j."""
    j = tuple(j)
    interior = x.interior.translate(tuple(-c for c in j))
    return FramedConfiguration(interior, x.background.shifted(j))


def is_admissible(x: FramedConfiguration, spec: SubshiftSpec) -> bool:
    """Exact membership of a framed configuration in the SFT."""
    for sites, bad in _translates(spec.rules, x.frame.points, lambda s: True):
        if tuple(x.value(s) for s in sites) in bad:
            return False
    return True


def agreement_radius(x: FramedConfiguration, y: FramedConfiguration) -> int | None:
    """max{n : x and y agree on Lambda_n}, or None when x == y."""
    diff = x.diff_points(y)
    if not diff:
        return None
    return min(sup_norm(p) for p in diff)


def metric(x: FramedConfiguration, y: FramedConfiguration) -> Fraction:
    """rho(x, y) = 2^{-n(x, y)} as an exact dyadic rational (0 when equal)."""
    n = agreement_radius(x, y)
    if n is None:
        return Fraction(0)
    return Fraction(1, 2**n)
