"""Local potentials, variations, interaction potentials and Hamiltonians.

Energies are in natural-log units and there is no inverse temperature: beta is
absorbed into the couplings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .lattice import Box, Point, add, centered_box, origin, sub, unit
from .shiftspace import Alphabet, FramedConfiguration, Pattern, SubshiftSpec, enumerate_patterns


def _all_keys(alphabet: Alphabet, size: int):
    return itertools.product(range(len(alphabet)), repeat=size)


@dataclass(frozen=True)
class LocalPotential:
    """f(x) = table[x restricted to window], for every pattern on the window."""

    alphabet: Alphabet
    window: Box
    table: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        expected = len(self.alphabet) ** len(self.window)
        if len(self.table) != expected:
            raise ValueError(f"table must cover all {expected} window patterns")

    @classmethod
    def from_function(
        cls, alphabet: Alphabet, window: Box, fn: Callable[[tuple[float, ...]], float]
    ) -> LocalPotential:
        """Tabulate ``fn`` applied to the numeric symbol values on the window."""
        vals = alphabet.values
        table = {
            key: float(fn(tuple(vals[a] for a in key)))
            for key in _all_keys(alphabet, len(window))
        }
        return cls(alphabet, window, table)

    @classmethod
    def constant(cls, alphabet: Alphabet, c: float, d: int = 1) -> LocalPotential:
        return cls.from_function(alphabet, Box.of([origin(d)]), lambda v: c)

    @classmethod
    def site(cls, alphabet: Alphabet, weights: Mapping[str, float], d: int = 1) -> LocalPotential:
        """f(x) = weights[x_0] (missing symbols weigh 0)."""
        table = {(a,): float(weights.get(s, 0.0)) for a, s in enumerate(alphabet.symbols)}
        return cls(alphabet, Box.of([origin(d)]), table)

    @property
    def dim(self) -> int:
        return self.window.dim

    def __call__(self, key: Sequence[int]) -> float:
        return self.table[tuple(key)]

    def at(self, x: FramedConfiguration, k: Point | None = None) -> float:
        """f(T^k x)."""
        if k is None:
            k = origin(self.dim)
        return self.table[tuple(x.value(add(w, k)) for w in self.window.points)]

    def on_pattern(self, p: Pattern) -> float:
        """f evaluated on any configuration extending ``p`` (window must lie in its domain)."""
        return self.table[tuple(p[w] for w in self.window.points)]

    def extend(self, window: Box) -> LocalPotential:
        """The same function tabulated on a larger window."""
        if not self.window.issubset(window):
            raise ValueError("new window must contain the old one")
        idx = [window.index(w) for w in self.window.points]
        table = {
            key: self.table[tuple(key[t] for t in idx)]
            for key in _all_keys(self.alphabet, len(window))
        }
        return LocalPotential(self.alphabet, window, table)

    def __add__(self, other: LocalPotential) -> LocalPotential:
        w = self.window.union(other.window)
        a, b = self.extend(w), other.extend(w)
        return LocalPotential(self.alphabet, w, {k: a.table[k] + b.table[k] for k in a.table})

    def scale(self, c: float) -> LocalPotential:
        return LocalPotential(self.alphabet, self.window, {k: c * v for k, v in self.table.items()})

    def sup_norm(self, spec: SubshiftSpec | None = None) -> float:
        """max |f| over admissible window patterns (all patterns when spec is None)."""
        if spec is None:
            return max(abs(v) for v in self.table.values())
        pats = enumerate_patterns(spec, self.window)
        return max((abs(self.table[p.values]) for p in pats), default=0.0)


@dataclass(frozen=True)
class VariationProfile:
    deltas: tuple[float, ...]  # deltas[n - 1] = delta_n; zero from len(deltas) on
    sup_norm: float
    dimension: int

    def delta(self, n: int) -> float:
        return self.deltas[n - 1] if n <= len(self.deltas) else 0.0

    @property
    def svd_norm(self) -> float:
        return self.sup_norm + self.tail(1)

    def tail(self, n0: int) -> float:
        """sum_{n >= n0} n^{d-1} delta_n."""
        d = self.dimension
        return sum(n ** (d - 1) * self.delta(n) for n in range(max(n0, 1), len(self.deltas) + 1))


def _locality_radius(f: LocalPotential) -> int:
    """Smallest n0 with window inside Lambda_{n0}."""
    return f.window.max_norm() + 1


def variation(f: LocalPotential, n: int, spec: SubshiftSpec, cap: int | None = None) -> float:
    """delta_n(f): sup |f(x) - f(y)| over x, y in X agreeing on Lambda_n."""
    if n < 1:
        raise ValueError("variation needs n >= 1")
    lam = centered_box(n, f.dim)
    if f.window.issubset(lam):
        return 0.0
    region = lam.union(f.window)
    lo: dict[tuple, float] = {}
    hi: dict[tuple, float] = {}
    for p in enumerate_patterns(spec, region, cap):
        key = tuple(p[q] for q in lam.points)
        v = f.on_pattern(p)
        lo[key] = min(lo.get(key, v), v)
        hi[key] = max(hi.get(key, v), v)
    return max((hi[k] - lo[k] for k in hi), default=0.0)


def variation_profile(f: LocalPotential, spec: SubshiftSpec, cap: int | None = None) -> VariationProfile:
    n0 = _locality_radius(f)
    deltas = tuple(variation(f, n, spec, cap) for n in range(1, n0))
    return VariationProfile(deltas, f.sup_norm(spec), f.dim)


def svd_norm(f: LocalPotential, spec: SubshiftSpec, cap: int | None = None) -> float:
    """||f||_{SV_d} = ||f||_inf + sum_n n^{d-1} delta_n(f)."""
    return variation_profile(f, spec, cap).svd_norm


@dataclass(frozen=True)
class InteractionPotential:
    """A translation-invariant, finite-range interaction.

    Each term ``(shape, table)`` generates Phi_{shape + i}(x) = table[x on shape + i]
    for every i. Shapes are stored with their least point at the origin and
    equal shapes are merged, so each finite set receives exactly one term.
    """

    alphabet: Alphabet
    terms: tuple[tuple[Box, Mapping[tuple[int, ...], float]], ...]

    @classmethod
    def of(cls, alphabet: Alphabet, terms) -> InteractionPotential:
        merged: dict[Box, dict] = {}
        for shape, table in terms:
            if len(table) != len(alphabet) ** len(shape):
                raise ValueError("interaction table must cover all shape patterns")
            base = shape.points[0]
            canon = shape.translate(tuple(-c for c in base))
            acc = merged.setdefault(canon, {k: 0.0 for k in table})
            for k, v in table.items():
                acc[k] += float(v)
        items = sorted(merged.items(), key=lambda kv: (len(kv[0]), kv[0].points))
        return cls(alphabet, tuple(items))

    @classmethod
    def zero(cls, alphabet: Alphabet) -> InteractionPotential:
        return cls(alphabet, ())

    @property
    def range(self) -> int:
        return max((shape.max_norm() for shape, _ in self.terms), default=0)

    def term_sup(self, k: int, spec: SubshiftSpec | None = None) -> float:
        shape, table = self.terms[k]
        if spec is None:
            return max(abs(v) for v in table.values())
        pats = enumerate_patterns(spec, shape)
        return max((abs(table[p.values]) for p in pats), default=0.0)


def hamiltonian(Phi: InteractionPotential, lam: Box, x: FramedConfiguration) -> float:
    """H_Lambda(x): sum of Phi_Delta(x) over the sets Delta meeting Lambda."""
    total = 0.0
    for shape, table in Phi.terms:
        shifts = {sub(p, s) for p in lam.points for s in shape.points}
        for j in sorted(shifts):
            total += table[tuple(x.value(add(s, j)) for s in shape.points)]
    return total


def a_phi(Phi: InteractionPotential, d: int = 1) -> LocalPotential:
    """A_Phi(x) = -sum over sets containing 0 of Phi_Lambda(x) / |Lambda|."""
    alphabet = Phi.alphabet
    if not Phi.terms:
        return LocalPotential.constant(alphabet, 0.0, d)
    pts = set()
    for shape, _ in Phi.terms:
        for s in shape.points:
            pts.update(sub(q, s) for q in shape.points)
    window = Box.of(pts)
    index = window._index
    parts = []
    for shape, table in Phi.terms:
        for s in shape.points:
            idx = [index[sub(q, s)] for q in shape.points]
            parts.append((idx, table, len(shape)))
    table = {}
    for key in _all_keys(alphabet, len(window)):
        table[key] = -sum(t[tuple(key[i] for i in idx)] / size for idx, t, size in parts)
    return LocalPotential(alphabet, window, table)


ISING_ALPHABET = Alphabet(("-1", "+1"))


def ising(J: float, h: float, d: int = 1) -> tuple[InteractionPotential, LocalPotential]:
    """The Ising interaction Phi^{J,h} and its one-site function f^{J,h}.

    Phi_{i,j} = -J x_i x_j for nearest neighbours, Phi_{i} = -h x_i, and
    f^{J,h}(x) = (J/2) sum_{j ~ 0} x_0 x_j + h x_0 on the plus-shaped window.
    """
    alphabet = ISING_ALPHABET
    vals = alphabet.values
    terms = []
    for n in range(d):
        shape = Box.of([origin(d), unit(n, d)])
        terms.append((shape, {(a, b): -J * vals[a] * vals[b] for a in range(2) for b in range(2)}))
    terms.append((Box.of([origin(d)]), {(a,): -h * vals[a] for a in range(2)}))
    Phi = InteractionPotential.of(alphabet, terms)

    neighbours = [unit(n, d) for n in range(d)] + [tuple(-c for c in unit(n, d)) for n in range(d)]
    window = Box.of([origin(d)] + neighbours)
    c = window.index(origin(d))
    nb = [window.index(q) for q in neighbours]

    def f(v):
        return 0.5 * J * sum(v[c] * v[t] for t in nb) + h * v[c]

    return Phi, LocalPotential.from_function(alphabet, window, f)


def absolute_summability_bound(
    Phi: InteractionPotential, i: Point | None = None, spec: SubshiftSpec | None = None
) -> float:
    """sum over sets Lambda containing i of ||Phi_Lambda||_inf (independent of i)."""
    # a shape S has exactly |S| translates containing any given site
    return sum(len(shape) * Phi.term_sup(k, spec) for k, (shape, _) in enumerate(Phi.terms))
