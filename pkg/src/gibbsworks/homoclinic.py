"""Finite permutations, pattern compatibility and the swap involutions.

Two admissible patterns a, b on a box B are compatible when they admit the
same exterior completions: a x_{B^c} is in X exactly when b x_{B^c} is. The
swap xi_{a,b} exchanging a and b on B (and fixing every other configuration)
is then a homeomorphism of X that changes only finitely many sites, and every
permutation of patterns on B that preserves compatibility classes factors into
such swaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import IncompatibleArguments
from .gibbs import CocycleContext, FiniteVolumeGibbs, cocycle, required_boundary
from .lattice import Box, closed_ball, centered_box
from .potentials import LocalPotential
from .shiftspace import (
    FramedConfiguration,
    Pattern,
    SubshiftSpec,
    enumerate_patterns,
    is_admissible_1d,
    _translates,
)


# -- permutations ---------------------------------------------------------


@dataclass(frozen=True)
class FinitePermutation:
    """A bijection of a finite ordered domain; ``images[t]`` is the image of ``domain[t]``."""

    domain: tuple
    images: tuple

    def __post_init__(self):
        if len(self.domain) != len(self.images) or set(self.domain) != set(self.images):
            raise ValueError("images must be a rearrangement of the domain")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("domain elements must be distinct")

    @classmethod
    def from_mapping(cls, mapping: dict) -> FinitePermutation:
        dom = tuple(sorted(mapping))
        return cls(dom, tuple(mapping[x] for x in dom))

    @classmethod
    def identity(cls, domain: Iterable) -> FinitePermutation:
        dom = tuple(sorted(domain))
        return cls(dom, dom)

    @classmethod
    def from_cycles(cls, domain: Iterable, cycles: Iterable[Sequence]) -> FinitePermutation:
        mapping = {x: x for x in domain}
        for cyc in cycles:
            for s, t in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if s not in mapping:
                    raise ValueError(f"cycle element {s!r} outside the domain")
                mapping[s] = t
        return cls.from_mapping(mapping)

    @classmethod
    def transposition(cls, domain: Iterable, a, b) -> FinitePermutation:
        return cls.from_cycles(domain, [(a, b)] if a != b else [])

    @property
    def _map(self) -> dict:
        return dict(zip(self.domain, self.images))

    def __call__(self, x):
        return self._map[x]

    def __len__(self) -> int:
        return len(self.domain)

    def compose(self, other: FinitePermutation) -> FinitePermutation:
        """self o other (apply ``other`` first)."""
        m, o = self._map, other._map
        return FinitePermutation(other.domain, tuple(m[o[x]] for x in other.domain))

    def inverse(self) -> FinitePermutation:
        return FinitePermutation.from_mapping({y: x for x, y in zip(self.domain, self.images)})

    def is_identity(self) -> bool:
        return self.domain == self.images

    def cycles(self) -> list[tuple]:
        out, seen = [], set()
        m = self._map
        for x in self.domain:
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = m[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = m[y]
            out.append(tuple(cyc))
        return out


Transposition = tuple[Hashable, Hashable]


def orbit_decompose(pi: FinitePermutation) -> list[Transposition]:
    """Transpositions whose composition (rightmost applied first) is ``pi``.

    Orbits are traversed from their least element x in domain order; an orbit
    of length n contributes tau_{x, pi^{n-1} x}, ..., tau_{x, pi x}.
    """
    out: list[Transposition] = []
    for cyc in pi.cycles():
        x = cyc[0]
        out.extend((x, y) for y in reversed(cyc[1:]))
    return out


def compose_transpositions(domain: Iterable, seq: Sequence[Transposition]) -> FinitePermutation:
    """seq[0] o seq[1] o ... o seq[-1]."""
    result = FinitePermutation.identity(domain)
    for a, b in seq:
        result = result.compose(FinitePermutation.transposition(result.domain, a, b))
    return result


# -- compatibility --------------------------------------------------------


def _ring(box: Box, depth: int) -> Box:
    return box.dilate(centered_box(depth + 1, box.dim)).minus(box)


def _extension_ok(spec: SubshiftSpec, a: Pattern, ring: Box, c: Sequence[int]) -> bool:
    """No rule translate meeting a's box, and lying in box u ring, is violated by a u c."""
    vals = dict(zip(a.domain.points, a.values))
    vals.update(zip(ring.points, c))
    for sites, bad in _translates(spec.rules, a.domain.points, vals.__contains__):
        if tuple(vals[s] for s in sites) in bad:
            return False
    return True


def _default_depth(spec: SubshiftSpec) -> int:
    if spec.dimension == 1:
        return spec.memory
    return max(spec.reach.max_norm(), 1)


def compatibility_signature(
    a: Pattern, spec: SubshiftSpec, depth: int | None = None, cap: int | None = None
) -> frozenset:
    """The admissible collar rings around a's box that a can be glued to."""
    depth = _default_depth(spec) if depth is None else depth
    ring = _ring(a.domain, depth)
    return frozenset(
        c.values for c in enumerate_patterns(spec, ring, cap) if _extension_ok(spec, a, ring, c.values)
    )


def compatible(a: Pattern, b: Pattern, spec: SubshiftSpec, depth: int | None = None) -> bool:
    """a ~ b: both patterns admit exactly the same exterior completions.

    Exact for d = 1 with the default depth (the rule memory). For d >= 2 the
    collar of the given depth only approximates the exterior.
    """
    if a.domain != b.domain:
        raise IncompatibleArguments("patterns live on different boxes")
    if a.values == b.values:
        return True
    return compatibility_signature(a, spec, depth) == compatibility_signature(b, spec, depth)


def compatible_by_extension(a: Pattern, b: Pattern, spec: SubshiftSpec, depth: int) -> bool:
    """Independent 1D check: for every admissible ring c of the given depth,
    the words a c and b c are both or neither in the language."""
    if spec.dimension != 1:
        raise ValueError("extension check is one-dimensional")
    ring = _ring(a.domain, depth)
    for c in enumerate_patterns(spec, ring):
        wa = Pattern.from_dict({**a.as_dict(), **c.as_dict()}, dim=1)
        wb = Pattern.from_dict({**b.as_dict(), **c.as_dict()}, dim=1)
        if is_admissible_1d(wa, spec) != is_admissible_1d(wb, spec):
            return False
    return True


@dataclass(frozen=True)
class CompatibilityClassing:
    box: Box
    patterns: tuple[tuple[int, ...], ...]
    classes: tuple[tuple[tuple[int, ...], ...], ...]
    approximate: bool

    def class_of(self, values: tuple[int, ...]) -> int:
        for t, cls in enumerate(self.classes):
            if values in cls:
                return t
        raise KeyError(values)


def classify(spec: SubshiftSpec, N: int, depth: int | None = None, cap: int | None = None) -> CompatibilityClassing:
    """Compatibility classes of the admissible patterns on B_N."""
    box = closed_ball(N, spec.dimension)
    pats = enumerate_patterns(spec, box, cap)
    groups: dict[frozenset, list] = {}
    for p in pats:
        groups.setdefault(compatibility_signature(p, spec, depth, cap), []).append(p.values)
    classes = tuple(sorted((tuple(v) for v in groups.values()), key=lambda c: c[0]))
    return CompatibilityClassing(box, tuple(p.values for p in pats), classes, spec.dimension > 1)


# -- involutions ----------------------------------------------------------


@dataclass(frozen=True)
class BlockInvolution:
    """xi_{a,b}: swap a and b on the box, identity elsewhere."""

    box: Box
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __call__(self, x: FramedConfiguration) -> FramedConfiguration:
        cur = x.restrict(self.box).values
        if cur == self.a:
            return x.glue(Pattern(self.box, self.b))
        if cur == self.b:
            return x.glue(Pattern(self.box, self.a))
        return x

    def on_values(self, values: tuple[int, ...]) -> tuple[int, ...]:
        return self.b if values == self.a else self.a if values == self.b else values

    def on_pattern(self, p: Pattern) -> Pattern:
        """Action on a pattern whose domain contains the box."""
        cur = p.restrict(self.box).values
        new = self.on_values(cur)
        if new == cur:
            return p
        d = p.as_dict()
        d.update(zip(self.box.points, new))
        return Pattern(p.domain, tuple(d[q] for q in p.domain.points))

    def is_identity(self) -> bool:
        return self.a == self.b


def involution(a: Pattern, b: Pattern, spec: SubshiftSpec) -> BlockInvolution:
    if not compatible(a, b, spec):
        raise IncompatibleArguments("involution needs compatible patterns")
    return BlockInvolution(a.domain, a.values, b.values)


def decompose_block_automorphism(pi_tilde: FinitePermutation, classing: CompatibilityClassing) -> list[BlockInvolution]:
    """Swaps xi_0, xi_1, ... with xi_0 o xi_1 o ... acting on patterns as ``pi_tilde``."""
    if set(pi_tilde.domain) != set(classing.patterns):
        raise IncompatibleArguments("permutation must act on the classified patterns")
    for p in pi_tilde.domain:
        if classing.class_of(p) != classing.class_of(pi_tilde(p)):
            raise IncompatibleArguments("permutation breaks a compatibility class")
    return [BlockInvolution(classing.box, a, b) for a, b in orbit_decompose(pi_tilde)]


def compose_involutions_on_patterns(seq: Sequence[BlockInvolution], patterns: Iterable) -> FinitePermutation:
    mapping = {}
    for p in patterns:
        v = p
        for xi in reversed(seq):
            v = xi.on_values(v)
        mapping[p] = v
    return FinitePermutation.from_mapping(mapping)


def density_check(mu: FiniteVolumeGibbs, xi: BlockInvolution, f: LocalPotential, spec: SubshiftSpec) -> float:
    """max over cylinders C on the outer box of |mu(xi C) / mu(C) - exp(phi_f(x_C, xi x_C))|."""
    outer = mu.volume
    if not required_boundary(f, spec, xi.box).issubset(outer):
        raise IncompatibleArguments("boundary layer too thin around the involution box")
    if xi.is_identity():
        return 0.0
    ctx = CocycleContext(f, spec)
    table = mu.table
    index = {w: t for t, w in enumerate(table.patterns)}
    worst = 0.0
    for w, lw, p in zip(table.patterns, table.log_weights, table.probabilities):
        if p <= 0:
            continue
        C = Pattern(outer, w)
        image = index.get(xi.on_pattern(C).values)
        # the normalization cancels in the ratio, so take it from the unnormalized weights
        ratio = 0.0 if image is None else math.exp(table.log_weights[image] - lw)
        x = mu.boundary.glue(C)
        worst = max(worst, abs(ratio - math.exp(cocycle(ctx, x, xi(x)))))
    return worst
