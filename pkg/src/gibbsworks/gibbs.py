"""Cocycles, specification kernels and DLR checks at finite volume.

For a local potential f and homoclinic configurations x, y the cocycle

    phi_f(x, y) = sum_k f(T^k y) - f(T^k x)

has finitely many nonzero terms, so it is computed exactly. The kernel on a
finite volume Lambda with boundary x is evaluated from the closed form

    gamma_Lambda([w] | x) = 1 / sum_eta exp(phi_f(w x, eta x)) 1{eta x in X},

which, after cancelling the terms that do not see Lambda, is a softmax of the
local energies E(w) = sum_{k in Lambda - window} f(T^k (w x)). All weights are
kept in log domain until the table is materialized.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import EmptySubshift, IncompatibleArguments
from .lattice import Box, Point, add, centered_box, sub, sup_norm
from .potentials import InteractionPotential, LocalPotential, VariationProfile
from .shiftspace import (
    Alphabet,
    FramedConfiguration,
    PeriodicBackground,
    Pattern,
    SubshiftSpec,
    admissible_fillings,
    enumerate_patterns,
)

Lookup = Callable[[Point], int]


# -- cocycles -------------------------------------------------------------


@dataclass(frozen=True)
class CocycleContext:
    f: LocalPotential
    spec: SubshiftSpec

    @property
    def dimension(self) -> int:
        return self.spec.dimension


def _contributing_shifts(f: LocalPotential, region: Sequence[Point]) -> list[Point]:
    """Shifts k whose translated window W + k meets ``region``."""
    return sorted({sub(p, w) for p in region for w in f.window.points})


def cocycle(ctx: CocycleContext, x: FramedConfiguration, y: FramedConfiguration) -> float:
    """phi_f(x, y) = sum_k f(T^k y) - f(T^k x) for configurations with a common background."""
    diff = x.diff_points(y)
    f = ctx.f
    return math.fsum(f.at(y, k) - f.at(x, k) for k in _contributing_shifts(f, diff))


def homoclinic_radius(x: FramedConfiguration, y: FramedConfiguration) -> int:
    """Smallest m with x and y equal outside Lambda_m."""
    return max((sup_norm(p) for p in x.diff_points(y)), default=-1) + 1


def cocycle_abs_partial_sums(
    ctx: CocycleContext, x: FramedConfiguration, y: FramedConfiguration, n_max: int
) -> list[float]:
    """sum_{k in Lambda_N} |f(T^k x) - f(T^k y)| for N = 1..n_max."""
    f = ctx.f
    out = []
    for N in range(1, n_max + 1):
        box = centered_box(N, ctx.dimension)
        out.append(math.fsum(abs(f.at(x, k) - f.at(y, k)) for k in box.points))
    return out


def cocycle_tail_bound(profile: VariationProfile, m: int, n0: int | None = None) -> float:
    """2 |Lambda_{m+1}| ||f||_{SV_d}, a bound on sum_k |f(T^k x) - f(T^k y)|.

    With ``n0`` given, returns the partial tail 2 |Lambda_{m+1}| sum_{n >= n0} n^{d-1} delta_n
    instead, for certifying truncation errors.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    size = (2 * m + 1) ** profile.dimension
    if n0 is None:
        return 2 * size * profile.svd_norm
    return 2 * size * profile.tail(n0)


# -- kernels --------------------------------------------------------------

# each term: (offsets, table, coefficient); energy = sum coef * table[x on offsets + j]
_Term = tuple[tuple[Point, ...], dict, float]


def _energy_plan(terms: Sequence[_Term], region: Box, lookup: Lookup):
    pos = region._index
    plan = []
    for offsets, table, coef in terms:
        for j in sorted({sub(p, o) for p in region.points for o in offsets}):
            sites = (add(o, j) for o in offsets)
            template = tuple((pos[s], 0) if s in pos else (None, lookup(s)) for s in sites)
            plan.append((template, table, coef))
    return plan


def _energy(plan, vals: Sequence[int]) -> float:
    return math.fsum(
        coef * table[tuple(vals[u] if u is not None else c for u, c in template)]
        for template, table, coef in plan
    )


def _log_weights(terms, spec: SubshiftSpec, lam: Box, lookup: Lookup, cap: int | None = None):
    fillings = admissible_fillings(spec, lam, lookup, cap)
    if not fillings:
        raise EmptySubshift("no admissible interior pattern for this boundary")
    plan = _energy_plan(terms, lam, lookup)
    return fillings, np.array([_energy(plan, w) for w in fillings])


def _potential_terms(f: LocalPotential) -> list[_Term]:
    return [(f.window.points, f.table, 1.0)]


def _interaction_terms(Phi: InteractionPotential) -> list[_Term]:
    return [(shape.points, table, -1.0) for shape, table in Phi.terms]


class KernelTable:
    """gamma_Lambda(. | x) over the admissible interior patterns, in lexicographic order."""

    def __init__(
        self,
        volume: Box,
        boundary: FramedConfiguration,
        patterns: Sequence[tuple[int, ...]],
        log_weights: Sequence[float],
        log_partition: float | None = None,
    ):
        self.volume = volume
        self.boundary = boundary
        self.patterns = tuple(patterns)
        self.log_weights = np.asarray(log_weights, dtype=float)
        lse = float(logsumexp(self.log_weights)) if len(self.patterns) else -math.inf
        self._lse = lse
        self.log_partition = lse if log_partition is None else log_partition

    @cached_property
    def log_probs(self) -> np.ndarray:
        return self.log_weights - self._lse

    @cached_property
    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_probs)

    @cached_property
    def _lookup(self) -> dict[tuple[int, ...], int]:
        return {w: t for t, w in enumerate(self.patterns)}

    def __len__(self) -> int:
        return len(self.patterns)

    def prob(self, omega: Pattern | Sequence[int]) -> float:
        key = omega.values if isinstance(omega, Pattern) else tuple(omega)
        t = self._lookup.get(key)
        return 0.0 if t is None else float(self.probabilities[t])

    def entries(self) -> list[tuple[Pattern, float]]:
        return [(Pattern(self.volume, w), float(p)) for w, p in zip(self.patterns, self.probabilities)]

    def rows(self, alphabet: Alphabet) -> list[tuple[str, float, float]]:
        return [
            (alphabet.render(w), float(lw), float(p))
            for w, lw, p in zip(self.patterns, self.log_weights, self.probabilities)
        ]


def kernel(
    f: LocalPotential, spec: SubshiftSpec, lam: Box, x: FramedConfiguration, cap: int | None = None
) -> KernelTable:
    """gamma_Lambda(. | x) for the local potential f."""
    fillings, logw = _log_weights(_potential_terms(f), spec, lam, x.value, cap)
    return KernelTable(lam, x, fillings, logw)


def kernel_from_interaction(
    Phi: InteractionPotential, spec: SubshiftSpec, lam: Box, x: FramedConfiguration, cap: int | None = None
) -> KernelTable:
    """Boltzmann form: weights exp(-H_Lambda(w x)) normalized by Z_Lambda(x).

    ``log_partition`` is log Z with respect to the uniform product measure on A^Lambda.
    """
    fillings, logw = _log_weights(_interaction_terms(Phi), spec, lam, x.value, cap)
    log_z = float(logsumexp(logw)) - len(lam) * math.log(len(Phi.alphabet))
    return KernelTable(lam, x, fillings, logw, log_partition=log_z)


def limit_check(
    f: LocalPotential, spec: SubshiftSpec, lam: Box, x: FramedConfiguration, n: int, cap: int | None = None
) -> float:
    """max_w |gamma^{(n)}(w) - gamma(w)| where gamma^{(n)} uses f_n = sum_{i in Lambda_n} f o T^i."""
    table = kernel(f, spec, lam, x, cap)
    box = centered_box(n, spec.dimension)
    logw = []
    for w in table.patterns:
        y = x.glue(Pattern(lam, w))
        logw.append(math.fsum(f.at(y, k) for k in box.points))
    logw = np.array(logw)
    approx = np.exp(logw - logsumexp(logw))
    return float(np.max(np.abs(approx - table.probabilities)))


def _glued_lookup(region: Box, values: Sequence[int], outer: Lookup) -> Lookup:
    pos = region._index

    def lookup(p):
        t = pos.get(p)
        return values[t] if t is not None else outer(p)

    return lookup


def consistency_residual(
    f: LocalPotential,
    spec: SubshiftSpec,
    lam: Box,
    delta: Box,
    x: FramedConfiguration,
    cap: int | None = None,
) -> float:
    """max over cylinders A on Delta of |sum_w gamma_D(w|x) gamma_L(A | w x) - gamma_D(A|x)|."""
    if not lam.issubset(delta):
        raise IncompatibleArguments("inner volume must lie inside the outer volume")
    terms = _potential_terms(f)
    outer = kernel(f, spec, delta, x, cap)
    inner_idx = [delta.index(p) for p in lam.points]
    mixed: dict[tuple[int, ...], float] = {}
    for w, pw in zip(outer.patterns, outer.probabilities):
        lookup = _glued_lookup(delta, w, x.value)
        fillings, logw = _log_weights(terms, spec, lam, lookup, cap)
        probs = np.exp(logw - logsumexp(logw))
        for xi, pxi in zip(fillings, probs):
            alpha = list(w)
            for t, a in zip(inner_idx, xi):
                alpha[t] = a
            alpha = tuple(alpha)
            mixed[alpha] = mixed.get(alpha, 0.0) + pw * pxi
    keys = set(mixed) | set(outer.patterns)
    return max(abs(mixed.get(a, 0.0) - outer.prob(a)) for a in keys)


def properness_check(table: KernelTable, B: Pattern, x: FramedConfiguration | None = None) -> float:
    """|gamma_Lambda([B] | x) - 1{x in [B]}| for a cylinder B outside Lambda."""
    x = table.boundary if x is None else x
    if not B.domain.isdisjoint(table.volume):
        raise IncompatibleArguments("cylinder domain overlaps the kernel volume")
    mass = 0.0
    for w, p in zip(table.patterns, table.probabilities):
        lookup = _glued_lookup(table.volume, w, x.value)
        if all(lookup(q) == v for q, v in B.items()):
            mass += p
    indicator = 1.0 if all(x.value(q) == v for q, v in B.items()) else 0.0
    return abs(mass - indicator)


# -- cylinder measures ----------------------------------------------------


class CylinderMeasure(ABC):
    """Evaluates mu([w]) for finite patterns w."""

    dimension: int = 1

    @abstractmethod
    def prob(self, pattern: Pattern) -> float: ...

    def __call__(self, pattern: Pattern) -> float:
        return self.prob(pattern)


class Bernoulli(CylinderMeasure):
    def __init__(self, alphabet: Alphabet, weights: Sequence[float], dimension: int = 1):
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(alphabet),) or np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise ValueError("Bernoulli weights must be a probability vector over the alphabet")
        self.alphabet = alphabet
        self.weights = w
        self.dimension = dimension

    def prob(self, pattern: Pattern) -> float:
        return float(np.prod([self.weights[v] for v in pattern.values])) if len(pattern) else 1.0

    def log_potential(self) -> LocalPotential:
        """f(x) = log p(x_0); its Gibbs kernels are the product conditionals."""
        table = {(a,): math.log(p) if p > 0 else -math.inf for a, p in enumerate(self.weights)}
        return LocalPotential(self.alphabet, Box.of([(0,) * self.dimension]), table)


class FiniteVolumeGibbs(CylinderMeasure):
    """The measure gamma_Delta(. | x) seen as a measure on configurations."""

    def __init__(self, table: KernelTable):
        self.table = table
        self.dimension = table.volume.dim

    @classmethod
    def from_potential(cls, f, spec, box, x) -> FiniteVolumeGibbs:
        return cls(kernel(f, spec, box, x))

    @classmethod
    def from_interaction(cls, Phi, spec, box, x) -> FiniteVolumeGibbs:
        return cls(kernel_from_interaction(Phi, spec, box, x))

    @property
    def volume(self) -> Box:
        return self.table.volume

    @property
    def boundary(self) -> FramedConfiguration:
        return self.table.boundary

    def prob(self, pattern: Pattern) -> float:
        if len(pattern) == 0:
            return 1.0
        vol = self.table.volume
        inside = []
        for q, v in pattern.items():
            if q in vol:
                inside.append((vol.index(q), v))
            elif self.table.boundary.value(q) != v:
                return 0.0
        return math.fsum(
            p for w, p in zip(self.table.patterns, self.table.probabilities) if all(w[t] == v for t, v in inside)
        )


# -- DLR ------------------------------------------------------------------


@dataclass(frozen=True)
class DLRReport:
    max_residual: float
    argmax: tuple[Pattern, Pattern] | None  # (interior w, boundary zeta)
    skipped: int
    checked: int


def required_boundary(f: LocalPotential, spec: SubshiftSpec, lam: Box) -> Box:
    """Sites that determine gamma_Lambda(. | x): Lambda plus the potential and rule reach."""
    return lam.dilate(f.window.difference_set()).union(lam.dilate(spec.reach))


def dlr_residual(
    mu: CylinderMeasure,
    f: LocalPotential,
    spec: SubshiftSpec,
    lam: Box,
    delta: Box,
    background: PeriodicBackground | None = None,
    cap: int | None = None,
) -> DLRReport:
    """max |mu([w zeta]) / mu([zeta]) - gamma_Lambda([w] | x_zeta)| over boundaries zeta on Delta \\ Lambda.

    Boundaries of zero mass are skipped and counted.
    """
    if not lam.issubset(delta) or len(lam) == len(delta):
        raise IncompatibleArguments("outer volume must strictly contain the inner volume")
    if not required_boundary(f, spec, lam).issubset(delta):
        raise IncompatibleArguments("boundary layer too thin to determine the kernel")
    bg = spec.default_background if background is None else background
    ring = delta.minus(lam)
    ring_idx = [delta.index(p) for p in ring.points]
    inner_idx = [delta.index(p) for p in lam.points]
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for p in enumerate_patterns(spec, delta, cap):
        zeta = tuple(p.values[t] for t in ring_idx)
        groups.setdefault(zeta, []).append(tuple(p.values[t] for t in inner_idx))

    worst, argmax, skipped, checked = 0.0, None, 0, 0
    for zeta in sorted(groups):
        zp = Pattern(ring, zeta)
        mass = mu.prob(zp)
        if mass <= 0.0:
            skipped += 1
            continue
        checked += 1
        table = kernel(f, spec, lam, FramedConfiguration(zp, bg), cap)
        candidates = sorted(set(groups[zeta]) | set(table.patterns))
        for w in candidates:
            joint = mu.prob(_join(lam, w, ring, zeta))
            r = abs(joint / mass - table.prob(w))
            if r > worst or argmax is None:
                worst, argmax = max(worst, r), (Pattern(lam, w), zp)
    return DLRReport(worst, argmax, skipped, checked)


def _join(lam: Box, w, ring: Box, zeta) -> Pattern:
    mapping = dict(zip(lam.points, w))
    mapping.update(zip(ring.points, zeta))
    return Pattern.from_dict(mapping, dim=lam.dim)
