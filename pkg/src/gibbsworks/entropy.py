"""Entropy of finite partitions and block-entropy rates of cylinder measures.

All logarithms are natural; 0 log 0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .gibbs import CylinderMeasure
from .lattice import centered_box
from .shiftspace import SubshiftSpec, enumerate_patterns


@dataclass(frozen=True, eq=False)
class WeightedSpace:
    outcomes: tuple
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.outcomes),):
            raise ValueError("one weight per outcome")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be a probability vector")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int) -> WeightedSpace:
        return cls(tuple(range(n)), np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return len(self.outcomes)


@dataclass(frozen=True)
class Partition:
    """A block label for every outcome of a space."""

    labels: tuple[Hashable, ...]

    @classmethod
    def trivial(cls, n: int) -> Partition:
        return cls((0,) * n)

    @classmethod
    def discrete(cls, n: int) -> Partition:
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.labels)


def _check(space: WeightedSpace, *parts: Partition) -> None:
    for p in parts:
        if len(p) != len(space):
            raise ValueError("partition does not label every outcome")


def block_masses(space: WeightedSpace, alpha: Partition) -> dict:
    _check(space, alpha)
    masses: dict = {}
    for lab, w in zip(alpha.labels, space.weights):
        masses[lab] = masses.get(lab, 0.0) + w
    return masses


def _h(masses) -> float:
    return math.fsum(-m * math.log(m) for m in masses if m > 0)


def entropy(space: WeightedSpace, alpha: Partition) -> float:
    """H(alpha) = sum -mu(A) log mu(A)."""
    return _h(block_masses(space, alpha).values())


def refine(alpha: Partition, beta: Partition) -> Partition:
    """alpha v beta, labelled by pairs of block labels."""
    if len(alpha) != len(beta):
        raise ValueError("partitions live on different spaces")
    return Partition(tuple(zip(alpha.labels, beta.labels)))


def conditional_entropy(space: WeightedSpace, alpha: Partition, beta: Partition) -> float:
    """H(alpha | sigma(beta)) = sum_{A, B} -mu(A n B) log(mu(A n B) / mu(B))."""
    joint = block_masses(space, refine(alpha, beta))
    mb = block_masses(space, beta)
    return math.fsum(-m * math.log(m / mb[b]) for (_, b), m in joint.items() if m > 0)


def is_finer(space: WeightedSpace, beta: Partition, alpha: Partition) -> bool:
    """True iff every alpha-block is a union of beta-blocks up to null outcomes."""
    _check(space, alpha, beta)
    seen: dict = {}
    for a, b, w in zip(alpha.labels, beta.labels, space.weights):
        if w <= 0:
            continue
        if seen.setdefault(b, a) != a:
            return False
    return True


def chain_rule_residual(space: WeightedSpace, alpha: Partition, beta: Partition) -> float:
    """|H(alpha v beta) - H(alpha) - H(beta | sigma(alpha))|."""
    joint = entropy(space, refine(alpha, beta))
    return abs(joint - entropy(space, alpha) - conditional_entropy(space, beta, alpha))


def bernoulli_rate(p: Sequence[float]) -> float:
    """-sum p(a) log p(a), the entropy of the Bernoulli shift with weights p."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("p must be a probability vector")
    return _h(p.tolist())


def block_entropy(mu: CylinderMeasure, spec: SubshiftSpec, n: int, cap: int | None = None) -> float:
    """H_mu of the partition into cylinders on Lambda_n."""
    box = centered_box(n, spec.dimension)
    return _h(mu.prob(p) for p in enumerate_patterns(spec, box, cap))


def block_entropy_rates(
    mu: CylinderMeasure, spec: SubshiftSpec, n_max: int, cap: int | None = None
) -> list[float]:
    """H_mu(alpha^{Lambda_n}) / |Lambda_n| for n = 1..n_max."""
    return [
        block_entropy(mu, spec, n, cap) / len(centered_box(n, spec.dimension))
        for n in range(1, n_max + 1)
    ]
