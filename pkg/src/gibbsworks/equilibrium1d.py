"""One-dimensional thermodynamics through transfer matrices.

The pressure of a nearest-neighbour pair potential g on a one-step SFT is the
log of the Perron root of M(a, b) = A(a, b) exp(g(a, b)). The equilibrium
measure is the Markov chain built from the Perron vectors (Parry's
construction).

Site potentials f with window inside {-1, 0, 1} are recoded to pair form by
splitting f(a, b, c) = L(a, b) + R(b, c) and setting g(b, c) = L(b, c) + R(b, c).
The split is fixed by R(b, c*(b)) = 0 where c*(b) is the least successor of b
in the essential graph. Any other split changes g by a coboundary
u(b) - u(c), which leaves the pressure, the Markov measure and all cocycles
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySubshift, IncompatibleArguments, ReducibleMatrix
from .gibbs import CylinderMeasure
from .lattice import Box
from .potentials import ISING_ALPHABET, LocalPotential
from .shiftspace import Alphabet, Pattern, SubshiftSpec


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """M(a, b) = A(a, b) exp(g(a, b)) over the essential graph, kept in log domain."""

    alphabet: Alphabet
    allowed: np.ndarray  # bool, trimmed to the essential graph
    pair: np.ndarray  # g(a, b); only meaningful where allowed

    @property
    def size(self) -> int:
        return len(self.alphabet)

    @property
    def log_entries(self) -> np.ndarray:
        return np.where(self.allowed, self.pair, -np.inf)

    @property
    def entries(self) -> np.ndarray:
        return np.where(self.allowed, np.exp(np.where(self.allowed, self.pair, 0.0)), 0.0)

    @property
    def essential(self) -> list[int]:
        return [a for a in range(self.size) if self.allowed[a].any()]

    def relabel(self, perm: Sequence[int]) -> TransferMatrix:
        """The matrix of the same shift with symbol a renamed perm[a]."""
        inv = np.argsort(perm)
        symbols = tuple(self.alphabet.symbols[i] for i in inv)
        return TransferMatrix(Alphabet(symbols), self.allowed[np.ix_(inv, inv)], self.pair[np.ix_(inv, inv)])


def _require_one_step(spec: SubshiftSpec) -> None:
    if spec.dimension != 1:
        raise IncompatibleArguments("transfer matrices need a one-dimensional spec")
    if spec.memory != 1:
        raise IncompatibleArguments("transfer matrices need rules on windows of width 2")


def pair_potential(f: LocalPotential, spec: SubshiftSpec, atol: float = 1e-12) -> np.ndarray:
    """Pair form g(a, b) of a site potential whose window lies in {-1, 0, 1}."""
    _require_one_step(spec)
    allowed = np.array(spec.adjacency(), dtype=bool)
    k = len(spec.alphabet)
    if not allowed.any():
        raise EmptySubshift("the subshift is empty")
    three = Box.interval(-1, 1)
    if not f.window.issubset(three):
        raise IncompatibleArguments("potential window must lie inside {-1, 0, 1}")
    if f.window.issubset(Box.interval(0, 1)):
        F = f.extend(Box.interval(0, 1))
        return np.array([[F((a, b)) for b in range(k)] for a in range(k)], dtype=float)

    F = f.extend(three)
    succ = {b: int(np.flatnonzero(allowed[b])[0]) for b in range(k) if allowed[b].any()}
    pred = {b: int(np.flatnonzero(allowed[:, b])[0]) for b in range(k) if allowed[:, b].any()}

    def L(a, b):
        return F((a, b, succ[b]))

    def R(b, c):
        a = pred[b]
        return F((a, b, c)) - F((a, b, succ[b]))

    scale = max(1.0, f.sup_norm())
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if allowed[a, b] and allowed[b, c]:
                    if abs(F((a, b, c)) - L(a, b) - R(b, c)) > atol * scale:
                        raise IncompatibleArguments(
                            "potential is not a sum of nearest-neighbour pair terms"
                        )
    g = np.zeros((k, k))
    for b in range(k):
        for c in range(k):
            if allowed[b, c]:
                g[b, c] = L(b, c) + R(b, c)
    return g


def ising_pair(J: float, h: float) -> np.ndarray:
    """g(a, b) = J ab + h (a + b) / 2 on the spins -1, +1."""
    v = ISING_ALPHABET.values
    return np.array([[J * a * b + h * (a + b) / 2 for b in v] for a in v])


def transfer_matrix(spec: SubshiftSpec, g: np.ndarray | LocalPotential | None = None) -> TransferMatrix:
    _require_one_step(spec)
    allowed = np.array(spec.adjacency(), dtype=bool)
    if not allowed.any():
        raise EmptySubshift("the subshift is empty")
    k = len(spec.alphabet)
    if g is None:
        pair = np.zeros((k, k))
    elif isinstance(g, LocalPotential):
        pair = pair_potential(g, spec)
    else:
        pair = np.asarray(g, dtype=float)
        if pair.shape != (k, k):
            raise IncompatibleArguments("pair potential must be |A| x |A|")
    return TransferMatrix(spec.alphabet, allowed, pair)


@dataclass(frozen=True, eq=False)
class PerronData:
    lam: float
    log_lam: float
    right: np.ndarray  # max-normalized, zero off the essential symbols
    left: np.ndarray
    iterations: int


def _is_irreducible(adj: np.ndarray) -> bool:
    n = len(adj)
    reach = adj.astype(bool) | np.eye(n, dtype=bool)
    for _ in range(max(1, int(math.ceil(math.log2(max(n, 2)))) + 1)):
        reach = reach | ((reach.astype(int) @ reach.astype(int)) > 0)
    return bool(reach.all())


def _power(B: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int]:
    """Perron root and vector of an irreducible nonnegative B by iterating B + I.

    Stops when the Collatz-Wielandt bracket min/max of (Bv)_i / v_i is
    relatively tighter than ``tol``, or when rounding stalls the bracket
    below ``accept``.
    """
    accept = 1e-12
    n = len(B)
    C = B + np.eye(n)
    v = np.ones(n)
    best, since = math.inf, 0
    for it in range(1, max_iter + 1):
        w = C @ v
        v = w / w.max()
        ratios = (B @ v) / v
        lo, hi = ratios.min(), ratios.max()
        width = (hi - lo) / hi
        if width <= tol:
            return 0.5 * (lo + hi), v, it
        if width < best:
            best, since = width, 0
        else:
            since += 1
        if since > 50 and best <= accept:
            return 0.5 * (lo + hi), v, it
    raise ArithmeticError("power iteration did not converge")


def perron(M: TransferMatrix, tol: float = 1e-15, max_iter: int = 1_000_000) -> PerronData:
    idx = M.essential
    if not idx:
        raise EmptySubshift("the subshift is empty")
    sub_allowed = M.allowed[np.ix_(idx, idx)]
    if not _is_irreducible(sub_allowed):
        raise ReducibleMatrix("essential transition graph is not strongly connected")
    L = M.log_entries[np.ix_(idx, idx)]
    shift = float(np.max(L[sub_allowed]))
    B = np.where(sub_allowed, np.exp(np.where(sub_allowed, L - shift, 0.0)), 0.0)
    rho, r, it_r = _power(B, tol, max_iter)
    _, l, it_l = _power(B.T, tol, max_iter)
    right = np.zeros(M.size)
    left = np.zeros(M.size)
    right[idx] = r
    left[idx] = l
    log_lam = math.log(rho) + shift
    return PerronData(math.exp(log_lam), log_lam, right, left, max(it_r, it_l))


def pressure(M: TransferMatrix) -> float:
    return perron(M).log_lam


class MarkovMeasure(CylinderMeasure):
    """Stationary Markov chain (pi, P) seen as a measure on Z.

    ``prob`` accepts patterns with gaps and sums the free sites out through
    powers of P.
    """

    def __init__(self, alphabet: Alphabet, pi: Sequence[float], P: np.ndarray):
        self.alphabet = alphabet
        self.pi = np.asarray(pi, dtype=float)
        self.P = np.asarray(P, dtype=float)
        self.dimension = 1
        k = len(alphabet)
        if self.pi.shape != (k,) or self.P.shape != (k, k):
            raise ValueError("pi and P must match the alphabet")
        if np.any(self.pi < 0) or np.any(self.P < 0):
            raise ValueError("pi and P must be nonnegative")

    def stationarity_residual(self) -> float:
        return float(np.max(np.abs(self.pi @ self.P - self.pi)))

    def prob(self, pattern: Pattern) -> float:
        if len(pattern) == 0:
            return 1.0
        if pattern.domain.dim != 1:
            raise ValueError("Markov measures live on Z")
        sites = [p[0] for p in pattern.domain.points]
        vals = pattern.values
        total = self.pi[vals[0]]
        for t in range(1, len(sites)):
            gap = sites[t] - sites[t - 1]
            step = self.P if gap == 1 else np.linalg.matrix_power(self.P, gap)
            total *= step[vals[t - 1], vals[t]]
            if total == 0.0:
                return 0.0
        return float(total)


def equilibrium_markov(M: TransferMatrix, data: PerronData | None = None) -> MarkovMeasure:
    """P(a, b) = M(a, b) r_b / (lam r_a), pi_a proportional to l_a r_a.

    Rows of symbols outside the essential graph are zero (pi vanishes there).
    """
    data = perron(M) if data is None else data
    k = M.size
    P = np.zeros((k, k))
    logr = np.full(k, -np.inf)
    pos = data.right > 0
    logr[pos] = np.log(data.right[pos])
    for a in range(k):
        for b in range(k):
            if M.allowed[a, b]:
                P[a, b] = math.exp(M.pair[a, b] + logr[b] - data.log_lam - logr[a])
    P = P / np.where(P.sum(axis=1, keepdims=True) > 0, P.sum(axis=1, keepdims=True), 1.0)
    w = data.left * data.right
    return MarkovMeasure(M.alphabet, w / w.sum(), P)


def cylinder_prob(m: MarkovMeasure, word: Pattern) -> float:
    """pi_{w_1} prod P(w_t, w_{t+1}) for a word on an interval."""
    if not word.domain.is_interval():
        raise ValueError("cylinder_prob needs a word on an interval")
    return m.prob(word)


def markov_entropy(m: MarkovMeasure) -> float:
    """-sum_a pi_a sum_b P(a, b) log P(a, b)."""
    pos = m.P > 0
    logs = np.zeros_like(m.P)
    logs[pos] = np.log(m.P[pos])
    return float(-np.sum(m.pi[:, None] * m.P * logs))


def mean_energy(m: MarkovMeasure, g: np.ndarray) -> float:
    pos = m.P > 0
    return float(np.sum(np.where(pos, m.pi[:, None] * m.P * np.where(pos, g, 0.0), 0.0)))


def variational_gap(m: MarkovMeasure, g: np.ndarray, p_star: float) -> float:
    """p* - (h(m) + sum pi_a P(a, b) g(a, b)); nonnegative, zero at the equilibrium."""
    return p_star - (markov_entropy(m) + mean_energy(m, np.asarray(g, dtype=float)))


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Solve pi P = pi, sum pi = 1 in the least-squares sense."""
    k = len(P)
    A = np.vstack([P.T - np.eye(k), np.ones((1, k))])
    rhs = np.zeros(k + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def random_stationary_markov(M: TransferMatrix, rng: np.random.Generator, concentration: float = 1.0) -> MarkovMeasure:
    """A random irreducible chain on the allowed transitions (Dirichlet rows)."""
    k = M.size
    P = np.zeros((k, k))
    for a in M.essential:
        cols = np.flatnonzero(M.allowed[a])
        P[a, cols] = rng.dirichlet(np.full(len(cols), concentration))
    return MarkovMeasure(M.alphabet, stationary_distribution(P), P)
