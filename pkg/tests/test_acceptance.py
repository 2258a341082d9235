"""The acceptance suite: one test per criterion, each reporting a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed in the
"acceptance criteria" section of the terminal summary.
"""

import itertools
import math
import random
import time

import numpy as np

from gibbsworks.entropy import (
    Partition,
    WeightedSpace,
    bernoulli_rate,
    block_entropy_rates,
    chain_rule_residual,
    conditional_entropy,
    entropy,
    is_finer,
    refine,
)
from gibbsworks.equilibrium1d import (
    equilibrium_markov,
    ising_pair,
    pair_potential,
    pressure,
    random_stationary_markov,
    transfer_matrix,
    variational_gap,
)
from gibbsworks.gibbs import (
    Bernoulli,
    CocycleContext,
    FiniteVolumeGibbs,
    cocycle,
    cocycle_abs_partial_sums,
    cocycle_tail_bound,
    consistency_residual,
    dlr_residual,
    homoclinic_radius,
    kernel,
    kernel_from_interaction,
    properness_check,
)
from gibbsworks.homoclinic import (
    BlockInvolution,
    FinitePermutation,
    classify,
    compose_involutions_on_patterns,
    compose_transpositions,
    decompose_block_automorphism,
    density_check,
    orbit_decompose,
)
from gibbsworks.lattice import Box
from gibbsworks.potentials import LocalPotential, a_phi, ising, variation_profile
from gibbsworks.shiftspace import (
    FramedConfiguration,
    Pattern,
    PeriodicBackground,
    SubshiftSpec,
    even_shift_pattern,
    is_locally_admissible,
)

GM = SubshiftSpec.golden_mean()
ISING1 = SubshiftSpec.full_shift(["-1", "+1"], 1)
ISING2 = SubshiftSpec.full_shift(["-1", "+1"], 2)
PHI = (1 + math.sqrt(5)) / 2


def gm_field(beta: float) -> LocalPotential:
    """f = beta 1{x_0 = 1}."""
    return LocalPotential.site(GM.alphabet, {"1": beta})


def gm_word(rng, length: int) -> list[int]:
    """A random golden-mean word (no two adjacent 1s)."""
    out = []
    for _ in range(length):
        out.append(0 if out and out[-1] == 1 else int(rng.integers(2)))
    return out


def gm_config(rng, lo: int, hi: int) -> FramedConfiguration:
    return FramedConfiguration(Pattern.word(gm_word(rng, hi - lo + 1), lo), PeriodicBackground.constant(0, 1))


def ising_config(rng, lo: int, hi: int) -> FramedConfiguration:
    vals = [int(v) for v in rng.integers(2, size=hi - lo + 1)]
    return FramedConfiguration(Pattern.word(vals, lo), PeriodicBackground.constant(1, 1))


def nested_pairs(max_size: int):
    """(Lambda, Delta) with Delta = {0..n-1}, n <= max_size, and Lambda any nonempty subset."""
    for n in range(1, max_size + 1):
        delta = Box.interval(0, n - 1)
        for r in range(1, n + 1):
            for pts in itertools.combinations(delta.points, r):
                yield Box.of(pts), delta


def finish(report, number, title, ok, detail, t0):
    report(number, title, ok, f"{detail}; {time.perf_counter() - t0:.1f}s")
    assert ok, detail


# the 1D models used by criteria 1 and 2: a nearest-neighbour golden-mean potential and the Ising chain
GM_F = LocalPotential.from_function(GM.alphabet, Box.interval(-1, 1), lambda v: 0.7 * v[1] - 0.4 * v[0] * v[2])
ISING_F = ising(1.0, 0.3, 1)[1]
MODELS_1D = [("golden_mean", GM, GM_F, gm_config), ("ising", ISING1, ISING_F, ising_config)]


def test_criterion_01_kernel_consistency(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst, count = 0.0, 0
    for _, spec, f, draw in MODELS_1D:
        for lam, delta in nested_pairs(5):
            for _ in range(20):
                x = draw(rng, -4, len(delta) + 3)
                worst = max(worst, consistency_residual(f, spec, lam, delta, x))
                count += 1
    finish(
        acceptance_report, 1, "kernel consistency", worst <= 1e-10, f"max residual {worst:.2e} over {count} cases", t0
    )


def test_criterion_02_properness(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    worst, count, exact = 0.0, 0, True
    for _, spec, f, draw in MODELS_1D:
        for lam, delta in nested_pairs(5):
            x = draw(rng, -4, len(delta) + 3)
            table = kernel(f, spec, lam, x)
            for p in Box.interval(-3, len(delta) + 2).points:
                if p in lam:
                    continue
                for a in range(len(spec.alphabet)):
                    B = Pattern.from_dict({p: a})
                    r = properness_check(table, B)
                    count += 1
                    worst = max(worst, r)
                    # off the boundary value the mass is a sum of no terms: exactly 0
                    if x.value(p) != a and r != 0.0:
                        exact = False
    ok = exact and worst <= 1e-14
    finish(acceptance_report, 2, "properness", ok, f"max deviation {worst:.2e} over {count} cylinders", t0)


def test_criterion_03_dlr_equilibrium(acceptance_report):
    t0 = time.perf_counter()
    models = [(f"gm beta={b}", GM, gm_field(b)) for b in (-1.0, 0.0, 1.0)]
    models += [(f"ising J={J} h={h}", ISING1, ising(J, h, 1)[1]) for J in (0.5, 1.0) for h in (0.0, 0.5)]
    worst, checked = 0.0, 0
    for _, spec, f in models:
        mu = equilibrium_markov(transfer_matrix(spec, pair_potential(f, spec)))
        for n in range(1, 7):
            lam = Box.interval(0, n - 1)
            delta = Box.interval(-2, n + 1)
            rep = dlr_residual(mu, f, spec, lam, delta)
            worst = max(worst, rep.max_residual)
            checked += rep.checked
    finish(
        acceptance_report, 3, "DLR for equilibrium measures", worst <= 1e-8,
        f"max residual {worst:.2e} over {checked} boundaries", t0,
    )


def test_criterion_04_boltzmann_form(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(104)
    worst, count = 0.0, 0
    for J, h in [(1.0, 0.0), (0.5, -0.3), (-0.8, 0.6)]:
        Phi, _ = ising(J, h, 1)
        f = a_phi(Phi, 1)
        for n in range(1, 5):
            lam = Box.interval(0, n - 1)
            for _ in range(5):
                x = ising_config(rng, -3, n + 2)
                a, b = kernel(f, ISING1, lam, x), kernel_from_interaction(Phi, ISING1, lam, x)
                assert a.patterns == b.patterns
                worst = max(worst, float(np.max(np.abs(a.probabilities - b.probabilities))))
                count += 1
        Phi2, _ = ising(J, h, 2)
        f2 = a_phi(Phi2, 2)
        for lam in [Box.cube(0, 0, 2), Box.of([(0, 0), (1, 0)]), Box.cube(0, 1, 2)]:
            for _ in range(5):
                vals = [int(v) for v in rng.integers(2, size=36)]
                x = FramedConfiguration(Pattern(Box.cube(-2, 3, 2), tuple(vals)), PeriodicBackground.constant(1, 2))
                a, b = kernel(f2, ISING2, lam, x), kernel_from_interaction(Phi2, ISING2, lam, x)
                assert a.patterns == b.patterns
                worst = max(worst, float(np.max(np.abs(a.probabilities - b.probabilities))))
                count += 1
    finish(acceptance_report, 4, "Boltzmann form", worst <= 1e-10, f"max entry gap {worst:.2e} over {count} kernels", t0)


def _perturb_gm(rng, x: FramedConfiguration, lo: int, hi: int) -> FramedConfiguration:
    """x with a fresh golden-mean word on [lo, hi], kept admissible at the seams."""
    while True:
        w = gm_word(rng, hi - lo + 1)
        if (w[0] == 1 and x.value((lo - 1,)) == 1) or (w[-1] == 1 and x.value((hi + 1,)) == 1):
            continue
        return x.glue(Pattern.word(w, lo))


def test_criterion_05_cocycle_laws(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(105)
    ctx_gm = CocycleContext(GM_F, GM)
    _, f2 = ising(0.9, -0.2, 2)
    ctx_2d = CocycleContext(f2, ISING2)
    prof_gm = variation_profile(GM_F, GM)
    prof_2d = variation_profile(f2, ISING2)

    worst_identity = 0.0
    bound_ok = True
    for t in range(200):
        if t % 2 == 0:
            x = gm_config(rng, -6, 6)
            y = _perturb_gm(rng, x, -3, 2)
            z = _perturb_gm(rng, y, -1, 4)
            ctx, prof = ctx_gm, prof_gm
        else:
            bg = PeriodicBackground.constant(1, 2)
            box = Box.cube(-2, 2, 2)

            def rand():
                return Pattern(box, tuple(int(v) for v in rng.integers(2, size=len(box))))

            x, y, z = (FramedConfiguration(rand(), bg) for _ in range(3))
            ctx, prof = ctx_2d, prof_2d
        r = abs(cocycle(ctx, x, z) - cocycle(ctx, x, y) - cocycle(ctx, y, z))
        worst_identity = max(worst_identity, r)
        if x.diff_points(y):
            m = max(1, homoclinic_radius(x, y))
            bound = cocycle_tail_bound(prof, m)
            total = cocycle_abs_partial_sums(ctx, x, y, m + 3)[-1]
            if not (abs(cocycle(ctx, x, y)) <= total + 1e-12 and total <= bound + 1e-12):
                bound_ok = False
    ok = worst_identity <= 1e-12 and bound_ok
    finish(
        acceptance_report, 5, "cocycle laws", ok,
        f"identity residual {worst_identity:.2e}; tail bound held on all pairs: {bound_ok}", t0,
    )


def test_criterion_06_closed_forms(acceptance_report):
    t0 = time.perf_counter()
    gm = abs(pressure(transfer_matrix(GM)) - math.log(PHI))
    isg = abs(pressure(transfer_matrix(ISING1, ising_pair(1.0, 0.0))) - math.log(2 * math.cosh(1.0)))
    full = all(
        pressure(transfer_matrix(SubshiftSpec.full_shift([str(i) for i in range(k)]))) == math.log(k)
        for k in range(1, 9)
    )
    ok = gm <= 1e-10 and isg <= 1e-10 and full
    finish(
        acceptance_report, 6, "1D closed forms", ok,
        f"golden mean err {gm:.1e}, Ising err {isg:.1e}, full k-shifts exact: {full}", t0,
    )


def test_criterion_07_variational_principle(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(107)
    models = [(GM, pair_potential(gm_field(b), GM)) for b in (-1.0, 0.0, 1.0)]
    models += [(ISING1, ising_pair(J, h)) for J in (0.5, 1.0) for h in (0.0, 0.5)]
    min_gap, eq_gap = math.inf, 0.0
    for spec, g in models:
        M = transfer_matrix(spec, g)
        p = pressure(M)
        eq_gap = max(eq_gap, abs(variational_gap(equilibrium_markov(M), g, p)))
        for _ in range(500):
            min_gap = min(min_gap, variational_gap(random_stationary_markov(M, rng), g, p))
    ok = min_gap >= -1e-10 and eq_gap <= 1e-10
    finish(
        acceptance_report, 7, "variational principle", ok,
        f"min random gap {min_gap:.2e}, equilibrium gap {eq_gap:.1e}, 500 chains x {len(models)} models", t0,
    )


def _random_partition_pair(rng):
    n = int(rng.integers(1, 65))
    w = rng.random(n) * (rng.random(n) > 0.15)
    if w.sum() == 0:
        w[0] = 1.0
    space = WeightedSpace(tuple(range(n)), w / w.sum())
    a = Partition(tuple(int(v) for v in rng.integers(int(rng.integers(1, 7)), size=n)))
    kind = int(rng.integers(3))
    if kind == 0:
        b = Partition(tuple(int(v) for v in rng.integers(int(rng.integers(1, 7)), size=n)))
    elif kind == 1:
        # a refinement of a
        extra = rng.integers(3, size=n)
        b = Partition(tuple(zip(a.labels, (int(v) for v in extra))))
    else:
        # a coarsening of a
        b = Partition(tuple(lab // 2 for lab in a.labels))
    return space, a, b


def test_criterion_08_entropy_algebra(acceptance_report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(108)
    worst_chain, subadd, mono, equiv, n_finer = 0.0, True, True, True, 0
    for _ in range(200):
        s, a, b = _random_partition_pair(rng)
        worst_chain = max(worst_chain, chain_rule_residual(s, a, b))
        ha, hb, hab = entropy(s, a), entropy(s, b), entropy(s, refine(a, b))
        subadd &= hab <= ha + hb + 1e-12
        finer = is_finer(s, b, a)
        n_finer += finer
        if finer:
            mono &= hb >= ha - 1e-12
        mono &= hab >= ha - 1e-12
        equiv &= finer == (conditional_entropy(s, a, b) <= 1e-12)
    ok = worst_chain <= 1e-12 and subadd and mono and equiv
    finish(
        acceptance_report, 8, "entropy algebra", ok,
        f"chain residual {worst_chain:.1e}, subadditive {subadd}, monotone {mono}, "
        f"finer<=>H=0 {equiv} ({n_finer}/200 finer)", t0,
    )


def test_criterion_09_bernoulli_rate(acceptance_report):
    t0 = time.perf_counter()
    worst = 0.0
    cases = [((0.5, 0.5), 1, 4), ((0.25, 0.75), 1, 4), ((0.1, 0.2, 0.7), 1, 3), ((0.25, 0.75), 2, 2)]
    for p, d, n_max in cases:
        spec = SubshiftSpec.full_shift([str(i) for i in range(len(p))], d)
        rates = block_entropy_rates(Bernoulli(spec.alphabet, p, d), spec, n_max)
        h = bernoulli_rate(p)
        worst = max(worst, max(abs(r - h) for r in rates), max(rates) - min(rates))
    finish(acceptance_report, 9, "Bernoulli rate", worst <= 1e-12, f"max deviation {worst:.1e}", t0)


def test_criterion_10_swap_decompositions(acceptance_report):
    t0 = time.perf_counter()
    orbit_ok = True
    for n in range(0, 7):
        dom = tuple(range(n))
        for images in itertools.permutations(dom):
            pi = FinitePermutation(dom, images)
            orbit_ok &= compose_transpositions(dom, orbit_decompose(pi)) == pi

    classing = classify(GM, 1)
    rnd = random.Random(110)
    block_ok = True
    for _ in range(100):
        mapping = {}
        for cls in classing.classes:
            img = list(cls)
            rnd.shuffle(img)
            mapping.update(zip(cls, img))
        pi = FinitePermutation.from_mapping(mapping)
        seq = decompose_block_automorphism(pi, classing)
        block_ok &= compose_involutions_on_patterns(seq, classing.patterns) == pi

    worst, n_gen = 0.0, 0
    cases = [
        (GM, gm_field(0.8), 1, Box.interval(-3, 3), FramedConfiguration.of(GM)),
        (GM, gm_field(-0.5), 2, Box.interval(-4, 4), FramedConfiguration.of(GM)),
        (ISING1, ising(0.8, 0.3, 1)[1], 0, Box.interval(-3, 3), FramedConfiguration.of(ISING1)),
        (ISING1, ising(-0.6, 0.2, 1)[1], 1, Box.interval(-4, 4), FramedConfiguration.of(ISING1)),
    ]
    for spec, f, N, outer, x in cases:
        mu = FiniteVolumeGibbs.from_potential(f, spec, outer, x)
        c = classify(spec, N)
        for cls in c.classes:
            for a, b in itertools.combinations(cls, 2):
                worst = max(worst, density_check(mu, BlockInvolution(c.box, a, b), f, spec))
                n_gen += 1
    ok = orbit_ok and block_ok and worst <= 1e-12
    finish(
        acceptance_report, 10, "swap decompositions", ok,
        f"orbit round trips {orbit_ok}, block round trips {block_ok}, "
        f"density max {worst:.1e} over {n_gen} generators", t0,
    )


def test_criterion_11_non_sft_witness(acceptance_report):
    t0 = time.perf_counter()
    ok = True
    for n in range(1, 7):
        wit = even_shift_pattern(n)
        truncated = SubshiftSpec.even_shift_truncated(n)
        omitted = SubshiftSpec(truncated.alphabet, 1, forbidden=(even_shift_pattern(n),))
        ok &= is_locally_admissible(wit, truncated) and not is_locally_admissible(wit, omitted)
    finish(acceptance_report, 11, "non-SFT witness", ok, "windows n = 1..6", t0)
