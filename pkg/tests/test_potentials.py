import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gibbsworks.lattice import Box, centered_box
from gibbsworks.potentials import (
    ISING_ALPHABET,
    InteractionPotential,
    LocalPotential,
    a_phi,
    absolute_summability_bound,
    hamiltonian,
    ising,
    svd_norm,
    variation,
    variation_profile,
)
from gibbsworks.shiftspace import FramedConfiguration, Pattern, PeriodicBackground, SubshiftSpec, shift

ISING1 = SubshiftSpec.full_shift(["-1", "+1"], 1)
ISING2 = SubshiftSpec.full_shift(["-1", "+1"], 2)
GM = SubshiftSpec.golden_mean()


def plus(d):
    return PeriodicBackground.constant(1, d)


def brute_variation(f, n, spec_words):
    """sup |f(x) - f(y)| over pairs of words (dicts) agreeing on Lambda_n."""
    lam = centered_box(n, 1).points
    best = 0.0
    for a, b in itertools.combinations_with_replacement(spec_words, 2):
        if all(a[p] == b[p] for p in lam):
            fa = f.table[tuple(a[w] for w in f.window.points)]
            fb = f.table[tuple(b[w] for w in f.window.points)]
            best = max(best, abs(fa - fb))
    return best


def test_variation_examples():
    _, f = ising(1.0, 0.3, 1)
    words = [dict(zip(Box.interval(-2, 2).points, v)) for v in itertools.product(range(2), repeat=5)]
    assert variation(f, 1, ISING1) == pytest.approx(2.0, abs=1e-12)
    assert brute_variation(f, 1, words) == pytest.approx(2.0, abs=1e-12)
    assert variation(f, 2, ISING1) == 0.0
    c = LocalPotential.constant(ISING1.alphabet, 4.0)
    assert all(variation(c, n, ISING1) == 0.0 for n in range(1, 4))


def test_variation_uses_only_admissible_pairs():
    f = LocalPotential.from_function(GM.alphabet, Box.interval(-1, 1), lambda v: v[0] + v[2])
    # in the golden mean x_0 = 1 forces both neighbours to 0
    assert variation(f, 1, GM) == 2.0
    g = LocalPotential.from_function(GM.alphabet, Box.interval(0, 1), lambda v: v[1])
    assert variation(g, 1, GM) == 1.0
    assert variation(g, 1, SubshiftSpec.full_shift("01")) == 1.0


def test_svd_norm_examples():
    assert svd_norm(LocalPotential.constant(ISING1.alphabet, -2.5), ISING1) == 2.5
    _, f = ising(1.0, 0.0, 1)
    assert svd_norm(f, ISING1) == pytest.approx(3.0)


def test_svd_norm_2d_weights():
    _, f = ising(1.0, 0.0, 2)
    prof = variation_profile(f, ISING2)
    assert prof.deltas == (4.0,)
    assert prof.sup_norm == 2.0
    assert prof.svd_norm == 6.0
    assert prof.tail(2) == 0.0


tables = st.lists(st.floats(-3, 3, allow_nan=False), min_size=8, max_size=8)


@given(tables, tables)
def test_norm_subadditive(t1, t2):
    window = Box.interval(-1, 1)
    keys = list(itertools.product(range(2), repeat=3))
    f = LocalPotential(ISING1.alphabet, window, dict(zip(keys, t1)))
    g = LocalPotential(ISING1.alphabet, Box.interval(0, 2), dict(zip(keys, t2)))
    nf, ng = svd_norm(f, ISING1), svd_norm(g, ISING1)
    assert svd_norm(f + g, ISING1) <= nf + ng + 1e-9
    pf = variation_profile(f, ISING1)
    assert pf.svd_norm >= pf.sup_norm
    assert (pf.svd_norm == pf.sup_norm) == all(v == 0 for v in pf.deltas)


@given(tables)
def test_variation_monotone(t):
    keys = list(itertools.product(range(2), repeat=3))
    f = LocalPotential(ISING1.alphabet, Box.of([(-2,), (0,), (3,)]), dict(zip(keys, t)))
    seq = [variation(f, n, ISING1) for n in range(1, 6)]
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    assert seq[-1] == 0.0


def test_hamiltonian_examples():
    Phi, _ = ising(1.0, 0.0, 1)
    x = FramedConfiguration(Pattern.empty(1), plus(1))
    assert hamiltonian(InteractionPotential.zero(ISING_ALPHABET), Box.interval(0, 0), x) == 0.0
    assert hamiltonian(Phi, Box.interval(0, 0), x) == -2.0
    Phi_h, _ = ising(0.0, 0.7, 1)
    assert hamiltonian(Phi_h, Box.interval(0, 0), x) == pytest.approx(-0.7)


def test_hamiltonian_brute_force_2d():
    J, h = 0.8, -0.3
    Phi, _ = ising(J, h, 2)
    box = Box.cube(0, 1, 2)
    vals = (0, 1, 1, 0)
    x = FramedConfiguration(Pattern(box, vals), plus(2))
    spin = lambda p: ISING_ALPHABET.values[x.value(p)]
    # every nearest-neighbour bond and site meeting the box
    sites = set(box.points)
    bonds = set()
    for p in box.points:
        for e in [(1, 0), (0, 1), (-1, 0), (0, -1)]:
            q = (p[0] + e[0], p[1] + e[1])
            bonds.add(tuple(sorted([p, q])))
    expected = sum(-J * spin(a) * spin(b) for a, b in bonds) + sum(-h * spin(p) for p in sites)
    assert hamiltonian(Phi, box, x) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=50)
@given(
    st.lists(st.integers(0, 1), min_size=4, max_size=4),
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
)
def test_hamiltonian_translation_invariance(vals, i):
    Phi, _ = ising(0.6, 0.2, 2)
    box = Box.cube(0, 1, 2)
    x = FramedConfiguration(Pattern(box, tuple(vals)), PeriodicBackground((0, 1, 1, 0), (2, 2)))
    moved = box.translate(i)
    assert hamiltonian(Phi, moved, shift(x, tuple(-c for c in i))) == pytest.approx(
        hamiltonian(Phi, box, x), abs=1e-12
    )


def test_a_phi_examples():
    zero = a_phi(InteractionPotential.zero(ISING_ALPHABET))
    assert set(zero.table.values()) == {0.0}
    for d in (1, 2, 3):
        Phi, f = ising(1.3, -0.4, d)
        g = a_phi(Phi, d)
        assert g.window == f.window
        for k in f.table:
            assert g.table[k] == pytest.approx(f.table[k], abs=1e-12)
    single = InteractionPotential.of(ISING_ALPHABET, [(Box.of([(0,)]), {(0,): 2.0, (1,): -1.0})])
    assert a_phi(single).table == {(0,): -2.0, (1,): 1.0}


def test_ising_examples():
    Phi, f = ising(0.0, 0.0, 1)
    assert set(f.table.values()) == {0.0}
    assert all(v == 0 for _, t in Phi.terms for v in t.values())
    _, f = ising(1.0, 0.0, 1)
    assert f((1, 1, 1)) == 1.0
    _, f2 = ising(1.0, 0.0, 2)
    assert len(f2.window) == 5
    assert set(f2.window.points) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}


def test_absolute_summability_examples():
    assert absolute_summability_bound(InteractionPotential.zero(ISING_ALPHABET)) == 0.0
    assert absolute_summability_bound(ising(1.0, 0.0, 1)[0]) == 2.0
    assert absolute_summability_bound(ising(1.0, 1.0, 2)[0]) == 5.0


def test_absolute_summability_brute_force():
    Phi, _ = ising(1.5, 0.5, 2)
    # enumerate every translate meeting the origin directly
    total = 0.0
    for shape, table in Phi.terms:
        for s in shape.points:
            total += max(abs(v) for v in table.values())
    assert absolute_summability_bound(Phi, (3, -1)) == pytest.approx(total)


def test_interaction_canonicalization_merges_terms():
    t = {(a, b): float(a + b) for a in range(2) for b in range(2)}
    Phi = InteractionPotential.of(ISING_ALPHABET, [(Box.of([(2,), (3,)]), t), (Box.of([(0,), (1,)]), t)])
    assert len(Phi.terms) == 1
    assert Phi.terms[0][0] == Box.of([(0,), (1,)])
    assert Phi.terms[0][1][(1, 1)] == 4.0
    assert Phi.range == 1


def test_local_potential_validation():
    with pytest.raises(ValueError):
        LocalPotential(ISING1.alphabet, Box.interval(0, 1), {(0, 0): 1.0})
    f = LocalPotential.site(ISING1.alphabet, {"+1": 2.0})
    assert f.extend(Box.interval(-1, 1))((0, 1, 0)) == 2.0
    with pytest.raises(ValueError):
        f.extend(Box.interval(1, 2))
