"""DLR residuals of 1D measures against the specification of a potential.

For the golden mean with f = beta 1{x_0 = 1} and for the Ising chain, the
equilibrium Markov measure of f should satisfy the DLR equations up to
rounding, while the equilibrium measure of a different parameter should not.
"""

import argparse

from gibbsworks.equilibrium1d import equilibrium_markov, pair_potential, transfer_matrix
from gibbsworks.gibbs import dlr_residual
from gibbsworks.lattice import Box
from gibbsworks.potentials import LocalPotential, ising
from gibbsworks.shiftspace import SubshiftSpec


def models():
    gm = SubshiftSpec.golden_mean()
    for beta in (-1.0, 0.0, 1.0):
        yield f"golden_mean beta={beta:g}", gm, LocalPotential.site(gm.alphabet, {"1": beta})
    chain = SubshiftSpec.full_shift(["-1", "+1"])
    for J in (0.5, 1.0):
        for h in (0.0, 0.5):
            yield f"ising J={J:g} h={h:g}", chain, ising(J, h, 1)[1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-volume", type=int, default=6)
    ap.add_argument("--thickness", type=int, default=2)
    ap.add_argument("--mismatch", type=float, default=0.3, help="added to the site term for the wrong measure")
    args = ap.parse_args()

    print("model\tn\tresidual_equilibrium\tresidual_mismatched\tboundaries")
    for name, spec, f in models():
        mu = equilibrium_markov(transfer_matrix(spec, pair_potential(f, spec)))
        shifted = f + LocalPotential.site(spec.alphabet, {spec.alphabet.symbols[-1]: args.mismatch})
        wrong = equilibrium_markov(transfer_matrix(spec, pair_potential(shifted, spec)))
        for n in range(1, args.max_volume + 1):
            lam = Box.interval(0, n - 1)
            delta = Box.interval(-args.thickness, n - 1 + args.thickness)
            good = dlr_residual(mu, f, spec, lam, delta)
            bad = dlr_residual(wrong, f, spec, lam, delta)
            print(f"{name}\t{n}\t{good.max_residual:.2e}\t{bad.max_residual:.2e}\t{good.checked}")


if __name__ == "__main__":
    main()
