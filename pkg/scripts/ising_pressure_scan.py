"""Pressure of the 1D Ising chain over a (J, h) grid.

Prints log lambda from the transfer matrix, the closed form
log(e^J cosh h + sqrt(e^{2J} sinh^2 h + e^{-2J})), the magnetization of the
equilibrium Markov measure and its variational gap.
"""

import argparse
import math

import numpy as np

from gibbsworks.equilibrium1d import equilibrium_markov, ising_pair, perron, transfer_matrix, variational_gap
from gibbsworks.shiftspace import SubshiftSpec


def closed_form(J: float, h: float) -> float:
    return math.log(math.exp(J) * math.cosh(h) + math.sqrt(math.exp(2 * J) * math.sinh(h) ** 2 + math.exp(-2 * J)))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--J", type=float, nargs="+", default=[-1.0, 0.0, 0.5, 1.0, 2.0])
    ap.add_argument("--h", type=float, nargs="+", default=[0.0, 0.25, 0.5, 1.0])
    args = ap.parse_args()

    spec = SubshiftSpec.full_shift(["-1", "+1"])
    spins = np.array([-1.0, 1.0])
    print("J\th\tlog_lam\tclosed_form\tabs_err\tmagnetization\tgap")
    for J in args.J:
        for h in args.h:
            g = ising_pair(J, h)
            M = transfer_matrix(spec, g)
            data = perron(M)
            m = equilibrium_markov(M, data)
            exact = closed_form(J, h)
            print(
                f"{J:g}\t{h:g}\t{data.log_lam:.15g}\t{exact:.15g}\t{abs(data.log_lam - exact):.1e}"
                f"\t{float(m.pi @ spins):.12f}\t{variational_gap(m, g, data.log_lam):.1e}"
            )


if __name__ == "__main__":
    main()
