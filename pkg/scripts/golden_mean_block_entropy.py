"""Block entropies of the golden-mean shift.

For n = 1..N prints the word count |L_n| (Fibonacci), log|L_n| / n, and the
block-entropy rate H(alpha^{Lambda_n}) / |Lambda_n| of the Parry measure.
Both sequences approach log of the golden ratio from above.
"""

import argparse
import math

from gibbsworks.entropy import block_entropy_rates
from gibbsworks.equilibrium1d import equilibrium_markov, pressure, transfer_matrix
from gibbsworks.lattice import Box
from gibbsworks.shiftspace import SubshiftSpec, enumerate_patterns


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()

    spec = SubshiftSpec.golden_mean()
    M = transfer_matrix(spec)
    h_top = pressure(M)
    parry = equilibrium_markov(M)
    rates = block_entropy_rates(parry, spec, args.n_max)
    print(f"# log golden ratio = {h_top:.15g}")
    print("n\twords\tlog_words_per_site\tparry_rate\trate_minus_limit")
    for n, rate in enumerate(rates, 1):
        # the rate for Lambda_n uses 2n - 1 sites
        length = 2 * n - 1
        words = len(enumerate_patterns(spec, Box.interval(0, length - 1)))
        print(f"{n}\t{words}\t{math.log(words) / length:.12f}\t{rate:.12f}\t{rate - h_top:.3e}")


if __name__ == "__main__":
    main()
