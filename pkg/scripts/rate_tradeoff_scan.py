#!/usr/bin/env python3
"""Security-rate trade-off scan over block lengths.

For each block length n, solves eps_bar / l(eps_bar) = S for eps_bar
under the documented default parameters and prints the achievable rate
l / n, or the no-solution diagnosis where the rate vanishes.
"""

import argparse

from keysec import (NoSolutionError, default_rate_params,
                    epsilon_for_security_rate)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--s-target", type=float, default=1e-14)
    parser.add_argument("--n-min-exp", type=int, default=4)
    parser.add_argument("--n-max-exp", type=int, default=8)
    args = parser.parse_args()

    print(f"target security rate S = eps_bar / l = {args.s_target:g}")
    print(f"{'n':>12}  {'eps_bar':>12}  {'key bits':>10}  {'rate':>12}")
    for exp in range(args.n_min_exp, args.n_max_exp + 1):
        n = 10**exp
        try:
            sol = epsilon_for_security_rate(args.s_target,
                                            default_rate_params(n))
            print(f"{n:>12.0e}  {sol.eps_bar:>12.3e}  {sol.l:>10d}  "
                  f"{sol.rate:>12.4e}")
        except NoSolutionError as exc:
            print(f"{n:>12.0e}  no solution: {exc}")


if __name__ == "__main__":
    main()
