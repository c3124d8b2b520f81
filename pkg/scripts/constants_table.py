#!/usr/bin/env python3
"""Print the normalization-constant table over an order grid, per dimension."""

import sys

from fracvar.constants import ball_volume, hardy_constants, mu, nu


def main() -> int:
    dims = [int(v) for v in sys.argv[1:]] or [1, 2, 3]
    print("n,alpha,mu,nu_1_minus_alpha,c_half,gamma_spector,c_max,omega_n")
    for n in dims:
        for k in range(1, 10):
            a = 0.1 * k
            c_half, gamma_spector, c_max = hardy_constants(n, a)
            row = [n, a, mu(n, a), nu(n, 1.0 - a), c_half, gamma_spector, c_max,
                   ball_volume(n)]
            print(",".join(format(v, ".12g") if isinstance(v, float) else str(v) for v in row))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
