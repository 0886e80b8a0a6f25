"""Reduced spectra of symmetric tops and random Hamiltonians against the group-side oracle.

Usage: python scripts/spectrum_demo.py [--jmax 3] [--random 3] [--seed 0]
"""

import argparse

import numpy as np

from ni_so3 import reduction as red


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jmax", type=int, default=3)
    ap.add_argument("--random", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    specs = [("top(1,2)", red.HamiltonianSpec.symmetric_top(1.0, 2.0))]
    specs += [(f"random#{k}", red.HamiltonianSpec.random_negative_definite(rng)) for k in range(args.random)]
    for name, spec in specs:
        for j in range(1, args.jmax + 1):
            reduced, _, dev = red.spectrum_comparison(spec, j)
            energies = " ".join(f"{e.real:9.4f}" for e in reduced)
            print(f"{name:>10} j={j}  dev={dev:.1e}  E: {energies}")
        if name.startswith("top"):
            j = args.jmax
            expect = sorted(1.0 * j * (j + 1) + 1.0 * n * n for n in range(-j, j + 1))
            got = sorted(e.real for e in red.spectrum_comparison(spec, j)[0])
            print(f"{'':>10} closed form a j(j+1) + (b-a) n^2 at j={j}: max err {np.max(np.abs(np.subtract(got, expect))):.1e}")


if __name__ == "__main__":
    main()
