"""Scan | |U(q, g)| - 1 | over random group elements: zero at the identity, generically nonzero.

Usage: python scripts/coherence_scan.py [--j 1] [--samples 200] [--seed 0]
"""

import argparse

import numpy as np

from ni_so3 import geometry as geo
from ni_so3 import reduction as red


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--j", type=int, default=1)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    q = 0.4 + 0.3j
    devs = []
    for _ in range(args.samples):
        g = geo.GroupElement(*rng.uniform([0, 0.2, 0], [2 * np.pi, np.pi - 0.2, 2 * np.pi]))
        try:
            devs.append(abs(red.coherence_criterion(args.j, q, g) - 1))
        except (ArithmeticError, ValueError):
            continue
    devs = np.array(devs)
    print(f"identity: {abs(red.coherence_criterion(args.j, q, geo.identity()) - 1):.2e}")
    print(f"j={args.j} q={q} samples={devs.size}")
    for p in (0, 25, 50, 75, 100):
        print(f"  percentile {p:>3}: {np.percentile(devs, p):.3e}")
    print(f"  fraction above 1e-3: {np.mean(devs > 1e-3):.2f}")


if __name__ == "__main__":
    main()
