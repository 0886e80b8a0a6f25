"""Q-plane quadrature convergence of the sphere-harmonic and Wigner reconstructions.

Usage: python scripts/quadrature_convergence.py [--jmax 3] [--seed 0]
"""

import argparse

import numpy as np

from ni_so3 import coherent as cb
from ni_so3 import geometry as geo
from ni_so3 import lambda_rep as lr
from ni_so3 import special as sp


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jmax", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    x = geo.SpherePoint(rng.uniform(0, 2 * np.pi, 50), np.arccos(rng.uniform(-1, 1, 50)))
    g = geo.GroupElement(*rng.uniform([0, 0.3, 0], [2 * np.pi, np.pi - 0.3, 2 * np.pi]))
    print(f"{'j':>2} {'n_r':>4} {'n_ang':>6} {'harmonic err':>14} {'wigner err':>14}")
    for j in range(1, args.jmax + 1):
        for n in (1, 2, 4, 8, 16):
            grid = lr.q_plane_grid(j, n_r=n, n_ang=2 * n)
            e2 = max(np.max(np.abs(cb.rel2_reconstruct(j, m, x, grid) - sp.spherical_Y(j, m, x)))
                     for m in range(-j, j + 1))
            e1 = max(abs(cb.rel1_reconstruct(j, m, k, g, grid) - sp.wigner_D(j, m, k, g))
                     for m in range(-j, j + 1) for k in range(-j, j + 1))
            print(f"{j:>2} {n:>4} {2 * n:>6} {e2:>14.3e} {e1:>14.3e}")


if __name__ == "__main__":
    main()
