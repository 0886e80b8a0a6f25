"""Jacobi polynomials, Wigner small-d / D functions and spherical harmonics.

``D^j_mn(phi, theta, psi) = exp(i m phi + i n psi) d^j_mn(theta)`` in the chart of
:mod:`ni_so3.geometry`.  Because phi rotates about e1 and psi about e3, the two
indices refer to different eigenbases; consequently ``D(e) = d^j(pi/2)`` rather
than the unit matrix and the composition law reads::

    D(g1 g2) = D(g2) D(e)^T D(g1)

(see :func:`homomorphism_residual`).  Only integer j is supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, sqrt

import numpy as np

from .geometry import GroupElement, SpherePoint, identity


@dataclass(frozen=True)
class WignerIndex:
    j: int
    m: int
    n: int

    def __post_init__(self):
        if self.j < 0 or abs(self.m) > self.j or abs(self.n) > self.j:
            raise IndexError(f"invalid Wigner index (j={self.j}, m={self.m}, n={self.n})")


def jacobi_poly(n: int, alpha: int, beta: int, z):
    """``P_n^{(alpha, beta)}(z)``.

    Three-term recurrence for non-negative parameters; for negative integer
    parameters (allowed down to ``-n``) the finite binomial sum is used instead,
    because the recurrence denominators can vanish there.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"invalid degree {n}")
    if alpha < -n or beta < -n:
        raise ValueError("need alpha, beta >= -n")
    z = np.asarray(z, dtype=float)
    if alpha < 0 or beta < 0:
        return _jacobi_sum(n, alpha, beta, z)
    p_prev = np.ones_like(z)
    if n == 0:
        return p_prev
    p = (alpha + 1) + (alpha + beta + 2) * (z - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + alpha + beta
        a = 2 * k * (k + alpha + beta) * (s - 2)
        b = (s - 1) * (s * (s - 2) * z + alpha**2 - beta**2)
        c = 2 * (k + alpha - 1) * (k + beta - 1) * s
        p_prev, p = p, (b * p - c * p_prev) / a
    return p


def _jacobi_sum(n, alpha, beta, z):
    out = np.zeros_like(z)
    for s in range(n + 1):
        out = out + comb(n + alpha, n - s) * comb(n + beta, s) * ((z - 1) / 2) ** s * ((z + 1) / 2) ** (n - s)
    return out


def _small_d_closed(j, m, n, theta):
    # valid without negative powers when m >= |n|
    pref = (-1) ** (m - n) * sqrt(factorial(j + m) * factorial(j - m) / (factorial(j + n) * factorial(j - n)))
    half = np.asarray(theta, dtype=float) / 2
    return pref * np.sin(half) ** (m - n) * np.cos(half) ** (m + n) * jacobi_poly(j - m, m - n, m + n, np.cos(2 * half))


def small_d(j: int, m: int, n: int, theta):
    """Wigner ``d^j_mn(theta)``.

    The closed form is used for ``m >= |n|``.  Other index pairs are reduced
    with ``d_mn = (-1)^(m-n) d_nm`` and ``d_mn = d_{-n,-m}``, which keeps every
    evaluation free of negative powers of sin or cos of theta/2.
    """
    WignerIndex(j, m, n)
    if m < n:
        return (-1) ** (m - n) * small_d(j, n, m, theta)
    if m + n < 0:
        return small_d(j, -n, -m, theta)
    return _small_d_closed(j, m, n, theta)


def wigner_d_matrix(j: int, theta) -> np.ndarray:
    """``d[..., m + j, n + j]``."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (2 * j + 1, 2 * j + 1))
    for m in range(-j, j + 1):
        for n in range(-j, j + 1):
            out[..., m + j, n + j] = small_d(j, m, n, theta)
    return out


def wigner_D(j: int, m: int, n: int, g: GroupElement):
    phi, theta, psi = (np.asarray(v, dtype=float) for v in g.as_tuple())
    return np.exp(1j * (m * phi + n * psi)) * small_d(j, m, n, theta)


def wigner_D_matrix(j: int, g: GroupElement) -> np.ndarray:
    phi, theta, psi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in g.as_tuple()))
    ms = np.arange(-j, j + 1)
    left = np.exp(1j * phi[..., None] * ms)[..., :, None]
    right = np.exp(1j * psi[..., None] * ms)[..., None, :]
    return left * wigner_d_matrix(j, theta) * right


def wigner_D_stack(j: int, g: GroupElement) -> np.ndarray:
    """All ``(2j+1)^2`` functions as rows, shape ``((2j+1)^2, npoints)``; row ``(m+j)(2j+1) + n+j``."""
    d = wigner_D_matrix(j, g)
    k = 2 * j + 1
    return d.reshape(d.shape[:-2] + (k * k,)).reshape(-1, k * k).T


def homomorphism_residual(j: int, g1: GroupElement, g2: GroupElement) -> float:
    from .geometry import compose

    a, b = wigner_D_matrix(j, g1), wigner_D_matrix(j, g2)
    e = wigner_D_matrix(j, identity())
    c = wigner_D_matrix(j, compose(g1, g2))
    return float(np.max(np.abs(c - b @ e.T @ a)))


def spherical_Y(j: int, m: int, x: SpherePoint):
    """``Y^j_m = sqrt((2j+1)/4pi) D^j_m0``; orthonormal for ``sin(theta) dtheta dphi``."""
    phi, theta = (np.asarray(v, dtype=float) for v in (x.phi, x.theta))
    return sqrt((2 * j + 1) / (4 * np.pi)) * np.exp(1j * m * phi) * small_d(j, m, 0, theta)
