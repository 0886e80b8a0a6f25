"""Spin coherent states, the NI states D^j_q on the sphere, and the identities linking them.

Normalizations used here (each one fixed by a numerical identity, see the tests):

* the spin-CS wavefunction carries ``(1 + |zeta|^2)^(-j)``, so it equals
  ``sum_m u_m Y^j_m`` with the normalized coefficients ``u_m``;
* ``|q, j> = [scale] |zeta, j>`` with ``zeta = -i tan(q/2)`` and
  ``scale = sqrt(4pi/(2j+1)) 2^j j!/sqrt((2j)!) * f(zeta)^j``,
  ``f(zeta) = (1 + |zeta|^2) / (1 - zeta^2)``;
* the Q-side coefficient ``<q,j|j,m>`` carries ``[1 - (i tan(qbar/2))^2]^(-j)``;
  the sphere-side expansion coefficient ``<j,m|q,j>`` is
  ``4pi/(2j+1) * conj(<q,j|j,m>)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np

from .geometry import (
    GroupElement,
    SpherePoint,
    inverse,
    lift,
    mobius,
    project,
    q_action,
    sphere_action,
)
from .lambda_rep import QFunction, QGrid, _check_j, kernel_closed_form, q_plane_grid
from .special import spherical_Y


class TransportError(ArithmeticError):
    """A transport identity failed at the requested tolerance."""


@dataclass(frozen=True)
class CSLabel:
    j: int
    zeta: complex

    def __post_init__(self):
        _check_j(self.j)
        if not np.isfinite(complex(self.zeta)):
            raise ValueError("zeta must be finite")


@dataclass(frozen=True)
class NIStateLabel:
    j: int
    q: complex

    def __post_init__(self):
        _check_j(self.j)

    @property
    def zeta(self) -> complex:
        return complex(-1j * np.tan(complex(self.q) / 2))


def cs_zeta_from_sphere(x: SpherePoint) -> complex:
    return complex(-np.tan(x.theta / 2) * np.exp(-1j * x.phi))


def cs_coeffs(label: CSLabel) -> np.ndarray:
    """``u_m = (1+|zeta|^2)^(-j) sqrt((2j)!/((j+m)!(j-m)!)) zeta^(j+m)``, m = -j..j."""
    j, z = label.j, complex(label.zeta)
    norm = (1 + abs(z) ** 2) ** (-j)
    return np.array(
        [norm * sqrt(factorial(2 * j) / (factorial(j + m) * factorial(j - m))) * z ** (j + m) for m in range(-j, j + 1)]
    )


def cs_wavefunction(label: CSLabel, x: SpherePoint):
    j, z = label.j, complex(label.zeta)
    phi, theta = np.asarray(x.phi, dtype=float), np.asarray(x.theta, dtype=float)
    pref = sqrt((2 * j + 1) / (4 * np.pi)) * sqrt(factorial(2 * j)) / (2**j * factorial(j))
    poly = 2 * np.exp(1j * phi) * np.cos(theta) * z + np.sin(theta) - np.exp(2j * phi) * np.sin(theta) * z**2
    return pref * (1 + abs(z) ** 2) ** (-j) * np.exp(-1j * j * phi) * poly**j


def cs_expansion(label: CSLabel, x: SpherePoint):
    """``sum_m u_m Y^j_m(x)``; the oracle for :func:`cs_wavefunction`."""
    u = cs_coeffs(label)
    return sum(u[m + label.j] * spherical_Y(label.j, m, x) for m in range(-label.j, label.j + 1))


def ni_state(label: NIStateLabel, x: SpherePoint):
    """``D^j_q(phi, theta) = [-i cos(theta) sin q + (cos(phi) - i cos q sin(phi)) sin(theta)]^j``."""
    q = complex(label.q)
    phi, theta = np.asarray(x.phi, dtype=float), np.asarray(x.theta, dtype=float)
    return (-1j * np.cos(theta) * np.sin(q) + (np.cos(phi) - 1j * np.cos(q) * np.sin(phi)) * np.sin(theta)) ** label.j


def ni_state_integral(label: NIStateLabel, g: GroupElement, grid: QGrid | None = None) -> complex:
    """``int_Q <g | j, q, q'> dmu_j(q')``; independent of the psi coordinate of ``g``."""
    grid = q_plane_grid(label.j) if grid is None else grid
    k = kernel_closed_form(complex(label.q), np.conj(grid.nodes), g, label.j)
    return grid.integrate(k)


def overlap_qm(j: int, q, m: int):
    """``<q,j|j,m> = sqrt((2j+1)/4pi) 2^j j!/sqrt((j-m)!(j+m)!) w^(j+m) (1 - w^2)^(-j)``, ``w = i tan(qbar/2)``."""
    if abs(m) > j:
        raise ValueError("need |m| <= j")
    w = 1j * np.tan(np.conj(np.asarray(q, dtype=complex)) / 2)
    pref = sqrt((2 * j + 1) / (4 * np.pi)) * 2**j * factorial(j) / sqrt(factorial(j - m) * factorial(j + m))
    return pref * w ** (j + m) / (1 - w**2) ** j


def expansion_coeff(j: int, q, m: int):
    """``<j,m|q,j>`` in ``|q,j> = sum_m <j,m|q,j> |j,m>``."""
    return 4 * np.pi / (2 * j + 1) * np.conj(overlap_qm(j, q, m))


def ni_state_expansion(label: NIStateLabel, x: SpherePoint):
    j = label.j
    return sum(expansion_coeff(j, label.q, m) * spherical_Y(j, m, x) for m in range(-j, j + 1))


def rel2_reconstruct(j: int, m: int, x: SpherePoint, grid: QGrid | None = None):
    """``Y^j_m(x) = int_Q <q,j|j,m> D^j_q(x) dmu_j(q)`` evaluated by Q-quadrature."""
    grid = q_plane_grid(j) if grid is None else grid
    coeff = overlap_qm(j, grid.nodes, m) * grid.weights
    phi, theta = np.asarray(x.phi, dtype=float), np.asarray(x.theta, dtype=float)
    q = grid.nodes.reshape((-1,) + (1,) * phi.ndim)
    dq = (-1j * np.cos(theta) * np.sin(q) + (np.cos(phi) - 1j * np.cos(q) * np.sin(phi)) * np.sin(theta)) ** j
    return np.tensordot(coeff, dq, axes=1)


def rel1_coefficient(j: int, m: int, n: int) -> complex:
    """``C^j_mn = exp(i pi (j+m)/2) (j!)^2 [(j+m)!(j-m)!(j+n)!(j-n)!]^(-1/2)``."""
    f = factorial
    return complex(np.exp(0.5j * np.pi * (j + m)) * f(j) ** 2 / sqrt(f(j + m) * f(j - m) * f(j + n) * f(j - n)))


def rel1_reconstruct(j: int, m: int, n: int, g: GroupElement, grid: QGrid | None = None) -> complex:
    """``C^j_mn int int conj(F_m(q)) Phi_n(q') <g|j,q,q'> dmu_j(q) dmu_j(q')``.

    ``F_m(q) = tan^m(q/2) sin^j q`` and ``Phi_n(q') = exp(-i n q')``; the result
    is the Wigner function ``D^j_mn(g)``.
    """
    if j > 3:
        raise ValueError("rel1_reconstruct is limited to j <= 3 (cost bound)")
    grid = q_plane_grid(j) if grid is None else grid
    Q, W = grid.nodes, grid.weights
    f = np.conj(QFunction.f_m(j, m)(Q)) * W
    p = np.exp(-1j * n * Q) * W
    k = kernel_closed_form(Q[:, None], np.conj(Q)[None, :], g, j)
    return rel1_coefficient(j, m, n) * complex(f @ k @ p)


def ni_to_cs(label: NIStateLabel) -> tuple[complex, CSLabel]:
    """Scale and spin-CS label with ``D^j_q(x) = scale * psi^j_zeta(x)``."""
    j, z = label.j, label.zeta
    den = 1 - z**2
    if abs(den) < 1e-12:
        raise ZeroDivisionError("zeta^2 = 1: scale has a pole")
    f = (1 + abs(z) ** 2) / den
    scale = sqrt(4 * np.pi / (2 * j + 1)) * 2**j * factorial(j) / sqrt(factorial(2 * j)) * f**j
    return complex(scale), CSLabel(j, z)


def zeta_action(zeta, g: GroupElement):
    """``zeta o g^{-1}``, from the linear-fractional map of ``i zeta`` by the lift of ``g``."""
    return -1j * mobius(lift(g), 1j * np.asarray(zeta, dtype=complex))


DEFAULT_SPHERE_PROBES = (
    SpherePoint(0.4, 1.1), SpherePoint(2.2, 0.7), SpherePoint(4.0, 2.3),
    SpherePoint(5.5, 1.6), SpherePoint(1.3, 2.8), SpherePoint(3.1, 0.35),
)


def _transport_ratios(label: CSLabel, g: GroupElement, probes):
    moved = CSLabel(label.j, complex(zeta_action(label.zeta, g)))
    ratios = []
    for x in probes:
        den = complex(cs_wavefunction(moved, x))
        if abs(den) <= 1e-8:
            continue
        ratios.append(complex(cs_wavefunction(label, sphere_action(x, g))) / den)
    if len(ratios) < 2:
        raise TransportError("not enough usable probe points")
    return np.array(ratios)


def cs_phase(label: CSLabel, g: GroupElement, probes=DEFAULT_SPHERE_PROBES,
             modulus_tol: float = 1e-9, spread_tol: float = 1e-8) -> float:
    """Real phase function with ``psi_zeta(x o g) = exp(i j Phase) psi_{zeta o g^-1}(x)``.

    The ratio is sampled at probe points where the denominator exceeds 1e-8;
    it must have unit modulus and must not depend on the probe.  The phase is
    read off the j = 1 ratio (so it is j-independent, not reduced mod 2pi/j)
    and then checked against the ratio at the requested j.
    """
    r1 = _transport_ratios(CSLabel(1, label.zeta), g, probes)
    if np.max(np.abs(np.abs(r1) - 1)) > modulus_tol:
        raise TransportError(f"transport ratio not unimodular: {np.abs(r1)}")
    if np.max(np.abs(r1 - r1[0])) > spread_tol:
        raise TransportError("transport ratio depends on the probe point")
    phase = float(np.angle(r1[0]))
    if label.j > 1:
        rj = _transport_ratios(label, g, probes)
        if np.max(np.abs(rj - np.exp(1j * label.j * phase))) > spread_tol * label.j:
            raise TransportError("transport ratio is not exp(i j Phase)")
    return phase


def r1_residual(label: NIStateLabel, g: GroupElement, xs) -> float:
    """Max over ``xs`` of ``|D_q(x o g) - D_q(pi(g)) D_{q o g^-1}(x)|``."""
    factor = complex(ni_state(label, project(g)))
    moved = NIStateLabel(label.j, complex(q_action(label.q, g)))
    res = 0.0
    for x in xs:
        lhs = ni_state(label, sphere_action(x, g))
        res = max(res, abs(lhs - factor * ni_state(moved, x)))
    return float(res)


def ni_transport(label: NIStateLabel, g: GroupElement, probes=DEFAULT_SPHERE_PROBES, tol: float = 1e-9) -> complex:
    """Factor ``D^j_q(pi(g))`` in ``D_q(x o g) = D_q(pi(g)) D_{q o g^-1}(x)``.

    Both the transport law and the regeneration of ``|q o g, j>`` from the
    base state ``q0 = 0`` (:func:`rel4_residual`) are checked at the probes first.
    """
    res = r1_residual(label, g, probes)
    if res > tol:
        raise TransportError(f"transport law violated, residual {res:.3e}")
    res = rel4_residual(label.j, g, probes)
    if res > tol:
        raise TransportError(f"base-state transport violated, residual {res:.3e}")
    return complex(ni_state(label, project(g)))


def rel4_factor(j: int, g: GroupElement) -> complex:
    """Factor taking ``R_{g^-1} |0, j>`` to ``|0 o g, j>``: ``1 / D^j_0(pi(g^-1))``."""
    return 1.0 / complex(ni_state(NIStateLabel(j, 0.0), project(inverse(g))))


def rel4_residual(j: int, g: GroupElement, xs) -> float:
    """Max of ``|D_{0 o g}(x) - rel4_factor * D_0(x o g^-1)|`` over ``xs``."""
    q_g = complex(q_action(0.0, inverse(g)))
    factor = rel4_factor(j, g)
    base = NIStateLabel(j, 0.0)
    ginv = inverse(g)
    res = 0.0
    for x in xs:
        lhs = ni_state(NIStateLabel(j, q_g), x)
        res = max(res, abs(lhs - factor * ni_state(base, sphere_action(x, ginv))))
    return float(res)

