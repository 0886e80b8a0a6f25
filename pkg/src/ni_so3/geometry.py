"""SO(3)/SU(2) geometry in second-kind canonical coordinates.

A rotation is written ``g = exp(psi e3) exp((theta - pi/2) e2) exp(phi e1)`` with
``[e_a, e_b] = eps_abc e_c``.  The rightmost factor is generated by ``e1``; this
is the reading under which ``xi_1 = d/dphi`` and ``eta_3 = -d/dpsi`` and the
2x2 product used for the Moebius actions are all mutually consistent.  The
identity therefore sits at ``(phi, theta, psi) = (0, pi/2, 0)``.

Conventions for the invariant fields::

    (xi_X F)(g)  = d/dt F(g exp(tX))        left-invariant, right shifts
    (eta_X F)(g) = d/dt F(exp(-tX) g)       right-invariant, left shifts

All angle arguments may be numpy arrays; functions broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi
HALF_PI = 0.5 * np.pi

FD_STEP = 1e-5
POLE_TOL = 1e-6
DEGENERATE_TOL = 1e-12
MOBIUS_TOL = 1e-12


class ChartSingularityError(ValueError):
    """Evaluation too close to theta in {0, pi}, where cot/1/sin blow up."""


class DegenerateChartError(ChartSingularityError):
    """Coordinate extraction hit theta in {0, pi}, where phi and psi mix."""


class PointAtInfinityError(ZeroDivisionError):
    """A Moebius action sent the point to infinity."""


@dataclass(frozen=True)
class GroupElement:
    phi: float | np.ndarray
    theta: float | np.ndarray
    psi: float | np.ndarray

    def as_tuple(self):
        return self.phi, self.theta, self.psi

    def canonical(self) -> "GroupElement":
        """Same rotation with phi, psi in [0, 2pi) and theta in [0, pi]."""
        return from_rotation(rotation_matrix(self))

    def to_dict(self) -> dict:
        return {"phi": float(self.phi), "theta": float(self.theta), "psi": float(self.psi)}

    @classmethod
    def from_dict(cls, doc: dict) -> "GroupElement":
        return cls(float(doc["phi"]), float(doc["theta"]), float(doc["psi"]))


def identity() -> GroupElement:
    return GroupElement(0.0, HALF_PI, 0.0)


@dataclass(frozen=True)
class SU2Pair:
    alpha: complex | np.ndarray
    beta: complex | np.ndarray

    def matrix(self) -> np.ndarray:
        a, b = np.asarray(self.alpha), np.asarray(self.beta)
        return np.stack(
            [np.stack([a, b], -1), np.stack([-np.conj(b), np.conj(a)], -1)], -2
        )

    def canonical(self) -> "SU2Pair":
        """Representative of {+U, -U} with Re(alpha) > 0, or Re(alpha) = 0 and Im(alpha) >= 0."""
        a = complex(self.alpha)
        flip = a.real < 0 or (a.real == 0 and a.imag < 0)
        return SU2Pair(-a, -complex(self.beta)) if flip else self

    @classmethod
    def from_matrix(cls, u: np.ndarray) -> "SU2Pair":
        return cls(u[..., 0, 0], u[..., 0, 1])


def to_su2(phi, theta, psi) -> SU2Pair:
    """The three-factor product ``R(psi) X(theta) Z(phi)`` with raw (unshifted) angles.

    ``to_su2(0, 0, 0)`` is the unit matrix.  The lift of a group element uses
    ``theta - pi/2`` in the middle slot, see :func:`lift`.
    """
    phi, theta, psi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (phi, theta, psi)))
    c, s = np.cos(psi / 2), np.sin(psi / 2)
    ct, st = np.cos(theta / 2), np.sin(theta / 2)
    alpha = (c * ct - 1j * s * st) * np.exp(0.5j * phi)
    beta = (1j * c * st - s * ct) * np.exp(-0.5j * phi)
    if alpha.ndim == 0:
        return SU2Pair(complex(alpha), complex(beta))
    return SU2Pair(alpha, beta)


def lift(g: GroupElement) -> np.ndarray:
    """SU(2) matrix of ``g`` (defined up to overall sign)."""
    return to_su2(g.phi, np.asarray(g.theta) - HALF_PI, g.psi).matrix()


# su(2) images of e1, e2, e3; with E_a = -i sigma_a / 2 these are -E3, -E1, E2.
_SIGMA = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
_E = -0.5j * _SIGMA
RHO = np.stack([-_E[2], -_E[0], _E[1]])


def _rx(a):
    c, s, o, z = np.cos(a), np.sin(a), np.ones_like(a), np.zeros_like(a)
    return np.stack([np.stack([o, z, z], -1), np.stack([z, c, -s], -1), np.stack([z, s, c], -1)], -2)


def _ry(a):
    c, s, o, z = np.cos(a), np.sin(a), np.ones_like(a), np.zeros_like(a)
    return np.stack([np.stack([c, z, s], -1), np.stack([z, o, z], -1), np.stack([-s, z, c], -1)], -2)


def _rz(a):
    c, s, o, z = np.cos(a), np.sin(a), np.ones_like(a), np.zeros_like(a)
    return np.stack([np.stack([c, -s, z], -1), np.stack([s, c, z], -1), np.stack([z, z, o], -1)], -2)


def rotation_matrix(g: GroupElement) -> np.ndarray:
    """Adjoint matrix ``R[a, b] = (Ad_g e_b)^a``, i.e. the SO(3) rotation of ``g``."""
    phi, theta, psi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in g.as_tuple()))
    return _rz(psi) @ _ry(theta - HALF_PI) @ _rx(phi)


def su2_to_rotation(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    ud = np.conj(np.swapaxes(u, -1, -2))
    # R_ab = 2 tr(rho_a^dagger U rho_b U^dagger)
    t = np.einsum("aji,...jk,bkl,...li->...ab", np.conj(RHO), u, RHO, ud)
    return 2.0 * t.real


def from_rotation(r: np.ndarray, strict: bool = False) -> GroupElement:
    """Chart inversion.  At theta in {0, pi} only psi -/+ phi is defined; psi := 0 is used
    unless ``strict``, in which case :class:`DegenerateChartError` is raised."""
    r = np.asarray(r, dtype=float)
    stheta = np.clip(-r[..., 2, 0], -1.0, 1.0)
    cos_t = np.hypot(r[..., 2, 1], r[..., 2, 2])
    degenerate = cos_t < DEGENERATE_TOL
    if strict and np.any(degenerate):
        raise DegenerateChartError("theta at a chart pole; phi and psi are not separately defined")
    tprime = np.arctan2(stheta, cos_t)
    phi = np.where(degenerate, np.arctan2(-r[..., 1, 2], r[..., 1, 1]), np.arctan2(r[..., 2, 1], r[..., 2, 2]))
    psi = np.where(degenerate, 0.0, np.arctan2(r[..., 1, 0], r[..., 0, 0]))
    phi, psi = np.mod(phi, TWO_PI), np.mod(psi, TWO_PI)
    # mod can return exactly 2pi for tiny negative inputs
    phi = np.where(phi >= TWO_PI, 0.0, phi)
    psi = np.where(psi >= TWO_PI, 0.0, psi)
    theta = tprime + HALF_PI
    if np.ndim(theta) == 0:
        return GroupElement(float(phi), float(theta), float(psi))
    return GroupElement(phi, theta, psi)


def from_su2(u: np.ndarray, strict: bool = False) -> GroupElement:
    return from_rotation(su2_to_rotation(u), strict=strict)


def compose(g1: GroupElement, g2: GroupElement, strict: bool = False) -> GroupElement:
    """Coordinates of the product ``g1 g2``, via the SU(2) lift."""
    return from_su2(lift(g1) @ lift(g2), strict=strict)


def inverse(g: GroupElement, strict: bool = False) -> GroupElement:
    u = lift(g)
    return from_su2(np.conj(np.swapaxes(u, -1, -2)), strict=strict)


# -- invariant vector fields -------------------------------------------------

ScalarField = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _check_axis(a: int) -> None:
    if a not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {a}")


def _check_pole(theta) -> None:
    if np.any(np.abs(np.sin(theta)) < POLE_TOL):
        raise ChartSingularityError("theta within 1e-6 of a chart pole")


def xi_coefficients(a: int, phi, theta, psi):
    """Components (d_phi, d_theta, d_psi) of the left-invariant field xi_a."""
    _check_axis(a)
    z = np.zeros(np.broadcast(phi, theta, psi).shape)
    if a == 1:
        return z + 1.0, z, z
    _check_pole(theta)
    cot, csc = np.cos(theta) / np.sin(theta), 1.0 / np.sin(theta)
    if a == 2:
        return z - cot * np.sin(phi), z + np.cos(phi), z + np.sin(phi) * csc
    return z - cot * np.cos(phi), z - np.sin(phi), z + np.cos(phi) * csc


def eta_coefficients(a: int, phi, theta, psi):
    """Components (d_phi, d_theta, d_psi) of the right-invariant field eta_a."""
    _check_axis(a)
    z = np.zeros(np.broadcast(phi, theta, psi).shape)
    if a == 3:
        return z, z, z - 1.0
    _check_pole(theta)
    cot, csc = np.cos(theta) / np.sin(theta), 1.0 / np.sin(theta)
    if a == 1:
        return z - np.cos(psi) * csc, z + np.sin(psi), z + np.cos(psi) * cot
    return z - np.sin(psi) * csc, z - np.cos(psi), z + np.sin(psi) * cot


def _apply_coefficients(coeffs, F: ScalarField, phi, theta, psi, h: float):
    out = 0.0
    shifts = ((h, 0, 0), (0, h, 0), (0, 0, h))
    for c, (dp, dt, ds) in zip(coeffs, shifts):
        if not np.any(c):
            continue
        deriv = (F(phi + dp, theta + dt, psi + ds) - F(phi - dp, theta - dt, psi - ds)) / (2 * h)
        out = out + c * deriv
    return out


def left_field(a: int, F: ScalarField, h: float = FD_STEP) -> ScalarField:
    """``xi_a F`` as a new scalar field (central differences, step ``h``)."""
    _check_axis(a)
    return lambda phi, theta, psi: _apply_coefficients(
        xi_coefficients(a, phi, theta, psi), F, phi, theta, psi, h
    )


def right_field(a: int, F: ScalarField, h: float = FD_STEP) -> ScalarField:
    _check_axis(a)
    return lambda phi, theta, psi: _apply_coefficients(
        eta_coefficients(a, phi, theta, psi), F, phi, theta, psi, h
    )


def left_field_apply(a: int, F: ScalarField, g: GroupElement, h: float = FD_STEP):
    return left_field(a, F, h)(*g.as_tuple())


def right_field_apply(a: int, F: ScalarField, g: GroupElement, h: float = FD_STEP):
    return right_field(a, F, h)(*g.as_tuple())


def casimir_left(F: ScalarField, h: float = 1e-4) -> ScalarField:
    """``K(-i xi) F = -sum_a xi_a xi_a F`` by nested central differences."""
    terms = [left_field(a, left_field(a, F, h), h) for a in (1, 2, 3)]
    return lambda phi, theta, psi: -sum(t(phi, theta, psi) for t in terms)


def casimir_right(F: ScalarField, h: float = 1e-4) -> ScalarField:
    terms = [right_field(a, right_field(a, F, h), h) for a in (1, 2, 3)]
    return lambda phi, theta, psi: -sum(t(phi, theta, psi) for t in terms)


# -- Haar quadrature -----------------------------------------------------------


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor-product rule for the normalized Haar measure; weights sum to 1."""

    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.weights.size

    @property
    def nodes(self) -> GroupElement:
        return GroupElement(self.phi, self.theta, self.psi)

    def chunks(self, size: int = 1 << 15):
        for start in range(0, len(self), size):
            sl = slice(start, start + size)
            yield GroupElement(self.phi[sl], self.theta[sl], self.psi[sl]), self.weights[sl]

    def integrate(self, f: Callable[[GroupElement], np.ndarray], chunk: int = 1 << 15):
        return sum(np.sum(w * f(g)) for g, w in self.chunks(chunk))

    def gram(self, fs: Callable[[GroupElement], np.ndarray], chunk: int = 1 << 14) -> np.ndarray:
        """``G[i, k] = int conj(f_i) f_k dmu`` for a stacked family ``fs(g) -> (K, n)``."""
        total = 0.0
        for g, w in self.chunks(chunk):
            v = fs(g)
            total = total + (np.conj(v) * w) @ v.T
        return total


def haar_grid(n_theta: int, n_phi: int | None = None, n_psi: int | None = None) -> QuadratureGrid:
    """Gauss-Legendre in cos(theta) (weight sin(theta)/2), periodic trapezoid in phi and psi.

    Exact for trigonometric polynomials of degree < n in each periodic angle and
    for polynomials in cos(theta) of degree < 2 n_theta.
    """
    n_phi = n_theta if n_phi is None else n_phi
    n_psi = n_theta if n_psi is None else n_psi
    if n_theta < 2 or n_phi < 1 or n_psi < 1:
        raise ValueError("need n_theta >= 2 and positive n_phi, n_psi")
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = TWO_PI * np.arange(n_phi) / n_phi
    psi = TWO_PI * np.arange(n_psi) / n_psi
    P, T, S = np.meshgrid(phi, theta, psi, indexing="ij")
    W = np.broadcast_to((wx / 2)[None, :, None] / (n_phi * n_psi), P.shape)
    return QuadratureGrid(P.ravel(), T.ravel(), S.ravel(), np.ascontiguousarray(W).ravel())


# -- sphere S^2 = SO(3)/SO(2) ------------------------------------------------


@dataclass(frozen=True)
class SpherePoint:
    phi: float | np.ndarray
    theta: float | np.ndarray

    def to_dict(self) -> dict:
        return {"phi": float(self.phi), "theta": float(self.theta)}


def section(x: SpherePoint) -> GroupElement:
    return GroupElement(x.phi, x.theta, np.zeros_like(np.asarray(x.phi, dtype=float)) + 0.0)


def project(g: GroupElement) -> SpherePoint:
    return SpherePoint(g.phi, g.theta)


def sphere_action(x: SpherePoint, g: GroupElement, strict: bool = False) -> SpherePoint:
    """``x o g = pi[s(x) g]``."""
    return project(compose(section(x), g, strict=strict))


def h_factor(x: SpherePoint, g: GroupElement, strict: bool = True) -> float:
    """Angle ``psi_h`` with ``s(x) g = exp(psi_h e3) s(x o g)``."""
    return compose(section(x), g, strict=strict).psi


def sphere_field(a: int, F: Callable, h: float = FD_STEP) -> Callable:
    """Generator ``X_a`` of the right action on S^2, applied to ``F(phi, theta)``."""
    _check_axis(a)

    def field(phi, theta):
        cp, ct, _ = xi_coefficients(a, phi, theta, 0.0)
        out = 0.0
        if np.any(cp):
            out = out + cp * (F(phi + h, theta) - F(phi - h, theta)) / (2 * h)
        if np.any(ct):
            out = out + ct * (F(phi, theta + h) - F(phi, theta - h)) / (2 * h)
        return out

    return field


def sphere_generator_apply(a: int, F: Callable, x: SpherePoint, h: float = FD_STEP):
    return sphere_field(a, F, h)(x.phi, x.theta)


def sphere_casimir(F: Callable, h: float = 1e-4) -> Callable:
    """``K(-iX) F = -sum_a X_a X_a F``."""
    terms = [sphere_field(a, sphere_field(a, F, h), h) for a in (1, 2, 3)]
    return lambda phi, theta: -sum(t(phi, theta) for t in terms)


def sphere_grid(n_theta: int, n_phi: int | None = None):
    """Nodes and weights for ``int_{S^2} (.) sin(theta) dtheta dphi`` (total 4 pi)."""
    n_phi = 2 * n_theta if n_phi is None else n_phi
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = TWO_PI * np.arange(n_phi) / n_phi
    P, T = np.meshgrid(phi, np.arccos(x), indexing="ij")
    W = np.broadcast_to(wx[None, :] * TWO_PI / n_phi, P.shape)
    return SpherePoint(P.ravel(), T.ravel()), np.ascontiguousarray(W).ravel()


# -- Moebius actions on Q ----------------------------------------------------

# tan(q/2) = T . e^{iq} as a linear-fractional map, and its inverse
_CAYLEY = np.array([[-1j, 1j], [1.0, 1.0]])
_CAYLEY_INV = np.array([[1j, 1.0], [-1j, 1.0]])


def mobius(m: np.ndarray, w):
    """``(m00 w + m01) / (m10 w + m11)``; raises at the pole."""
    den = m[1, 0] * w + m[1, 1]
    if np.any(np.abs(den) <= MOBIUS_TOL):
        raise PointAtInfinityError("Moebius denominator vanishes")
    return (m[0, 0] * w + m[0, 1]) / den


def q_action(q, g: GroupElement):
    """``q o g^{-1}``: the linear-fractional map of ``tan(q/2)`` by the lift of ``g``.

    Carried out on ``u = e^{iq}`` so that ``q = pi`` (where ``tan(q/2)`` is
    infinite) is an ordinary point; the result has real part in (-pi, pi].
    Raises :class:`PointAtInfinityError` when ``e^{iq'}`` is 0 or infinite.
    """
    u = np.exp(1j * np.asarray(q, dtype=complex))
    n = _CAYLEY_INV @ lift(g) @ _CAYLEY
    u2 = mobius(n, u)
    if np.any(np.abs(u2) <= MOBIUS_TOL):
        raise PointAtInfinityError("q o g^-1 at Im q = +infinity")
    return -1j * np.log(u2)
