"""The lambda-representation of so(3) on functions of a complex variable q.

The carrier space for the orbit through ``(j, 0, 0)`` is spanned by
``e^{-inq}``, ``n = -j..j``; :class:`QFunction` stores coefficients in that
basis, indexed by ``n + j``.

Two kernels are exposed:

* :func:`kernel_closed_form` -- the closed-form expression ``<g | j, q, q'>``,
  which as a function of ``g`` is the representation kernel at ``g^{-1}``;
* :func:`kernel_D` -- the kernel at ``g`` itself, i.e. the closed form taken at
  the inverse element.  This is the one obeying
  ``int D(g1) D(g2) dmu = D(g1 g2)``.

The Q-plane measure ``dmu_j`` is realized on the strip ``q = x + iy``,
``x in (-pi, pi]``, with ``s = tanh(y)``.  In these variables every integrand
of the form ``conj(f) h`` with ``f, h`` in the carrier space becomes a
trigonometric polynomial in x times a polynomial in s, so a trapezoid rule in x
and Gauss-Legendre in s integrate it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .geometry import (
    FD_STEP,
    GroupElement,
    compose,
    haar_grid,
    identity,
    inverse,
    left_field,
    q_action,
    right_field,
)
from .special import wigner_D_matrix


class FactorizationError(ArithmeticError):
    """Every probe point hit a zero of the delta kernel."""


def _check_j(j: int, allow_zero: bool = False) -> int:
    lo = 0 if allow_zero else 1
    if int(j) != j or j < lo:
        raise ValueError(f"orbit label must be an integer >= {lo}, got {j}")
    return int(j)


@dataclass(frozen=True)
class OrbitLabel:
    j: int

    def __post_init__(self):
        _check_j(self.j)

    @property
    def covector(self) -> np.ndarray:
        return np.array([float(self.j), 0.0, 0.0])


# -- operators -------------------------------------------------------------


def ell_matrix(a: int, j: int) -> np.ndarray:
    """Matrix of ``ell_a`` on the basis ``e^{-inq}``; column ``n + j`` is the image of ``e^{-inq}``.

    ell_1 e_n = i(n+j)/2 e_{n-1} - i(n-j)/2 e_{n+1}
    ell_2 e_n = -(n+j)/2 e_{n-1} - (n-j)/2 e_{n+1}
    ell_3 e_n = -i n e_n
    """
    j = _check_j(j, allow_zero=True)
    if a not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {a}")
    k = 2 * j + 1
    out = np.zeros((k, k), dtype=complex)
    for n in range(-j, j + 1):
        col = n + j
        if a == 3:
            out[col, col] = -1j * n
            continue
        down, up = (n + j) / 2, (n - j) / 2
        if n - 1 >= -j:
            out[col - 1, col] = 1j * down if a == 1 else -down
        if n + 1 <= j:
            out[col + 1, col] = -1j * up if a == 1 else -up
    return out


def casimir_lambda(j: int) -> np.ndarray:
    """``sum_a (-i ell_a)^2``; equals ``j(j+1)`` times the identity."""
    return sum((-1j * ell_matrix(a, j)) @ (-1j * ell_matrix(a, j)) for a in (1, 2, 3))


def ell_action(a: int, value, deriv, q, j: int, conjugate: bool = False):
    """Combine ``F`` and ``dF/dq`` into ``ell_a(q) F``.

    With ``conjugate=True`` this is the conjugate operator acting in the
    variable ``qbar`` (``value``/``deriv`` are then F and dF/dqbar).
    """
    sign = -1 if conjugate else 1
    if a == 1:
        return -1j * sign * (np.sin(q) * deriv - j * np.cos(q) * value)
    if a == 2:
        return -1j * sign * (np.cos(q) * deriv + j * np.sin(q) * value)
    if a == 3:
        return deriv
    raise ValueError(f"axis must be 1, 2 or 3, got {a}")


def ell_apply(a: int, F, q, j: int, h: float = FD_STEP, conjugate: bool = False):
    """``ell_a F`` at ``q`` for a holomorphic callable ``F``, derivative by central differences."""
    deriv = (F(q + h) - F(q - h)) / (2 * h)
    return ell_action(a, F(q), deriv, q, j, conjugate)


# -- Q-plane quadrature -----------------------------------------------------


@dataclass(frozen=True)
class QGrid:
    j: int
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * values))


def measure_prefactor(j: int) -> float:
    return factorial(2 * j + 1) / (2**j * factorial(j) ** 2)


def q_plane_grid(j: int, n_r: int | None = None, n_ang: int | None = None) -> QGrid:
    """Quadrature for ``dmu_j(q)`` on the strip ``q = x + i artanh(s)``.

    ``n_r`` Gauss-Legendre nodes in ``s``, ``n_ang`` midpoint-shifted uniform
    nodes in ``x`` (the shift keeps nodes off ``x in {0, pi}``).  The area element
    is taken as ``dx dy / (2 pi)``; that normalization is what makes ``delta_j``
    reproducing on the carrier space.
    """
    j = _check_j(j, allow_zero=True)
    n_r = max(8, j + 2) if n_r is None else n_r
    n_ang = 4 * j + 4 if n_ang is None else n_ang
    if n_r < 1 or n_ang < 1:
        raise ValueError("need n_r >= 1 and n_ang >= 1")
    s, ws = np.polynomial.legendre.leggauss(n_r)
    x = -np.pi + 2 * np.pi * (np.arange(n_ang) + 0.5) / n_ang
    X, S = np.meshgrid(x, s, indexing="ij")
    W = measure_prefactor(j) * (1 - S**2) ** j / 2 ** (j + 1) * ws[None, :] / n_ang
    return QGrid(j, (X + 1j * np.arctanh(S)).ravel(), np.ascontiguousarray(W).ravel())


def basis_values(j: int, q) -> np.ndarray:
    """``e^{-inq}`` for n = -j..j, stacked along a new leading axis."""
    n = np.arange(-j, j + 1).reshape((-1,) + (1,) * np.ndim(q))
    return np.exp(-1j * n * np.asarray(q))


def gram_matrix(j: int, grid: QGrid | None = None) -> np.ndarray:
    """``G[n, m] = int conj(e^{-inq}) e^{-imq} dmu_j`` by quadrature."""
    grid = q_plane_grid(j) if grid is None else grid
    v = basis_values(j, grid.nodes)
    return (np.conj(v) * grid.weights) @ v.T


@dataclass(frozen=True)
class QMeasure:
    j: int
    gram: np.ndarray


def q_measure(j: int, grid: QGrid | None = None) -> QMeasure:
    return QMeasure(j, gram_matrix(j, grid))


@dataclass(frozen=True)
class QFunction:
    j: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2 * self.j + 1,):
            raise ValueError(f"need {2 * self.j + 1} coefficients, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, q):
        return np.tensordot(self.coeffs, basis_values(self.j, q), axes=1)

    @classmethod
    def basis(cls, j: int, n: int) -> "QFunction":
        c = np.zeros(2 * j + 1, dtype=complex)
        c[n + j] = 1.0
        return cls(j, c)

    @classmethod
    def f_m(cls, j: int, m: int) -> "QFunction":
        """``tan^m(q/2) sin^j(q)`` expanded in the carrier basis (requires |m| <= j).

        With ``u = e^{iq}`` the function is
        ``(-i)^m (2i)^{-j} (u-1)^{j+m} (u+1)^{j-m} u^{-j}``.
        """
        if abs(m) > j:
            raise ValueError("need |m| <= j")
        poly = np.polynomial.polynomial
        p = poly.polymul(poly.polypow([-1, 1], j + m), poly.polypow([1, 1], j - m))
        scale = (-1j) ** m / (2j) ** j
        c = np.zeros(2 * j + 1, dtype=complex)
        for k, pk in enumerate(p):
            # u^(k-j) = e^{-inq} with n = j - k
            c[(j - k) + j] = scale * pk
        return cls(j, c)

    def apply(self, matrix: np.ndarray) -> "QFunction":
        return QFunction(self.j, matrix @ self.coeffs)

    def inner(self, other: "QFunction", gram: np.ndarray) -> complex:
        return complex(np.conj(self.coeffs) @ gram @ other.coeffs)


# -- delta and kernels ------------------------------------------------------


def kernel_prefactor(j: int) -> float:
    return 2**j * factorial(j) ** 2 / factorial(2 * j)


def delta_j(q, qbar, j: int):
    """Reproducing kernel ``c_j [1 + cos(q - qbar)]^j`` of the carrier space."""
    j = _check_j(j, allow_zero=True)
    return kernel_prefactor(j) * (1 + np.cos(np.asarray(q) - np.asarray(qbar))) ** j


def _bracket(q, qbar, phi, theta, psi):
    q, qbar = np.asarray(q, dtype=complex), np.asarray(qbar, dtype=complex)
    sf, cf = np.sin(phi), np.cos(phi)
    st, ct = np.sin(theta), np.cos(theta)
    sq, cq = np.sin(q), np.cos(q)
    cp, sp = np.cos(psi + qbar), np.sin(psi + qbar)
    b = (
        st * cf
        + cp * (cq * cf - 1j * sf)
        - 1j * st * cq * sf
        - 1j * ct * sq
        + sp * (-1j * ct * cf - ct * cq * sf + st * sq)
    )
    db_dq = -cp * sq * cf + 1j * st * sq * sf - 1j * ct * cq + sp * (ct * sq * sf + st * cq)
    db_dqbar = -sp * (cq * cf - 1j * sf) + cp * (-1j * ct * cf - ct * cq * sf + st * sq)
    return b, db_dq, db_dqbar


def kernel_closed_form(q, qbar, g: GroupElement, j: int):
    """``<g | j, q, q'>``: the closed-form j-th power expression at the coordinates of ``g``."""
    j = _check_j(j, allow_zero=True)
    b, _, _ = _bracket(q, qbar, *g.as_tuple())
    return kernel_prefactor(j) * b**j


def kernel_D(q, qbar, g: GroupElement, j: int):
    """Representation kernel ``D^j_{q qbar'}(g)`` (closed form at ``g^{-1}``)."""
    return kernel_closed_form(q, qbar, inverse(g), j)


def _kernel_with_derivatives(q, qbar, phi, theta, psi, j):
    b, bq, bqb = _bracket(q, qbar, phi, theta, psi)
    c = kernel_prefactor(j)
    low = b ** (j - 1) if j >= 1 else np.zeros_like(b)
    return c * b**j, c * j * low * bq, c * j * low * bqb


def kernel_pde_residual(q, qbar, g: GroupElement, j: int, h: float = FD_STEP) -> tuple[float, float]:
    """Max residuals of ``[xi_a + ell_a(q)] D(g^-1)`` and ``[eta_a + conj ell_a(q')] D(g^-1)``.

    Group derivatives by central differences; the q-derivatives in the ell
    operators are taken from the closed form.
    """
    j = _check_j(j)
    value, dq, dqb = _kernel_with_derivatives(q, qbar, *g.as_tuple(), j)

    def field(phi, theta, psi):
        return kernel_prefactor(j) * _bracket(q, qbar, phi, theta, psi)[0] ** j

    xi_res = eta_res = 0.0
    for a in (1, 2, 3):
        xi = left_field(a, field, h)(*g.as_tuple())
        eta = right_field(a, field, h)(*g.as_tuple())
        xi_res = max(xi_res, float(np.max(np.abs(xi + ell_action(a, value, dq, q, j)))))
        eta_res = max(eta_res, float(np.max(np.abs(eta + ell_action(a, value, dqb, qbar, j, conjugate=True)))))
    return xi_res, eta_res


DEFAULT_PROBES = tuple(
    complex(x, y) for x, y in [(0.1, 0.2), (-1.0, 0.5), (2.0, -0.3), (0.7, 0.0), (-2.4, -0.6),
                               (1.3, 0.9), (-0.4, -1.1), (2.9, 0.4), (-1.7, 0.05), (0.25, -0.45)]
)


def factor_kernel(q: complex, g: GroupElement, j: int, probes=DEFAULT_PROBES) -> tuple[complex, complex]:
    """Split ``D(g^{-1})_{q qbar'} = U * delta_j(q o g^{-1}, qbar')``; returns ``(U, q o g^{-1})``.

    U is read off as the ratio against the delta kernel at probe points; the
    ratio is probe-independent, and probes at zeros of the delta kernel are skipped.
    """
    j = _check_j(j)
    q_moved = complex(q_action(q, g))
    ratios = []
    for pb in probes:
        den = delta_j(q_moved, pb, j)
        if abs(den) < 1e-12:
            continue
        ratios.append(complex(kernel_closed_form(q, pb, g, j)) / complex(den))
    if not ratios:
        raise FactorizationError("all probes hit zeros of delta_j")
    return ratios[0], q_moved


# -- completeness / orthogonality ------------------------------------------


def _random_q(rng, size, spread=0.5):
    return rng.uniform(-np.pi, np.pi, size) + 1j * rng.uniform(-spread, spread, size)


def _random_element(rng):
    return GroupElement(rng.uniform(0, 2 * np.pi), np.arccos(rng.uniform(-0.95, 0.95)), rng.uniform(0, 2 * np.pi))


def cond_d_residuals(j: int, samples: int, seed: int = 42) -> dict:
    """Max residuals of the kernel relations over random (q, q', g1, g2):

    * convolution ``int D_{q qbar''}(g1) D_{q'' qbar'}(g2) dmu_j(q'') = D_{q qbar'}(g1 g2)``;
    * conjugation ``conj D_{q qbar'}(g) = D_{q' qbar}(g^{-1})``;
    * identity ``D_{q qbar'}(e) = delta_j(q, qbar')``.
    """
    j = _check_j(j)
    rng = np.random.default_rng(seed)
    grid = q_plane_grid(j)
    Q, W = grid.nodes, grid.weights
    conv = conj = ident = 0.0
    for _ in range(samples):
        g1, g2 = _random_element(rng), _random_element(rng)
        a, b = _random_q(rng, 2)
        lhs = np.sum(kernel_D(a, np.conj(Q), g1, j) * kernel_D(Q, np.conj(b), g2, j) * W)
        conv = max(conv, abs(lhs - kernel_D(a, np.conj(b), compose(g1, g2), j)))
        conj = max(conj, abs(np.conj(kernel_D(a, np.conj(b), g1, j)) - kernel_D(b, np.conj(a), inverse(g1), j)))
        ident = max(ident, abs(kernel_D(a, np.conj(b), identity(), j) - delta_j(a, np.conj(b), j)))
    return {"convolution": float(conv), "conjugation": float(conj), "identity": float(ident)}


def completeness_check(j_max: int, sample_count: int, seed: int = 42, n_haar: int | None = None) -> dict:
    """Group-side orthogonality and Peter-Weyl partial sums for the kernels.

    * same orbit: ``int conj D_{a b'}(g) D_{c d'}(g) dmu(g) = delta_j(c, a') delta_j(b, d') / (2j+1)``
      (the ``1/(2j+1)`` is the delta in lambda relative to the orbit measure ``sum_j (2j+1)``);
    * distinct orbits: the same integral vanishes;
    * partial sums ``S_J = sum_{j<=J} (2j+1) int int conj D(g~) D(g) dmu dmu`` agree with
      ``sum_{j<=J} (2j+1) sum_mn conj D_mn(g~) D_mn(g)`` from the Wigner functions, and
      grow monotonically when ``g~ = g``.
    """
    if j_max > 4:
        raise ValueError("j_max <= 4 (cost bound)")
    rng = np.random.default_rng(seed)
    grid = haar_grid(2 * j_max + 2 if n_haar is None else n_haar)
    nodes = grid.nodes
    same = cross = 0.0
    for _ in range(sample_count):
        a, b, c, d = _random_q(rng, 4)
        for j in range(1, j_max + 1):
            dj = kernel_D(c, np.conj(d), nodes, j)
            for jt in range(1, j_max + 1):
                dt = kernel_D(a, np.conj(b), nodes, jt)
                val = np.sum(grid.weights * np.conj(dt) * dj)
                if j == jt:
                    expect = delta_j(c, np.conj(a), j) * delta_j(b, np.conj(d), j) / (2 * j + 1)
                    same = max(same, abs(val - expect))
                else:
                    cross = max(cross, abs(val))
    full = 0.0
    monotone = True
    for _ in range(sample_count):
        g, gt = _random_element(rng), _random_element(rng)
        for pair in ((gt, g), (g, g)):
            s_kernel = s_wigner = 1.0
            prev = 1.0
            for j in range(1, j_max + 1):
                qg = q_plane_grid(j)
                Q, W = qg.nodes, qg.weights
                k1 = kernel_D(Q[:, None], np.conj(Q)[None, :], pair[0], j)
                k2 = kernel_D(Q[:, None], np.conj(Q)[None, :], pair[1], j)
                s_kernel += (2 * j + 1) * np.einsum("ab,ab,a,b->", np.conj(k1), k2, W, W)
                s_wigner += (2 * j + 1) * np.sum(np.conj(wigner_D_matrix(j, pair[0])) * wigner_D_matrix(j, pair[1]))
                full = max(full, abs(s_kernel - s_wigner))
                if pair[0] is pair[1]:
                    monotone = monotone and s_kernel.real > prev
                    prev = s_kernel.real
    return {
        "dort2_same_orbit": float(same),
        "dort2_cross_orbit": float(cross),
        "dful2_partial_sums": float(full),
        "dful2_monotone": bool(monotone),
    }

