"""Reduction of ``H = c^{AB} eta_A eta_B + c^A eta_A`` to the lambda-representation.

Solutions are sought as ``Phi(g) = int_Q psi(q') <g|j,q,q'> dmu_j(q')``.  The
right fields act on this integral through ``eta_X Phi = int (ell_X psi) <g|j,q,q'>``,
so ``H Phi = E Phi`` reduces to the finite matrix problem
``(c^{AB} ell_A ell_B + c^A ell_A) psi = E psi`` on the carrier space.

``ell_a`` is anti-self-adjoint for the mu_j inner product, so the reduced operator
is self-adjoint (real energies) when c^{AB} is real symmetric and c^A is zero or
purely imaginary; a real non-zero c^A gives an anti-self-adjoint linear term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .geometry import GroupElement, QuadratureGrid, casimir_left, haar_grid, right_field
from .lambda_rep import (
    QFunction,
    QGrid,
    _check_j,
    factor_kernel,
    gram_matrix,
    kernel_closed_form,
    ell_matrix,
    q_plane_grid,
)
from .special import wigner_D_matrix


@dataclass(frozen=True)
class HamiltonianSpec:
    cAB: np.ndarray
    cA: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        cab = np.asarray(self.cAB, dtype=float)
        ca = np.asarray(self.cA, dtype=complex)
        if cab.shape != (3, 3) or ca.shape != (3,):
            raise ValueError("cAB must be 3x3 and cA a 3-vector")
        if not np.allclose(cab, cab.T, atol=1e-14):
            raise ValueError("cAB must be symmetric")
        if np.all(ca.imag == 0):
            ca = ca.real
        object.__setattr__(self, "cAB", cab)
        object.__setattr__(self, "cA", ca)

    @classmethod
    def symmetric_top(cls, a: float, b: float) -> "HamiltonianSpec":
        """``-a(eta_1^2 + eta_2^2) - b eta_3^2``; energies ``a j(j+1) + (b - a) n^2``."""
        return cls(-np.diag([a, a, b]))

    @classmethod
    def random_negative_definite(cls, rng: np.random.Generator) -> "HamiltonianSpec":
        m = rng.normal(size=(3, 3))
        return cls(-(m @ m.T + 0.1 * np.eye(3)))

    @classmethod
    def from_dict(cls, doc: dict) -> "HamiltonianSpec":
        ca = doc.get("cA", [0.0, 0.0, 0.0])
        return cls(np.array(doc["cAB"], dtype=float), np.array([complex(c) for c in ca]))

    def to_dict(self) -> dict:
        ca = self.cA
        return {"cAB": self.cAB.tolist(), "cA": ca.tolist() if np.isrealobj(ca) else [str(c) for c in ca]}


@dataclass(frozen=True)
class ReducedSolution:
    j: int
    energy: complex
    psi: QFunction


def reduced_operator(spec: HamiltonianSpec, j: int) -> np.ndarray:
    j = _check_j(j)
    ells = [ell_matrix(a, j) for a in (1, 2, 3)]
    h = np.zeros((2 * j + 1,) * 2, dtype=complex)
    for a in range(3):
        h += spec.cA[a] * ells[a]
        for b in range(3):
            if spec.cAB[a, b]:
                h += spec.cAB[a, b] * ells[a] @ ells[b]
    return h


def is_gram_self_adjoint(h: np.ndarray, gram: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(gram @ h - h.conj().T @ gram)) <= tol * max(1.0, np.max(np.abs(h))))


def reduced_spectrum(spec: HamiltonianSpec, j: int) -> list[ReducedSolution]:
    """Eigenpairs of the reduced operator; eigenvectors normalized in the Gram metric.

    The self-adjoint case goes through the Hermitian generalized problem
    ``(G H) v = E G v``; otherwise a general eigen-solve is used and energies
    may be complex.
    """
    j = _check_j(j)
    if j > 20:
        raise ValueError("reduced_spectrum supports j <= 20")
    h = reduced_operator(spec, j)
    g = gram_matrix(j)
    if is_gram_self_adjoint(h, g):
        gh = g @ h
        energies, vecs = scipy.linalg.eigh((gh + gh.conj().T) / 2, g)
    else:
        energies, vecs = scipy.linalg.eig(h)
        order = np.lexsort((energies.imag, energies.real))
        energies, vecs = energies[order], vecs[:, order]
        vecs = vecs / np.sqrt(np.real(np.einsum("in,ij,jn->n", vecs.conj(), g, vecs)))
    return [ReducedSolution(j, e, QFunction(j, vecs[:, k])) for k, e in enumerate(energies)]


# -- Wigner-basis oracle ------------------------------------------------------


def _eta_projections(j: int, grid: QuadratureGrid, h: float) -> list[np.ndarray]:
    """Matrices P_a with ``eta_a D_col = sum_row P_a[row, col] D_row`` (FD + Haar projection)."""
    k = 2 * j + 1
    nodes = grid.nodes
    w = grid.weights

    def stack(phi, theta, psi):
        return wigner_D_matrix(j, GroupElement(phi, theta, psi)).reshape(-1, k * k)

    base = stack(*nodes.as_tuple())
    out = []
    for a in (1, 2, 3):
        moved = right_field(a, stack, h)(*(c[:, None] for c in nodes.as_tuple()))
        out.append(k * (base.conj() * w[:, None]).T @ moved)
    return out


def oracle_operator(spec: HamiltonianSpec, j: int, h: float = 1e-5, n_grid: int | None = None) -> np.ndarray:
    """``H`` on the (2j+1)^2 Wigner functions, built only from FD eta fields on the group."""
    j = _check_j(j)
    n = 2 * j + 2 if n_grid is None else n_grid
    p = _eta_projections(j, haar_grid(n, n, n), h)
    out = np.zeros_like(p[0])
    for a in range(3):
        out += spec.cA[a] * p[a]
        for b in range(3):
            if spec.cAB[a, b]:
                out += spec.cAB[a, b] * p[a] @ p[b]
    return out


def _sorted_eigvals(m: np.ndarray, hermitian: bool) -> np.ndarray:
    if hermitian:
        return np.linalg.eigvalsh((m + m.conj().T) / 2).astype(complex)
    e = np.linalg.eigvals(m)
    return e[np.lexsort((e.imag, e.real))]


def oracle_spectrum(spec: HamiltonianSpec, j: int, **kw) -> np.ndarray:
    m = oracle_operator(spec, j, **kw)
    return _sorted_eigvals(m, hermitian=bool(np.max(np.abs(m - m.conj().T)) < 1e-6))


def spectrum_comparison(spec: HamiltonianSpec, j: int, **kw) -> tuple[np.ndarray, np.ndarray, float]:
    """Reduced energies, oracle energies, and the max deviation after repeating each reduced energy 2j+1 times."""
    reduced = np.array([s.energy for s in reduced_spectrum(spec, j)], dtype=complex)
    oracle = oracle_spectrum(spec, j, **kw)
    rep = np.repeat(reduced, 2 * j + 1)
    # multiset distance: optimal matching, robust to sort-order noise in complex spectra
    cost = np.abs(rep[:, None] - oracle[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return reduced, oracle, float(np.max(cost[rows, cols]))


# -- group-side solutions -----------------------------------------------------


def solution_field(sol: ReducedSolution, q: complex, grid: QGrid | None = None):
    """``Phi(phi, theta, psi) = int_Q psi(q') <g|j,q,q'> dmu_j(q')`` as a scalar field (scalar or array args)."""
    grid = q_plane_grid(sol.j) if grid is None else grid
    wpsi = sol.psi(grid.nodes) * grid.weights
    qbar = np.conj(grid.nodes)

    def field(phi, theta, psi):
        phi, theta, psi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (phi, theta, psi)))
        g = GroupElement(phi[..., None], theta[..., None], psi[..., None])
        return kernel_closed_form(q, qbar, g, sol.j) @ wpsi

    return field


def reconstruct_solution(sol: ReducedSolution, q: complex, g: GroupElement, grid: QGrid | None = None) -> complex:
    """``phi^lambda_q(g^{-1})`` by Q-quadrature."""
    return complex(solution_field(sol, q, grid)(*g.as_tuple()))


def reconstruct_factorized(sol: ReducedSolution, q: complex, g: GroupElement) -> complex:
    """Same value through the factorization ``U(q, g) psi(q o g^{-1})``."""
    u, q_moved = factor_kernel(q, g, sol.j)
    return complex(u * sol.psi(q_moved))


def _apply_hamiltonian(spec: HamiltonianSpec, f, h: float):
    terms = []
    for a in range(3):
        if spec.cA[a]:
            terms.append((spec.cA[a], right_field(a + 1, f, h)))
        for b in range(3):
            if spec.cAB[a, b]:
                terms.append((spec.cAB[a, b], right_field(a + 1, right_field(b + 1, f, h), h)))
    return lambda phi, theta, psi: sum(c * t(phi, theta, psi) for c, t in terms)


def schrodinger_residual(spec: HamiltonianSpec, sol: ReducedSolution, q: complex, g: GroupElement,
                         h: float = 1e-4) -> float:
    """``|H Phi - E Phi|`` at ``g`` with H applied by nested central differences."""
    f = solution_field(sol, q)
    hf = _apply_hamiltonian(spec, f, h)(*g.as_tuple())
    return float(abs(hf - sol.energy * f(*g.as_tuple())))


def intertwining_residual(sol: ReducedSolution, q: complex, g: GroupElement, h: float = 1e-5) -> float:
    """Max over a of ``|eta_a Phi - int (ell_a psi) <g|j,q,q'>|``."""
    f = solution_field(sol, q)
    res = 0.0
    for a in (1, 2, 3):
        lhs = right_field(a, f, h)(*g.as_tuple())
        moved = ReducedSolution(sol.j, sol.energy, sol.psi.apply(ell_matrix(a, sol.j)))
        res = max(res, abs(lhs - reconstruct_solution(moved, q, g)))
    return float(res)


def casimir_eigen_check(sol: ReducedSolution, q: complex, g: GroupElement, h: float = 1e-4) -> float:
    """``|K(-i xi) Phi - j(j+1) Phi|`` at ``g`` (nested central differences)."""
    f = solution_field(sol, q)
    k = casimir_left(f, h)(*g.as_tuple())
    return float(abs(k - sol.j * (sol.j + 1) * f(*g.as_tuple())))


def coherence_criterion(j: int, q: complex, g: GroupElement) -> float:
    """``|U(q, g)|`` from the kernel factorization; identically 1 only for coherent-state type reductions."""
    u, _ = factor_kernel(q, g, j)
    return float(abs(u))


def cocycle_residual(j: int, q: complex, g1: GroupElement, g2: GroupElement) -> float:
    """``|U(q, g1 g2) - U(q, g2) U(q o g2^-1, g1)|``."""
    from .geometry import compose

    u12, _ = factor_kernel(q, compose(g1, g2), j)
    u2, q2 = factor_kernel(q, g2, j)
    u1, _ = factor_kernel(q2, g1, j)
    return float(abs(u12 - u2 * u1))
