from math import factorial

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_element
from ni_so3 import geometry as geo
from ni_so3.lambda_rep import (
    FactorizationError,
    OrbitLabel,
    QFunction,
    basis_values,
    casimir_lambda,
    completeness_check,
    cond_d_residuals,
    delta_j,
    ell_action,
    ell_apply,
    ell_matrix,
    factor_kernel,
    gram_matrix,
    kernel_closed_form,
    kernel_D,
    kernel_pde_residual,
    measure_prefactor,
    q_measure,
    q_plane_grid,
)
from ni_so3.reduction import cocycle_residual

qs = st.complex_numbers(max_magnitude=3.0).filter(lambda z: abs(z.imag) < 0.8)


def gram_oracle(j):
    """Diagonal Gram from the beta integral: (j+n)!(j-n)!/(j!)^2."""
    return np.diag([factorial(j + n) * factorial(j - n) / factorial(j) ** 2 for n in range(-j, j + 1)])


@pytest.mark.parametrize("j", range(1, 11))
def test_ell_commutators_and_casimir(j):
    l1, l2, l3 = (ell_matrix(a, j) for a in (1, 2, 3))
    for x, y, z in ((l1, l2, l3), (l2, l3, l1), (l3, l1, l2)):
        assert np.max(np.abs(x @ y - y @ x - z)) < 1e-12
    assert np.max(np.abs(casimir_lambda(j) - j * (j + 1) * np.eye(2 * j + 1))) < 1e-12


def test_ell_matrix_invalid_axis():
    with pytest.raises(ValueError):
        ell_matrix(0, 1)


@given(st.integers(1, 4), st.data(), qs)
def test_ell_matrix_matches_differential_operator(j, data, q):
    a = data.draw(st.sampled_from([1, 2, 3]))
    n = data.draw(st.integers(-j, j))
    f = QFunction.basis(j, n)
    value, deriv = f(q), -1j * n * f(q)
    assert ell_action(a, value, deriv, q, j) == pytest.approx(f.apply(ell_matrix(a, j))(q), abs=1e-10)


def test_ell_apply_finite_difference():
    f = QFunction(2, np.array([0.3, -1j, 0.5, 2.0, 0.1j]))
    q = 0.4 + 0.2j
    for a in (1, 2, 3):
        assert ell_apply(a, f, q, 2) == pytest.approx(f.apply(ell_matrix(a, 2))(q), abs=1e-8)


@pytest.mark.parametrize("j", range(1, 7))
def test_gram_matches_beta_oracle(j):
    assert np.max(np.abs(gram_matrix(j) - gram_oracle(j))) < 1e-11 * np.max(gram_oracle(j))


def test_gram_matches_brute_force_integral():
    j = 1

    def density(y, x, n, m, part):
        v = np.conj(np.exp(-1j * n * (x + 1j * y))) * np.exp(-1j * m * (x + 1j * y))
        w = measure_prefactor(j) / (2 * np.pi) / (1 + np.cosh(2 * y)) ** (j + 1)
        return (v * w).real if part == 0 else (v * w).imag

    for n, m in ((-1, -1), (0, 0), (1, -1), (1, 0)):
        re = scipy.integrate.dblquad(density, -np.pi, np.pi, -25, 25, args=(n, m, 0))[0]
        im = scipy.integrate.dblquad(density, -np.pi, np.pi, -25, 25, args=(n, m, 1))[0]
        assert re + 1j * im == pytest.approx(gram_matrix(j)[n + j, m + j], abs=1e-7)


@pytest.mark.parametrize("j", range(1, 6))
def test_self_adjointness(j):
    g = gram_matrix(j)
    for a in (1, 2, 3):
        A = -1j * ell_matrix(a, j)
        assert np.max(np.abs(g @ A - A.conj().T @ g)) < 1e-8


def test_quadrature_refinement_is_stable():
    assert np.allclose(gram_matrix(3, q_plane_grid(3, 20, 40)), gram_matrix(3), atol=1e-12)
    assert q_measure(2).gram.shape == (5, 5)
    assert len(q_plane_grid(1, 3, 5)) == 15


@pytest.mark.parametrize("j", [1, 2, 3])
def test_f_m_eigen_relation(j):
    for m in range(-j, j + 1):
        f = QFunction.f_m(j, m)
        q = 0.3 + 0.1j
        assert f(q) == pytest.approx(np.tan(q / 2) ** m * np.sin(q) ** j, abs=1e-12)
        assert np.allclose(1j * ell_matrix(1, j) @ f.coeffs, m * f.coeffs, atol=1e-12)


def test_qfunction_validation():
    with pytest.raises(ValueError):
        QFunction(1, np.ones(2))
    with pytest.raises(ValueError):
        QFunction(1, np.array([1, np.nan, 0]))
    with pytest.raises(ValueError):
        OrbitLabel(0)
    assert np.array_equal(OrbitLabel(2).covector, [2.0, 0.0, 0.0])


@pytest.mark.parametrize("j", [1, 2, 3])
def test_delta_reproduces_carrier_functions(j, rng):
    grid = q_plane_grid(j)
    f = QFunction(j, rng.normal(size=2 * j + 1) + 1j * rng.normal(size=2 * j + 1))
    for q in (0.2 + 0.3j, -2.0 - 0.1j):
        assert grid.integrate(delta_j(q, np.conj(grid.nodes), j) * f(grid.nodes)) == pytest.approx(f(q), abs=1e-10)


def test_inner_product():
    g = gram_matrix(1)
    a, b = QFunction.basis(1, 1), QFunction.basis(1, 0)
    assert a.inner(a, g) == pytest.approx(2.0)
    assert a.inner(b, g) == pytest.approx(0.0, abs=1e-14)
    assert basis_values(1, np.zeros(4)).shape == (3, 4)


# -- kernels ----------------------------------------------------------------------


@pytest.mark.parametrize("j", [1, 2, 3])
def test_cond_d(j):
    res = cond_d_residuals(j, 20, seed=j)
    assert max(res.values()) < 1e-7


def test_kernel_closed_form_is_kernel_at_inverse(rng):
    g = random_element(rng)
    assert kernel_D(0.2, 0.5 - 0.1j, g, 2) == pytest.approx(kernel_closed_form(0.2, 0.5 - 0.1j, geo.inverse(g), 2))


@pytest.mark.parametrize("j,tol", [(1, 1e-5), (2, 1e-4), (3, 1e-4)])
def test_kernel_pde(j, tol, rng):
    for _ in range(10):
        q, qb = (complex(rng.uniform(-3, 3), rng.uniform(-0.3, 0.3)) for _ in range(2))
        xi, eta = kernel_pde_residual(q, qb, random_element(rng, 0.2), j)
        assert xi < tol and eta < tol


@pytest.mark.parametrize("j", [1, 2, 3])
def test_factorization(j, rng):
    for _ in range(5):
        q, g = complex(rng.uniform(-3, 3), rng.uniform(-0.4, 0.4)), random_element(rng)
        u, qm = factor_kernel(q, g, j)
        for probe in (0.9 - 0.2j, -1.4 + 0.6j):
            assert kernel_closed_form(q, probe, g, j) == pytest.approx(u * delta_j(qm, probe, j), abs=1e-10)
        assert abs(factor_kernel(q, geo.identity(), j)[0] - 1) < 1e-12


def test_factorization_all_probes_degenerate():
    q, g = 0.3, geo.identity()
    qm = geo.q_action(q, g)
    with pytest.raises(FactorizationError):
        factor_kernel(q, g, 1, probes=(qm - np.pi,))


@pytest.mark.parametrize("j", [1, 2])
def test_cocycle(j, rng):
    for _ in range(5):
        assert cocycle_residual(j, complex(rng.uniform(-3, 3), rng.uniform(-0.3, 0.3)),
                                random_element(rng), random_element(rng)) < 1e-8


def test_completeness():
    out = completeness_check(2, 2, seed=7)
    assert out["dort2_same_orbit"] < 1e-10
    assert out["dort2_cross_orbit"] < 1e-10
    assert out["dful2_partial_sums"] < 1e-10
    assert out["dful2_monotone"]


def test_completeness_cost_bound():
    with pytest.raises(ValueError):
        completeness_check(5, 1)
