from fractions import Fraction
from math import factorial, pi

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_element
from ni_so3 import geometry as geo
from ni_so3.geometry import GroupElement, SpherePoint
from ni_so3.special import (
    WignerIndex,
    homomorphism_residual,
    jacobi_poly,
    small_d,
    spherical_Y,
    wigner_D,
    wigner_D_matrix,
    wigner_D_stack,
    wigner_d_matrix,
)


# -- exact Rodrigues oracle ----------------------------------------------------
# polynomials as coefficient lists (lowest degree first) over Fraction


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            out[i + k] += x * y
    return out


def _ppow(a, n):
    out = [Fraction(1)]
    for _ in range(n):
        out = _pmul(out, a)
    return out


def _pder(a):
    return [i * a[i] for i in range(1, len(a))] or [Fraction(0)]


def _pdiv(a, b):
    """Exact division, asserting zero remainder."""
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        q[i] = a[i + len(b) - 1] / b[-1]
        for k, y in enumerate(b):
            a[i + k] -= q[i] * y
    assert all(x == 0 for x in a)
    return q


def _peval(a, z):
    return sum(c * z**i for i, c in enumerate(a))


def rodrigues(n, alpha, beta, z: Fraction) -> Fraction:
    one_minus, one_plus = [Fraction(1), Fraction(-1)], [Fraction(1), Fraction(1)]
    poly = _pmul(_ppow(one_minus, alpha + n), _ppow(one_plus, beta + n))
    for _ in range(n):
        poly = _pder(poly)
    for factor, power in ((one_minus, alpha), (one_plus, beta)):
        if power > 0:
            poly = _pdiv(poly, _ppow(factor, power))
        elif power < 0:
            poly = _pmul(poly, _ppow(factor, -power))
    return Fraction((-1) ** n, 2**n * factorial(n)) * _peval(poly, z)


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("alpha,beta", [(0, 0), (1, 0), (0, 2), (3, 1), (2, 5)])
def test_jacobi_recurrence_matches_rodrigues(n, alpha, beta):
    for z in (Fraction(-3, 4), Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
        assert jacobi_poly(n, alpha, beta, float(z)) == pytest.approx(float(rodrigues(n, alpha, beta, z)), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("n,alpha,beta", [(2, -1, 0), (3, -2, 1), (4, 1, -3), (3, -3, 0), (2, -1, -1)])
def test_jacobi_negative_parameters_match_rodrigues(n, alpha, beta):
    for z in (Fraction(-1, 2), Fraction(1, 5), Fraction(2, 3)):
        assert jacobi_poly(n, alpha, beta, float(z)) == pytest.approx(float(rodrigues(n, alpha, beta, z)), abs=1e-12)


def test_jacobi_examples():
    assert jacobi_poly(0, 3, 2, 0.7) == 1.0
    assert jacobi_poly(1, 0, 0, 0.3) == pytest.approx(0.3)
    assert jacobi_poly(2, 0, 0, 0.5) == pytest.approx(-0.125)
    assert rodrigues(2, 0, 0, Fraction(1, 2)) == Fraction(-1, 8)


def test_jacobi_invalid():
    with pytest.raises(ValueError):
        jacobi_poly(-1, 0, 0, 0.0)
    with pytest.raises(ValueError):
        jacobi_poly(2, -3, 0, 0.0)


# -- small d ---------------------------------------------------------------------


def _d_expm(j, theta):
    """exp(-i theta J_y) in the ascending-m basis, built from ladder operators."""
    ms = np.arange(-j, j + 1)
    jp = np.zeros((2 * j + 1,) * 2)
    for k in range(2 * j):
        jp[k + 1, k] = np.sqrt(j * (j + 1) - ms[k] * (ms[k] + 1))
    jy = (jp - jp.T) / 2j
    return scipy.linalg.expm(-1j * theta * jy).real


@pytest.mark.parametrize("j", range(0, 7))
def test_small_d_matches_matrix_exponential(j):
    for theta in (0.0, 0.4, 1.3, 2.0, np.pi):
        assert np.allclose(wigner_d_matrix(j, theta), _d_expm(j, theta), atol=1e-12)


def test_small_d_examples():
    assert small_d(1, 0, 0, pi / 3) == pytest.approx(0.5)
    for j in (1, 2, 3):
        assert np.allclose(wigner_d_matrix(j, 0.0), np.eye(2 * j + 1))


@given(st.integers(1, 6), st.floats(0, np.pi))
def test_small_d_rows_orthonormal(j, theta):
    d = wigner_d_matrix(j, theta)
    assert np.allclose(d @ d.T, np.eye(2 * j + 1), atol=1e-12)


@given(st.integers(1, 5), st.data())
def test_small_d_symmetry_rules(j, data):
    m = data.draw(st.integers(-j, j))
    n = data.draw(st.integers(-j, j))
    theta = data.draw(st.floats(0, np.pi))
    assert small_d(j, m, n, theta) == pytest.approx((-1) ** (m - n) * small_d(j, n, m, theta), abs=1e-14)
    assert small_d(j, m, n, theta) == pytest.approx(small_d(j, -n, -m, theta), abs=1e-14)


def test_index_validation():
    with pytest.raises(IndexError):
        WignerIndex(1, 2, 0)
    with pytest.raises(IndexError):
        small_d(2, 0, -3, 0.1)


# -- D functions ---------------------------------------------------------------


@pytest.mark.parametrize("j", range(1, 6))
def test_unitarity(j, rng):
    for _ in range(20):
        d = wigner_D_matrix(j, random_element(rng, 0.0))
        assert np.allclose(d @ d.conj().T, np.eye(2 * j + 1), atol=1e-12)


def test_orthogonality_on_haar_grid():
    grid = geo.haar_grid(16)
    js = (1, 2, 3)
    gram = grid.gram(lambda g: np.concatenate([wigner_D_stack(j, g) for j in js]))
    expect = np.diag(np.concatenate([np.full((2 * j + 1) ** 2, 1 / (2 * j + 1)) for j in js]))
    assert np.max(np.abs(gram - expect)) < 1e-12
    assert gram[0, 0].real == pytest.approx(1 / 3)


def test_identity_value_is_quarter_turn():
    for j in (1, 2):
        assert np.allclose(wigner_D_matrix(j, geo.identity()), wigner_d_matrix(j, np.pi / 2))


@pytest.mark.parametrize("j", [1, 2, 3])
def test_twisted_homomorphism(j, rng):
    for _ in range(10):
        assert homomorphism_residual(j, random_element(rng), random_element(rng)) < 1e-9


def test_plain_homomorphism_fails_in_this_chart():
    g1, g2 = GroupElement(0.3, 1.0, 2.0), GroupElement(1.5, 2.0, 0.4)
    a, b = wigner_D_matrix(1, g1), wigner_D_matrix(1, g2)
    c = wigner_D_matrix(1, geo.compose(g1, g2))
    assert np.max(np.abs(c - a @ b)) > 1e-2


def _Dfield(j, m, n):
    return lambda phi, theta, psi: wigner_D(j, m, n, GroupElement(phi, theta, psi))


@pytest.mark.parametrize("j,m,n", [(1, 1, 0), (2, -1, 2), (3, 2, -3), (3, 0, 0)])
def test_eigen_equations(j, m, n, rng):
    F = _Dfield(j, m, n)
    for _ in range(5):
        g = random_element(rng, 0.2)
        val = F(*g.as_tuple())
        assert abs(-1j * geo.left_field_apply(1, F, g) - m * val) < 1e-5
        assert abs(1j * geo.right_field_apply(3, F, g) - n * val) < 1e-5
        assert abs(geo.casimir_left(F)(*g.as_tuple()) - j * (j + 1) * val) < 1e-5
        assert abs(geo.casimir_right(F)(*g.as_tuple()) - j * (j + 1) * val) < 1e-5


def test_stack_layout():
    g = GroupElement(np.array([0.1, 0.2]), np.array([1.0, 1.1]), np.array([2.0, 2.5]))
    s = wigner_D_stack(2, g)
    assert s.shape == (25, 2)
    assert s[(1 + 2) * 5 + (-2 + 2), 1] == pytest.approx(wigner_D(2, 1, -2, GroupElement(0.2, 1.1, 2.5)))


# -- spherical harmonics ------------------------------------------------------


def test_y00():
    assert spherical_Y(0, 0, SpherePoint(0.3, 1.0)) == pytest.approx(0.2820948, abs=1e-7)


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_harmonics_orthonormal(j):
    x, w = geo.sphere_grid(12)
    ys = np.array([spherical_Y(j, m, x) for m in range(-j, j + 1)])
    assert np.allclose((ys.conj() * w) @ ys.T, np.eye(2 * j + 1), atol=1e-10)


@pytest.mark.parametrize("j,m", [(1, 0), (2, 1), (3, -2)])
def test_harmonics_casimir(j, m):
    def Y(phi, theta):
        return spherical_Y(j, m, SpherePoint(phi, theta))

    x = SpherePoint(1.2, 0.9)
    assert abs(geo.sphere_casimir(Y)(x.phi, x.theta) - j * (j + 1) * Y(x.phi, x.theta)) < 1e-5
