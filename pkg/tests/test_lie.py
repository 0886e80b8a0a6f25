import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ni_so3.geometry import GroupElement, compose, rotation_matrix
from ni_so3.lie import (
    InvalidGroupElementError,
    StructureConstants,
    StructureShapeError,
    casimir_value,
    coadjoint_apply,
    jacobi_tensor,
    levi_civita,
    numeric_gradient,
    poisson_lie_bracket,
    validate_structure,
)

finite = st.floats(-10, 10, allow_nan=False)
vec3 = arrays(float, 3, elements=finite)
angles = st.tuples(st.floats(0, 2 * np.pi), st.floats(0.05, np.pi - 0.05), st.floats(0, 2 * np.pi))


def test_so3_is_valid_exactly():
    rep = validate_structure(StructureConstants.so3())
    assert rep.passed
    assert rep.antisymmetry_residual == 0.0
    assert rep.jacobi_residual == 0.0


def test_random_perturbations_fail(rng):
    base = levi_civita()
    for _ in range(20):
        c = base.copy()
        idx = tuple(rng.integers(0, 3, size=3))
        c[idx] += rng.choice([-1, 1]) * rng.uniform(0.1, 1.0)
        assert not validate_structure(StructureConstants(3, c)).passed


def test_abelian_algebra_valid():
    assert validate_structure(StructureConstants(4, np.zeros((4, 4, 4)))).passed


def test_jacobi_failure_detected_independently():
    # [e0,e1] = e1, [e1,e2] = e0: antisymmetric, but Jacobi fails
    c = np.zeros((3, 3, 3))
    c[0, 1, 1], c[1, 0, 1] = 1, -1
    c[1, 2, 0], c[2, 1, 0] = 1, -1
    rep = validate_structure(StructureConstants(3, c))
    assert rep.antisymmetric and not rep.jacobi
    assert np.max(np.abs(jacobi_tensor(c))) > 0


def test_shape_errors():
    with pytest.raises(StructureShapeError):
        StructureConstants(3, np.zeros((3, 3)))
    with pytest.raises(StructureShapeError):
        poisson_lie_bracket(StructureConstants.so3(), np.ones(2), np.ones(3), np.ones(3))


def test_json_roundtrip(tmp_path):
    sc = StructureConstants.so3()
    path = tmp_path / "so3.json"
    path.write_text(json.dumps(sc.to_dict()))
    again = StructureConstants.from_json(path)
    assert np.array_equal(again.c, sc.c)
    assert len(sc.to_dict()["entries"]) == 6


def test_from_dict_rejects_bad_index():
    with pytest.raises(StructureShapeError):
        StructureConstants.from_dict({"dim": 2, "entries": [[0, 1, 2, 1.0]]})


@given(vec3)
def test_bracket_of_linear_functions_is_cyclic(f):
    sc = StructureConstants.so3()
    e = np.eye(3)
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        assert poisson_lie_bracket(sc, e[a], e[b], f) == pytest.approx(f[c], abs=1e-12)
        assert poisson_lie_bracket(sc, e[b], e[a], f) == pytest.approx(-f[c], abs=1e-12)


@given(vec3)
def test_casimir_is_central(f):
    sc = StructureConstants.so3()
    grad_k = 2 * f
    for a in range(3):
        assert poisson_lie_bracket(sc, grad_k, np.eye(3)[a], f) == pytest.approx(0.0, abs=1e-9)


def test_numeric_gradient_matches_analytic(rng):
    f = rng.normal(size=3)
    g = numeric_gradient(lambda v: float(np.sum(v**2) + v[0] * v[2]), f)
    assert np.allclose(g, 2 * f + np.array([f[2], 0, f[0]]), atol=1e-8)


@given(vec3, angles)
def test_casimir_invariant_under_coadjoint(f, ang):
    ad = rotation_matrix(GroupElement(*ang))
    assert casimir_value(coadjoint_apply(ad, f)) == pytest.approx(casimir_value(f), abs=1e-12 * (1 + casimir_value(f)))


def test_coadjoint_is_left_action(rng):
    for _ in range(10):
        g1 = GroupElement(*rng.uniform(0.1, 3.0, size=3))
        g2 = GroupElement(*rng.uniform(0.1, 3.0, size=3))
        f = rng.normal(size=3)
        lhs = coadjoint_apply(rotation_matrix(g1), coadjoint_apply(rotation_matrix(g2), f))
        rhs = coadjoint_apply(rotation_matrix(compose(g1, g2)), f)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_singular_adjoint_rejected():
    with pytest.raises(InvalidGroupElementError):
        coadjoint_apply(np.zeros((3, 3)), np.ones(3))
