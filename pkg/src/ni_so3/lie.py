"""Abstract Lie-algebra layer: structure constants, coadjoint action, Poisson-Lie bracket.

Structure constants are stored as a dense tensor ``c[A, B, C] = C^C_AB`` so that
``[e_A, e_B] = c[A, B, C] e_C``.  Only validation and bracket evaluation are
dimension-generic; orbit machinery elsewhere in the package is so(3)-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np


class StructureShapeError(ValueError):
    """Structure tensor or gradient has the wrong shape."""


class InvalidGroupElementError(ValueError):
    """An adjoint matrix that cannot come from a group element (singular)."""


@dataclass(frozen=True)
class StructureConstants:
    dim: int
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if self.dim < 1:
            raise StructureShapeError(f"dim must be positive, got {self.dim}")
        if c.shape != (self.dim,) * 3:
            raise StructureShapeError(
                f"expected tensor of shape {(self.dim,) * 3}, got {c.shape}"
            )
        object.__setattr__(self, "c", c)

    @classmethod
    def so3(cls) -> "StructureConstants":
        """so(3) in the basis with ``C^c_ab = eps_abc``."""
        return cls(3, levi_civita())

    @classmethod
    def from_dict(cls, doc: dict) -> "StructureConstants":
        dim = int(doc["dim"])
        c = np.zeros((dim, dim, dim))
        for a, b, k, value in doc.get("entries", []):
            if not all(0 <= int(i) < dim for i in (a, b, k)):
                raise StructureShapeError(f"index out of range in entry {(a, b, k)}")
            c[int(a), int(b), int(k)] = float(value)
        return cls(dim, c)

    @classmethod
    def from_json(cls, path: str | Path) -> "StructureConstants":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        idx = np.argwhere(self.c != 0)
        entries = [[int(a), int(b), int(k), float(self.c[a, b, k])] for a, b, k in idx]
        return {"dim": self.dim, "entries": entries}


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[a, b, c] = 1.0
        eps[b, a, c] = -1.0
    return eps


class ValidityReport(NamedTuple):
    antisymmetric: bool
    jacobi: bool
    antisymmetry_residual: float
    jacobi_residual: float

    @property
    def passed(self) -> bool:
        return self.antisymmetric and self.jacobi


def jacobi_tensor(c: np.ndarray) -> np.ndarray:
    """Cyclic Jacobi sum J[A,B,C,E]; vanishes identically for a Lie algebra."""
    # c[a,b,d] c[d,c,e] + c[b,c,d] c[d,a,e] + c[c,a,d] c[d,b,e]
    t = np.einsum("abd,dce->abce", c, c)
    return t + np.einsum("bcd,dae->abce", c, c) + np.einsum("cad,dbe->abce", c, c)


def validate_structure(sc: StructureConstants, tol: float = 1e-12) -> ValidityReport:
    c = sc.c
    anti = float(np.max(np.abs(c + c.transpose(1, 0, 2)), initial=0.0))
    jac = float(np.max(np.abs(jacobi_tensor(c)), initial=0.0))
    return ValidityReport(anti <= tol, jac <= tol, anti, jac)


def poisson_lie_bracket(
    sc: StructureConstants, grad1: np.ndarray, grad2: np.ndarray, f: np.ndarray
) -> float:
    """``{Phi1, Phi2}(f) = C^C_AB f_C dPhi1/df_A dPhi2/df_B``."""
    grad1, grad2, f = (np.asarray(v, dtype=float) for v in (grad1, grad2, f))
    for name, v in (("grad1", grad1), ("grad2", grad2), ("f", f)):
        if v.shape != (sc.dim,):
            raise StructureShapeError(f"{name} must have shape ({sc.dim},), got {v.shape}")
    return float(np.einsum("abc,c,a,b->", sc.c, f, grad1, grad2))


def numeric_gradient(
    func: Callable[[np.ndarray], float], f: np.ndarray, h: float = 1e-6
) -> np.ndarray:
    """Central-difference gradient, for bracket inputs without an analytic gradient."""
    f = np.asarray(f, dtype=float)
    grad = np.empty_like(f)
    for k in range(f.size):
        step = np.zeros_like(f)
        step[k] = h
        grad[k] = (func(f + step) - func(f - step)) / (2 * h)
    return grad


def coadjoint_apply(ad_matrix: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Apply ``Ad*_g`` to a covector given the adjoint matrix of ``g``.

    ``ad_matrix[A, B] = (Ad_g e_B)^A``.  The coadjoint rule
    ``<Ad*_g f, X> = <f, Ad_{g^-1} X>`` then gives ``Ad*_g f = Ad_g^{-T} f``,
    which is a left action: ``Ad*_{g1} Ad*_{g2} = Ad*_{g1 g2}``.
    """
    ad = np.asarray(ad_matrix, dtype=float)
    f = np.asarray(f, dtype=float)
    if ad.ndim != 2 or ad.shape[0] != ad.shape[1] or ad.shape[0] != f.shape[-1]:
        raise StructureShapeError(f"shape mismatch: {ad.shape} vs {f.shape}")
    if abs(np.linalg.det(ad)) < 1e-12:
        raise InvalidGroupElementError("adjoint matrix is singular")
    return np.linalg.solve(ad.T, f)


def casimir_value(f: np.ndarray) -> float:
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != 3:
        raise StructureShapeError("casimir_value is the so(3) Casimir; need 3 components")
    return float(np.sum(f * f, axis=-1))
