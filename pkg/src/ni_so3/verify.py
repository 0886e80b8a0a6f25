"""Module invariant suites behind ``ni-so3 verify``.

Every check returns a single residual that is compared against its tolerance
(times ``tol_scale``).  Each check draws from its own generator seeded by
``(seed, crc32(check_name))``, so results do not depend on which suites run
or in what order.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import coherent as cb
from . import geometry as geo
from . import lambda_rep as lr
from . import lie
from . import reduction as red
from . import special as sp

SUITES = ("lie", "geometry", "lambda", "wigner", "bridge", "reduction")


@dataclass(frozen=True)
class VerifyConfig:
    suite: str = "all"
    seed: int = 42
    jmax: int | None = None
    grid: int | None = None
    tol_scale: float = 1.0

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.jmax is not None and self.jmax < 1:
            raise ValueError("jmax must be >= 1")
        if self.tol_scale <= 0:
            raise ValueError("tol_scale must be positive")

    def jrange(self, cap: int) -> range:
        top = cap if self.jmax is None else min(cap, self.jmax)
        return range(1, top + 1)


@dataclass
class VerificationReport:
    check_name: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "check_name": self.check_name,
            "parameters": self.parameters,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }
        if timings:
            out["runtime_ms"] = round(self.runtime_ms, 3)
        return out


@dataclass
class Check:
    name: str
    tolerance: float
    run: Callable[[VerifyConfig, np.random.Generator], tuple[float, dict]]


_REGISTRY: dict[str, list[Check]] = {s: [] for s in SUITES}


def check(suite: str, name: str, tolerance: float):
    def deco(fn):
        _REGISTRY[suite].append(Check(f"{suite}.{name}", tolerance, fn))
        return fn

    return deco


def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def random_element(rng: np.random.Generator, margin: float = 0.05) -> geo.GroupElement:
    """Haar-distributed element, kept ``margin`` away (in cos theta) from the chart poles."""
    c = rng.uniform(-1 + margin, 1 - margin)
    return geo.GroupElement(rng.uniform(0, 2 * np.pi), float(np.arccos(c)), rng.uniform(0, 2 * np.pi))


def random_q(rng: np.random.Generator, spread: float = 0.5) -> complex:
    return complex(rng.uniform(-np.pi, np.pi), rng.uniform(-spread, spread))


# -- lie ----------------------------------------------------------------------


@check("lie", "bracket_cyclic", 1e-12)
def _lie_bracket(cfg, rng):
    sc = lie.StructureConstants.so3()
    eye = np.eye(3)
    res = 0.0
    for _ in range(20):
        f = rng.normal(size=3)
        for a in range(3):
            for b in range(3):
                val = lie.poisson_lie_bracket(sc, eye[a], eye[b], f)
                res = max(res, abs(val - np.einsum("c,c->", sc.c[a, b], f)))
            c, b = (a + 2) % 3, (a + 1) % 3
            res = max(res, abs(lie.poisson_lie_bracket(sc, eye[a], eye[b], f) - f[c]))
    return res, {"samples": 20}


@check("lie", "casimir_coadjoint", 1e-12)
def _lie_casimir(cfg, rng):
    res = 0.0
    for _ in range(100):
        f = rng.normal(size=3)
        ad = geo.rotation_matrix(random_element(rng))
        res = max(res, abs(lie.casimir_value(lie.coadjoint_apply(ad, f)) - lie.casimir_value(f)))
    return res, {"samples": 100}


@check("lie", "validate_exact", 0.0)
def _lie_validate(cfg, rng):
    """0 iff so(3) passes with zero residual and 20 random perturbations all fail."""
    sc = lie.StructureConstants.so3()
    rep = lie.validate_structure(sc)
    bad = 0 if (rep.passed and rep.antisymmetry_residual == 0 and rep.jacobi_residual == 0) else 1
    for _ in range(20):
        c = sc.c.copy()
        idx = tuple(rng.integers(0, 3, size=3))
        c[idx] += rng.choice([-1, 1]) * rng.uniform(0.1, 1.0)
        if lie.validate_structure(lie.StructureConstants(3, c)).passed:
            bad += 1
    return float(bad), {"perturbations": 20}


# -- geometry -----------------------------------------------------------------


@check("geometry", "su2_homomorphism", 1e-12)
def _geo_su2(cfg, rng):
    res = 0.0
    for _ in range(50):
        g1, g2 = random_element(rng), random_element(rng)
        prod = geo.lift(g1) @ geo.lift(g2)
        c = geo.lift(geo.compose(g1, g2))
        res = max(res, min(np.max(np.abs(c - prod)), np.max(np.abs(c + prod))))
    return float(res), {"samples": 50}


@check("geometry", "left_right_commute", 1e-4)
def _geo_commute(cfg, rng):
    def F(phi, theta, psi):
        return np.cos(phi) * np.sin(theta) ** 2 + np.sin(2 * psi) * np.cos(theta) + np.sin(phi + psi)

    res = 0.0
    for _ in range(5):
        g = random_element(rng, margin=0.3)
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                xe = geo.left_field(a, geo.right_field(b, F, 1e-4), 1e-4)(*g.as_tuple())
                ex = geo.right_field(b, geo.left_field(a, F, 1e-4), 1e-4)(*g.as_tuple())
                res = max(res, abs(xe - ex))
    return float(res), {"samples": 5, "h": 1e-4}


@check("geometry", "haar_exactness", 1e-13)
def _geo_haar(cfg, rng):
    n = 6
    grid = geo.haar_grid(n)
    res = 0.0
    for _ in range(10):
        k, l = rng.integers(-(n - 1), n, size=2)
        p = int(rng.integers(0, 2 * n))
        vals = grid.integrate(lambda g: np.exp(1j * (k * g.phi + l * g.psi)) * np.cos(g.theta) ** p)
        exact = (1.0 / (p + 1) if p % 2 == 0 else 0.0) if k == 0 and l == 0 else 0.0
        res = max(res, abs(vals - exact))
    return float(res), {"n": n, "samples": 10}


@check("geometry", "sphere_transitive", 1e-10)
def _geo_transitive(cfg, rng):
    x0 = geo.SpherePoint(0.0, np.pi / 2)
    pts, _ = geo.sphere_grid(8)
    res = 0.0
    for phi, theta in zip(pts.phi, pts.theta):
        x = geo.SpherePoint(phi, theta)
        g = geo.compose(geo.inverse(geo.section(x0)), geo.section(x))
        y = geo.sphere_action(x0, g)
        res = max(res, float(np.max(np.abs(_unit(y) - _unit(x)))))
    return res, {"targets": int(pts.phi.size)}


def _unit(x: geo.SpherePoint) -> np.ndarray:
    return np.array([np.sin(x.theta) * np.cos(x.phi), np.sin(x.theta) * np.sin(x.phi), np.cos(x.theta)])


# -- lambda -------------------------------------------------------------------


@check("lambda", "ell_commutators", 1e-12)
def _lam_comm(cfg, rng):
    res = 0.0
    js = cfg.jrange(10)
    for j in js:
        l1, l2, l3 = (lr.ell_matrix(a, j) for a in (1, 2, 3))
        for x, y, z in ((l1, l2, l3), (l2, l3, l1), (l3, l1, l2)):
            res = max(res, np.max(np.abs(x @ y - y @ x - z)))
    return float(res), {"jmax": js[-1]}


@check("lambda", "casimir", 1e-12)
def _lam_casimir(cfg, rng):
    js = cfg.jrange(10)
    res = max(np.max(np.abs(lr.casimir_lambda(j) - j * (j + 1) * np.eye(2 * j + 1))) for j in js)
    return float(res), {"jmax": js[-1]}


@check("lambda", "self_adjoint", 1e-8)
def _lam_selfadj(cfg, rng):
    js = cfg.jrange(5)
    res = 0.0
    for j in js:
        g = lr.gram_matrix(j)
        for a in (1, 2, 3):
            A = -1j * lr.ell_matrix(a, j)
            res = max(res, np.max(np.abs(g @ A - A.conj().T @ g)))
    return float(res), {"jmax": js[-1]}


@check("lambda", "cond_d", 1e-7)
def _lam_condd(cfg, rng):
    js = cfg.jrange(3)
    res = 0.0
    for j in js:
        out = lr.cond_d_residuals(j, 20, seed=int(rng.integers(2**31)))
        res = max(res, *out.values())
    return float(res), {"jmax": js[-1], "samples": 20}


@check("lambda", "kernel_pde", 1e-4)
def _lam_pde(cfg, rng):
    """Weighted so that j=1 is held to 1e-5 and j=3 to 1e-4."""
    res = 0.0
    for j in cfg.jrange(3):
        scale = 10.0 if j == 1 else 1.0
        for _ in range(5):
            q, qb = random_q(rng, 0.3), np.conj(random_q(rng, 0.3))
            res = max(res, scale * max(lr.kernel_pde_residual(q, qb, random_element(rng, 0.2), j)))
    return float(res), {"samples": 5, "tolerance_j1": 1e-5}


@check("lambda", "cocycle", 1e-8)
def _lam_cocycle(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(5):
            res = max(res, red.cocycle_residual(j, random_q(rng, 0.3), random_element(rng), random_element(rng)))
    return float(res), {"samples": 5}


# -- wigner -------------------------------------------------------------------


@check("wigner", "unitarity", 1e-12)
def _wig_unitary(cfg, rng):
    js = cfg.jrange(5)
    res = 0.0
    for _ in range(100):
        g = random_element(rng, 0.0)
        for j in js:
            d = sp.wigner_D_matrix(j, g)
            res = max(res, np.max(np.abs(d @ d.conj().T - np.eye(2 * j + 1))))
    return float(res), {"jmax": js[-1], "samples": 100}


@check("wigner", "orthogonality", 1e-10)
def _wig_orth(cfg, rng):
    js = cfg.jrange(3)
    n = 64 if cfg.grid is None else cfg.grid
    grid = geo.haar_grid(n, n, n)

    def stack(g):
        return np.concatenate([sp.wigner_D_stack(j, g) for j in js])

    gram = grid.gram(stack)
    expect = np.diag(np.concatenate([np.full((2 * j + 1) ** 2, 1.0 / (2 * j + 1)) for j in js]))
    return float(np.max(np.abs(gram - expect))), {"jmax": js[-1], "grid": n}


@check("wigner", "homomorphism", 1e-9)
def _wig_hom(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(20):
            res = max(res, sp.homomorphism_residual(j, random_element(rng), random_element(rng)))
    return float(res), {"samples": 20, "law": "D(g1 g2) = D(g2) D(e)^T D(g1)"}


@check("wigner", "small_d_symmetry", 0.0)
def _wig_sym(cfg, rng):
    res = 0.0
    for j in cfg.jrange(5):
        theta = rng.uniform(0, np.pi)
        for m in range(-j, j + 1):
            for n in range(m + 1, j + 1):
                twice = (-1) ** (m - n) * ((-1) ** (n - m) * sp.small_d(j, m, n, theta))
                res = max(res, abs(twice - sp.small_d(j, m, n, theta)))
    return float(res), {}


@check("wigner", "eigen_equations", 1e-5)
def _wig_eigen(cfg, rng):
    """-i xi_1 D = m D, i eta_3 D = n D, K(-i xi) D = j(j+1) D at 50 points."""
    res = 0.0
    for _ in range(50):
        g = random_element(rng, 0.2)
        for j in cfg.jrange(3):
            m, n = (int(v) for v in rng.integers(-j, j + 1, size=2))

            def D(phi, theta, psi, j=j, m=m, n=n):
                return sp.wigner_D(j, m, n, geo.GroupElement(phi, theta, psi))

            val = D(*g.as_tuple())
            res = max(
                res,
                abs(-1j * geo.left_field_apply(1, D, g) - m * val),
                abs(1j * geo.right_field_apply(3, D, g) - n * val),
                abs(geo.casimir_left(D)(*g.as_tuple()) - j * (j + 1) * val),
            )
    return float(res), {"samples": 50}


# -- bridge -------------------------------------------------------------------


def _rand_zeta(rng):
    return complex(*rng.normal(size=2))


@check("bridge", "cs_norm", 1e-14)
def _br_norm(cfg, rng):
    res = 0.0
    for j in cfg.jrange(5):
        for _ in range(20):
            res = max(res, abs(np.sum(np.abs(cb.cs_coeffs(cb.CSLabel(j, _rand_zeta(rng)))) ** 2) - 1))
    return float(res), {"samples": 20}


@check("bridge", "cs_closed_form", 1e-10)
def _br_cs(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(10):
            lab = cb.CSLabel(j, _rand_zeta(rng))
            x = geo.SpherePoint(rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi))
            res = max(res, abs(cb.cs_wavefunction(lab, x) - cb.cs_expansion(lab, x)))
    return float(res), {"samples": 10}


@check("bridge", "rel1", 1e-6)
def _br_rel1(cfg, rng):
    """j=1 held to 1e-6, j=2 to 1e-5 (weighted)."""
    res = 0.0
    for j in cfg.jrange(2):
        scale = 1.0 if j == 1 else 0.1
        for _ in range(2):
            g = random_element(rng)
            for m in range(-j, j + 1):
                for n in range(-j, j + 1):
                    res = max(res, scale * abs(cb.rel1_reconstruct(j, m, n, g) - sp.wigner_D(j, m, n, g)))
    return float(res), {"samples": 2, "tolerance_j2": 1e-5}


def _sphere_points(rng, count):
    return geo.SpherePoint(rng.uniform(0, 2 * np.pi, count), np.arccos(rng.uniform(-1, 1, count)))


@check("bridge", "rel2", 1e-6)
def _br_rel2(cfg, rng):
    x = _sphere_points(rng, 100)
    res = 0.0
    for j in cfg.jrange(3):
        for m in range(-j, j + 1):
            res = max(res, np.max(np.abs(cb.rel2_reconstruct(j, m, x) - sp.spherical_Y(j, m, x))))
    return float(res), {"points": 100}


@check("bridge", "rel3", 1e-10)
def _br_rel3(cfg, rng):
    x = _sphere_points(rng, 20)
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(10):
            lab = cb.NIStateLabel(j, random_q(rng, 0.5))
            scale, cs = cb.ni_to_cs(lab)
            res = max(res, np.max(np.abs(cb.ni_state(lab, x) - scale * cb.cs_wavefunction(cs, x))))
    return float(res), {"samples": 10, "points": 20}


@check("bridge", "r0", 1e-9)
def _br_r0(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(10):
            r = cb._transport_ratios(cb.CSLabel(j, _rand_zeta(rng)), random_element(rng), cb.DEFAULT_SPHERE_PROBES)
            res = max(res, np.max(np.abs(np.abs(r) - 1)), np.max(np.abs(r - r[0])))
    return float(res), {"samples": 10}


@check("bridge", "r1", 1e-9)
def _br_r1(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(10):
            res = max(res, cb.r1_residual(cb.NIStateLabel(j, random_q(rng, 0.3)), random_element(rng),
                                          cb.DEFAULT_SPHERE_PROBES))
    return float(res), {"samples": 10}


@check("bridge", "rel4", 1e-9)
def _br_rel4(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for _ in range(10):
            res = max(res, cb.rel4_residual(j, random_element(rng, 0.2), cb.DEFAULT_SPHERE_PROBES))
    return float(res), {"samples": 10}


@check("bridge", "nonunit_transport", 1e3)
def _br_nonunit(cfg, rng):
    """Inverse of max | |D_q(pi(g))| - 1 |; passes when the NI transport factor is visibly non-unimodular."""
    dev = 0.0
    for _ in range(10):
        lab = cb.NIStateLabel(1, random_q(rng, 0.3))
        dev = max(dev, abs(abs(cb.ni_transport(lab, random_element(rng))) - 1))
    return 1.0 / dev, {"max_deviation": dev}


@check("bridge", "eqsys1", 1e-5)
def _br_eqsys(cfg, rng):
    """K(-i xi) D_q = j(j+1) D_q and -i eta_3 D_q = 0 on the group, 50 points."""
    res = 0.0
    for _ in range(50):
        g = random_element(rng, 0.2)
        for j in cfg.jrange(3):
            lab = cb.NIStateLabel(j, random_q(rng, 0.2))

            def F(phi, theta, psi, lab=lab):
                return cb.ni_state(lab, geo.SpherePoint(phi + 0 * psi, theta))

            val = F(*g.as_tuple())
            res = max(res, abs(geo.casimir_left(F)(*g.as_tuple()) - j * (j + 1) * val),
                      abs(-1j * geo.right_field_apply(3, F, g)))
    return float(res), {"samples": 50}


REFINEMENTS = (1, 2, 4, 8, 16)


@check("bridge", "quadrature_refinement", 1e-12)
def _br_refine(cfg, rng):
    """rel2 error is non-increasing over Q-grid doublings and at roundoff once resolved."""
    x = _sphere_points(rng, 20)
    res = 0.0
    for j in cfg.jrange(3):
        errs = []
        for n_r in REFINEMENTS:
            grid = lr.q_plane_grid(j, n_r=n_r, n_ang=2 * n_r)
            errs.append(max(np.max(np.abs(cb.rel2_reconstruct(j, m, x, grid) - sp.spherical_Y(j, m, x)))
                            for m in range(-j, j + 1)))
        for a, b in zip(errs, errs[1:]):
            res = max(res, b - max(a, 1e-13))
        res = max(res, errs[-1])
    return float(res), {"n_r": list(REFINEMENTS), "n_ang": [2 * n for n in REFINEMENTS]}


# -- reduction ----------------------------------------------------------------


def _specs(rng, count=5):
    return [red.HamiltonianSpec.symmetric_top(1.0, 2.0)] + [
        red.HamiltonianSpec.random_negative_definite(rng) for _ in range(count)
    ]


@check("reduction", "spectrum_equivalence", 1e-6)
def _red_spectrum(cfg, rng):
    res = 0.0
    specs = _specs(rng)
    for j in cfg.jrange(3):
        for s in specs:
            res = max(res, red.spectrum_comparison(s, j)[2])
    return float(res), {"specs": len(specs)}


@check("reduction", "energy_reality", 1e-10)
def _red_real(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for s in _specs(rng):
            res = max(res, max(abs(np.imag(x.energy)) for x in red.reduced_spectrum(s, j)))
    return float(res), {}


@check("reduction", "linearity", 1e-12)
def _red_linear(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        sols = red.reduced_spectrum(red.HamiltonianSpec.random_negative_definite(rng), j)
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        mix = red.ReducedSolution(j, 0.0, lr.QFunction(j, a * sols[0].psi.coeffs + b * sols[-1].psi.coeffs))
        q, g = random_q(rng, 0.3), random_element(rng)
        lhs = red.reconstruct_solution(mix, q, g)
        rhs = a * red.reconstruct_solution(sols[0], q, g) + b * red.reconstruct_solution(sols[-1], q, g)
        res = max(res, abs(lhs - rhs))
    return float(res), {}


@check("reduction", "solg_consistency", 1e-7)
def _red_solg(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        for sol in red.reduced_spectrum(red.HamiltonianSpec.random_negative_definite(rng), j):
            q, g = random_q(rng, 0.3), random_element(rng)
            res = max(res, abs(red.reconstruct_solution(sol, q, g) - red.reconstruct_factorized(sol, q, g)))
    return float(res), {}


@check("reduction", "schrodinger", 1e-4)
def _red_schr(cfg, rng):
    res = 0.0
    for j in cfg.jrange(2):
        spec = red.HamiltonianSpec.random_negative_definite(rng)
        for sol in red.reduced_spectrum(spec, j):
            res = max(res, red.schrodinger_residual(spec, sol, random_q(rng, 0.2), random_element(rng, 0.2)))
    return float(res), {"h": 1e-4}


@check("reduction", "intertwining", 1e-6)
def _red_intw(cfg, rng):
    res = 0.0
    for j in cfg.jrange(3):
        sol = red.reduced_spectrum(red.HamiltonianSpec.random_negative_definite(rng), j)[0]
        res = max(res, red.intertwining_residual(sol, random_q(rng, 0.2), random_element(rng, 0.2)))
    return float(res), {}


@check("reduction", "casimir_eigen", 1e-4)
def _red_cas(cfg, rng):
    """j=1 held to 1e-4, j=2 to 1e-3 (weighted)."""
    res = 0.0
    for j in cfg.jrange(2):
        scale = 1.0 if j == 1 else 0.1
        for sol in red.reduced_spectrum(red.HamiltonianSpec.random_negative_definite(rng), j):
            res = max(res, scale * red.casimir_eigen_check(sol, random_q(rng, 0.2), random_element(rng, 0.2)))
    return float(res), {"tolerance_j2": 1e-3}


@check("reduction", "coherence_identity", 1e-12)
def _red_coh_id(cfg, rng):
    res = max(abs(red.coherence_criterion(j, random_q(rng), geo.identity()) - 1) for j in cfg.jrange(3))
    return float(res), {}


COHERENCE_WITNESS = (geo.GroupElement(1.1, 0.8, 2.3), 0.4 + 0.3j)


@check("reduction", "coherence_generic", 1e3)
def _red_coh_gen(cfg, rng):
    """Inverse deviation of |U| from 1 at the documented witness (j=1); passes when deviation > 1e-3."""
    g, q = COHERENCE_WITNESS
    dev = abs(red.coherence_criterion(1, q, g) - 1)
    return 1.0 / dev, {"g": list(g.as_tuple()), "q": [q.real, q.imag], "deviation": dev}


# -- runner -------------------------------------------------------------------


def selected_checks(suite: str) -> list[Check]:
    names = SUITES if suite == "all" else (suite,)
    return sorted((c for s in names for c in _REGISTRY[s]), key=lambda c: c.name)


def run_checks(cfg: VerifyConfig) -> list[VerificationReport]:
    out = []
    for chk in selected_checks(cfg.suite):
        t0 = time.perf_counter()
        residual, params = chk.run(cfg, _rng(cfg.seed, chk.name))
        elapsed = 1e3 * (time.perf_counter() - t0)
        tol = chk.tolerance * cfg.tol_scale
        residual = float(residual)
        out.append(
            VerificationReport(chk.name, {"seed": cfg.seed, **params}, residual, tol, bool(residual <= tol), elapsed)
        )
    return out


def reports_to_json(reports: list[VerificationReport], timings: bool = False) -> str:
    return json.dumps([r.to_dict(timings) for r in reports], indent=2, sort_keys=True) + "\n"
