"""Command-line entry point: ``ni-so3 <subcommand> [options]``.

Exit status: 0 on success / all checks passing, 1 when a check fails,
2 on usage errors (argparse convention).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import coherent as cb
from . import geometry as geo
from . import lambda_rep as lr
from . import lie
from . import reduction as red
from . import special as sp
from .verify import SUITES, VerifyConfig, reports_to_json, run_checks

DEFAULT_CAB = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -2.0]]


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
        return
    buf = io.StringIO()
    yield buf
    Path(path).write_text(buf.getvalue())


def _table_angles(n: int):
    """Uniform periodic nodes for phi, psi and midpoint nodes for theta (avoiding the poles)."""
    if n < 1:
        raise ValueError("--grid must be positive")
    periodic = 2 * np.pi * np.arange(n) / n
    polar = np.pi * (np.arange(n) + 0.5) / n
    return periodic, polar


def _fmt(x: float) -> str:
    return repr(float(x))


# -- subcommands --------------------------------------------------------------


def cmd_validate(args) -> int:
    sc = lie.StructureConstants.from_json(args.structure) if args.structure else lie.StructureConstants.so3()
    rep = lie.validate_structure(sc)
    doc = {"dim": sc.dim, **rep._asdict(), "pass": rep.passed}
    with _output(args.out) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0 if rep.passed else 1


def cmd_wigner_table(args) -> int:
    periodic, polar = _table_angles(args.grid)
    P, T, S = np.meshgrid(periodic, polar, periodic, indexing="ij")
    g = geo.GroupElement(P.ravel(), T.ravel(), S.ravel())
    j = args.j
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "m", "n", "phi", "theta", "psi", "ReD", "ImD"])
        for m in range(-j, j + 1):
            for n in range(-j, j + 1):
                vals = sp.wigner_D(j, m, n, g)
                for phi, theta, psi, v in zip(g.phi, g.theta, g.psi, vals):
                    w.writerow([j, m, n, _fmt(phi), _fmt(theta), _fmt(psi), _fmt(v.real), _fmt(v.imag)])
    return 0


def cmd_harmonics_table(args) -> int:
    periodic, polar = _table_angles(args.grid)
    P, T = np.meshgrid(periodic, polar, indexing="ij")
    x = geo.SpherePoint(P.ravel(), T.ravel())
    j = args.j
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "m", "phi", "theta", "ReY", "ImY"])
        for m in range(-j, j + 1):
            vals = sp.spherical_Y(j, m, x)
            for phi, theta, v in zip(x.phi, x.theta, vals):
                w.writerow([j, m, _fmt(phi), _fmt(theta), _fmt(v.real), _fmt(v.imag)])
    return 0


def cmd_kernel(args) -> int:
    if (args.q is None) != (args.qprime is None):
        raise ValueError("--q and --qprime must be given together")
    if args.q is not None:
        pairs = [(args.q, args.qprime)]
    else:
        rng = np.random.default_rng(args.seed)
        pairs = [
            (complex(rng.uniform(-np.pi, np.pi), rng.uniform(-0.5, 0.5)),
             complex(rng.uniform(-np.pi, np.pi), rng.uniform(-0.5, 0.5)))
            for _ in range(args.samples)
        ]
    periodic, polar = _table_angles(args.grid)
    P, T, S = np.meshgrid(periodic, polar, periodic, indexing="ij")
    g = geo.GroupElement(P.ravel(), T.ravel(), S.ravel())
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "re_q", "im_q", "re_qbar", "im_qbar", "phi", "theta", "psi", "ReD", "ImD"])
        for q, qp in pairs:
            qbar = np.conj(qp)
            vals = lr.kernel_D(q, qbar, g, args.j)
            for phi, theta, psi, v in zip(g.phi, g.theta, g.psi, vals):
                w.writerow([args.j, _fmt(q.real), _fmt(q.imag), _fmt(qbar.real), _fmt(qbar.imag),
                            _fmt(phi), _fmt(theta), _fmt(psi), _fmt(v.real), _fmt(v.imag)])
    return 0


def cmd_cs_overlap(args) -> int:
    if (args.zeta is None) == (args.q is None):
        raise ValueError("give exactly one of --zeta or --q")
    q = args.q if args.q is not None else complex(2 * np.arctan(1j * args.zeta))
    scale, label = cb.ni_to_cs(cb.NIStateLabel(args.j, q))
    if args.zeta is not None:
        label = cb.CSLabel(args.j, args.zeta)
    doc = {
        "j": args.j,
        "q": _pair(q),
        "zeta": _pair(label.zeta),
        "u_m": [_pair(u) for u in cb.cs_coeffs(label)],
        "scale": _pair(scale),
    }
    with _output(args.out) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_spectrum(args) -> int:
    doc = json.loads(Path(args.spec).read_text()) if args.spec else {}
    doc.setdefault("cAB", DEFAULT_CAB)
    j = args.j if args.j is not None else int(doc.get("j", 1))
    spec = red.HamiltonianSpec.from_dict(doc)
    reduced, oracle, residual = red.spectrum_comparison(spec, j)
    tol = 1e-6 * args.tol_scale
    real = bool(np.max(np.abs(reduced.imag)) <= 1e-10)
    energies = [float(e.real) for e in reduced] if real else [_pair(e) for e in reduced]
    out = {
        "j": j,
        "spec": spec.to_dict(),
        "energies": energies,
        "degeneracy_check": bool(residual <= tol),
        "multiplicity": 2 * j + 1,
        "oracle_residual": residual,
    }
    with _output(args.out) as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0 if out["degeneracy_check"] else 1


def cmd_verify(args) -> int:
    cfg = VerifyConfig(args.suite, args.seed, args.jmax, args.grid, args.tol_scale)
    reports = run_checks(cfg)
    with _output(args.out) as fh:
        fh.write(reports_to_json(reports, timings=args.timings))
    failed = [r.check_name for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed", file=sys.stderr)
    for name in failed:
        print(f"FAILED {name}", file=sys.stderr)
    return 1 if failed else 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol-scale", type=float, default=1.0)

    p = argparse.ArgumentParser(prog="ni-so3", description="Non-commutative integration on SO(3): tables and checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check antisymmetry and Jacobi for structure constants")
    s.add_argument("--structure", default=None, help='JSON {"dim": n, "entries": [[A,B,C,v],...]}; default so(3)')
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("wigner-table", parents=[common], help="CSV of D^j_mn on a grid")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--grid", type=int, default=4)
    s.set_defaults(func=cmd_wigner_table)

    s = sub.add_parser("harmonics-table", parents=[common], help="CSV of Y^j_m on a grid")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--grid", type=int, default=8)
    s.set_defaults(func=cmd_harmonics_table)

    s = sub.add_parser("kernel", parents=[common], help="CSV of the representation kernel on a group grid")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--grid", type=int, default=4)
    s.add_argument("--q", type=_complex, default=None)
    s.add_argument("--qprime", type=_complex, default=None, help="q'; the kernel is evaluated at conj(q')")
    s.add_argument("--samples", type=int, default=2, help="random (q, q') pairs when --q is not given")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("cs-overlap", parents=[common], help="spin-CS coefficients and NI-to-CS scale")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--zeta", type=_complex, default=None)
    s.add_argument("--q", type=_complex, default=None)
    s.set_defaults(func=cmd_cs_overlap)

    s = sub.add_parser("spectrum", parents=[common], help="reduced spectrum checked against the Wigner-basis oracle")
    s.add_argument("--spec", default=None, help='JSON {"cAB": 3x3, "cA": [..], "j": int}')
    s.add_argument("--j", type=int, default=None)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", parents=[common], help="run invariant suites, emit a JSON report array")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--jmax", type=int, default=None)
    s.add_argument("--grid", type=int, default=None, help="Haar grid size for the orthogonality check")
    s.add_argument("--timings", action="store_true", help="include runtime_ms (breaks byte-determinism)")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("j", "grid", "jmax", "samples"):
        v = getattr(args, name, None)
        if v is not None and v < (0 if name == "j" else 1):
            parser.error(f"--{name} out of range: {v}")
    if getattr(args, "j", None) == 0 and args.command != "harmonics-table":
        parser.error("--j must be >= 1")
    if args.tol_scale <= 0:
        parser.error("--tol-scale must be positive")
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, OSError, KeyError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
