import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from ni_so3.cli import main
from ni_so3.geometry import GroupElement
from ni_so3.lambda_rep import kernel_D
from ni_so3.special import wigner_D


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_wigner_table_shape_and_values(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["wigner-table", "--j", "1", "--grid", "4", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 9 * 64
    assert list(rows[0]) == ["j", "m", "n", "phi", "theta", "psi", "ReD", "ImD"]
    r = rows[37]
    g = GroupElement(float(r["phi"]), float(r["theta"]), float(r["psi"]))
    val = wigner_D(int(r["j"]), int(r["m"]), int(r["n"]), g)
    assert complex(float(r["ReD"]), float(r["ImD"])) == pytest.approx(val, abs=1e-15)


def test_harmonics_table(capsys):
    code, out = run(["harmonics-table", "--j", "2", "--grid", "3"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "j,m,phi,theta,ReY,ImY"
    assert len(lines) == 1 + 5 * 9


def test_kernel_table(capsys):
    code, out = run(["kernel", "--j", "2", "--grid", "2", "--q", "0.3+0.1j", "--qprime=-0.5+0.2j"], capsys)
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and len(rows) == 8
    r = rows[3]
    q = complex(float(r["re_q"]), float(r["im_q"]))
    qbar = complex(float(r["re_qbar"]), float(r["im_qbar"]))
    assert qbar == pytest.approx(-0.5 - 0.2j)
    g = GroupElement(float(r["phi"]), float(r["theta"]), float(r["psi"]))
    assert complex(float(r["ReD"]), float(r["ImD"])) == pytest.approx(kernel_D(q, qbar, g, 2))


def test_kernel_random_pairs_seeded(capsys):
    _, a = run(["kernel", "--j", "1", "--grid", "2", "--seed", "5"], capsys)
    _, b = run(["kernel", "--j", "1", "--grid", "2", "--seed", "5"], capsys)
    assert a == b and len(a.splitlines()) == 1 + 2 * 8


def test_cs_overlap(capsys):
    code, out = run(["cs-overlap", "--j", "2", "--q", "0.4"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert set(doc) >= {"u_m", "scale", "zeta"}
    u = np.array([complex(*p) for p in doc["u_m"]])
    assert np.sum(np.abs(u) ** 2) == pytest.approx(1.0)
    assert doc["zeta"][1] == pytest.approx(-np.tan(0.2))


def test_cs_overlap_from_zeta(capsys):
    _, out = run(["cs-overlap", "--j", "1", "--zeta", "0.2-0.1j"], capsys)
    assert json.loads(out)["zeta"] == pytest.approx([0.2, -0.1])


def test_cs_overlap_requires_one_label():
    with pytest.raises(SystemExit) as exc:
        main(["cs-overlap", "--j", "1", "--zeta", "0.1", "--q", "0.2"])
    assert exc.value.code == 2


def test_spectrum_default(capsys):
    code, out = run(["spectrum", "--j", "1"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert np.allclose(doc["energies"], [2, 3, 3])
    assert doc["degeneracy_check"] is True
    assert doc["oracle_residual"] < 1e-6


def test_spectrum_from_file(tmp_path, capsys):
    spec = tmp_path / "h.json"
    spec.write_text(json.dumps({"cAB": (-0.5 * np.eye(3)).tolist(), "cA": [0, 0, 0], "j": 2}))
    code, out = run(["spectrum", "--spec", str(spec)], capsys)
    assert code == 0
    assert np.allclose(json.loads(out)["energies"], 3.0)


def test_validate(tmp_path, capsys):
    code, out = run(["validate"], capsys)
    assert code == 0 and json.loads(out)["pass"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 3, "entries": [[0, 1, 2, 1.0]]}))
    code, out = run(["validate", "--structure", str(bad)], capsys)
    assert code == 1 and not json.loads(out)["antisymmetric"]


def test_verify_wigner_suite(capsys):
    code, out = run(["verify", "--suite", "wigner", "--jmax", "3", "--grid", "16"], capsys)
    reports = json.loads(out)
    assert code == 0
    assert all(r["pass"] for r in reports)
    assert [r["check_name"] for r in reports] == sorted(r["check_name"] for r in reports)
    assert all(r["parameters"]["seed"] == 42 for r in reports)
    assert "runtime_ms" not in reports[0]


def test_verify_failure_exit_code(capsys):
    code, out = run(["verify", "--suite", "lie", "--tol-scale", "1e-30"], capsys)
    assert code == 1
    assert not all(r["pass"] for r in json.loads(out))


def test_verify_timings(capsys):
    _, out = run(["verify", "--suite", "lie", "--timings"], capsys)
    assert "runtime_ms" in json.loads(out)[0]


def test_verify_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "--suite", "bridge", "--seed", "7", "--out", str(a)])
    main(["verify", "--suite", "bridge", "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [["bogus"], ["wigner-table"], ["wigner-table", "--j", "1", "--grid", "0"],
                                  ["verify", "--suite", "nope"], ["spectrum", "--tol-scale", "-1"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ni_so3.cli", "validate"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["pass"]
