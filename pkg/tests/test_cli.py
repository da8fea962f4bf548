import json
import logging
import math

import pytest

from capstab import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_meridian_cylinder(tmp_path, capsys):
    path = tmp_path / "m.csv"
    code, out, _ = run(["meridian", "--n", "2", "--H", "1", "--F", "0.25", "--out", str(path)], capsys)
    assert code == 0
    assert "kind=Cylinder" in out
    drift = float(out.split("drift=")[1])
    assert drift <= 1e-8
    assert path.read_text().startswith("s,x1,x2,alpha,force\n")


def test_meridian_nodoid_and_hyperplane(capsys):
    code, _, err = run(["meridian", "--H", "1", "--F", "-0.1"], capsys)
    assert code == 0 and "kind=Nodoid" in err
    code, out, _ = run(["meridian", "--H", "0", "--F", "0"], capsys)
    assert code == 0 and "kind=Hyperplane" in out and "analytic" in out


def test_meridian_exit_codes(capsys):
    assert run(["meridian", "--H", "1", "--F", "0.3"], capsys)[0] == 3
    with pytest.raises(SystemExit) as exc:
        cli.main(["meridian", "--H", "x", "--F", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["meridian", "--n", "1", "--H", "1", "--F", "0.1"])
    assert exc.value.code == 2


def test_analyze_disk(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(["analyze", "--H", "0", "--F", "0", "--out", str(path)], capsys)[0] == 0
    report = json.loads(path.read_text())
    assert report["verdict"] == "Stable(known)"
    ev = report["eigenvalues"]
    assert ev[0] == pytest.approx(-6 * math.pi) and abs(ev[1]) < 1e-10 and abs(ev[2]) < 1e-10


def test_analyze_closed_sphere(capsys):
    code, out, _ = run(["analyze", "--closed", "--sphere-radius", "0.5", "--levels", "2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert max(abs(v) for row in report["Q"] for v in row) <= 1e-10


def test_analyze_exit_codes(capsys):
    assert run(["analyze", "--H", "1", "--F", "0.3"], capsys)[0] == 3
    assert run(["analyze", "--H", "1", "--F", "0.1", "--step", "0.1"], capsys)[0] == 4
    assert run(["analyze"], capsys)[0] == 2


def test_parse_range():
    assert list(cli.parse_range("0:1:0.5")) == [0.0, 0.5, 1.0]
    for bad in ("1:0:1", "0:1", "a:b:c", "0:1:0"):
        with pytest.raises(cli.UsageError):
            cli.parse_range(bad)


def test_sweep_concurrency_is_order_stable(tmp_path, capsys, monkeypatch):
    args = ["sweep", "--H-range", "0.95:1.05:0.05", "--F-range", "0.09:0.11:0.01", "--step", "2e-3"]
    monkeypatch.setenv("CAPSTAB_THREADS", "1")
    _, serial, _ = run(args, capsys)
    monkeypatch.setenv("CAPSTAB_THREADS", "4")
    _, parallel, _ = run(args, capsys)
    assert serial == parallel
    rows = serial.strip().splitlines()
    assert rows[0] == "n,H,F,kind,theta,lambda_min,trace,centroid_norm,verdict"
    assert len(rows) == 10
    assert all(r.endswith("Unstable(mass-center)") for r in rows[1:])


def test_sweep_hyperplane_row(capsys):
    _, out, _ = run(["sweep", "--H-range=0:0:1", "--F-range=0:0:1"], capsys)
    assert out.splitlines()[1].split(",")[3:4] == ["Hyperplane"]
    assert out.strip().endswith("Stable(known)")


def test_sweep_empty_grid(capsys, caplog):
    with caplog.at_level(logging.WARNING, logger="capstab"):
        code, out, _ = run(["sweep", "--H-range", "5:6:1", "--F-range", "3:4:1"], capsys)
    assert code == 0
    assert out.strip().splitlines()[1:] == []
    assert "4 of 4 grid points skipped" in caplog.text


def test_sweep_malformed_range(capsys):
    assert run(["sweep", "--H-range", "1:0:1", "--F-range", "0:1:1"], capsys)[0] == 2


def test_verify_conformal(capsys):
    code, out, _ = run(["verify", "--suite", "conformal"], capsys)
    assert code == 0 and "norm_identity" in out


def test_verify_injected_q_error(capsys):
    code, _, err = run(["verify", "--suite", "lemmas", "--levels", "2", "--inject-q-error", "0.01"], capsys)
    assert code == 5
    assert "check_boundary_robin" in err
