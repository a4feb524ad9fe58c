import hashlib
import json
import subprocess
import sys

import pytest

from d4fields.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_norm_test_json(capsys):
    status, out, _ = run(capsys, "norm-test", "--a", "2", "--b", "7")
    data = json.loads(out)
    assert status == 0
    assert data["co1"] is True and data["condition1234"] is True
    assert (data["triple"]["g0"], data["triple"]["h0"], data["triple"]["n0"]) == (3, 1, 1)


def test_norm_test_empty_family_reports(capsys):
    status, out, _ = run(capsys, "norm-test", "--a", "2", "--b", "5")
    data = json.loads(out)
    assert status == 0 and data["condition1234"] is False and data["triple"] is None


@pytest.mark.parametrize(
    "argv",
    [
        ("norm-test", "--a", "4", "--b", "7"),
        ("norm-test", "--a", "1", "--b", "7"),
        ("norm-test", "--a", "3", "--b", "3"),
        ("norm-test", "--a", "2"),
        ("enumerate", "--a", "2", "--b", "7"),
        ("bogus",),
        ("chebotarev", "--a", "2", "--b", "7", "--x", "abc"),
    ],
)
def test_usage_errors(capsys, argv):
    status, _, _ = run(capsys, *argv)
    assert status == 2


def test_domain_errors(capsys):
    assert run(capsys, "enumerate", "--a", "2", "--b", "5", "--X", "1e8")[0] == 3
    assert run(capsys, "ev", "--a", "2", "--b", "7", "--ell", "1", "--eta", "0.5")[0] == 3
    assert run(capsys, "frobenius", "--a", "2", "--b", "7", "--m", "7", "--x", "100")[0] == 3
    assert run(capsys, "thresholds", "--a", "2", "--b", "7", "--eps0", "0.3")[0] == 3


def test_budget_error(capsys, monkeypatch):
    import d4fields.arith as arith

    monkeypatch.setattr(arith, "SIEVE_LIMIT", 100)
    assert run(capsys, "frobenius", "--a", "2", "--b", "7", "--x", "1e6")[0] == 4


def test_enumerate_csv_and_manifest(capsys, tmp_path):
    out = tmp_path / "family.csv"
    status, _, _ = run(capsys, "enumerate", "--a", "2", "--b", "7", "--X", "1e10", "--out", str(out))
    assert status == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "m,g,h,n,poly_c0,poly_c2,disc_bound"
    assert lines[1] == "1,3,1,1,7,-6,7168"
    assert len(lines) == 1 + 43
    manifest = json.loads((tmp_path / "family.csv.manifest.json").read_text())
    art = manifest["artifacts"][0]
    assert art["sha256"] == hashlib.sha256(out.read_bytes()).hexdigest()
    assert manifest["inputs"]["X"] == 10**10 and manifest["subcommand"] == "enumerate"
    assert {"python", "numpy", "d4fields"} <= set(manifest["versions"])
    assert "wall_seconds" in manifest["timings"]


def test_explicit_manifest_for_stdout(capsys, tmp_path):
    m = tmp_path / "run.json"
    status, out, _ = run(capsys, "selftest", "--manifest", str(m))
    assert status == 0 and json.loads(out)["passed"] is True
    assert json.loads(m.read_text())["artifacts"] == []


def test_unwritable_out(capsys, tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    assert run(capsys, "enumerate", "--a", "2", "--b", "7", "--X", "1e8", "--out", str(bad))[0] == 2


def test_count_table(capsys):
    status, out, _ = run(capsys, "count", "--a", "2", "--b", "7", "--X-grid", "1e8,1e9,1e10")
    rows = out.splitlines()
    assert status == 0 and rows[0] == "X,m_bound,count,ratio,limit"
    assert [r.split(",")[2] for r in rows[1:]] == ["4", "13", "43"]


def test_frobenius_csv(capsys):
    status, out, _ = run(capsys, "frobenius", "--a", "2", "--b", "7", "--x", "10")
    assert out.splitlines() == [
        "p,chi1,chi2,chi3,root_count,class,admissible",
        "3,-1,-1,1,0,RS,1",
        "5,1,-1,-1,0,R,1",
        "7,0,1,0,,,0",
    ]


def test_thread_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["chebotarev", "--a", "2", "--b", "7", "--x", "2e5"]
    assert main(base + ["--threads", "1", "--out", str(a)]) == 0
    assert main(base + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_env_threads(monkeypatch, capsys):
    monkeypatch.setenv("D4_THREADS", "3")
    from d4fields.cli import _parse

    assert _parse(["selftest"]).threads == 3
    assert _parse(["selftest", "--threads", "2"]).threads == 2


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\na = 2\nb=7\nx=30\n")
    status, out, _ = run(capsys, "frobenius", "--config", str(cfg))
    assert status == 0 and out.splitlines()[-1].startswith("29,")
    status, out, _ = run(capsys, "frobenius", "--config", str(cfg), "--x", "10")
    assert out.splitlines()[-1].startswith("7,")
    cfg.write_text("bogus=1\n")
    assert run(capsys, "selftest", "--config", str(cfg))[0] == 2


def test_zeta_rho_thresholds_ev(capsys):
    status, out, _ = run(capsys, "zeta-check", "--a", "2", "--b", "7", "--x", "500")
    assert status == 0 and json.loads(out)["all_equal"] is True
    status, out, _ = run(capsys, "rho-coeffs", "--a", "2", "--b", "7", "--x", "40")
    assert out.splitlines()[:3] == ["p,a_p", "3,0", "5,0"]
    status, out, _ = run(capsys, "thresholds", "--a", "2", "--b", "7", "--D", "1e20")
    data = json.loads(out)
    assert data["q_max"] == 56 and abs(data["delta"] - 0.0023585) < 1e-7
    status, out, _ = run(capsys, "ev", "--a", "2", "--b", "7", "--ell", "1", "--eta", "0.1666")
    data = json.loads(out)
    assert data["M"] == 0 and data["target_exponent"] == "1/3"


def test_ingest_empty_file(capsys, tmp_path):
    path = tmp_path / "cl.csv"
    path.write_text("")
    status, out, _ = run(capsys, "ingest-cl", "--file", str(path))
    assert status == 0 and json.loads(out)["records"] == []
    path.write_text("nonsense\n1\n")
    assert run(capsys, "ingest-cl", "--file", str(path))[0] == 3


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "d4fields.cli", "norm-test", "--a", "2", "--b", "7"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["triple"]["g0"] == 3
