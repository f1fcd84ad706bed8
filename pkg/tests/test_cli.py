import json
import os

import pytest

from hankelpl.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_usage_error_exit_64(capsys):
    assert main(["moments", "--n", "4"]) == 64          # missing required flags
    assert main(["nonsense"]) == 64
    assert main(["moments", "--n", "4", "--t", "1", "--jmax", "2",
                 "--prec", "64"]) == 64                  # prec below minimum


def test_moments_contract(tmp_path, capsys):
    out = tmp_path / "m.json"
    code = main(["moments", "--n", "4", "--t", "-0.0507", "--alpha", "0.5",
                 "--delta", "0.0381", "--jmax", "8", "--prec", "512",
                 "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["status"] == "ok"
    entries = data["payload"]["entries"]
    assert len(entries) == 9
    for e in entries:
        assert "err" in e and ("value" in e or "re" in e)


def test_equilibrium_payload(capsys):
    code, out = run(capsys, "equilibrium", "--t", "0", "--prec", "256")
    assert code == 0
    data = json.loads(out)
    a = float(data["payload"]["a"]["value"])
    b = float(data["payload"]["b"]["value"])
    assert abs(a - 0.17157) < 1e-4
    assert abs(b - 5.82843) < 1e-4


def test_round_trip_bit_exact(tmp_path):
    args = ["moments", "--n", "2", "--t", "0.5", "--jmax", "4",
            "--prec", "256", "--format", "json"]
    f1 = tmp_path / "a.json"
    f2 = tmp_path / "b.json"
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    d1 = json.loads(f1.read_text())
    d2 = json.loads(f2.read_text())
    assert d1["payload"] == d2["payload"]


def test_csv_format(capsys):
    code, out = run(capsys, "equilibrium", "--t", "0", "--prec", "192",
                    "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "section,key,value"
    assert any(line.startswith("payload.a") for line in lines)


def test_hankel_command(capsys):
    code, out = run(capsys, "hankel", "--n", "1", "--t", "1", "--k", "2",
                    "--prec", "256")
    assert code == 0
    data = json.loads(out)
    assert data["payload"]["certified_digits"] > 40


def test_p1_solve_warning_exit(capsys):
    # integration into the pole region: exit 2 with a pole warning
    code, out = run(capsys, "p1-solve", "--s-start", "-25", "--s-end", "0",
                    "--order", "32", "--prec", "256")
    assert code == 2
    data = json.loads(out)
    assert data["status"] == "warning"
    assert "pole_estimate" in data["payload"]


def test_identities_command(capsys):
    code, out = run(capsys, "identities", "--k", "1", "--n", "2", "--t", "0.1",
                    "--prec", "320")
    assert code == 0
    data = json.loads(out)
    r = float(data["payload"]["residual_beta_vs_h"]["value"])
    assert r < 1e-8


def test_moment_cache_round_trip(tmp_path, capsys):
    cache = tmp_path / "cache"
    args = ["moments", "--n", "2", "--t", "-0.04", "--jmax", "3",
            "--prec", "256", "--cache-dir", str(cache)]
    f1 = tmp_path / "a.json"
    f2 = tmp_path / "b.json"
    assert main(args + ["--out", str(f1)]) == 0
    assert len(list(cache.glob("moments-*.json"))) == 1
    assert main(args + ["--out", str(f2)]) == 0
    assert json.loads(f1.read_text())["payload"] == json.loads(f2.read_text())["payload"]
