"""CLI surface: subcommands, formats, exit codes, reproducibility."""

import os
import subprocess
import sys

from kalmar.cli import split_csv_row


def run_cli(*args: str, env=None) -> subprocess.CompletedProcess:
    cmd = [sys.executable, "-m", "kalmar", *args]
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(cmd, capture_output=True, text=True, env=full_env)


def test_k_by_n():
    cp = run_cli("k", "--n", "12")
    assert cp.returncode == 0, cp.stderr
    assert cp.stdout.strip() == "8"


def test_k_by_signature_and_methods():
    for method in ("macmahon", "recursive", "series"):
        cp = run_cli("k", "--signature", "3,2,1", "--method", method)
        assert cp.returncode == 0, cp.stderr
        assert cp.stdout.strip() == "604"


def test_k_check():
    cp = run_cli("k", "--n", "360", "--check")
    assert cp.returncode == 0 and cp.stdout.strip() == "604"


def test_k_requires_one_input():
    assert run_cli("k").returncode == 1
    assert run_cli("k", "--n", "4", "--signature", "2").returncode == 1


def test_constants_table():
    cp = run_cli("constants", "--digits", "13")
    assert cp.returncode == 0
    assert "rho" in cp.stdout and "1.728647238998" in cp.stdout
    cp = run_cli("constants", "--k", "10", "--format", "csv")
    rows = dict(line.split(",", 1) for line in cp.stdout.splitlines()[1:])
    assert abs(float(rows["rho_10"]) - 1.69972) < 1e-5
    assert abs(float(rows["a_10"]) - 1.19244) < 1e-5


def test_constants_sieve_rows():
    cp = run_cli("constants", "--sieve-bound", "100000", "--format", "csv")
    assert cp.returncode == 0
    names = [line.split(",")[0] for line in cp.stdout.splitlines()]
    assert "sieve_inv_a" in names and "sieve_T0" in names


def test_approx():
    cp = run_cli("approx", "--signature", "1", "--format", "csv")
    rows = dict(line.split(",", 1) for line in cp.stdout.splitlines()[1:])
    assert abs(float(rows["ratio"]) - 1.0844375514) < 1e-9
    assert rows["K"] == "1"


def test_champions_fig2_table():
    cp = run_cli("champions", "--x", "34560", "--table", "fig2", "--format", "csv")
    assert cp.returncode == 0
    lines = cp.stdout.splitlines()
    assert lines[0] == "rank,N,K,signature,K_factorization"
    assert len(lines) == 41
    assert split_csv_row(lines[-1]) == ["40", "34560", "622592", "[8,3,1]", "2^15*19"]


def test_champions_census():
    cp = run_cli("champions", "--x", "12", "--census", "--format", "csv")
    rows = dict(line.split(",", 1) for line in cp.stdout.splitlines()[1:])
    assert rows["candidates"] == "6" and rows["champions"] == "5"


def test_champions_stats_runs():
    cp = run_cli("champions", "--x", "720", "--stats", "--format", "csv")
    assert cp.returncode == 0
    assert cp.stdout.splitlines()[0].startswith("rank,N,omega,Omega")


def test_champions_cache(tmp_path):
    path = str(tmp_path / "cands.txt")
    first = run_cli("champions", "--x", "34560", "--cache", path)
    assert first.returncode == 0 and "saved" in first.stderr
    second = run_cli("champions", "--x", "34560", "--cache", path)
    assert second.returncode == 0 and "loaded" in second.stderr
    assert first.stdout == second.stdout


def test_cache_env_var(tmp_path):
    path = str(tmp_path / "envcache.txt")
    cp = run_cli("champions", "--x", "100", env={"KALMAR_CACHE": path})
    assert cp.returncode == 0 and os.path.exists(path)


def test_csv_round_trip():
    cp = run_cli("ratio-scan", "--omega-max", "5", "--format", "csv")
    assert cp.returncode == 0
    reemitted = "".join(",".join(split_csv_row(line)) + "\n"
                        for line in cp.stdout.splitlines())
    assert reemitted == cp.stdout


def test_byte_determinism():
    a = run_cli("champions", "--x", "34560", "--table", "fig2")
    b = run_cli("champions", "--x", "34560", "--table", "fig2")
    assert a.stdout == b.stdout and a.stdout


def test_optimum_and_witness_and_deficit():
    cp = run_cli("optimum", "--k", "2", "--A", "10", "--format", "csv")
    rows = dict(line.split(",", 1) for line in cp.stdout.splitlines()[1:])
    assert abs(float(rows["c_star"]) - 14.4336) < 1e-3
    cp = run_cli("witness", "--log-n", "50", "--format", "csv")
    rows = dict(line.split(",", 1) for line in cp.stdout.splitlines()[1:])
    assert 1.0 <= float(rows["ratio_n_over_m"]) < 2.0
    cp = run_cli("deficit", "--signature", "3,2,1", "--A", "10", "--format", "csv")
    rows = dict(line.split(",", 1) for line in cp.stdout.splitlines()[1:])
    assert float(rows["slack"]) >= -1e-9


def test_exit_codes():
    assert run_cli("nosuch").returncode == 1
    assert run_cli().returncode == 1
    assert run_cli("witness", "--log-n", "100", "--kappa", "1.9").returncode == 1
    assert run_cli("k", "--signature", "2,-1").returncode == 1
    assert run_cli("--help").returncode == 0


def test_verify_fast():
    cp = run_cli("verify", "--fast")
    assert cp.returncode == 0, cp.stdout + cp.stderr
    assert "checks passed" in cp.stdout
    assert "FAIL" not in cp.stdout
