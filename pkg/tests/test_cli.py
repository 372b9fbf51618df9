import json
import subprocess
import sys

import numpy as np
import pytest

from robust_maxtest.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pair_csv(tmp_path):
    p = tmp_path / "pair.csv"
    p.write_text("1\n-1\n")
    return p


def test_mean_on_pair(capsys, pair_csv):
    code, out, _ = run(capsys, "test", str(pair_csv), "--method", "mean")
    assert code == 0
    rep = json.loads(out)
    assert rep["reject"] is False and rep["sup_norm"] == 0
    assert list(rep) == sorted(rep)
    assert "coord_stats" not in rep


def test_epsilon_too_large(capsys, pair_csv):
    code, _, err = run(capsys, "test", str(pair_csv), "--method", "winsor")
    assert code == 2 and "EpsilonTooLarge" in err


def test_data_errors(capsys, tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("1,2\n3\n")
    assert run(capsys, "test", str(ragged))[0] == 3
    assert run(capsys, "test", str(tmp_path / "missing.csv"))[0] == 3
    const = tmp_path / "c.csv"
    np.savetxt(const, np.ones((500, 2)), delimiter=",")
    assert run(capsys, "test", str(const))[0] == 3


def test_usage_errors(capsys, pair_csv):
    assert run(capsys, "test", str(pair_csv), "--alpha", "1.5")[0] == 2
    assert run(capsys, "test", str(pair_csv), "--method", "median")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_deterministic_and_verbose(capsys, tmp_path):
    p = tmp_path / "x.csv"
    np.savetxt(p, np.random.default_rng(0).normal(0.1, 1, size=(300, 4)), delimiter=",", header="a,b,c,d", comments="")
    args = ("test", str(p), "--method", "winsor-boot", "--has_header", "--seed", "5", "--verbose", "--eta-bar", "0.01")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    rep = json.loads(a)
    assert rep["n"] == 300 and rep["d"] == 4 and len(rep["coord_stats"]) == 4
    assert rep["epsilon"] > 0 and rep["epsilon_prime"] > 0


@pytest.mark.parametrize(
    "args, value, tol",
    [
        (("--d", "1"), 1.959964, 1e-5),
        (("--d", "100", "--mode", "expansion"), 3.57333, 1e-4),
        (("--d", "100"), 3.4737, 1e-3),
        (("--d", "3", "--mode", "mc", "--draws", "50000", "--seed", "2"), 2.387, 0.03),
    ],
)
def test_critval(capsys, args, value, tol):
    code, out, _ = run(capsys, "critval", *args)
    assert code == 0
    assert json.loads(out)["critical_value"] == pytest.approx(value, abs=tol)


def test_critval_corr_file(capsys, tmp_path):
    p = tmp_path / "corr.csv"
    np.savetxt(p, np.ones((4, 4)), delimiter=",")
    code, out, _ = run(capsys, "critval", "--d", "4", "--mode", "mc", "--corr-file", str(p), "--draws", "40000")
    assert code == 0 and json.loads(out)["critical_value"] == pytest.approx(1.96, abs=0.04)
    assert run(capsys, "critval", "--d", "5", "--mode", "mc", "--corr_file", str(p))[0] == 2
    assert run(capsys, "critval", "--d", "2", "--mode", "expansion")[0] == 2


def test_rates(capsys):
    code, out, _ = run(capsys, "rates", "--n", "1000", "--d", "100", "--m", "8")
    rep = json.loads(out)
    assert code == 0
    assert rep["a"] == pytest.approx(0.147641, abs=5e-7)
    assert rep["cond_contam"] == 0
    assert rep["conditions"]["cond_contam"]["tag"] == "small"
    assert run(capsys, "rates", "--n", "1000", "--d", "100", "--m", "2.0")[0] == 2


SUITE = [
    {
        "label": "null",
        "scenario": {"n": 200, "d": 4, "law": {"kind": "StudentT", "param": 5}, "seed": 1},
        "methods": ["Mean", "Winsor"],
        "replications": 12,
    },
    {
        "label": "alt",
        "scenario": {"n": 200, "d": 4, "mu": {"sparse": [[0, 0.3]]}, "seed": 2},
        "methods": ["WinsorBoot"],
        "replications": 12,
        "oracle_draws": 2000,
    },
]


def test_simulate(capsys, tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps(SUITE))
    out1, out4 = tmp_path / "1.csv", tmp_path / "4.csv"
    code, stdout, _ = run(capsys, "simulate", str(suite), "--out", str(out1))
    assert code == 0 and "null\tMean" in stdout
    assert run(capsys, "simulate", str(suite), "--out", str(out4), "--threads", "4")[0] == 0
    assert out1.read_bytes() == out4.read_bytes()
    lines = out1.read_text().splitlines()
    assert len(lines) == 4
    for line in lines[1:]:
        rate = float(line.split(",")[4])
        assert 0 <= rate <= 1


def test_simulate_empty_and_bad(capsys, tmp_path):
    suite = tmp_path / "s.json"
    suite.write_text("[]")
    out = tmp_path / "o.csv"
    assert run(capsys, "simulate", str(suite), "--out", str(out))[0] == 0
    assert out.read_text().count("\n") == 1
    suite.write_text("{not json")
    assert run(capsys, "simulate", str(suite), "--out", str(out))[0] == 2
    suite.write_text(json.dumps([{"scenario": {"n": 10, "d": 2}, "replications": 0}]))
    assert run(capsys, "simulate", str(suite), "--out", str(out))[0] == 2


def test_simulate_mid_suite_failure(capsys, tmp_path):
    bad = {"label": "tiny", "scenario": {"n": 4, "d": 3, "seed": 0}, "methods": ["Winsor"], "replications": 2}
    suite = tmp_path / "s.json"
    suite.write_text(json.dumps([SUITE[0], bad]))
    out = tmp_path / "o.csv"
    code, _, err = run(capsys, "simulate", str(suite), "--out", str(out))
    assert code == 4 and "tiny" in err
    assert len(out.read_text().splitlines()) == 3


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "robust_maxtest", "critval", "--d", "10"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["critical_value"] == pytest.approx(2.799625219301096, abs=1e-12)
