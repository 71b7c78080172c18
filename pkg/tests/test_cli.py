"""End-to-end tests of the command line frontend (in-process)."""

import json
from fractions import Fraction

import pytest

import classprop
from classprop import cli
from classprop.series import sl_coset_series


def run(tmp_path, *argv):
    out = tmp_path / "report.out"
    code = cli.main([*argv, "--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def run_json(tmp_path, *argv):
    code, text = run(tmp_path, *argv)
    return code, json.loads(text) if text else None


def frac(s):
    return Fraction(s)


# ---------------------------------------------------------------------------
# limit

def test_limit_encloses_reference_value(tmp_path):
    code, doc = run_json(tmp_path, "limit", "--family", "gl",
                         "--q", "2", "--t", "1", "--tol", "1e-6")
    assert code == cli.EXIT_OK
    assert doc["schema"] == "classprop-report-1"
    assert doc["version"] == classprop.__version__
    assert doc["config"]["command"] == "limit"
    res = doc["result"]
    lo, hi = frac(res["lo"]), frac(res["hi"])
    assert lo <= Fraction("0.2887881") <= hi
    assert hi - lo <= Fraction("1e-6")
    assert abs(res["q_infinity"] - 0.3678794411714423) < 1e-12


def test_limit_parity_usage_error(tmp_path, capsys):
    code, _ = run(tmp_path, "limit", "--family", "sp-odd", "--q", "2", "--t", "1")
    assert code == cli.EXIT_USAGE
    assert "odd q" in capsys.readouterr().err


def test_limit_o_half_is_half_the_symplectic_value(tmp_path):
    _, sp = run_json(tmp_path, "limit", "--family", "sp-odd",
                     "--q", "3", "--t", "1", "--tol", "1e-8")
    _, oh = run_json(tmp_path, "limit", "--family", "o-half",
                     "--q", "3", "--t", "1", "--tol", "1e-8")
    mid_sp = (frac(sp["result"]["lo"]) + frac(sp["result"]["hi"])) / 2
    mid_oh = (frac(oh["result"]["lo"]) + frac(oh["result"]["hi"])) / 2
    assert abs(mid_oh - mid_sp / 2) < Fraction("1e-8")


# ---------------------------------------------------------------------------
# series

def test_series_csv_rationals(tmp_path):
    code, text = run(tmp_path, "series", "--family", "gl", "--q", "2",
                     "--t", "1", "--order", "6", "--format", "csv")
    assert code == cli.EXIT_OK
    lines = text.strip().splitlines()
    assert lines[0] == "n,coefficient"
    assert lines[5] == "4,13/45"
    assert not any("." in line for line in lines)  # never floats


def test_series_sl_coset_matches_library(tmp_path):
    code, doc = run_json(tmp_path, "series", "--family", "sl", "--q", "3",
                         "--t", "1", "--coset", "1", "--order", "8")
    assert code == cli.EXIT_OK
    s = sl_coset_series(3, 1, 1, 8)
    got = [frac(c) for c in doc["result"]["coefficients"]]
    assert got == [s.coeff(n) for n in range(9)]


def test_series_rejects_non_integer_coset(tmp_path, capsys):
    code, _ = run(tmp_path, "series", "--family", "sl", "--q", "3",
                  "--t", "1", "--coset", "tau", "--order", "4")
    assert code == cli.EXIT_USAGE
    assert "determinant labels" in capsys.readouterr().err


def test_series_byte_identical_across_runs(tmp_path):
    args = ("series", "--family", "sl", "--q", "3", "--t", "1",
            "--coset", "1", "--order", "8")
    _, first = run(tmp_path, *args)
    _, second = run(tmp_path, *args)
    assert first == second


# ---------------------------------------------------------------------------
# enumerate

def test_enumerate_order_and_membership(tmp_path):
    code, doc = run_json(tmp_path, "enumerate", "--family", "Sp",
                         "--n", "4", "--q", "2", "--t", "2")
    assert code == cli.EXIT_OK
    res = doc["result"]
    assert res["order"] == 720
    assert res["members"] == 144
    assert frac(res["proportion"]) == Fraction(1, 5)


def test_enumerate_tau_coset(tmp_path):
    code, doc = run_json(tmp_path, "enumerate", "--family", "GL",
                         "--n", "3", "--q", "2", "--t", "1", "--coset", "tau")
    assert code == cli.EXIT_OK
    assert frac(doc["result"]["proportion"]) == Fraction(1, 3)


def test_enumerate_cap_exit_code(tmp_path, capsys):
    code, _ = run(tmp_path, "enumerate", "--family", "GL",
                  "--n", "4", "--q", "3", "--cap", "1000")
    assert code == cli.EXIT_RESOURCE
    assert "resource cap" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# verify

def test_verify_inverse_transpose_passes(tmp_path):
    code, doc = run_json(tmp_path, "verify", "--suite", "inverse-transpose",
                         "--n", "4", "--q", "2", "--t", "1")
    assert code == cli.EXIT_OK
    assert doc["ok"] and doc["result"]["pass"]


def test_verify_bridge_single_instance(tmp_path):
    code, doc = run_json(tmp_path, "verify", "--suite", "exactness-bridge",
                         "--q", "3", "--n", "3", "--t", "2")
    assert code == cli.EXIT_OK
    cases = doc["result"]["cases"]
    assert len(cases) == 3  # whole group plus two determinant cosets
    assert all(c["equal"] for c in cases)


def test_verify_failure_exit_and_dump(tmp_path, capsys, monkeypatch):
    monkeypatch.setitem(
        cli._SUITES, "fpr",
        lambda cfg: (False, {"failures": [{"element": 5}]}),
    )
    code, doc = run_json(tmp_path, "verify", "--suite", "fpr")
    assert code == cli.EXIT_FAIL
    assert doc["ok"] is False
    assert "element" in capsys.readouterr().err


def test_verify_unknown_suite_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2


def test_verify_csv_not_offered(tmp_path, capsys):
    code, _ = run(tmp_path, "verify", "--suite", "inverse-transpose",
                  "--format", "csv")
    assert code == cli.EXIT_USAGE
    assert "JSON only" in capsys.readouterr().err


def test_verify_coset_average_suite(tmp_path):
    code, doc = run_json(tmp_path, "verify", "--suite", "coset-average",
                         "--family", "GL", "--n", "2", "--q", "3",
                         "--coset", "1")
    assert code == cli.EXIT_OK
    assert frac(doc["result"]["cases"][0]["value"]) == 1


# ---------------------------------------------------------------------------
# probe and presets

def test_probe_exhaustive_order7(tmp_path):
    code, doc = run_json(tmp_path, "probe", "--group", "psl2-7",
                         "--x-order", "7")
    assert code == cli.EXIT_OK
    rep = doc["result"]["report"]
    assert frac(rep["value"]) == Fraction(7, 8)
    assert rep["method"] == "exhaustive"


def test_probe_three_halves(tmp_path):
    code, doc = run_json(tmp_path, "probe", "--group", "psl2-7",
                         "--three-halves")
    assert code == cli.EXIT_OK
    res = doc["result"]
    assert res["all_positive"]
    assert len(res["classes"]) == 5


def test_probe_montecarlo_needs_seed(tmp_path, capsys):
    code, _ = run(tmp_path, "probe", "--group", "psl2-7", "--x", "1",
                  "--trials", "50")
    assert code == cli.EXIT_USAGE
    assert "seed" in capsys.readouterr().err


def test_probe_seeded_montecarlo_deterministic(tmp_path):
    args = ("probe", "--group", "psl2-7", "--x", "1",
            "--trials", "60", "--seed", "3")
    _, first = run(tmp_path, *args)
    _, second = run(tmp_path, *args)
    assert first == second
    doc = json.loads(first)
    assert doc["result"]["report"]["trials"] == 60


def test_probe_bad_group_name(tmp_path, capsys):
    code, _ = run(tmp_path, "probe", "--group", "alt5", "--x", "1")
    assert code == cli.EXIT_USAGE
    assert "psl2" in capsys.readouterr().err


def test_presets_table(tmp_path):
    code, doc = run_json(tmp_path, "presets")
    assert code == cli.EXIT_OK
    entries = doc["result"]["entries"]
    assert len(entries) == 10
    assert entries[0]["socle"] == "SL_n(2)"
    kinds = {e["set"]["kind"] for e in entries}
    assert "sieved" in kinds and "full-coset" in kinds
