"""
Tests for the click front end: verbs, text and JSON output, exit codes.
"""

import json

import pytest
from click.testing import CliRunner

from src.algebra.lang import parse
from src.cli import main, run
from src.schemas import AnalysisReport, NormalizationResult, OneSidedWitness, operator_from_json


@pytest.fixture
def invoke():
    runner = CliRunner()

    def _invoke(*args: str):
        return runner.invoke(main, list(args))

    return _invoke


def lines(result) -> list[str]:
    return result.stdout.strip().splitlines()


# =============================================================================
# Canonical forms and arithmetic
# =============================================================================

def test_canon(invoke):
    result = invoke("canon", "I*D")
    assert result.exit_code == 0
    assert result.stdout.strip() == "1 - e[0,0]"


def test_arithmetic_verbs(invoke):
    assert invoke("mul", "D", "D + I").stdout.strip() == "1 + D^2"
    assert invoke("add", "D", "I").stdout.strip() == "D + I"
    assert invoke("star", "x").stdout.strip() == "H*D"
    assert invoke("degf", "1 + e[3,1]").stdout.strip() == "3"
    assert invoke("trace", "2*e[0,0] + e[1,2]").stdout.strip() == "2"
    assert invoke("bounds", "D^2 + I").stdout.strip() == "-2 1"
    assert invoke("component", "I + e[2,1] + D", "1").stdout.strip() == "I + e[2,1]"


def test_canon_json_round_trips(invoke):
    result = invoke("--json", "canon", "x + e[0,1]")
    assert result.exit_code == 0
    assert operator_from_json(json.loads(result.stdout)) == parse("x + e[0,1]")


# =============================================================================
# Action on K[x]
# =============================================================================

def test_analyze_text(invoke):
    result = invoke("analyze", "D + I")
    assert result.exit_code == 0
    assert lines(result)[:6] == [
        "index: -1",
        "kernel: {}",
        "cokernel: {1}",
        "injective: yes",
        "surjective: no",
        "bijective: no",
    ]
    assert lines(result)[6].startswith("window: ")


def test_analyze_json(invoke):
    result = invoke("--json", "analyze", "D^2")
    report = AnalysisReport.model_validate(json.loads(result.stdout))
    assert report.index == 2
    assert [q.render() for q in report.kernel_basis] == ["1", "x"]


def test_window_override(invoke):
    result = invoke("--json", "--window", "30", "analyze", "D + I")
    assert json.loads(result.stdout)["window_used"] == 30


def test_apply_and_inverse(invoke):
    assert invoke("apply", "1 + D^2", "x^3 - 6*x").stdout.strip() == "x^3"
    assert invoke("invapply", "1 + D^2", "x^3").stdout.strip() == "x^3 - 6*x"
    assert invoke("apply", "I", "x").stdout.strip() == "1/2*x^2"


def test_printed_polynomials_feed_back_into_the_cli(invoke):
    integral = invoke("apply", "I", "x^3").stdout.strip()
    assert integral == "1/4*x^4"
    assert invoke("apply", "D", integral).stdout.strip() == "x^3"
    solution = lines(invoke("solve", "D", integral))
    assert solution[0] == "particular: 1/20*x^5"


def test_truncate(invoke):
    assert lines(invoke("truncate", "D + I", "2")) == ["3 x 2", "0 1", "1 0", "0 1"]


def test_solve(invoke):
    assert lines(invoke("solve", "D", "1")) == ["particular: x", "homogeneous: {1}"]
    assert lines(invoke("solve", "D + I", "x^2")) == [
        "no solution: x^2 is not in the image of D + I",
        "homogeneous: {}",
    ]


def test_index_and_factorization(invoke):
    assert invoke("index", "D + I").stdout.strip() == "-1"
    assert lines(invoke("indexfactor", "D + I")) == ["index: -1", "a = (1 + D^2) * I^1"]


def test_classify(invoke):
    assert lines(invoke("classify", "D")) == ["injective: no", "surjective: yes", "bijective: no"]


def test_regularizer_verbs(invoke):
    assert invoke("leftreg", "D + I").stdout.strip() == "D"
    assert invoke("rightreg", "D + I").stdout.strip() == "1"
    assert invoke("kerproj", "D^2").stdout.strip() == "e[0,0] + e[1,1]"


# =============================================================================
# Units
# =============================================================================

def test_left_inverse(invoke):
    assert lines(invoke("leftinv", "I")) == [
        "left inverse: D",
        "unit factor: 1",
        "factorization: a = u * I^1",
    ]
    assert invoke("leftinv", "D").stdout.strip() == "none"
    assert invoke("--json", "leftinv", "D").stdout.strip() == "null"


def test_right_inverse_json(invoke):
    result = invoke("--json", "rightinv", "D")
    witness = OneSidedWitness.model_validate(json.loads(result.stdout))
    assert witness.kind == "right"
    assert witness.inverse == parse("I")


def test_unit_verbs(invoke):
    assert invoke("det", "1 + e[0,0]").stdout.strip() == "2"
    assert invoke("isunit", "1 + e[0,0]").stdout.strip() == "yes"
    assert invoke("isunit", "D").stdout.strip() == "no"
    assert invoke("unitinv", "1 + e[0,0]").stdout.strip() == "1 - 1/2*e[0,0]"
    assert invoke("kappa", "1 + e[0,0]", "1").stdout.strip() == "1 + e[1,1]"
    assert lines(invoke("linvset", "I", "2")) == ["D", "D + e[0,0]"]
    assert len(lines(invoke("--samples", "3", "linvset", "I"))) == 3


def test_regularity_and_criterion(invoke):
    assert lines(invoke("regularity", "D")) == [
        "left_regular: yes",
        "right_regular: no",
        "regular: no",
    ]
    assert invoke("criterion", "D").stdout.strip() == "yes"
    assert invoke("criterion", "I", "3").stdout.strip() == "no"


# =============================================================================
# Centralizers and B1
# =============================================================================

def test_centralizer_closed_form(invoke):
    result = invoke("centralizer", "(H - 3/2)^2")
    assert result.stdout.strip() == "centralizer: D1 + K*e[1,0] + K*e[0,1]"
    assert invoke("commutes", "D", "D^2").stdout.strip() == "yes"


def test_commutant(invoke):
    assert lines(invoke("commutant", "D^3", "3")) == [
        "commutant in F, window 3: dimension 0",
        "note: dimension 0 unchanged between windows 2 and 3 (not a proof)",
    ]
    payload = json.loads(invoke("--json", "commutant", "D^3", "3").stdout)
    assert payload["kind"] == "truncated"
    assert payload["basis"] == []


def test_centralizer_falls_back_to_commutant(invoke):
    result = invoke("--window", "2", "centralizer", "D + I")
    assert lines(result)[0].startswith("commutant in F, window 2: dimension ")


def test_b1_verbs(invoke):
    assert invoke("project", "x").stdout.strip() == "D^-1*H"
    assert invoke("b1mul", "H", "D").stdout.strip() == "D*(H - 1)"
    assert invoke("isnormal", "D^-1 + H").stdout.strip() == "yes"
    assert invoke("orbit", "H - 1", "H - 3").stdout.strip() == "-2"
    assert invoke("orbit", "H^2 + 1", "H^2 + 2").stdout.strip() == "none"
    assert invoke("less", "H - 3", "H - 1").stdout.strip() == "yes"


def test_normalize(invoke):
    assert lines(invoke("normalize", "D^-1*(H - 3) + H - 1")) == [
        "alpha: H^3 - 6*H^2 + 11*H - 6",
        "beta: H^3 - 9*H^2 + 26*H - 24",
        "normal: D^-1*(H - 3) + H - 4",
    ]
    payload = json.loads(invoke("--json", "normalize", "D^-1*(H - 3) + H - 1").stdout)
    assert str(NormalizationResult.model_validate(payload).normal) == "D^-1*(H - 3) + H - 4"


def test_polynomial_verbs(invoke):
    assert invoke("roots", "6*H^3 - 11*H^2 + 6*H - 1").stdout.strip() == "{1}"
    assert sorted(lines(invoke("factorize", "2*(H - 1)^2*(H^2 + 1)"))) == ["(H - 1)^2", "H^2 + 1"]


# =============================================================================
# Exit codes
# =============================================================================

def test_domain_errors_exit_with_one(invoke):
    result = invoke("index", "e[0,0]")
    assert result.exit_code == 1
    assert "index undefined for compact operators" in result.output


def test_parse_errors_exit_with_two(invoke):
    assert invoke("canon", "D^-1").exit_code == 2
    assert invoke("canon", "D I").exit_code == 2
    assert invoke("roots", "x + 1").exit_code == 2


def test_unknown_verb_is_a_usage_error(invoke):
    assert invoke("frobnicate").exit_code == 2


def test_run_returns_exit_codes(capsys):
    assert run(["canon", "D*I"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert run(["det", "D"]) == 1
    assert "determinant defined only on K+F" in capsys.readouterr().err
    assert run(["canon", "e[-1,0]"]) == 2
