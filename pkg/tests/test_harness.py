"""Scenario loading, execution, Monte Carlo statistics, and the CLI."""

import json
import math
import pathlib

import pytest

from ncprotect.cli import main as cli_main
from ncprotect.harness import (
    ScenarioError,
    clopper_pearson,
    load_scenario,
    monte_carlo,
    run_scenario,
    split_seed,
    validate_scenario,
)

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
TOPOLOGIES = pathlib.Path(__file__).resolve().parent.parent / "topologies"


def base_scenario(**overrides):
    s = {
        "version": 1,
        "name": "test",
        "network": {"n": 3, "m": 4, "r": 3},
        "coefficients": {"scheme": "simple"},
        "adversary": {"mode": "sweep", "n_e": 1, "n_f": 0, "value_samples": 0},
        "decoder": {"kind": "single", "n_e": 1},
        "seed": 1,
    }
    s.update(overrides)
    return s


# ---------------------------------------------------------------------------
# schema


def test_malformed_json_reports_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "version": 1,\n  oops\n}\n')
    with pytest.raises(ScenarioError) as exc:
        load_scenario(p)
    assert exc.value.line == 3


def test_schema_violation_reports_field():
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(base_scenario(network={"n": 3, "m": 4}))
    assert exc.value.field == "network.r"
    with pytest.raises(ScenarioError) as exc:
        validate_scenario(base_scenario(coefficients={"scheme": "nope"}))
    assert exc.value.field == "coefficients.scheme"
    with pytest.raises(ScenarioError):
        validate_scenario(base_scenario(version=2))


def test_bundled_scenarios_validate():
    for path in SCENARIOS.glob("*.json"):
        load_scenario(path)


# ---------------------------------------------------------------------------
# run_scenario


def test_no_error_scenario_all_zero_syndromes():
    report = run_scenario(base_scenario(adversary={"mode": "sweep", "n_e": 0, "n_f": 0}))
    assert report.cases == 1
    assert report.successes == 1
    assert report.all_zero_syndromes


def test_theorem1_exhaustive_gf8_bundled():
    report = run_scenario(SCENARIOS / "theorem1-exhaustive-gf8.json")
    assert report.cases == 217
    assert report.successes == report.cases
    assert report.assertions_passed


def test_run_scenario_deterministic_and_worker_independent():
    s = base_scenario(
        adversary={"mode": "random", "n_e": 1, "n_f": 0}, trials=60
    )
    a = run_scenario(s)
    b = run_scenario(s)
    c = run_scenario(s, workers=4)
    for other in (b, c):
        assert (a.cases, a.successes, a.node_successes) == (
            other.cases,
            other.successes,
            other.node_successes,
        )


def test_failing_assertion_and_replayable_failure():
    s = base_scenario(
        coefficients={"scheme": "simple", "gammas": [1, 1, 2], "check_distinct": False},
        **{"assert": {"min_success_rate": 1.0}},
    )
    report = run_scenario(s)
    assert not report.assertions_passed
    f = report.first_failure
    assert f is not None
    # replay: the same plan and case seed reproduce the same wrong decode
    from ncprotect.harness import _run_case, build_matrix

    matrix = build_matrix(s)
    results, _, first_bad = _run_case(matrix, f.plan, s["decoder"], f.case_seed)
    assert not results[f.node]
    assert first_bad is not None


def test_report_csv_shape():
    report = run_scenario(base_scenario())
    lines = report.to_csv().strip().splitlines()
    assert lines[0] == "node,successes,cases"
    assert lines[-1].startswith("ALL,")
    assert len(lines) == 2 + 6  # header + 2n nodes + ALL


# ---------------------------------------------------------------------------
# Monte Carlo


def test_clopper_pearson_closed_forms():
    # all successes: lower = (alpha/2)^(1/n), upper = 1
    lo, hi = clopper_pearson(100, 100, confidence=0.99)
    assert hi == 1.0
    assert math.isclose(lo, 0.005 ** (1 / 100), rel_tol=1e-12)
    # all failures: symmetric
    lo0, hi0 = clopper_pearson(0, 100, confidence=0.99)
    assert lo0 == 0.0
    assert math.isclose(hi0, 1 - 0.005 ** (1 / 100), rel_tol=1e-12)
    lo5, hi5 = clopper_pearson(50, 100)
    assert lo5 < 0.5 < hi5


def test_monte_carlo_deterministic_scheme_rate_one():
    s = base_scenario(adversary={"mode": "random", "n_e": 1, "n_f": 0}, trials=50)
    result = monte_carlo(s, 50, seed=3)
    assert result.rate == 1.0
    assert result.bound is None


def test_monte_carlo_same_seed_same_estimate():
    s = {
        "version": 1,
        "name": "mc",
        "network": {"n": 3, "m": 4, "r": 8},
        "coefficients": {"scheme": "random", "seed": 0},
        "adversary": {"mode": "random", "n_e": 1, "n_f": 0},
        "decoder": {"kind": "single", "n_e": 1},
        "trials": 40,
    }
    a = monte_carlo(s, 40, seed=5)
    b = monte_carlo(s, 40, seed=5)
    c = monte_carlo(s, 40, seed=5, workers=3)
    assert a.successes == b.successes == c.successes
    assert a.bound is not None and 0 < a.bound < 1


def test_split_seed_is_stable_and_distinct():
    assert split_seed(1, 2, 3) == split_seed(1, 2, 3)
    assert split_seed(1, 2, 3) != split_seed(1, 2, 4)
    assert split_seed(1, 2, 3) != split_seed(1, 3, 2)


# ---------------------------------------------------------------------------
# CLI


def test_cli_simulate_exit_codes(tmp_path):
    ok = cli_main(["simulate", str(SCENARIOS / "theorem1-exhaustive-gf8.json")])
    assert ok == 0
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            base_scenario(
                coefficients={
                    "scheme": "simple",
                    "gammas": [1, 1, 2],
                    "check_distinct": False,
                },
                **{"assert": {"min_success_rate": 1.0}},
            )
        )
    )
    assert cli_main(["simulate", str(bad)]) == 1


def test_cli_verify_coefficients(tmp_path, capsys):
    assert cli_main(["verify-coefficients", str(SCENARIOS / "theorem1-exhaustive-gf8.json")]) == 0
    out = capsys.readouterr().out
    assert "pass" in out
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            base_scenario(
                coefficients={
                    "scheme": "simple",
                    "gammas": [1, 1, 2],
                    "check_distinct": False,
                },
                verify={"condition": "theorem1"},
            )
        )
    )
    assert cli_main(["verify-coefficients", str(bad)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "columns" in out


def test_cli_provision_and_lp(tmp_path, capsys):
    lp = tmp_path / "model.lp"
    code = cli_main(
        ["provision", str(TOPOLOGIES / "labnet03.txt"), "--model", "ILP3", "--lp", str(lp)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("path,cost,edges")
    assert "TOTAL," in out
    assert lp.read_text().startswith("\\ ncprotect provisioning model ILP3")


def test_cli_compare(capsys):
    assert cli_main(["compare", str(TOPOLOGIES / "labnet03.txt")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("n,cost_4n,")


def test_cli_monte_carlo(capsys):
    code = cli_main(
        [
            "monte-carlo",
            str(SCENARIOS / "random-gf16-single-error.json"),
            "--trials",
            "30",
            "--seed",
            "2",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "confidence interval" in out


def test_cli_bad_input_exit_2(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    assert cli_main(["simulate", str(p)]) == 2
