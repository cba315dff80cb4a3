"""Scenario-driven orchestration: assign -> verify -> sweep/sample -> decode
-> tally, with machine-readable reports.

A scenario is a versioned JSON document::

    {
      "version": 1,
      "name": "what this run shows",
      "network": {"n": 3, "m": 4, "r": 3,
                  "coverage": [[1,2,3], [1,2,3], [1,2,3], [1,2,3]]},   # optional
      "coefficients": {"scheme": "simple" | "vandermonde" | "random" |
                                 "rs" | "general",
                       "seed": 7,                 # random / general
                       "gammas": [1, 2, 3],       # simple / vandermonde, optional
                       "check_distinct": true,    # simple, optional
                       "condition": "theorem1"},  # general
      "verify": {"condition": "theorem1" | ["theorem3", 2] |
                              ["theorem4", 1, 1]},              # optional gate
      "adversary": {"mode": "sweep" | "random",
                    "n_e": 1, "n_f": 0,
                    "value_samples": 0},          # sweep: 0 = all values
      "decoder": {"kind": "single" | "enumerate" | "failures" | "rs",
                  "n_e": 1},
      "trials": 1000,                             # random mode case count
      "seed": 0,                                  # root seed
      "assert": {"min_success_rate": 1.0}         # optional acceptance gate
    }

All randomness flows from the root seed through a hash-based splitter, so any
reported failure replays from its recorded case seed and plan.  Tallying is
associative: reports are identical for any trial execution order or worker
count.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import random
import time
from dataclasses import dataclass, field as dc_field

from scipy.stats import beta as beta_dist

from .adversary import AdversaryPlan, random_plan, sweep_plans
from .coefficients import (
    assign_general_topology,
    assign_random,
    assign_rs,
    assign_simple,
    assign_vandermonde,
    multi_error_success_bound,
    single_error_success_bound,
    verify_condition,
)
from .decoder import (
    DecodingFailure,
    decode_enumerate,
    decode_rs,
    decode_single,
    decode_with_failures,
)
from .galois import gf
from .model import NetworkConfig
from .protocol import run_round

__all__ = [
    "ScenarioError",
    "load_scenario",
    "validate_scenario",
    "build_matrix",
    "run_scenario",
    "monte_carlo",
    "ScenarioReport",
    "MonteCarloResult",
    "FailureCase",
    "clopper_pearson",
    "split_seed",
]

SCHEMA_VERSION = 1

_SCHEMES = ("simple", "vandermonde", "random", "rs", "general")
_DECODERS = ("single", "enumerate", "failures", "rs")
_MODES = ("sweep", "random")


class ScenarioError(ValueError):
    """Scenario rejected; carries the offending field (dotted path) and, for
    syntax errors, the line number."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        loc = []
        if field is not None:
            loc.append(f"field {field!r}")
        if line is not None:
            loc.append(f"line {line}")
        super().__init__(f"{message}" + (f" ({', '.join(loc)})" if loc else ""))
        self.field = field
        self.line = line


def load_scenario(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc.msg}", line=exc.lineno) from exc
    validate_scenario(obj)
    return obj


def _require(obj: dict, field: str, types, where: str):
    head = field.split(".")[0]
    if head not in obj:
        raise ScenarioError("missing required field", field=where)
    val = obj[head]
    if not isinstance(val, types):
        raise ScenarioError(
            f"expected {getattr(types, '__name__', types)}, got {type(val).__name__}",
            field=where,
        )
    return val


def _condition_key(raw):
    """Normalize a condition spec from JSON ("theorem1" or ["theorem3", 2])."""
    if isinstance(raw, str):
        if raw not in ("theorem1", "theorem2"):
            raise ScenarioError(f"unknown condition {raw!r}", field="verify.condition")
        return raw
    if isinstance(raw, list) and raw and raw[0] in ("theorem3", "theorem4"):
        return tuple(raw)
    raise ScenarioError(f"unknown condition {raw!r}", field="verify.condition")


def validate_scenario(obj) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError("scenario must be a JSON object")
    version = _require(obj, "version", int, "version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported version {version}", field="version")
    _require(obj, "name", str, "name")
    net = _require(obj, "network", dict, "network")
    n = _require(net, "n", int, "network.n")
    m = _require(net, "m", int, "network.m")
    r = _require(net, "r", int, "network.r")
    if n < 1:
        raise ScenarioError("need at least one connection", field="network.n")
    if m < 1:
        raise ScenarioError("need at least one protection path", field="network.m")
    if not 1 <= r <= 16:
        raise ScenarioError("field exponent out of range 1..16", field="network.r")
    if "coverage" in net:
        cov = _require(net, "coverage", list, "network.coverage")
        if len(cov) != m:
            raise ScenarioError("coverage needs one set per protection path", field="network.coverage")
        for k, s in enumerate(cov):
            if not isinstance(s, list) or not all(
                isinstance(i, int) and 1 <= i <= n for i in s
            ):
                raise ScenarioError(
                    "coverage sets are lists of connection indices",
                    field=f"network.coverage[{k}]",
                )
    coeff = _require(obj, "coefficients", dict, "coefficients")
    scheme = _require(coeff, "scheme", str, "coefficients.scheme")
    if scheme not in _SCHEMES:
        raise ScenarioError(f"unknown scheme {scheme!r}", field="coefficients.scheme")
    if scheme in ("random", "general"):
        _require(coeff, "seed", int, "coefficients.seed")
    if scheme == "general":
        _condition_key(_require(coeff, "condition", (str, list), "coefficients.condition"))
    if "verify" in obj:
        v = _require(obj, "verify", dict, "verify")
        _condition_key(_require(v, "condition", (str, list), "verify.condition"))
    adv = _require(obj, "adversary", dict, "adversary")
    mode = _require(adv, "mode", str, "adversary.mode")
    if mode not in _MODES:
        raise ScenarioError(f"unknown adversary mode {mode!r}", field="adversary.mode")
    n_e = _require(adv, "n_e", int, "adversary.n_e")
    n_f = adv.get("n_f", 0)
    if n_e < 0 or not isinstance(n_f, int) or n_f < 0:
        raise ScenarioError("error/failure counts must be non-negative", field="adversary.n_e")
    dec = _require(obj, "decoder", dict, "decoder")
    kind = _require(dec, "kind", str, "decoder.kind")
    if kind not in _DECODERS:
        raise ScenarioError(f"unknown decoder {kind!r}", field="decoder.kind")
    if mode == "random":
        trials = _require(obj, "trials", int, "trials")
        if trials < 1:
            raise ScenarioError("need at least one trial", field="trials")
    if "seed" in obj:
        _require(obj, "seed", int, "seed")


def build_matrix(scenario: dict):
    """Construct the coefficient matrix the scenario declares (and run its
    optional verification gate)."""
    net = scenario["network"]
    n, m, r = net["n"], net["m"], net["r"]
    field = gf(r)
    coeff = scenario["coefficients"]
    scheme = coeff["scheme"]
    if scheme == "simple":
        if m != 4:
            raise ScenarioError("the simple scheme uses exactly 4 protection paths", field="network.m")
        matrix = assign_simple(
            n, field, coeff.get("gammas"), coeff.get("check_distinct", True)
        )
    elif scheme == "vandermonde":
        matrix = assign_vandermonde(n, field, m, coeff.get("gammas"))
    elif scheme == "random":
        matrix = assign_random(n, m, field, coeff["seed"])
    elif scheme == "rs":
        matrix = assign_rs(n, m, field)
    else:  # general
        coverage = None
        if "coverage" in net:
            coverage = tuple(frozenset(s) for s in net["coverage"])
        config = (
            NetworkConfig(n, m, field, coverage)
            if coverage is not None
            else NetworkConfig(n, m, field)
        )
        matrix = assign_general_topology(
            config, coeff["seed"], _condition_key(coeff["condition"])
        )
    if "verify" in scenario:
        report = verify_condition(matrix, _condition_key(scenario["verify"]["condition"]))
        if not report:
            raise ScenarioError(
                f"coefficient verification failed: {report.reason} at {report.first_violation}",
                field="verify.condition",
            )
    return matrix


def split_seed(root: int, *path: int) -> int:
    """Deterministic seed splitting: one root seed, independent child streams."""
    h = hashlib.sha256(("/".join(str(p) for p in (root, *path))).encode())
    return int.from_bytes(h.digest()[:8], "big")


def clopper_pearson(successes: int, trials: int, confidence: float = 0.99):
    """Exact two-sided binomial confidence interval."""
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError("need 0 <= successes <= trials, trials >= 1")
    alpha = 1 - confidence
    lower = (
        0.0 if successes == 0 else float(beta_dist.ppf(alpha / 2, successes, trials - successes + 1))
    )
    upper = (
        1.0 if successes == trials else float(beta_dist.ppf(1 - alpha / 2, successes + 1, trials - successes))
    )
    return lower, upper


# ---------------------------------------------------------------------------
# case execution


@dataclass(frozen=True)
class FailureCase:
    case_index: int
    case_seed: int
    plan: AdversaryPlan
    node: str
    expected: int
    decoded: int | None
    error: str | None = None


def _decode_node(matrix, obs, decoder):
    kind = decoder["kind"]
    n_e = decoder.get("n_e", 1)
    if kind == "single":
        return decode_single(matrix, obs)
    if kind == "enumerate":
        return decode_enumerate(matrix, obs, n_e)
    if kind == "failures":
        return decode_with_failures(matrix, obs, n_e)
    return decode_rs(matrix, obs, n_e)


def _run_case(matrix, plan, decoder, case_seed):
    """One round under one plan: returns (per-node ok map, syndromes all
    zero?, failure details or None)."""
    config = matrix.config
    field = config.field
    rng = random.Random(case_seed)
    d = [field.rand(rng) for _ in range(config.n)]
    u = [field.rand(rng) for _ in range(config.n)]
    observations = run_round(config, matrix, d, u, plan)
    all_zero = all(all(s == 0 for s in obs.p_syn) for obs in observations.values())
    results = {}
    first_bad = None
    for node, obs in observations.items():
        expected = d[node.index - 1] if node.side == "T" else u[node.index - 1]
        try:
            got = _decode_node(matrix, obs, decoder)
            err = None
        except DecodingFailure as exc:
            got, err = None, str(exc)
        ok = err is None and got == expected
        results[f"{node.side}{node.index}"] = ok
        if not ok and first_bad is None:
            first_bad = (f"{node.side}{node.index}", expected, got, err)
    return results, all_zero, first_bad


@dataclass
class ScenarioReport:
    name: str
    cases: int = 0
    successes: int = 0
    node_successes: dict = dc_field(default_factory=dict)
    first_failure: FailureCase | None = None
    all_zero_syndromes: bool = True
    elapsed_seconds: float = 0.0
    assertions_passed: bool = True
    assertion_messages: list = dc_field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return self.successes / self.cases if self.cases else 1.0

    def to_csv(self) -> str:
        lines = ["node,successes,cases"]
        for label in sorted(self.node_successes):
            lines.append(f"{label},{self.node_successes[label]},{self.cases}")
        lines.append(f"ALL,{self.successes},{self.cases}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        out = [
            f"scenario: {self.name}",
            f"cases: {self.cases}, all-node successes: {self.successes} "
            f"({self.success_rate:.4%})",
            f"elapsed: {self.elapsed_seconds:.2f}s",
        ]
        if self.first_failure:
            f = self.first_failure
            out.append(
                f"first failure: case {f.case_index} (seed {f.case_seed}) at {f.node}: "
                f"expected {f.expected}, got {f.decoded}"
                + (f" [{f.error}]" if f.error else "")
            )
        for msg in self.assertion_messages:
            out.append(msg)
        return "\n".join(out)


def _tally(report: ScenarioReport, idx, seed, plan, outcome):
    results, all_zero, first_bad = outcome
    report.cases += 1
    report.all_zero_syndromes = report.all_zero_syndromes and all_zero
    if all(results.values()):
        report.successes += 1
    elif report.first_failure is None or idx < report.first_failure.case_index:
        node, expected, got, err = first_bad
        report.first_failure = FailureCase(idx, seed, plan, node, expected, got, err)
    for label, ok in results.items():
        report.node_successes[label] = report.node_successes.get(label, 0) + int(ok)


def _check_assertions(report: ScenarioReport, scenario: dict):
    gates = scenario.get("assert", {})
    if "min_success_rate" in gates:
        want = gates["min_success_rate"]
        ok = report.success_rate >= want
        report.assertions_passed = report.assertions_passed and ok
        report.assertion_messages.append(
            f"assert success rate >= {want}: {'pass' if ok else 'FAIL'} "
            f"(got {report.success_rate:.6f})"
        )


def run_scenario(source, workers: int = 1) -> ScenarioReport:
    """Execute a scenario (path or pre-validated dict) and tally the outcome.

    Sweep mode enumerates every adversary placement (and value assignment or
    sample); random mode runs ``trials`` independent seeded cases.  Identical
    results for any ``workers`` count.
    """
    if isinstance(source, dict):
        validate_scenario(source)
        scenario = source
    else:
        scenario = load_scenario(source)
    started = time.perf_counter()
    matrix = build_matrix(scenario)
    config = matrix.config
    adv = scenario["adversary"]
    decoder = scenario["decoder"]
    root = scenario.get("seed", 0)

    if adv["mode"] == "sweep":
        if adv["n_e"] == 0 and adv.get("n_f", 0) == 0:
            plans = [AdversaryPlan()]
        else:
            plans = sweep_plans(
                config,
                adv["n_e"],
                adv.get("n_f", 0),
                adv.get("value_samples", 0),
                seed=split_seed(root, 1),
            )
        cases = ((idx, split_seed(root, 2, idx), plan) for idx, plan in enumerate(plans))
    else:
        trials = scenario["trials"]
        cases = (
            (
                idx,
                split_seed(root, 2, idx),
                random_plan(config, adv["n_e"], adv.get("n_f", 0), split_seed(root, 1, idx)),
            )
            for idx in range(trials)
        )

    report = ScenarioReport(name=scenario["name"])
    if workers <= 1:
        for idx, seed, plan in cases:
            _tally(report, idx, seed, plan, _run_case(matrix, plan, decoder, seed))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            pending = {}
            for idx, seed, plan in cases:
                pending[pool.submit(_run_case, matrix, plan, decoder, seed)] = (idx, seed, plan)
            gathered = [
                (*pending[fut], fut.result())
                for fut in concurrent.futures.as_completed(pending)
            ]
        for idx, seed, plan, outcome in sorted(gathered, key=lambda t: t[0]):
            _tally(report, idx, seed, plan, outcome)
    report.elapsed_seconds = time.perf_counter() - started
    _check_assertions(report, scenario)
    return report


# ---------------------------------------------------------------------------
# Monte Carlo with confidence interval


@dataclass
class MonteCarloResult:
    trials: int
    successes: int
    rate: float
    lower: float
    upper: float
    confidence: float
    bound: float | None     # applicable analytic lower bound, when defined
    seed: int

    @property
    def meets_bound(self) -> bool | None:
        if self.bound is None:
            return None
        return self.lower >= self.bound

    def to_csv(self) -> str:
        return (
            "trials,successes,rate,lower,upper,confidence,bound\n"
            f"{self.trials},{self.successes},{self.rate:.6f},{self.lower:.6f},"
            f"{self.upper:.6f},{self.confidence},"
            f"{'' if self.bound is None else format(self.bound, '.6f')}\n"
        )

    def summary(self) -> str:
        out = [
            f"trials: {self.trials}, successes: {self.successes} ({self.rate:.4%})",
            f"{self.confidence:.0%} confidence interval: "
            f"[{self.lower:.6f}, {self.upper:.6f}]",
        ]
        if self.bound is not None:
            out.append(
                f"analytic bound {self.bound:.6f}: lower limit "
                f"{'meets' if self.meets_bound else 'MISSES'} it"
            )
        return "\n".join(out)


def _applicable_bound(scenario: dict) -> float | None:
    """The random-coefficient all-node success bound matching the scenario,
    or None when no formula applies (deterministic schemes are exact)."""
    if scenario["coefficients"]["scheme"] != "random":
        return None
    net = scenario["network"]
    q = 2 ** net["r"]
    n_e = scenario["adversary"]["n_e"]
    if scenario["adversary"].get("n_f", 0) != 0:
        return None
    if n_e == 1 and net["m"] == 4:
        return single_error_success_bound(q, net["n"], net["m"])
    return multi_error_success_bound(q, net["n"], net["m"], n_e)


def _mc_trial(scenario: dict, root: int, idx: int) -> bool:
    """One full-pipeline trial: fresh coefficients (for the random scheme),
    fresh data, fresh plan, decode everywhere."""
    trial_scenario = scenario
    if scenario["coefficients"]["scheme"] in ("random", "general"):
        trial_scenario = dict(scenario)
        trial_scenario["coefficients"] = dict(scenario["coefficients"])
        trial_scenario["coefficients"]["seed"] = split_seed(root, 3, idx)
    matrix = build_matrix(trial_scenario)
    plan = random_plan(
        matrix.config,
        scenario["adversary"]["n_e"],
        scenario["adversary"].get("n_f", 0),
        split_seed(root, 1, idx),
    )
    results, _, _ = _run_case(matrix, plan, scenario["decoder"], split_seed(root, 2, idx))
    return all(results.values())


def monte_carlo(
    source,
    trials: int,
    seed: int,
    workers: int = 1,
    confidence: float = 0.99,
) -> MonteCarloResult:
    """Estimate the all-node success rate over independent seeded trials and
    compare the exact binomial lower confidence limit against the applicable
    analytic bound."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if isinstance(source, dict):
        validate_scenario(source)
        scenario = source
    else:
        scenario = load_scenario(source)
    indices = range(trials)
    if workers <= 1:
        outcomes = [_mc_trial(scenario, seed, i) for i in indices]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda i: _mc_trial(scenario, seed, i), indices))
    successes = sum(outcomes)
    lower, upper = clopper_pearson(successes, trials, confidence)
    return MonteCarloResult(
        trials=trials,
        successes=successes,
        rate=successes / trials,
        lower=lower,
        upper=upper,
        confidence=confidence,
        bound=_applicable_bound(scenario),
        seed=seed,
    )
