"""Encoding-coefficient assignment schemes and rank-condition verifiers.

Four constructions are provided:

* ``assign_simple``      -- four sparse rows built from n distinct nonzero
                            elements; works for a single error, q > n.
* ``assign_vandermonde`` -- geometric rows over 2n distinct elements, q > 2n.
* ``assign_random``      -- i.i.d. uniform coefficients (good for large q).
* ``assign_rs``          -- the parity-check matrix of a (2n, 2n-M)
                            Reed-Solomon code; any M columns independent.

``verify_condition`` checks the linear-independence conditions required for
single-error, multi-error and error/failure decoding by exhaustive (or
sampled) enumeration of the relevant pattern families.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from . import linalg
from .galois import GF
from .model import (
    CoefficientMatrix,
    ErrorPattern,
    NetworkConfig,
    pattern_family,
)

__all__ = [
    "assign_simple",
    "assign_vandermonde",
    "assign_random",
    "assign_rs",
    "assign_general_topology",
    "verify_condition",
    "VerificationReport",
    "StructuralInfeasibilityError",
    "independence_probability_single",
    "independence_probability_protection",
    "independence_probability_mixed",
    "single_error_success_bound",
    "multi_error_success_bound",
]


def _identity_tail(n: int, m: int, k: int) -> list[int]:
    return [1 if p == k else 0 for p in range(1, m + 1)]


def _matrix(config: NetworkConfig, coeff_rows: list[list[int]]) -> CoefficientMatrix:
    rows = tuple(
        tuple(coeff_rows[k]) + tuple(_identity_tail(config.n, config.m, k + 1))
        for k in range(config.m)
    )
    return CoefficientMatrix(config, rows)


def assign_simple(
    n: int,
    field: GF,
    gammas: list[int] | None = None,
    check_distinct: bool = True,
) -> CoefficientMatrix:
    """Sparse four-path scheme: alpha_i^(1)=1, alpha_i^(2)=g_i, beta_i^(3)=1,
    beta_i^(4)=g_i for distinct nonzero g_1..g_n; everything else zero.

    ``check_distinct=False`` exists only to build deliberately broken
    fixtures (duplicated gammas) for negative tests.
    """
    if field.order <= n:
        raise ValueError(f"field size {field.order} too small: need q > n = {n}")
    if gammas is None:
        gammas = list(range(1, n + 1))
    if len(gammas) != n or any(g == 0 for g in gammas):
        raise ValueError("need n nonzero gamma values")
    if check_distinct and len(set(gammas)) != n:
        raise ValueError("gamma values must be distinct")
    m = 4
    config = NetworkConfig(n, m, field)
    coeff = [[0] * (2 * n) for _ in range(m)]
    for i in range(1, n + 1):
        coeff[0][2 * (i - 1)] = 1
        coeff[1][2 * (i - 1)] = gammas[i - 1]
        coeff[2][2 * (i - 1) + 1] = 1
        coeff[3][2 * (i - 1) + 1] = gammas[i - 1]
    return _matrix(config, coeff)


def assign_vandermonde(
    n: int,
    field: GF,
    m: int = 4,
    gammas: list[int] | None = None,
) -> CoefficientMatrix:
    """alpha_i^(k) = g_{2i-1}^(k-1), beta_i^(k) = g_{2i}^(k-1) over 2n
    distinct elements, so every 4-column primary submatrix is Vandermonde."""
    if field.order <= 2 * n:
        raise ValueError(f"field size {field.order} too small: need q > 2n = {2 * n}")
    if gammas is None:
        gammas = list(range(1, 2 * n + 1))
    if len(gammas) != 2 * n or len(set(gammas)) != 2 * n:
        raise ValueError("need 2n distinct gamma values")
    config = NetworkConfig(n, m, field)
    coeff = [
        [field.pow(g, k) for g in gammas]
        for k in range(m)
    ]
    return _matrix(config, coeff)


def assign_random(n: int, m: int, field: GF, seed: int) -> CoefficientMatrix:
    """All 2nM coefficients i.i.d. uniform over the field; deterministic
    under the seed."""
    rng = random.Random(seed)
    config = NetworkConfig(n, m, field)
    coeff = [[field.rand(rng) for _ in range(2 * n)] for _ in range(m)]
    return _matrix(config, coeff)


def assign_rs(n: int, m: int, field: GF) -> CoefficientMatrix:
    """H_ij = (alpha^i)^(j-1): the parity-check matrix of a (2n, 2n-M)
    Reed-Solomon code, alpha the primitive element.  Any M columns are
    linearly independent, which covers primary-only error patterns."""
    if field.order <= 2 * n:
        raise ValueError(f"field size {field.order} too small: need q > 2n = {2 * n}")
    config = NetworkConfig(n, m, field)
    a = field.generator
    coeff = [
        [field.pow(field.pow(a, i), j) for j in range(2 * n)]
        for i in range(1, m + 1)
    ]
    return _matrix(config, coeff)


# ---------------------------------------------------------------------------
# condition verification


@dataclass(frozen=True)
class VerificationReport:
    holds: bool
    first_violation: ErrorPattern | None = None
    reason: str | None = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def _pattern_families_for(condition, config: NetworkConfig) -> list[ErrorPattern]:
    """Expand a condition spec into the pattern family whose members must all
    be linearly independent column sets."""
    if condition == "theorem1":
        return pattern_family(2, 0, config)
    if condition == "theorem2":
        pats = pattern_family(2, 0, config)
        for i in range(1, config.n + 1):
            for l in range(1, config.m + 1):
                pats.append(ErrorPattern(frozenset({i}), frozenset({l})))
        return pats
    if isinstance(condition, tuple) and condition and condition[0] == "theorem3":
        (_, n_e) = condition
        pats = []
        for m1 in range(0, 2 * n_e + 1):
            m2 = 2 * n_e - m1
            if m1 <= config.n and m2 <= config.m:
                pats.extend(pattern_family(m1, m2, config))
        return pats
    if isinstance(condition, tuple) and condition and condition[0] == "theorem4":
        (_, n_e, n_f_c) = condition
        pats = []
        for m in range(0, 2 * n_e + 1):
            m1, m2 = n_f_c + m, 2 * n_e - m
            if m1 <= config.n and m2 <= config.m:
                pats.extend(pattern_family(m1, m2, config))
        return pats
    raise ValueError(f"unknown condition {condition!r}")


def verify_condition(
    matrix: CoefficientMatrix,
    condition,
    node_masks: list[tuple[int, ...]] | None = None,
    sample: int | None = None,
    seed: int = 0,
) -> VerificationReport:
    """Check a decoding-sufficiency condition on H_ext.

    ``condition`` is "theorem1", "theorem2", ("theorem3", n_e) or
    ("theorem4", n_e, n_f_c).  ``node_masks`` restricts the rows each
    (virtual) observer sees; the default is the per-node visibility implied by
    the coverage sets, which collapses to a single full mask under full
    coverage.  ``sample`` switches to checking a random subsample of the
    pattern family (full enumeration explodes combinatorially for large
    n, M, n_e).
    """
    config = matrix.config
    if node_masks is None:
        masks = sorted({config.visible_rows(i) for i in range(1, config.n + 1)})
    else:
        masks = [tuple(m) for m in node_masks]
    patterns = _pattern_families_for(condition, config)
    if sample is not None and sample < len(patterns):
        rng = random.Random(seed)
        patterns = rng.sample(patterns, sample)

    checked = 0
    for mask in masks:
        for pat in patterns:
            # A node only has to disambiguate patterns it can observe: a
            # protection error on a row outside its mask never reaches it.
            if any(p not in mask for p in pat.protections):
                continue
            if pat.size > len(mask):
                return VerificationReport(
                    False, pat, reason="M too small: more columns than visible rows",
                    checked=checked,
                )
            cols = [matrix.column(c, mask) for c in pat.columns(config.n)]
            checked += 1
            if not linalg.is_independent(matrix.field, cols):
                return VerificationReport(False, pat, reason="dependent column set", checked=checked)
    return VerificationReport(True, checked=checked)


class StructuralInfeasibilityError(Exception):
    """Raised when no random completion can satisfy the requested condition
    within the retry cap; carries the last failing report."""

    def __init__(self, report: VerificationReport, retries: int):
        super().__init__(
            f"no coefficient completion satisfied the condition after {retries} retries "
            f"(last violation: {report.first_violation}, {report.reason})"
        )
        self.report = report
        self.retries = retries


def assign_general_topology(
    config: NetworkConfig,
    seed: int,
    condition,
    retry_cap: int = 64,
) -> CoefficientMatrix:
    """Random completion for partial coverage: coefficients outside each
    path's coverage set are forced to zero, free entries are drawn uniformly,
    and fresh randomness is retried until the condition verifies."""
    rng = random.Random(seed)
    report = VerificationReport(False, reason="not attempted")
    for attempt in range(retry_cap):
        coeff = []
        for k in range(1, config.m + 1):
            row = []
            for l in range(1, config.n + 1):
                if l in config.coverage[k - 1]:
                    row.extend((config.field.rand(rng), config.field.rand(rng)))
                else:
                    row.extend((0, 0))
            coeff.append(row)
        matrix = _matrix(config, coeff)
        report = verify_condition(matrix, condition)
        if report.holds:
            return matrix
        if report.reason and report.reason.startswith("M too small"):
            # Structural: retrying cannot fix a dimension shortfall.
            raise StructuralInfeasibilityError(report, attempt + 1)
    raise StructuralInfeasibilityError(report, retry_cap)


# ---------------------------------------------------------------------------
# success-probability formulas for random coefficients


def independence_probability_single(q: int) -> float:
    """P{four random columns independent} = (1-1/q^3)(1-1/q^2)(1-1/q)."""
    return (1 - q ** -3) * (1 - q ** -2) * (1 - 1 / q)


def independence_probability_protection(q: int) -> float:
    """P{two random columns plus a unit column independent}."""
    return (1 - q ** -3) * (1 - q ** -2)


def independence_probability_mixed(q: int, m_paths: int, n_e: int, m: int) -> float:
    """P{an (m, 2n_e-m) pattern's columns are independent} for i.i.d. uniform
    coefficients and M = m_paths rows: prod_{i=0}^{2m-1} (1 - q^(2n_e-m+i)/q^M)."""
    p = 1.0
    for i in range(2 * m):
        p *= 1 - q ** (2 * n_e - m + i) / q ** m_paths
    return p


def single_error_success_bound(q: int, n: int, m: int) -> float:
    """Union lower bound on all-node success for random coefficients and one
    error: 1 - (1-p1) C(n,2) - (1-p2) n M."""
    p1 = independence_probability_single(q)
    p2 = independence_probability_protection(q)
    return 1 - (1 - p1) * math.comb(n, 2) - (1 - p2) * n * m


def multi_error_success_bound(q: int, n: int, m_paths: int, n_e: int) -> float:
    """Union lower bound for at most n_e errors:
    1 - sum_m (1 - p1(m)) C(n, m) C(M, 2n_e - m)."""
    total = 0.0
    for m in range(0, 2 * n_e + 1):
        if m > n or 2 * n_e - m > m_paths:
            continue
        p1m = independence_probability_mixed(q, m_paths, n_e, m)
        total += (1 - p1m) * math.comb(n, m) * math.comb(m_paths, 2 * n_e - m)
    return 1 - total
