"""Coefficient assignment schemes and rank-condition verification."""

import itertools
import math
import random

import pytest

from ncprotect import linalg
from ncprotect.coefficients import (
    StructuralInfeasibilityError,
    assign_general_topology,
    assign_random,
    assign_rs,
    assign_simple,
    assign_vandermonde,
    independence_probability_protection,
    independence_probability_single,
    multi_error_success_bound,
    single_error_success_bound,
    verify_condition,
)
from ncprotect.galois import gf
from ncprotect.model import NetworkConfig


def test_simple_scheme_structure():
    m = assign_simple(3, gf(3))
    # default gammas 1..n; columns: alpha stack (1, g_i, 0, 0), beta stack
    # (0, 0, 1, g_i)
    for i in (1, 2, 3):
        assert m.column(2 * i - 1) == (1, i, 0, 0)
        assert m.column(2 * i) == (0, 0, 1, i)


def test_simple_scheme_validation():
    with pytest.raises(ValueError):
        assign_simple(8, gf(3))               # needs q > n
    assign_simple(7, gf(3))                   # n = q - 1 is the maximum
    with pytest.raises(ValueError):
        assign_simple(2, gf(3), gammas=[1, 1])
    with pytest.raises(ValueError):
        assign_simple(2, gf(3), gammas=[0, 1])
    # negative-fixture escape hatch
    broken = assign_simple(2, gf(3), gammas=[1, 1], check_distinct=False)
    assert not verify_condition(broken, "theorem1")


def test_vandermonde_structure():
    f = gf(3)
    m = assign_vandermonde(3, f)
    gammas = list(range(1, 7))
    for i in (1, 2, 3):
        g_a, g_b = gammas[2 * i - 2], gammas[2 * i - 1]
        assert m.column(2 * i - 1) == tuple(f.pow(g_a, k) for k in range(4))
        assert m.column(2 * i) == tuple(f.pow(g_b, k) for k in range(4))


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("scheme", [assign_simple, assign_vandermonde])
def test_deterministic_schemes_satisfy_conditions(n, scheme):
    m = scheme(n, gf(8))
    assert verify_condition(m, "theorem1")
    assert verify_condition(m, "theorem2")


def test_rs_any_m_columns_independent():
    f = gf(8)
    m = assign_rs(3, 4, f)
    for cols in itertools.combinations(range(1, 7), 4):
        sub = [m.column(c) for c in cols]
        assert linalg.is_independent(f, sub)


def test_random_scheme_deterministic_under_seed():
    f = gf(16)
    assert assign_random(4, 4, f, seed=5).rows == assign_random(4, 4, f, seed=5).rows
    assert assign_random(4, 4, f, seed=5).rows != assign_random(4, 4, f, seed=6).rows


def test_random_gf16_passes_theorem2():
    m = assign_random(4, 4, gf(16), seed=0)
    assert verify_condition(m, "theorem2")


def test_verify_reports_violation_details():
    broken = assign_simple(3, gf(8), gammas=[1, 1, 2], check_distinct=False)
    report = verify_condition(broken, "theorem1")
    assert not report
    assert report.first_violation is not None
    assert {1, 2} <= report.first_violation.primaries
    assert report.reason == "dependent column set"


def test_verify_theorem3_and_4_sampled_consistent_with_full():
    f = gf(16)
    m = assign_random(3, 8, f, seed=2)
    full = verify_condition(m, ("theorem3", 2))
    sampled = verify_condition(m, ("theorem3", 2), sample=50, seed=1)
    assert bool(full) and bool(sampled)
    assert sampled.checked <= full.checked


def test_verify_m_too_small_is_structural():
    # 2 n_e = 4 errors can hit 8 columns; with M = 4 rows no mask fits
    m = assign_random(4, 4, gf(16), seed=0)
    report = verify_condition(m, ("theorem3", 2))
    assert not report
    assert report.reason.startswith("M too small")


def test_general_topology_partial_coverage():
    f = gf(8)
    cfg = NetworkConfig(
        3,
        6,
        f,
        (
            frozenset({1, 2, 3}),
            frozenset({1, 2, 3}),
            frozenset({1, 2}),
            frozenset({1, 2}),
            frozenset({2, 3}),
            frozenset({2, 3}),
        ),
    )
    m = assign_general_topology(cfg, seed=0, condition="theorem1")
    # zero outside coverage
    assert m.alpha(3, 3) == 0 and m.beta(3, 4) == 0
    assert verify_condition(m, "theorem1")


def test_general_topology_structural_infeasibility():
    f = gf(8)
    # a node seeing only 2 rows cannot disambiguate 4-column patterns
    cfg = NetworkConfig(3, 2, f, (frozenset({1, 2, 3}), frozenset({1, 2, 3})))
    with pytest.raises(StructuralInfeasibilityError):
        assign_general_topology(cfg, seed=0, condition="theorem1")


def test_probability_formulas_pinned():
    # exact-fraction oracles: counting bases of subspaces gives
    # p1 = (q^3-1)(q^2-1)(q-1)/q^6 scaled appropriately
    from fractions import Fraction

    q = 16
    p1_exact = Fraction(q**3 - 1, q**3) * Fraction(q**2 - 1, q**2) * Fraction(q - 1, q)
    p2_exact = Fraction(q**3 - 1, q**3) * Fraction(q**2 - 1, q**2)
    assert math.isclose(independence_probability_single(16), float(p1_exact), rel_tol=1e-12)
    assert math.isclose(independence_probability_protection(16), float(p2_exact), rel_tol=1e-12)
    q = 2 ** 16
    p1 = independence_probability_single(q)
    p2 = independence_probability_protection(q)
    b = single_error_success_bound(q, 5, 4)
    assert math.isclose(b, 1 - (1 - p1) * 10 - (1 - p2) * 20, rel_tol=1e-15)
    assert 0.9998 < b < 1
    b2 = multi_error_success_bound(q, 4, 8, 2)
    assert 0 < b2 < 1


def test_empirical_independence_matches_p1():
    # 4 random columns of 4 rows: empirical rate within 3 binomial standard
    # errors of the closed form (desk-scale version of the larger sweep)
    f = gf(4)
    rng = random.Random(0)
    trials = 20000
    hits = 0
    for _ in range(trials):
        cols = [[f.rand(rng) for _ in range(4)] for _ in range(4)]
        hits += linalg.is_independent(f, cols)
    p = independence_probability_single(16)
    se = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= 3 * se
