"""Finite-field linear algebra against brute-force oracles."""

import itertools
import random

import pytest

from ncprotect import linalg
from ncprotect.galois import gf


def brute_rank(field, rows):
    """Rank as the size of the largest subset of rows with no nontrivial
    null combination, found by exhaustive span counting."""
    span = {tuple([0] * len(rows[0]))} if rows else {()}
    for row in rows:
        new = set(span)
        for v in span:
            for c in field.nonzero():
                new.add(tuple(x ^ field.mul(c, y) for x, y in zip(v, row)))
        span = new
    # |span| = q^rank
    size = len(span)
    r = 0
    while size > 1:
        size //= field.order
        r += 1
    return r


@pytest.mark.parametrize("r", [2, 3])
def test_rank_matches_span_oracle(r):
    field = gf(r)
    rng = random.Random(r)
    for _ in range(40):
        h = rng.randrange(1, 4)
        w = rng.randrange(1, 4)
        rows = [[field.rand(rng) for _ in range(w)] for _ in range(h)]
        assert linalg.rank(field, rows) == brute_rank(field, rows)


def test_det_matches_leibniz():
    field = gf(3)
    rng = random.Random(9)
    for _ in range(30):
        k = rng.randrange(1, 4)
        rows = [[field.rand(rng) for _ in range(k)] for _ in range(k)]
        det = 0
        for perm in itertools.permutations(range(k)):
            term = 1
            for i, j in enumerate(perm):
                term = field.mul(term, rows[i][j])
            det ^= term  # characteristic 2: no signs
        assert linalg.det(field, rows) == det


def test_solve_consistent_exact():
    field = gf(4)
    rng = random.Random(2)
    for _ in range(50):
        k = rng.randrange(1, 5)
        rows = [[field.rand(rng) for _ in range(k)] for _ in range(k + 1)]
        x = [field.rand(rng) for _ in range(k)]
        b = linalg.matvec(field, rows, x)
        sol = linalg.solve(field, rows, b)
        assert sol is not None
        assert linalg.matvec(field, rows, sol) == b


def test_solve_inconsistent_returns_none():
    field = gf(3)
    rows = [[1, 0], [0, 1], [1, 1]]
    # b outside the column span: (1,0,0) would need x=(1,0) but row 3 gives 1
    assert linalg.solve(field, rows, [1, 0, 0]) is None


def test_solve_underdetermined_raises():
    field = gf(3)
    with pytest.raises(ValueError):
        linalg.solve(field, [[1, 1]], [0])


def test_is_independent():
    field = gf(3)
    assert linalg.is_independent(field, [[1, 0, 0], [0, 1, 0]])
    assert not linalg.is_independent(field, [[1, 2, 0], [1, 2, 0]])
    assert not linalg.is_independent(field, [[1, 0], [0, 1], [1, 1]])
