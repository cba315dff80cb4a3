"""Network data model: connections, coverage, the coefficient matrix and the
error/failure pattern combinatorics.

Conventions used across the package:

* connections are numbered 1..n, protection paths 1..M;
* end nodes are ``Node("S", i)`` / ``Node("T", i)``;
* columns of the extended coefficient matrix are numbered 1..2n+M, where the
  primary connection i owns columns 2i-1 (its alpha column) and 2i (its beta
  column) and protection path p owns column 2n+p (a unit column).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, NamedTuple

from .galois import GF

__all__ = [
    "Node",
    "NetworkConfig",
    "CoefficientMatrix",
    "ErrorPattern",
    "FailurePattern",
    "columns_of",
    "enumerate_patterns_at",
    "pattern_family",
]


class Node(NamedTuple):
    side: str   # "S" or "T"
    index: int  # 1..n

    def __str__(self):
        return f"{self.side}{self.index}"


@dataclass(frozen=True)
class NetworkConfig:
    """n bidirectional connections protected by M shared protection paths.

    ``coverage[k-1]`` is the set of connections protected by path k.  The
    default is full coverage (every path passes through all 2n end nodes),
    which is the main setting; partial coverage models the general topology
    where different connections are protected by different paths.
    """

    n: int
    m: int
    field: GF
    coverage: tuple[frozenset[int], ...] = dc_field(default=())

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        cov = self.coverage
        if not cov:
            cov = tuple(frozenset(range(1, self.n + 1)) for _ in range(self.m))
        else:
            cov = tuple(frozenset(c) for c in cov)
            if len(cov) != self.m:
                raise ValueError("coverage must list one connection set per protection path")
            for c in cov:
                if not c <= set(range(1, self.n + 1)):
                    raise ValueError("coverage set contains an unknown connection")
        covered = frozenset().union(*cov)
        if covered != frozenset(range(1, self.n + 1)):
            missing = sorted(set(range(1, self.n + 1)) - covered)
            raise ValueError(f"connections {missing} are not covered by any protection path")
        object.__setattr__(self, "coverage", cov)

    @property
    def full_coverage(self) -> bool:
        full = frozenset(range(1, self.n + 1))
        return all(c == full for c in self.coverage)

    def nodes(self) -> list[Node]:
        out = []
        for i in range(1, self.n + 1):
            out.append(Node("S", i))
            out.append(Node("T", i))
        return out

    def visible_rows(self, i: int) -> tuple[int, ...]:
        """Protection-path rows seen by the end nodes of connection i."""
        return tuple(k for k in range(1, self.m + 1) if i in self.coverage[k - 1])


@dataclass(frozen=True)
class CoefficientMatrix:
    """The M x (2n+M) matrix H_ext = [H | I].

    Row k holds the encoding coefficients of protection path k; the last M
    columns are the identity block (truncated per node in the general
    topology case, which is handled by row masks rather than by copying).
    """

    config: NetworkConfig
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n, m = self.config.n, self.config.m
        if len(self.rows) != m or any(len(r) != 2 * n + m for r in self.rows):
            raise ValueError("coefficient matrix has the wrong shape")
        for k in range(1, m + 1):
            for p in range(1, m + 1):
                expect = 1 if p == k else 0
                if self.rows[k - 1][2 * n + p - 1] != expect:
                    raise ValueError("last M columns must form the identity block")
            for l in range(1, n + 1):
                if l not in self.config.coverage[k - 1]:
                    if self.alpha(l, k) != 0 or self.beta(l, k) != 0:
                        raise ValueError(
                            f"connection {l} is outside the coverage of path {k} "
                            "but has a nonzero coefficient"
                        )

    @property
    def field(self) -> GF:
        return self.config.field

    def alpha(self, i: int, k: int) -> int:
        return self.rows[k - 1][2 * (i - 1)]

    def beta(self, i: int, k: int) -> int:
        return self.rows[k - 1][2 * (i - 1) + 1]

    def entry(self, k: int, col: int) -> int:
        return self.rows[k - 1][col - 1]

    def column(self, col: int, row_mask: Iterable[int] | None = None) -> tuple[int, ...]:
        ks = range(1, self.config.m + 1) if row_mask is None else row_mask
        return tuple(self.rows[k - 1][col - 1] for k in ks)

    def submatrix(self, cols: Iterable[int], row_mask: Iterable[int] | None = None):
        ks = range(1, self.config.m + 1) if row_mask is None else row_mask
        return [[self.rows[k - 1][c - 1] for c in cols] for k in ks]


@dataclass(frozen=True)
class ErrorPattern:
    """Column support of a set of primary-path and protection-path errors."""

    primaries: frozenset[int]
    protections: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "primaries", frozenset(self.primaries))
        object.__setattr__(self, "protections", frozenset(self.protections))

    @property
    def size(self) -> int:
        return 2 * len(self.primaries) + len(self.protections)

    def columns(self, n: int) -> tuple[int, ...]:
        cols = set()
        for c in self.primaries:
            cols.add(2 * c - 1)
            cols.add(2 * c)
        for p in self.protections:
            cols.add(2 * n + p)
        return tuple(sorted(cols))

    def __str__(self):
        return (
            f"primaries={sorted(self.primaries)} protections={sorted(self.protections)}"
        )


@dataclass(frozen=True)
class FailurePattern:
    """Known-location outages: failed primaries deliver zero, failed
    protection paths are ignored by every node."""

    primaries: frozenset[int] = frozenset()
    protections: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "primaries", frozenset(self.primaries))
        object.__setattr__(self, "protections", frozenset(self.protections))

    @property
    def count(self) -> int:
        return len(self.primaries) + len(self.protections)


def columns_of(pattern: ErrorPattern, config: NetworkConfig) -> tuple[int, ...]:
    """Ordered column-index set of a pattern in H_ext."""
    for c in pattern.primaries:
        if not 1 <= c <= config.n:
            raise ValueError(f"primary index {c} out of range")
    for p in pattern.protections:
        if not 1 <= p <= config.m:
            raise ValueError(f"protection index {p} out of range")
    return pattern.columns(config.n)


def pattern_family(m1: int, m2: int, config: NetworkConfig) -> list[ErrorPattern]:
    """All (m1, m2) type error patterns A(m1, m2), lexicographic order."""
    out = []
    for prim in itertools.combinations(range(1, config.n + 1), m1):
        for prot in itertools.combinations(range(1, config.m + 1), m2):
            out.append(ErrorPattern(frozenset(prim), frozenset(prot)))
    return out


def enumerate_patterns_at(
    i: int,
    n_e: int,
    config: NetworkConfig,
    failures: FailurePattern | None = None,
) -> list[ErrorPattern]:
    """The pattern family a decoder at connection i must try.

    Without failures this is the union over n_c = 1..n_e of the (n_c,
    n_e - n_c) type patterns containing an error on connection i.  With a
    failure pattern the returned patterns additionally contain the failed
    primary columns (failures are solved for like errors whose location is
    known), errors avoid failed paths, and the include-i requirement is
    satisfied by either an error or a failure on i.

    Deterministic order: lexicographic by column set; duplicate-free.
    """
    if not 1 <= i <= config.n:
        raise ValueError(f"connection index {i} out of range")
    if n_e < 0:
        raise ValueError("n_e must be nonnegative")
    failed_prim = failures.primaries if failures else frozenset()
    failed_prot = failures.protections if failures else frozenset()
    prim_pool = [c for c in range(1, config.n + 1) if c not in failed_prim]
    prot_pool = [p for p in range(1, config.m + 1) if p not in failed_prot]

    seen = set()
    out = []
    lo = 0 if i in failed_prim else 1
    for n_c in range(lo, n_e + 1):
        for prim in itertools.combinations(prim_pool, n_c):
            if i not in failed_prim and i not in prim:
                continue
            for prot in itertools.combinations(prot_pool, n_e - n_c):
                pat = ErrorPattern(frozenset(prim) | failed_prim, frozenset(prot))
                if pat not in seen:
                    seen.add(pat)
                    out.append(pat)
    out.sort(key=lambda p: p.columns(config.n))
    return out
