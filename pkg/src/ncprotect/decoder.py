"""Decoding procedures recovering d_i at T_i (u_i at S_i) from (P_m, P_syn).

Four procedures:

* ``decode_single``         -- solve the node's own two-column system;
                               covers one error anywhere in the network.
* ``decode_enumerate``      -- try every error pattern that touches the
                               node's connection; covers up to n_e errors.
* ``decode_rs``             -- Berlekamp-Massey / Chien / Forney syndrome
                               decoding for the Reed-Solomon coefficient
                               matrix (primary-path errors only), with
                               errors-and-erasures support for known primary
                               failures.
* ``decode_with_failures``  -- enumeration variant with known failure
                               locations solved alongside the errors.

Each node decodes alone from its own observation; no cooperation, no
synchronization.  When the adversary exceeds the declared bounds the
decoders may return wrong data silently (out of model) or raise
``DecodingFailure`` when the algebra itself refuses (RS locator mismatch).
"""

from __future__ import annotations

from .linalg import solve
from .model import (
    CoefficientMatrix,
    ErrorPattern,
    FailurePattern,
    enumerate_patterns_at,
)
from .protocol import NodeObservation

__all__ = [
    "DecodingFailure",
    "decode_single",
    "decode_enumerate",
    "decode_with_failures",
    "decode_rs",
]


class DecodingFailure(Exception):
    """The observation is inconsistent with every in-model error pattern."""


def _local_column_pair(node, n):
    i = node.index
    return (2 * i - 1, 2 * i)


def _solve_pattern(matrix: CoefficientMatrix, obs: NodeObservation, pattern: ErrorPattern):
    """Solve H_ext restricted to the pattern's columns and the node's visible
    rows.  Returns {column: value} or None when inconsistent."""
    cols = pattern.columns(matrix.config.n)
    sub = matrix.submatrix(cols, obs.visible_rows)
    sol = solve(matrix.field, sub, list(obs.p_syn))
    if sol is None:
        return None
    return dict(zip(cols, sol))


def decode_single(matrix: CoefficientMatrix, obs: NodeObservation) -> int:
    """Single-error decoding: if [v_{2i-1} v_{2i}] x = P_syn is consistent the
    error is local and P_m is corrected; otherwise the error (if any) is
    elsewhere and P_m is already clean."""
    node = obs.node
    col_d, col_u = _local_column_pair(node, matrix.config.n)
    sol = _solve_pattern(matrix, obs, ErrorPattern(frozenset({node.index})))
    if sol is None:
        return obs.p_m
    local = sol[col_d] if node.side == "T" else sol[col_u]
    return matrix.field.add(obs.p_m, local)


def _enumerate_decode(matrix, obs, patterns, check_uniqueness):
    node = obs.node
    col_d, col_u = _local_column_pair(node, matrix.config.n)
    want = col_d if node.side == "T" else col_u
    found = None
    for pattern in patterns:
        sol = _solve_pattern(matrix, obs, pattern)
        if sol is None:
            continue
        local = sol.get(want, 0)
        if found is None:
            found = local
            if not check_uniqueness:
                break
        elif local != found:
            raise DecodingFailure(
                f"ambiguous decoding at {node}: patterns disagree on the local "
                f"error value ({found} vs {local}); coefficient condition violated"
            )
    if found is None:
        return obs.p_m
    return matrix.field.add(obs.p_m, found)


def decode_enumerate(
    matrix: CoefficientMatrix,
    obs: NodeObservation,
    n_e: int,
    check_uniqueness: bool = True,
) -> int:
    """Try each error pattern touching this connection with up to n_e total
    errors; the first consistent system yields the local correction.  With
    ``check_uniqueness`` every consistent pattern is solved and required to
    agree, turning the uniqueness proof into a runtime check."""
    patterns = enumerate_patterns_at(obs.node.index, n_e, matrix.config)
    return _enumerate_decode(matrix, obs, patterns, check_uniqueness)


def decode_with_failures(
    matrix: CoefficientMatrix,
    obs: NodeObservation,
    n_e: int,
    check_uniqueness: bool = True,
) -> int:
    """Enumeration decoding with known failure locations.

    Failed protection rows are already absent from the observation; failed
    primary columns are solved alongside the error columns (a failed primary
    is an error of known location with value e_d = d, so the correction
    reconstructs the lost data unit outright when the failure is local).
    """
    failures = FailurePattern(obs.failed_primaries, obs.failed_protections)
    patterns = enumerate_patterns_at(obs.node.index, n_e, matrix.config, failures)
    return _enumerate_decode(matrix, obs, patterns, check_uniqueness)


# ---------------------------------------------------------------------------
# Reed-Solomon syndrome decoding
#
# Fixed convention: column j in 1..2n of H_RS has locator X_j = alpha^(j-1),
# so row i of the syndrome is S_i = sum_j e_j X_j^i, i = 1..M.


def _poly_eval(field, poly, x):
    # poly in ascending coefficient order
    acc = 0
    p = 1
    for c in poly:
        if c:
            acc ^= field.mul(c, p)
        p = field.mul(p, x)
    return acc


def _poly_mul(field, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] ^= field.mul(ai, bj)
    return out


def _berlekamp_massey(field, synd):
    """Minimal LFSR for the syndrome sequence; returns (locator, degree L)."""
    c = [1]
    b = [1]
    L = 0
    m = 1
    bb = 1
    for n_i, s in enumerate(synd):
        d = s
        for i in range(1, L + 1):
            if i < len(c) and c[i]:
                d ^= field.mul(c[i], synd[n_i - i])
        if d == 0:
            m += 1
        elif 2 * L <= n_i:
            t = list(c)
            coef = field.div(d, bb)
            c = c + [0] * (len(b) + m - len(c)) if len(b) + m > len(c) else list(c)
            for i, bv in enumerate(b):
                if bv:
                    c[i + m] ^= field.mul(coef, bv)
            L = n_i + 1 - L
            b = t
            bb = d
            m = 1
        else:
            coef = field.div(d, bb)
            if len(b) + m > len(c):
                c = c + [0] * (len(b) + m - len(c))
            for i, bv in enumerate(b):
                if bv:
                    c[i + m] ^= field.mul(coef, bv)
            m += 1
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c, L


def decode_rs(
    matrix: CoefficientMatrix,
    obs: NodeObservation,
    n_e: int,
    erasures: frozenset[int] | None = None,
) -> int:
    """Syndrome decoding of the (2n, 2n-M) RS structure: at most 2n_e symbol
    errors among the 2n primary columns, plus known erasures at the failed
    primaries' columns (2 symbols per failed connection).

    Raises ``DecodingFailure`` when the locator degree exceeds the error
    budget, its roots do not match its degree, or the corrected error vector
    fails to reproduce the syndrome -- all signs the adversary exceeded the
    declared model.
    """
    config = matrix.config
    field = matrix.field
    n = config.n
    if erasures is None:
        erasures = obs.failed_primaries
    if obs.failed_protections:
        raise DecodingFailure("RS decoding has no protection rows to drop; use the enumeration decoder")
    if obs.visible_rows != tuple(range(1, config.m + 1)):
        raise DecodingFailure("RS decoding requires full row visibility")

    synd = list(obs.p_syn)               # S_1 .. S_M
    m_rows = config.m
    alpha = field.generator
    locators = [field.pow(alpha, j - 1) for j in range(1, 2 * n + 1)]
    erased_cols = sorted(
        c for f in erasures for c in (2 * f - 1, 2 * f)
    )

    # Erasure locator Gamma(x) = prod (1 - Y x) over erased column locators.
    gamma = [1]
    for c in erased_cols:
        gamma = _poly_mul(field, gamma, [1, locators[c - 1]])
    rho = len(erased_cols)
    if rho > m_rows:
        raise DecodingFailure("more erased symbols than syndrome rows")

    # Forney syndromes T_i = sum_l Gamma_l S_{i-l}, valid for i > rho: a
    # syndrome sequence of the errors alone.
    fsynd = []
    for i in range(rho + 1, m_rows + 1):
        acc = 0
        for l, g in enumerate(gamma):
            if g and 1 <= i - l <= m_rows:
                acc ^= field.mul(g, synd[i - l - 1])
        fsynd.append(acc)

    locator, L = _berlekamp_massey(field, fsynd)
    if L > 2 * n_e or L != len(locator) - 1:
        raise DecodingFailure(f"error locator degree {L} exceeds the correctable budget")

    psi = _poly_mul(field, locator, gamma)
    # Chien-style root search over the 2n column locators.
    positions = []
    for j in range(1, 2 * n + 1):
        if _poly_eval(field, psi, field.inv(locators[j - 1])) == 0:
            positions.append(j)
    if len(positions) != len(psi) - 1:
        raise DecodingFailure(
            f"locator of degree {len(psi) - 1} has {len(positions)} roots among the columns"
        )

    # Forney: with S(x) = sum S_i x^(i-1), Omega = S Psi mod x^M, the value at
    # column j is Omega(X_j^-1) / Psi'(X_j^-1).
    omega = _poly_mul(field, synd, psi)[:m_rows]
    psi_prime = [psi[i] if i % 2 == 1 else 0 for i in range(1, len(psi))]
    e = [0] * (2 * n)
    for j in positions:
        xinv = field.inv(locators[j - 1])
        denom = _poly_eval(field, psi_prime, xinv)
        if denom == 0:
            raise DecodingFailure("repeated locator root")
        e[j - 1] = field.div(_poly_eval(field, omega, xinv), denom)

    # Consistency guard: the corrected vector must reproduce the syndrome.
    for i in range(1, m_rows + 1):
        acc = 0
        for j in positions:
            acc ^= field.mul(e[j - 1], field.pow(locators[j - 1], i))
        if acc != synd[i - 1]:
            raise DecodingFailure("corrected error vector does not reproduce the syndrome")

    node = obs.node
    col = 2 * node.index - 1 if node.side == "T" else 2 * node.index
    return field.add(obs.p_m, e[col - 1])
