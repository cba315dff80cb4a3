"""Per-round encoding protocol and syndrome formation.

``run_round`` walks both unidirectional halves of every protection path,
accumulating each visited node's linear combination, and computes for every
end node the primary receipt P_m, the protection sums P^(k), and the
syndrome.  ``syndrome_of`` is the pure algebraic counterpart (a restricted
matrix-vector product) used as the oracle against which the walk is tested.

Rounds are simulated synchronously.  The protocol's buffering argument (data
units of one round never mix with another) is honored by the round-isolation
property: an observation depends only on that round's inputs and plan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .adversary import AdversaryPlan, apply_plan, plan_error_vector
from .model import CoefficientMatrix, NetworkConfig, Node

__all__ = ["NodeObservation", "run_round", "syndrome_of"]


@dataclass(frozen=True)
class NodeObservation:
    """What one end node has after a round: its primary receipt and the
    syndrome over the protection-path rows it can see."""

    node: Node
    p_m: int
    p_syn: tuple[int, ...]          # aligned with visible_rows
    visible_rows: tuple[int, ...]   # protection rows covering this node, minus failures
    failed_primaries: frozenset[int]
    failed_protections: frozenset[int]

    def syndrome_map(self) -> dict[int, int]:
        return dict(zip(self.visible_rows, self.p_syn))


def _default_order(config: NetworkConfig, k: int) -> list[Node]:
    return [
        node for node in config.nodes() if node.index in config.coverage[k - 1]
    ]


def run_round(
    config: NetworkConfig,
    matrix: CoefficientMatrix,
    d: Sequence[int],
    u: Sequence[int],
    plan: AdversaryPlan | None = None,
    visit_orders: Mapping[int, Sequence[Node]] | None = None,
) -> dict[Node, NodeObservation]:
    """Simulate one round and return every end node's observation.

    ``visit_orders`` optionally overrides the order in which each protection
    path passes through the end nodes (the observable algebra is invariant
    under it, which tests exercise).
    """
    field = config.field
    n, m = config.n, config.m
    if len(d) != n or len(u) != n:
        raise ValueError("need one d and one u data unit per connection")
    if plan is None:
        plan = AdversaryPlan()
    for k in plan.protection_errors:
        if not 1 <= k <= m:
            raise ValueError(f"plan references unknown protection path {k}")
    for i in plan.primary_errors:
        if not 1 <= i <= n:
            raise ValueError(f"plan references unknown connection {i}")

    d_hat, u_hat = apply_plan(plan, list(d), list(u), config)

    # P^(k) per observing node: the sum of what arrives over both directions,
    # i.e. every other visited node's contribution, plus this node's view of
    # any corruption on the path.
    p_k: dict[int, dict[Node, int]] = {}
    for k in range(1, m + 1):
        if k in plan.failures.protections:
            continue
        order = (
            list(visit_orders[k])
            if visit_orders is not None and k in visit_orders
            else _default_order(config, k)
        )
        if {node.index for node in order} != set(config.coverage[k - 1]) or len(order) != 2 * len(
            config.coverage[k - 1]
        ):
            raise ValueError(f"visit order for path {k} must cover its end nodes exactly once")
        contrib = {}
        for node in order:
            i = node.index
            a, b = matrix.alpha(i, k), matrix.beta(i, k)
            if node.side == "S":
                x, y = d[i - 1], u_hat[i - 1]
            else:
                x, y = d_hat[i - 1], u[i - 1]
            contrib[node] = field.add(field.mul(a, x), field.mul(b, y))
        # Prefix sums give the S-direction receipt, suffix sums the
        # T-direction receipt; their sum is total-minus-own.
        total = 0
        for v in contrib.values():
            total ^= v
        per_node_err = plan.protection_errors.get(k, {})
        p_k[k] = {
            node: field.add(total ^ contrib[node], per_node_err.get(node, 0))
            for node in order
        }

    observations = {}
    for node in config.nodes():
        i = node.index
        rows = tuple(
            k for k in config.visible_rows(i) if k not in plan.failures.protections
        )
        if node.side == "T":
            p_m = d_hat[i - 1]
            own, own_coeff = u[i - 1], "beta"
        else:
            p_m = u_hat[i - 1]
            own, own_coeff = d[i - 1], "alpha"
        syn = []
        for k in rows:
            a, b = matrix.alpha(i, k), matrix.beta(i, k)
            if own_coeff == "beta":
                p_prime = field.add(p_k[k][node], field.mul(b, own))
                syn.append(field.add(field.mul(a, p_m), p_prime))
            else:
                p_prime = field.add(p_k[k][node], field.mul(a, own))
                syn.append(field.add(field.mul(b, p_m), p_prime))
        observations[node] = NodeObservation(
            node=node,
            p_m=p_m,
            p_syn=tuple(syn),
            visible_rows=rows,
            failed_primaries=plan.failures.primaries,
            failed_protections=plan.failures.protections,
        )
    return observations


def syndrome_of(
    matrix: CoefficientMatrix,
    error_values: Sequence[int],
    node: Node,
    visible_rows: Sequence[int] | None = None,
) -> tuple[int, ...]:
    """H_ext . E restricted to the rows the node sees: the algebraic oracle
    for ``run_round``'s syndrome."""
    config = matrix.config
    field = matrix.field
    if len(error_values) != 2 * config.n + config.m:
        raise ValueError("error value vector has the wrong length")
    rows = (
        tuple(visible_rows)
        if visible_rows is not None
        else config.visible_rows(node.index)
    )
    out = []
    for k in rows:
        acc = 0
        row = matrix.rows[k - 1]
        for a, e in zip(row, error_values):
            if a and e:
                acc ^= field.mul(a, e)
        out.append(acc)
    return tuple(out)


def observation_from_values(
    matrix: CoefficientMatrix,
    node: Node,
    plan: AdversaryPlan,
    d: Sequence[int],
    u: Sequence[int],
) -> NodeObservation:
    """Build the observation a node would see, straight from the algebra
    (no path walk); convenience for decoder-level tests."""
    config = matrix.config
    e = plan_error_vector(plan, node, config, list(d), list(u))
    rows = tuple(
        k
        for k in config.visible_rows(node.index)
        if k not in plan.failures.protections
    )
    syn = syndrome_of(matrix, e, node, rows)
    i = node.index
    field = config.field
    if i in plan.failures.primaries:
        p_m = 0
    elif node.side == "T":
        p_m = field.add(d[i - 1], plan.primary_errors.get(i, (0, 0))[0])
    else:
        p_m = field.add(u[i - 1], plan.primary_errors.get(i, (0, 0))[1])
    return NodeObservation(
        node=node,
        p_m=p_m,
        p_syn=syn,
        visible_rows=rows,
        failed_primaries=plan.failures.primaries,
        failed_protections=plan.failures.protections,
    )
