"""Deterministic, seeded injection of adversarial errors and failures.

A plan fixes everything the round simulation needs to corrupt a round: which
primary paths carry errors (and their two directional error values), which
protection paths are corrupted (with a per-observing-node aggregate value,
since the corruption location along a bidirectional protection path
determines what each node sees), and which paths have failed outright.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from types import MappingProxyType
from typing import Iterator, Mapping

from .model import FailurePattern, NetworkConfig, Node

__all__ = ["AdversaryPlan", "random_plan", "apply_plan", "sweep_plans", "plan_error_vector"]


def _freeze(d: Mapping) -> Mapping:
    return MappingProxyType(dict(d))


@dataclass(frozen=True)
class AdversaryPlan:
    # connection -> (e_d, e_u), not both zero
    primary_errors: Mapping[int, tuple[int, int]] = dc_field(default_factory=dict)
    # protection path -> {observing node -> aggregate error value}
    protection_errors: Mapping[int, Mapping[Node, int]] = dc_field(default_factory=dict)
    failures: FailurePattern = FailurePattern()
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "primary_errors", _freeze(self.primary_errors))
        object.__setattr__(
            self,
            "protection_errors",
            _freeze({k: _freeze(v) for k, v in self.protection_errors.items()}),
        )
        for i, (ed, eu) in self.primary_errors.items():
            if ed == 0 and eu == 0:
                raise ValueError(f"primary error on connection {i} has both values zero")
            if i in self.failures.primaries:
                raise ValueError(f"connection {i} cannot both fail and carry an error")

    @property
    def error_count(self) -> int:
        return len(self.primary_errors) + len(self.protection_errors)

    def __hash__(self):
        return hash(
            (
                tuple(sorted(self.primary_errors.items())),
                tuple(
                    (k, tuple(sorted(v.items())))
                    for k, v in sorted(self.protection_errors.items())
                ),
                self.failures,
                self.seed,
            )
        )


def random_plan(
    config: NetworkConfig,
    n_e: int,
    n_f: int,
    seed: int,
) -> AdversaryPlan:
    """Uniformly placed errors and failures with uniform nonzero values.

    Values are drawn nonzero so the injected error count is exact; a zero
    "error" would silently shrink n_e and corrupt the bookkeeping of any
    sweep built on top of this.
    """
    rng = random.Random(seed)
    paths = [("c", i) for i in range(1, config.n + 1)] + [
        ("p", k) for k in range(1, config.m + 1)
    ]
    if n_e + n_f > len(paths):
        raise ValueError("n_e + n_f exceeds the number of paths")
    chosen = rng.sample(paths, n_e + n_f)
    err_locs, fail_locs = chosen[:n_e], chosen[n_e:]
    field = config.field

    primary_errors = {}
    protection_errors = {}
    for kind, idx in err_locs:
        if kind == "c":
            ed = field.rand(rng)
            eu = field.rand(rng)
            if ed == 0 and eu == 0:
                ed = field.rand_nonzero(rng)
            primary_errors[idx] = (ed, eu)
        else:
            protection_errors[idx] = {
                node: field.rand_nonzero(rng) for node in config.nodes()
            }
    failures = FailurePattern(
        frozenset(i for kind, i in fail_locs if kind == "c"),
        frozenset(k for kind, k in fail_locs if kind == "p"),
    )
    # Errors on failed protection paths would be ignored anyway; the sampling
    # above cannot produce them because locations are drawn without
    # replacement.
    return AdversaryPlan(primary_errors, protection_errors, failures, seed=seed)


def sweep_plans(
    config: NetworkConfig,
    n_e: int,
    n_f: int = 0,
    value_samples: int = 0,
    seed: int = 0,
) -> Iterator[AdversaryPlan]:
    """Exhaustive enumeration over every placement of n_e errors and n_f
    failures, the worst-case (omniscient) adversary at desk scale.

    ``value_samples == 0`` enumerates all value assignments (only sane for
    tiny fields and single errors); a positive count draws that many seeded
    random value assignments per placement.
    """
    field = config.field
    paths = [("c", i) for i in range(1, config.n + 1)] + [
        ("p", k) for k in range(1, config.m + 1)
    ]
    rng = random.Random(seed)
    nodes = config.nodes()

    for combo in itertools.combinations(paths, n_e + n_f):
        for err_locs in itertools.combinations(combo, n_e):
            fail_locs = [p for p in combo if p not in err_locs]
            failures = FailurePattern(
                frozenset(i for kind, i in fail_locs if kind == "c"),
                frozenset(k for kind, k in fail_locs if kind == "p"),
            )
            if any(kind == "p" and (idx in failures.protections) for kind, idx in err_locs):
                continue
            if value_samples == 0:
                yield from _exhaustive_values(config, err_locs, failures)
            else:
                for _ in range(value_samples):
                    primary_errors = {}
                    protection_errors = {}
                    for kind, idx in err_locs:
                        if kind == "c":
                            ed, eu = field.rand(rng), field.rand(rng)
                            if ed == 0 and eu == 0:
                                ed = field.rand_nonzero(rng)
                            primary_errors[idx] = (ed, eu)
                        else:
                            protection_errors[idx] = {
                                node: field.rand_nonzero(rng) for node in nodes
                            }
                    yield AdversaryPlan(primary_errors, protection_errors, failures)


def _exhaustive_values(config, err_locs, failures):
    field = config.field
    nodes = config.nodes()
    # All-value enumeration; protection errors get one shared nonzero value
    # per node position scanned jointly would explode, so each protection
    # error location enumerates a single value applied at every node.
    value_axes = []
    for kind, idx in err_locs:
        if kind == "c":
            pairs = [
                (ed, eu)
                for ed in field.elements()
                for eu in field.elements()
                if ed or eu
            ]
            value_axes.append([("c", idx, pair) for pair in pairs])
        else:
            value_axes.append([("p", idx, v) for v in field.nonzero()])
    for assignment in itertools.product(*value_axes):
        primary_errors = {}
        protection_errors = {}
        for kind, idx, val in assignment:
            if kind == "c":
                primary_errors[idx] = val
            else:
                protection_errors[idx] = {node: val for node in nodes}
        yield AdversaryPlan(primary_errors, protection_errors, failures)


def apply_plan(
    plan: AdversaryPlan, d: list[int], u: list[int], config: NetworkConfig
) -> tuple[list[int], list[int]]:
    """Corrupted primary receipts: d_hat_i = d_i + e_d_i, u_hat_i = u_i +
    e_u_i; failed primaries deliver zero in both directions."""
    field = config.field
    d_hat = list(d)
    u_hat = list(u)
    for i, (ed, eu) in plan.primary_errors.items():
        d_hat[i - 1] = field.add(d_hat[i - 1], ed)
        u_hat[i - 1] = field.add(u_hat[i - 1], eu)
    for i in plan.failures.primaries:
        d_hat[i - 1] = 0
        u_hat[i - 1] = 0
    return d_hat, u_hat


def plan_error_vector(
    plan: AdversaryPlan,
    node: Node,
    config: NetworkConfig,
    d: list[int],
    u: list[int],
) -> list[int]:
    """The length-(2n+M) error value vector E as seen by one node.

    Failed primaries appear as errors of known value (e_d = d, e_u = u,
    because the receipt is forced to zero); protection-path entries are the
    node's own aggregate.  Entries for failed protection paths are zeroed,
    matching the row removal on the observation side.
    """
    e = [0] * (2 * config.n + config.m)
    for i, (ed, eu) in plan.primary_errors.items():
        e[2 * (i - 1)] = ed
        e[2 * (i - 1) + 1] = eu
    for i in plan.failures.primaries:
        e[2 * (i - 1)] = d[i - 1]
        e[2 * (i - 1) + 1] = u[i - 1]
    for k, per_node in plan.protection_errors.items():
        if k in plan.failures.protections:
            continue
        e[2 * config.n + k - 1] = per_node.get(node, 0)
    return e
