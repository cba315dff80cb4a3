"""Correcting two simultaneous path errors with eight protection paths.

With M = 4 n_e protection paths and coefficients satisfying the n_e-error
independence condition, every node can correct any n_e path errors by
enumerating the error patterns that touch its connection.
"""

import random

from ncprotect import (
    assign_random,
    decode_enumerate,
    gf,
    random_plan,
    run_round,
    verify_condition,
)

field = gf(16)
matrix = assign_random(4, 8, field, seed=7)    # n = 4, M = 8 = 4 * n_e, n_e = 2
report = verify_condition(matrix, ("theorem3", 2))
print(f"2-error condition verified over {report.checked} column sets:", bool(report))

rng = random.Random(0)
d = [field.rand(rng) for _ in range(4)]
u = [field.rand(rng) for _ in range(4)]

for seed in range(3):
    plan = random_plan(matrix.config, n_e=2, n_f=0, seed=seed)
    where = sorted(plan.primary_errors) + [f"p{k}" for k in sorted(plan.protection_errors)]
    obs = run_round(matrix.config, matrix, d, u, plan)
    ok = all(
        decode_enumerate(matrix, o, 2) == (d if node.side == "T" else u)[node.index - 1]
        for node, o in obs.items()
    )
    print(f"errors on {where}: all 8 nodes recover -> {ok}")
