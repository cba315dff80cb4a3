"""Surviving a known failure plus an unknown error at the same time.

Failures differ from errors: their location is known to every node.  A
failed primary delivers zero (so correcting it reconstructs the lost data
outright); a failed protection path is simply ignored.  M = 4 n_e + 2 n_f
paths suffice for n_e errors plus n_f failures.
"""

import random

from ncprotect import (
    AdversaryPlan,
    FailurePattern,
    assign_random,
    decode_with_failures,
    gf,
    run_round,
    verify_condition,
)

field = gf(16)
matrix = assign_random(3, 6, field, seed=11)   # M = 6 = 4*1 + 2*1
print("1-error + 1-failure condition:", bool(verify_condition(matrix, ("theorem4", 1, 1))))

rng = random.Random(1)
d = [field.rand(rng) for _ in range(3)]
u = [field.rand(rng) for _ in range(3)]

# Connection 2's working path is down AND connection 3 is corrupted.
plan = AdversaryPlan(
    primary_errors={3: (0x0BAD, 0x0DAD)},
    failures=FailurePattern(frozenset({2}), frozenset()),
)
obs = run_round(matrix.config, matrix, d, u, plan)

print("\nnode  received  decoded  expected")
for node, o in obs.items():
    expected = (d if node.side == "T" else u)[node.index - 1]
    decoded = decode_with_failures(matrix, o, 1)
    note = ""
    if node.index == 2:
        note = "   <- reconstructed from zero receipt"
    elif o.p_m != decoded:
        note = "   <- corrected"
    print(f"{node.side}{node.index:>4}  0x{o.p_m:04X}    0x{decoded:04X}   0x{expected:04X}{note}")
