"""Protecting three connections with four shared protection paths.

Each connection S_i <-> T_i carries one data unit per direction per round.
Four shared protection paths carry linear combinations of everyone's data;
each end node computes a syndrome from its own receipt and the protection
sums, and corrects any single path error on its own -- no cooperation.
"""

from ncprotect import (
    AdversaryPlan,
    assign_simple,
    decode_single,
    gf,
    run_round,
    verify_condition,
)

field = gf(8)                       # GF(2^8): one byte per data unit
matrix = assign_simple(3, field)    # the sparse four-path scheme

print("coefficient rows (H | I):")
for row in matrix.rows:
    print("  ", row)
print("single-error condition holds:", bool(verify_condition(matrix, "theorem2")))

d = [0x11, 0x22, 0x33]              # S -> T data units
u = [0xAA, 0xBB, 0xCC]              # T -> S data units

# The adversary corrupts connection 2 in both directions.
plan = AdversaryPlan(primary_errors={2: (0x5E, 0x7F)})
observations = run_round(matrix.config, matrix, d, u, plan)

print("\nnode  received  decoded  expected")
for node, obs in observations.items():
    expected = (d if node.side == "T" else u)[node.index - 1]
    decoded = decode_single(matrix, obs)
    print(f"{node.side}{node.index:>4}  0x{obs.p_m:02X}      0x{decoded:02X}     0x{expected:02X}"
          + ("   <- corrected" if obs.p_m != decoded else ""))
