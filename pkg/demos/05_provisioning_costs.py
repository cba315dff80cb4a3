"""Why share protection paths: 4+n versus 2+1 provisioning cost.

The dedicated scheme reserves two backup routes per connection (3n paths
total); the shared scheme reserves n primaries plus only 4 protection paths.
On long-haul topologies where cross-country capacity is expensive, sharing
wins, and the advantage grows with the number of connections.
"""

from ncprotect import (
    build_model,
    compare_schemes,
    dumbbell_instance,
    export_lp,
    load_topology,
    solve_exact,
)

print("dumbbell family (two cheap regional cliques, expensive long-haul bundle):")
print("n,shared 4+n cost,dedicated 2+1 cost,gain")
for n_half in (2, 3, 4):
    graph, connections = dumbbell_instance(n_half)
    rep = compare_schemes(graph, connections)
    print(f"{rep.n},{rep.cost_4n:g},{rep.cost_2p1:g},{rep.gain:.1%}")

print("\nlab topology, exact shared solve + model export:")
graph, connections = load_topology("topologies/labnet03.txt")
model = build_model("ILP3", graph, connections)
sol = solve_exact(model)
print(f"ILP3 optimum: {sol.cost:g} ({sol.status})")
print("first lines of the exported model:")
for line in export_lp(model).splitlines()[:4]:
    print(" ", line)
