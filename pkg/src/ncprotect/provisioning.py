"""Path provisioning: cost-optimal primary and protection routes.

Three binary-flow models over an inflated multigraph (each physical edge
copied ``inflation`` times, modeling parallel fibers):

* ILP1 -- the shared scheme: n primary paths plus 4 protection paths, the
  protection paths running from a virtual source s to a virtual sink t and
  passing through every connection end node; all paths mutually
  edge-disjoint.
* ILP2 -- the dedicated scheme: three mutually edge-disjoint routes per
  connection.
* ILP3 -- ILP1 without protection-protection disjointness, on the uninflated
  graph, used to construct a feasible (upper-bound) ILP1 solution by
  splitting the protection paths across parallel copies.

Model encoding notes (the auxiliary-variable reference):  a path is a set of
edge binaries x constrained by node degrees: degree 1 at its two terminals,
degree exactly 2 at nodes the path is required to visit, and degree 2*y at
every other node, with y a binary transit indicator.  The required-visit
encoding admits a path plus disjoint cycles covering required nodes; with
positive costs such solutions are never cheaper than necessary and the
independent feasibility checker accepts exactly the same set.  Virtual s/t
edges have zero cost and are exempt from disjointness (they are modeling
artifacts, not fibers).

Solving is delegated to scipy's exact MILP (HiGHS branch-and-bound) behind
the ``solve_exact`` contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

__all__ = [
    "Edge",
    "TopologyGraph",
    "ProvisionModel",
    "ProvisionSolution",
    "build_model",
    "export_lp",
    "solve_exact",
    "check_solution",
    "upper_bound_from_ilp3",
    "compare_schemes",
    "CostReport",
    "parse_topology",
    "load_topology",
    "dumbbell_instance",
]

VIRTUAL_SOURCE = "__s__"
VIRTUAL_SINK = "__t__"


class Edge(NamedTuple):
    u: str
    v: str
    cost: float


@dataclass(frozen=True)
class TopologyGraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    inflation: int = 4

    def __post_init__(self):
        known = set(self.nodes)
        for e in self.edges:
            if e.u not in known or e.v not in known:
                raise ValueError(f"edge {e} references an unknown node")
            if e.u == e.v:
                raise ValueError(f"self-loop {e} not allowed")
            if e.cost <= 0:
                raise ValueError(f"edge {e} must have positive cost")
        if self.inflation < 1:
            raise ValueError("inflation factor must be at least 1")


class EdgeInstance(NamedTuple):
    u: str
    v: str
    cost: float
    base: int    # index into TopologyGraph.edges, or -1 for a virtual edge
    copy: int


class PathSpec(NamedTuple):
    path_id: int
    label: str
    kind: str                      # "primary" | "protection" | "route"
    terminals: tuple[str, str]
    required: frozenset[str]
    allow_virtual: bool
    group: int                     # connection index for ILP2 route triples, else -1


@dataclass
class ProvisionModel:
    kind: str
    graph: TopologyGraph
    connections: tuple[tuple[str, str], ...]
    inflation_used: int
    edge_instances: list[EdgeInstance]
    paths: list[PathSpec]
    var_names: list[str] = dc_field(default_factory=list)
    var_index: dict = dc_field(default_factory=dict)
    objective: list[float] = dc_field(default_factory=list)
    # (name, {var position: coefficient}, sense, rhs); sense in {"=", "<="}
    constraints: list = dc_field(default_factory=list)
    x_vars: dict = dc_field(default_factory=dict)   # (path_id, edge_idx) -> var pos

    def _new_var(self, name: str, cost: float) -> int:
        pos = len(self.var_names)
        self.var_names.append(name)
        self.var_index[name] = pos
        self.objective.append(cost)
        return pos


def _edge_instances(graph: TopologyGraph, factor: int, end_nodes: Sequence[str]):
    out = []
    for base, e in enumerate(graph.edges):
        for copy in range(factor):
            out.append(EdgeInstance(e.u, e.v, e.cost, base, copy))
    s_nodes = sorted({s for s, _ in end_nodes}) if end_nodes else []
    t_nodes = sorted({t for _, t in end_nodes}) if end_nodes else []
    for v in s_nodes:
        out.append(EdgeInstance(VIRTUAL_SOURCE, v, 0.0, -1, 0))
    for v in t_nodes:
        out.append(EdgeInstance(VIRTUAL_SINK, v, 0.0, -1, 0))
    return out


def _add_path(model: ProvisionModel, path: PathSpec):
    nodes = set(model.graph.nodes) | {VIRTUAL_SOURCE, VIRTUAL_SINK}
    incident: dict[str, list[int]] = {v: [] for v in nodes}
    for ei, inst in enumerate(model.edge_instances):
        if inst.base < 0 and not path.allow_virtual:
            continue
        var = model._new_var(f"x_p{path.path_id}_e{ei}", inst.cost)
        model.x_vars[(path.path_id, ei)] = var
        incident[inst.u].append(var)
        incident[inst.v].append(var)
    a, b = path.terminals
    for v in sorted(nodes):
        vars_here = incident[v]
        if not vars_here:
            continue
        coefs = {var: 1.0 for var in vars_here}
        if v in (a, b):
            model.constraints.append((f"deg_p{path.path_id}_{v}", coefs, "=", 1.0))
        elif v in path.required:
            model.constraints.append((f"deg_p{path.path_id}_{v}", coefs, "=", 2.0))
        else:
            yvar = model._new_var(f"y_p{path.path_id}_{v}", 0.0)
            coefs[yvar] = -2.0
            model.constraints.append((f"deg_p{path.path_id}_{v}", coefs, "=", 0.0))


def build_model(
    kind: str,
    graph: TopologyGraph,
    connections: Sequence[tuple[str, str]],
    protection_count: int = 4,
) -> ProvisionModel:
    """Assemble the requested formulation as an explicit constraint list."""
    kind = kind.upper()
    if kind not in ("ILP1", "ILP2", "ILP3"):
        raise ValueError(f"unknown model kind {kind}")
    known = set(graph.nodes)
    for s, t in connections:
        if s not in known or t not in known:
            raise ValueError(f"connection ({s}, {t}) endpoint not in graph")

    factor = 1 if kind == "ILP3" else graph.inflation
    needs_virtual = kind in ("ILP1", "ILP3") and connections
    edge_instances = _edge_instances(
        graph, factor, list(connections) if needs_virtual else []
    )
    model = ProvisionModel(
        kind=kind,
        graph=graph,
        connections=tuple(connections),
        inflation_used=factor,
        edge_instances=edge_instances,
        paths=[],
    )
    if not connections:
        return model

    end_nodes = frozenset(v for pair in connections for v in pair)
    pid = 0
    if kind in ("ILP1", "ILP3"):
        for ci, (s, t) in enumerate(connections):
            model.paths.append(
                PathSpec(pid, f"primary{ci + 1}", "primary", (s, t), frozenset(), False, ci)
            )
            pid += 1
        for k in range(protection_count):
            model.paths.append(
                PathSpec(
                    pid,
                    f"protection{k + 1}",
                    "protection",
                    (VIRTUAL_SOURCE, VIRTUAL_SINK),
                    end_nodes,
                    True,
                    -1,
                )
            )
            pid += 1
    else:  # ILP2
        for ci, (s, t) in enumerate(connections):
            for l in range(3):
                model.paths.append(
                    PathSpec(pid, f"route{ci + 1}_{l + 1}", "route", (s, t), frozenset(), False, ci)
                )
                pid += 1

    for path in model.paths:
        _add_path(model, path)

    # Disjointness groups, per real edge instance.
    primaries = [p for p in model.paths if p.kind == "primary"]
    protections = [p for p in model.paths if p.kind == "protection"]
    for ei, inst in enumerate(model.edge_instances):
        if inst.base < 0:
            continue
        if kind == "ILP1":
            coefs = {
                model.x_vars[(p.path_id, ei)]: 1.0
                for p in model.paths
                if (p.path_id, ei) in model.x_vars
            }
            model.constraints.append((f"disj_e{ei}", coefs, "<=", 1.0))
        elif kind == "ILP3":
            prim = {model.x_vars[(p.path_id, ei)]: 1.0 for p in primaries}
            model.constraints.append((f"disj_prim_e{ei}", dict(prim), "<=", 1.0))
            for p in protections:
                coefs = dict(prim)
                coefs[model.x_vars[(p.path_id, ei)]] = 1.0
                model.constraints.append(
                    (f"disj_prot{p.path_id}_e{ei}", coefs, "<=", 1.0)
                )
        else:  # ILP2: the three routes of one connection are edge-disjoint
            by_group: dict[int, dict] = {}
            for p in model.paths:
                by_group.setdefault(p.group, {})[model.x_vars[(p.path_id, ei)]] = 1.0
            for g, coefs in sorted(by_group.items()):
                model.constraints.append((f"disj_c{g + 1}_e{ei}", coefs, "<=", 1.0))
    return model


# ---------------------------------------------------------------------------
# LP export


def _fmt(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(x)


def export_lp(model: ProvisionModel) -> str:
    """CPLEX LP text format; byte-stable for identical models."""
    lines = [f"\\ ncprotect provisioning model {model.kind}", "Minimize"]
    terms = [
        f"{_fmt(c)} {name}"
        for name, c in zip(model.var_names, model.objective)
        if c != 0
    ]
    lines.append(" obj: " + (" + ".join(terms) if terms else "0"))
    lines.append("Subject To")
    for name, coefs, sense, rhs in model.constraints:
        parts = []
        for pos in sorted(coefs):
            c = coefs[pos]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = model.var_names[pos] if mag == 1 else f"{_fmt(mag)} {model.var_names[pos]}"
            if not parts and sign == "+":
                parts.append(term)
            else:
                parts.append(f"{sign} {term}")
        op = {"=": "=", "<=": "<="}[sense]
        lines.append(f" {name}: " + " ".join(parts) + f" {op} {_fmt(rhs)}")
    lines.append("Binaries")
    for name in model.var_names:
        lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exact solving


@dataclass
class ProvisionSolution:
    status: str                       # "optimal" | "infeasible" | "budget_exhausted"
    cost: float
    path_edges: dict                  # path_id -> tuple of edge instance indices
    optimality: str                   # "exact" | "upper-bound"

    @property
    def feasible(self) -> bool:
        return self.status == "optimal"


def solve_exact(model: ProvisionModel, node_budget: int | None = None) -> ProvisionSolution:
    """Provably optimal 0/1 solution via branch-and-bound (HiGHS), or a
    budget-exhausted status when the node budget runs out."""
    nvars = len(model.var_names)
    if nvars == 0:
        return ProvisionSolution("optimal", 0.0, {}, "exact")
    rows, cols, vals, lb, ub = [], [], [], [], []
    for ri, (_, coefs, sense, rhs) in enumerate(model.constraints):
        for pos, c in coefs.items():
            rows.append(ri)
            cols.append(pos)
            vals.append(c)
        if sense == "=":
            lb.append(rhs)
            ub.append(rhs)
        else:
            lb.append(-math.inf)
            ub.append(rhs)
    a = sparse.csr_matrix(
        (vals, (rows, cols)), shape=(len(model.constraints), nvars)
    )
    options = {}
    if node_budget is not None:
        options["node_limit"] = node_budget
    res = milp(
        c=np.array(model.objective),
        constraints=LinearConstraint(a, np.array(lb), np.array(ub)),
        integrality=np.ones(nvars),
        bounds=Bounds(0, 1),
        options=options,
    )
    if res.status == 2:
        return ProvisionSolution("infeasible", math.inf, {}, "exact")
    if res.status != 0 or res.x is None:
        return ProvisionSolution("budget_exhausted", math.inf, {}, "exact")
    assignment = [int(round(v)) for v in res.x]
    path_edges = {
        p.path_id: tuple(
            ei
            for ei in range(len(model.edge_instances))
            if (p.path_id, ei) in model.x_vars and assignment[model.x_vars[(p.path_id, ei)]]
        )
        for p in model.paths
    }
    cost = sum(
        model.edge_instances[ei].cost
        for edges in path_edges.values()
        for ei in edges
    )
    return ProvisionSolution("optimal", cost, path_edges, "exact")


def check_solution(model: ProvisionModel, path_edges: dict) -> list[str]:
    """Independent feasibility check, recomputed from graph semantics rather
    than the constraint matrices.  Returns a list of violations (empty when
    feasible)."""
    problems = []
    for path in model.paths:
        chosen = [model.edge_instances[ei] for ei in path_edges.get(path.path_id, ())]
        if any(inst.base < 0 for inst in chosen) and not path.allow_virtual:
            problems.append(f"{path.label}: uses virtual edges")
        degree: dict[str, int] = {}
        for inst in chosen:
            degree[inst.u] = degree.get(inst.u, 0) + 1
            degree[inst.v] = degree.get(inst.v, 0) + 1
        a, b = path.terminals
        for v in (a, b):
            if degree.get(v, 0) != 1:
                problems.append(f"{path.label}: terminal {v} has degree {degree.get(v, 0)}")
        for v in path.required:
            if degree.get(v, 0) != 2:
                problems.append(f"{path.label}: required node {v} has degree {degree.get(v, 0)}")
        for v, deg in degree.items():
            if v in (a, b) or v in path.required:
                continue
            if deg % 2:
                problems.append(f"{path.label}: node {v} has odd degree {deg}")
    # Disjointness, edge instance by edge instance.
    usage: dict[int, list[PathSpec]] = {}
    for path in model.paths:
        for ei in path_edges.get(path.path_id, ()):
            if model.edge_instances[ei].base >= 0:
                usage.setdefault(ei, []).append(path)
    for ei, users in usage.items():
        if len(users) < 2:
            continue
        labels = [p.label for p in users]
        if model.kind == "ILP1":
            problems.append(f"edge {ei} shared by {labels}")
        elif model.kind == "ILP3":
            kinds = [p.kind for p in users]
            if kinds.count("primary") + (1 if "protection" in kinds else 0) > 1:
                if kinds.count("protection") != len(kinds):
                    problems.append(f"edge {ei} shared by {labels}")
        else:  # ILP2
            groups = [p.group for p in users]
            if len(set(groups)) != len(groups):
                problems.append(f"edge {ei} shared within a route triple: {labels}")
    return problems


# ---------------------------------------------------------------------------
# the upper-bound construction


def upper_bound_from_ilp3(
    graph: TopologyGraph,
    half_connections: Sequence[tuple[str, str]],
    ilp3_model: ProvisionModel,
    ilp3_solution: ProvisionSolution,
) -> tuple[ProvisionModel, ProvisionSolution]:
    """Lift an optimal ILP3 solution on the half connection set into a
    feasible ILP1 solution for the duplicated set on the inflated graph.

    Protection path k keeps its edges but moves to parallel copy k, restoring
    protection-protection disjointness; each primary path is duplicated onto
    an unused parallel copy.  The result is verified feasible and its cost
    upper-bounds the ILP1 optimum.
    """
    if graph.inflation < 4:
        raise ValueError("the construction needs inflation factor >= 4")
    if not ilp3_solution.feasible:
        raise ValueError("need a feasible ILP3 solution")
    full = list(half_connections) + list(half_connections)
    ilp1 = build_model("ILP1", graph, full)
    lookup = {
        (inst.base, inst.copy, inst.u, inst.v): ei
        for ei, inst in enumerate(ilp1.edge_instances)
    }

    def lift(ei3: int, copy: int) -> int:
        inst = ilp3_model.edge_instances[ei3]
        key = (inst.base, copy if inst.base >= 0 else 0, inst.u, inst.v)
        if key not in lookup:
            raise AssertionError("parallel copy exhausted in the lifting construction")
        return lookup[key]

    nh = len(half_connections)
    path_edges: dict[int, tuple[int, ...]] = {}
    for p3 in ilp3_model.paths:
        edges3 = ilp3_solution.path_edges.get(p3.path_id, ())
        if p3.kind == "primary":
            # original on copy 0, duplicate on copy 1
            path_edges[p3.group] = tuple(lift(ei, 0) for ei in edges3)
            path_edges[nh + p3.group] = tuple(lift(ei, 1) for ei in edges3)
        else:
            k = p3.path_id - nh  # protection index 0..3
            path_edges[2 * nh + k] = tuple(lift(ei, k) for ei in edges3)
    problems = check_solution(ilp1, path_edges)
    if problems:
        raise AssertionError(f"lifted solution is infeasible: {problems}")
    cost = sum(
        ilp1.edge_instances[ei].cost for edges in path_edges.values() for ei in edges
    )
    return ilp1, ProvisionSolution("optimal", cost, path_edges, "upper-bound")


# ---------------------------------------------------------------------------
# scheme comparison


@dataclass
class CostReport:
    n: int
    cost_4n: float
    cost_4n_kind: str       # "exact" | "upper-bound"
    cost_2p1: float
    gain: float             # (cost_2p1 - cost_4n) / cost_2p1

    def to_csv(self) -> str:
        return (
            "n,cost_4n,cost_4n_kind,cost_2p1,percentage_gain\n"
            f"{self.n},{self.cost_4n:g},{self.cost_4n_kind},{self.cost_2p1:g},{self.gain:.4%}\n"
        )


def compare_schemes(
    graph: TopologyGraph,
    half_connections: Sequence[tuple[str, str]],
    node_budget: int | None = None,
    exact_4n: bool = False,
) -> CostReport:
    """Cost of the shared 4+n scheme (upper bound via ILP3 lifting, or exact
    ILP1 on tiny instances) versus the dedicated 2+1 scheme (exact ILP2,
    solved connection by connection since the triples are independent)."""
    full = list(half_connections) + list(half_connections)
    if exact_4n:
        ilp1 = build_model("ILP1", graph, full)
        sol = solve_exact(ilp1, node_budget)
        if not sol.feasible:
            raise RuntimeError(f"ILP1 did not solve: {sol.status}")
        cost_4n, kind_4n = sol.cost, "exact"
    else:
        ilp3 = build_model("ILP3", graph, half_connections)
        sol3 = solve_exact(ilp3, node_budget)
        if not sol3.feasible:
            raise RuntimeError(f"ILP3 did not solve: {sol3.status}")
        _, ub = upper_bound_from_ilp3(graph, half_connections, ilp3, sol3)
        cost_4n, kind_4n = ub.cost, "upper-bound"

    cost_2p1 = 0.0
    for pair in full:
        m2 = build_model("ILP2", graph, [pair])
        sol2 = solve_exact(m2, node_budget)
        if not sol2.feasible:
            raise RuntimeError(f"ILP2 infeasible for connection {pair}")
        cost_2p1 += sol2.cost
    gain = (cost_2p1 - cost_4n) / cost_2p1
    return CostReport(len(full), cost_4n, kind_4n, cost_2p1, gain)


# ---------------------------------------------------------------------------
# topology input


def parse_topology(text: str) -> tuple[TopologyGraph, list[tuple[str, str]]]:
    """Plain-text topology: ``node A`` / ``edge A B cost`` / ``connection A B``
    lines plus an optional ``inflation K``; '#' starts a comment."""
    nodes: list[str] = []
    edges: list[Edge] = []
    connections: list[tuple[str, str]] = []
    inflation = 4
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0].lower()
        try:
            if kw == "node":
                nodes.extend(parts[1:])
            elif kw == "edge":
                edges.append(Edge(parts[1], parts[2], float(parts[3])))
            elif kw in ("connection", "connect"):
                connections.append((parts[1], parts[2]))
            elif kw == "inflation":
                inflation = int(parts[1])
            else:
                raise ValueError(f"unknown keyword {kw!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"topology line {lineno}: {raw!r}: {exc}") from exc
    return TopologyGraph(tuple(nodes), tuple(edges), inflation), connections


def load_topology(path) -> tuple[TopologyGraph, list[tuple[str, str]]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_topology(fh.read())


def dumbbell_instance(
    n_half: int,
    bridges: int = 6,
    long_cost: float = 50.0,
    local_cost: float = 1.0,
) -> tuple[TopologyGraph, list[tuple[str, str]]]:
    """Synthetic long-haul family: two cliques joined by a bundle of costly
    two-hop bridges; connections run clique to clique.  The shared scheme's
    advantage grows with n because only 4+n paths cross the expensive bundle
    versus 3n for the dedicated scheme."""
    # Two relay nodes per side keep the hub reachable by the protection path
    # even when every terminal-to-hub edge is taken by a primary route.
    left = [f"S{i}" for i in range(1, n_half + 1)] + ["HL", "LA", "LB"]
    right = [f"T{i}" for i in range(1, n_half + 1)] + ["HR", "RA", "RB"]
    mids = [f"B{i}" for i in range(1, bridges + 1)]
    nodes = tuple(left + right + mids)
    edges = []
    for group in (left, right):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                edges.append(Edge(group[i], group[j], local_cost))
    for b in mids:
        edges.append(Edge("HL", b, long_cost))
        edges.append(Edge(b, "HR", long_cost))
    connections = [(f"S{i}", f"T{i}") for i in range(1, n_half + 1)]
    return TopologyGraph(nodes, tuple(edges), 4), connections
