"""Risk-chain graph analytics.

A scenario's nodes and edges form a directed graph. Sources are the
nodes where a risk enters (in-degree 0, or prevention-staged nodes when
a cycle leaves no degree-zero entry) and sinks are where it lands
(out-degree 0, falling back to response-staged nodes). The analyses
answer three questions about the chain:

* which source-to-sink paths carry no control at all (uncut paths),
* how many controlled nodes the weakest path passes through
  (minimum defense depth),
* which smallest set of nodes would, if defended, sever every path
  (exact minimum vertex cut, independent of control statuses).

Path enumeration is capped (default 10000) and reports truncation via
the ``capped`` flag; the cut computation does not depend on the
enumerated list and stays exact regardless of the cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import (
    WARNING,
    ChainEdge,
    ControlStatus,
    Diagnostic,
    Scenario,
    Stage,
)
from .taxonomy import FactorPath, Taxonomy, builtin_taxonomy

PATH_CAP = 10000

DEFAULT_STATUSES = frozenset({ControlStatus.implemented})


class NoTerminiError(Exception):
    """Raised when a chain has neither degree-based nor staged termini."""


@dataclass(frozen=True)
class GraphNode:
    node_id: str
    factor: FactorPath
    stage: Stage
    layer: int


@dataclass(frozen=True)
class ChainGraph:
    scenario_id: str
    nodes: dict[str, GraphNode]
    edges: tuple[ChainEdge, ...]
    out_adj: dict[str, tuple[str, ...]]
    in_adj: dict[str, tuple[str, ...]]

    def out_degree(self, node_id: str) -> int:
        return len(self.out_adj[node_id])

    def in_degree(self, node_id: str) -> int:
        return len(self.in_adj[node_id])


@dataclass(frozen=True)
class CoverageReport:
    scenario_id: str
    statuses: frozenset[ControlStatus]
    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    path_count: int
    capped: bool
    uncut_paths: tuple[tuple[str, ...], ...]
    min_defense_depth: int
    min_cut_size: int
    min_cut_example: tuple[str, ...]
    per_node: dict[str, int]


def build_graph(scenario: Scenario, taxonomy: Taxonomy | None = None) -> ChainGraph:
    """Build the chain graph for a structurally valid scenario."""
    taxonomy = taxonomy or builtin_taxonomy()
    nodes: dict[str, GraphNode] = {}
    for node in scenario.nodes:
        layer = taxonomy.find_layer(node.factor.layer_id)
        nodes[node.node_id] = GraphNode(
            node_id=node.node_id, factor=node.factor, stage=node.stage, layer=layer.ordinal
        )
    out_lists: dict[str, list[str]] = {node_id: [] for node_id in nodes}
    in_lists: dict[str, list[str]] = {node_id: [] for node_id in nodes}
    for edge in scenario.edges:
        out_lists[edge.from_node].append(edge.to_node)
        in_lists[edge.to_node].append(edge.from_node)
    return ChainGraph(
        scenario_id=scenario.id,
        nodes=nodes,
        edges=scenario.edges,
        out_adj={k: tuple(sorted(v)) for k, v in out_lists.items()},
        in_adj={k: tuple(sorted(v)) for k, v in in_lists.items()},
    )


def sources_and_sinks(graph: ChainGraph) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Degree-based termini, falling back to stages when a cycle hides them."""
    sources = sorted(v for v in graph.nodes if graph.in_degree(v) == 0)
    if not sources:
        sources = sorted(v for v, n in graph.nodes.items() if n.stage is Stage.prevention)
    sinks = sorted(v for v in graph.nodes if graph.out_degree(v) == 0)
    if not sinks:
        sinks = sorted(v for v, n in graph.nodes.items() if n.stage is Stage.response)
    if not sources or not sinks:
        raise NoTerminiError(
            f"scenario {graph.scenario_id} has no identifiable "
            f"{'sources' if not sources else 'sinks'}"
        )
    return tuple(sources), tuple(sinks)


def enumerate_paths(
    graph: ChainGraph, cap: int = PATH_CAP
) -> tuple[list[tuple[str, ...]], bool]:
    """All simple source-to-sink paths, lexicographic by node-id sequence.

    Returns at most ``cap`` paths plus a flag saying whether the list was
    truncated. A node that is both a source and a sink contributes the
    single-node path.
    """
    sources, sinks = sources_and_sinks(graph)
    sink_set = set(sinks)
    paths: list[tuple[str, ...]] = []

    def emit(path: list[str]) -> bool:
        paths.append(tuple(path))
        return len(paths) > cap

    for start in sources:
        # iterative DFS; sorted adjacency yields lexicographic emission order
        path = [start]
        on_path = {start}
        if start in sink_set and emit(path):
            return paths[:cap], True
        stack = [iter(graph.out_adj[start])]
        while stack:
            advanced = False
            for nxt in stack[-1]:
                if nxt in on_path:
                    continue
                path.append(nxt)
                on_path.add(nxt)
                if nxt in sink_set and emit(path):
                    return paths[:cap], True
                stack.append(iter(graph.out_adj[nxt]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
    return paths, False


# --- minimum vertex cut ----------------------------------------------------
#
# Standard reduction: split every node v into v_in -> v_out. The splitting
# arc carries capacity 1 when v may be cut and effectively-infinite
# otherwise; original edges and the super-terminal arcs are infinite. The
# max-flow value then equals the minimum number of cuttable nodes whose
# removal disconnects sources from sinks (Menger), and INF = n + 1 acts as
# the "no finite cut" sentinel.


def _flow_value(
    graph: ChainGraph,
    sources: tuple[str, ...],
    sinks: tuple[str, ...],
    eligible: set[str],
    removed: set[str],
    forced_out: set[str],
    inf: int,
) -> int:
    cap: dict[object, dict[object, int]] = {}

    def add(u: object, v: object, c: int):
        cap.setdefault(u, {})[v] = cap.get(u, {}).get(v, 0) + c
        cap.setdefault(v, {}).setdefault(u, 0)

    for v in graph.nodes:
        if v in removed:
            c = 0
        elif v in eligible and v not in forced_out:
            c = 1
        else:
            c = inf
        add(("i", v), ("o", v), c)
    for edge in graph.edges:
        add(("o", edge.from_node), ("i", edge.to_node), inf)
    src, dst = ("S",), ("T",)
    cap.setdefault(src, {})
    cap.setdefault(dst, {})
    for s in sources:
        add(src, ("i", s), inf)
    for t in sinks:
        add(("o", t), dst, inf)

    total = 0
    while total < inf:
        parent: dict[object, object] = {src: src}
        queue: deque[object] = deque([src])
        while queue and dst not in parent:
            u = queue.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if dst not in parent:
            return total
        bottleneck = inf
        v = dst
        while v != src:
            u = parent[v]
            bottleneck = min(bottleneck, cap[u][v])
            v = u
        v = dst
        while v != src:
            u = parent[v]
            cap[u][v] -= bottleneck
            cap[v][u] += bottleneck
            v = u
        total += bottleneck
    return inf


def min_cut(
    graph: ChainGraph, sources: tuple[str, ...], sinks: tuple[str, ...]
) -> tuple[int, tuple[str, ...]]:
    """Exact minimum vertex cut between sources and sinks.

    Interior nodes are preferred; termini become eligible only when no
    interior cut can disconnect (for instance a node that is both a
    source and a sink). The example is the lexicographically least
    minimum cut, found by greedily forcing candidates in ascending order
    in or out of the cut and re-solving.
    """
    inf = len(graph.nodes) + 1
    termini = set(sources) | set(sinks)
    eligible = {v for v in graph.nodes if v not in termini}
    size = _flow_value(graph, sources, sinks, eligible, set(), set(), inf)
    if size >= inf:
        eligible = set(graph.nodes)
        size = _flow_value(graph, sources, sinks, eligible, set(), set(), inf)
    if size == 0:
        return 0, ()
    chosen: list[str] = []
    excluded: set[str] = set()
    for candidate in sorted(eligible):
        if len(chosen) == size:
            break
        rest = _flow_value(
            graph, sources, sinks, eligible, set(chosen) | {candidate}, excluded, inf
        )
        if len(chosen) + 1 + rest == size:
            chosen.append(candidate)
        else:
            excluded.add(candidate)
    return size, tuple(chosen)


def controlled_nodes(
    scenario: Scenario, statuses: frozenset[ControlStatus] = DEFAULT_STATUSES
) -> set[str]:
    """Nodes carrying at least one control whose status is considered live."""
    return {
        c.target
        for c in scenario.controls
        if c.status in statuses and scenario.find_node(c.target) is not None
    }


def coverage(
    scenario: Scenario,
    statuses: frozenset[ControlStatus] = DEFAULT_STATUSES,
    cap: int = PATH_CAP,
    taxonomy: Taxonomy | None = None,
) -> CoverageReport:
    """Full coverage report for one scenario.

    ``min_defense_depth`` is the minimum over enumerated paths of the
    number of controlled nodes on the path (0 when no paths exist), and
    ``uncut_paths`` lists the enumerated paths with no controlled node.
    The cut fields ignore controls entirely: they describe where defense
    placement is structurally decisive.
    """
    graph = build_graph(scenario, taxonomy)
    sources, sinks = sources_and_sinks(graph)
    paths, capped = enumerate_paths(graph, cap)
    controlled = controlled_nodes(scenario, statuses)
    uncut = tuple(p for p in paths if not any(v in controlled for v in p))
    depth = min((sum(1 for v in p if v in controlled) for p in paths), default=0)
    size, example = min_cut(graph, sources, sinks)
    counts = {v: 0 for v in sorted(graph.nodes)}
    for p in paths:
        for v in p:
            counts[v] += 1
    return CoverageReport(
        scenario_id=scenario.id,
        statuses=frozenset(statuses),
        sources=sources,
        sinks=sinks,
        path_count=len(paths),
        capped=capped,
        uncut_paths=uncut,
        min_defense_depth=depth,
        min_cut_size=size,
        min_cut_example=example,
        per_node=counts,
    )


def report_to_dict(report: CoverageReport) -> dict:
    return {
        "scenario": report.scenario_id,
        "statuses": sorted(s.name for s in report.statuses),
        "sources": list(report.sources),
        "sinks": list(report.sinks),
        "path_count": report.path_count,
        "capped": report.capped,
        "uncut_paths": [list(p) for p in report.uncut_paths],
        "min_defense_depth": report.min_defense_depth,
        "min_cut_size": report.min_cut_size,
        "min_cut_example": list(report.min_cut_example),
        "per_node": dict(report.per_node),
    }


def _has_cycle(graph: ChainGraph) -> bool:
    indeg = {v: graph.in_degree(v) for v in graph.nodes}
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in graph.out_adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen < len(graph.nodes)


def lint_chain(scenario: Scenario, taxonomy: Taxonomy | None = None) -> list[Diagnostic]:
    """Advisory checks on chain shape. Warnings only, never errors."""
    graph = build_graph(scenario, taxonomy)
    diags: list[Diagnostic] = []

    def warn(code: str, message: str, location: str):
        diags.append(Diagnostic(WARNING, code, message, location=location))

    for edge in scenario.edges:
        from_stage = graph.nodes[edge.from_node].stage
        to_stage = graph.nodes[edge.to_node].stage
        if to_stage.value < from_stage.value:
            warn(
                "stage-regression",
                f"edge {edge.from_node} -> {edge.to_node} moves from "
                f"{from_stage.name} back to {to_stage.name}",
                f"{scenario.id}/{edge.from_node}->{edge.to_node}",
            )
    if scenario.edges:
        for node in scenario.nodes:
            if graph.in_degree(node.node_id) == 0 and graph.out_degree(node.node_id) == 0:
                warn(
                    "isolated-node",
                    f"node {node.node_id!r} is on no edge",
                    f"{scenario.id}/{node.node_id}",
                )
    if not scenario.controls:
        warn(
            "uncontrolled-scenario",
            f"scenario {scenario.id} has no controls",
            scenario.id,
        )
    if _has_cycle(graph):
        warn("cycle-present", f"scenario {scenario.id} chain contains a cycle", scenario.id)
    return diags
