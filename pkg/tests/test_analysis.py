"""Tests for chain graph analytics: paths, coverage, min cut, lint."""

import random

import pytest

from rcmodel import (
    ChainEdge,
    Control,
    ControlStatus,
    FactorNode,
    FactorPath,
    NoTerminiError,
    Ordinal,
    Scenario,
    Stage,
    build_graph,
    controlled_nodes,
    coverage,
    enumerate_paths,
    lint_chain,
    min_cut,
    report_to_dict,
    sources_and_sinks,
    with_control_statuses,
)

from oracles import brute_force_min_cut, make_random_dag, still_connected

FP = FactorPath.from_text

LAYER_FACTOR = {
    0: "ai_system.data.data_quality",
    1: "service_provider.operation.safety",
    2: "users.action.proper_use",
}


def node(nid, stage=Stage.detection, layer=0):
    return FactorNode(node_id=nid, factor=FP(LAYER_FACTOR[layer]), stage=stage)


def scenario(nodes, edges, controls=(), sid="S"):
    return Scenario(
        id=sid,
        title="t",
        impact=Ordinal.low,
        likelihood=Ordinal.low,
        nodes=tuple(nodes),
        edges=tuple(ChainEdge(a, b) for a, b in edges),
        controls=tuple(controls),
    )


def diamond():
    return scenario(
        [
            node("a", Stage.prevention),
            node("b"),
            node("c"),
            node("d", Stage.response, layer=2),
        ],
        [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )


# --- graph construction -------------------------------------------------------


def test_build_graph_shape():
    g = build_graph(diamond())
    assert set(g.nodes) == {"a", "b", "c", "d"}
    assert g.out_adj["a"] == ("b", "c")
    assert g.in_adj["d"] == ("b", "c")
    assert g.out_degree("d") == 0
    assert g.in_degree("a") == 0
    assert g.nodes["a"].layer == 0
    assert g.nodes["d"].layer == 2


def test_build_graph_fixture_layers(fixture_model):
    g = build_graph(fixture_model.scenarios[0])
    by_layer = {0: 0, 1: 0, 2: 0}
    for n in g.nodes.values():
        by_layer[n.layer] += 1
    assert by_layer == {0: 4, 1: 3, 2: 4}


# --- termini --------------------------------------------------------------------


def test_termini_degree_based():
    s, t = sources_and_sinks(build_graph(diamond()))
    assert s == ("a",)
    assert t == ("d",)


def test_termini_stage_fallback_in_cycle():
    cyc = scenario(
        [node("a", Stage.prevention), node("b"), node("c", Stage.response)],
        [("a", "b"), ("b", "c"), ("c", "a")],
    )
    s, t = sources_and_sinks(build_graph(cyc))
    assert s == ("a",)
    assert t == ("c",)


def test_termini_missing_raises():
    cyc = scenario([node("a"), node("b"), node("c")], [("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.raises(NoTerminiError, match="no identifiable sources"):
        sources_and_sinks(build_graph(cyc))


# --- path enumeration --------------------------------------------------------


def test_paths_diamond_lexicographic():
    paths, capped = enumerate_paths(build_graph(diamond()))
    assert not capped
    assert paths == [("a", "b", "d"), ("a", "c", "d")]


def test_paths_multiple_sources_order():
    s = scenario(
        [node("m"), node("b"), node("z", Stage.response)],
        [("m", "z"), ("b", "z")],
    )
    paths, _ = enumerate_paths(build_graph(s))
    assert paths == [("b", "z"), ("m", "z")]


def test_single_node_is_its_own_path():
    s = scenario([node("solo")], [])
    paths, capped = enumerate_paths(build_graph(s))
    assert paths == [("solo",)]
    assert not capped


def test_cycle_paths_stay_simple():
    cyc = scenario(
        [node("a", Stage.prevention), node("b"), node("c", Stage.response)],
        [("a", "b"), ("b", "c"), ("c", "a")],
    )
    paths, _ = enumerate_paths(build_graph(cyc))
    assert paths == [("a", "b", "c")]


def layered_graph():
    # 2 sources x 2 middles x 2 sinks, fully connected between layers: 8 paths
    nodes = [
        node("a1", Stage.prevention),
        node("a2", Stage.prevention),
        node("b1"),
        node("b2"),
        node("c1", Stage.response),
        node("c2", Stage.response),
    ]
    edges = [(a, b) for a in ("a1", "a2") for b in ("b1", "b2")]
    edges += [(b, c) for b in ("b1", "b2") for c in ("c1", "c2")]
    return scenario(nodes, edges)


def test_cap_and_flag():
    g = build_graph(layered_graph())
    paths, capped = enumerate_paths(g)
    assert len(paths) == 8
    assert not capped

    paths, capped = enumerate_paths(g, cap=8)
    assert len(paths) == 8
    assert not capped

    paths, capped = enumerate_paths(g, cap=3)
    assert capped
    assert paths == [("a1", "b1", "c1"), ("a1", "b1", "c2"), ("a1", "b2", "c1")]


# --- coverage -----------------------------------------------------------------


def test_controlled_nodes_filters_status_and_target():
    s = scenario(
        [node("a"), node("b", Stage.response)],
        [("a", "b")],
        controls=(
            Control("c1", "a", "x", ControlStatus.implemented),
            Control("c2", "b", "y", ControlStatus.proposed),
            Control("c3", "ghost", "z", ControlStatus.implemented),
        ),
    )
    assert controlled_nodes(s) == {"a"}
    assert controlled_nodes(s, frozenset({ControlStatus.proposed})) == {"b"}


def test_coverage_fixture_baseline(fixture_model):
    r1 = fixture_model.scenarios[0]
    rep = coverage(r1)
    assert rep.sources == ("data_balance",)
    assert rep.sinks == ("proper_use",)
    assert rep.path_count == 1
    assert not rep.capped
    assert len(rep.uncut_paths) == 1
    assert rep.min_defense_depth == 0
    assert rep.min_cut_size == 1
    assert rep.min_cut_example == ("consensus",)
    assert set(rep.per_node.values()) == {1}


def test_coverage_fixture_all_implemented(fixture_model):
    r1 = fixture_model.scenarios[0]
    every = {c.control_id: ControlStatus.implemented for c in r1.controls}
    rep = coverage(with_control_statuses(r1, every))
    assert rep.uncut_paths == ()
    assert rep.min_defense_depth == 11
    assert rep.min_cut_size == 1


def test_coverage_fixture_single_control(fixture_model):
    r1 = fixture_model.scenarios[0]
    rep = coverage(with_control_statuses(r1, {"c_consensus": ControlStatus.implemented}))
    assert rep.uncut_paths == ()
    assert rep.min_defense_depth == 1


def test_coverage_statuses_widening():
    s = scenario(
        [node("a"), node("b", Stage.response)],
        [("a", "b")],
        controls=(Control("c1", "a", "x", ControlStatus.planned),),
    )
    narrow = coverage(s)
    wide = coverage(s, frozenset({ControlStatus.implemented, ControlStatus.planned}))
    assert narrow.min_defense_depth == 0
    assert len(narrow.uncut_paths) == 1
    assert wide.min_defense_depth == 1
    assert wide.uncut_paths == ()


def test_coverage_per_node_counts():
    rep = coverage(diamond())
    assert rep.per_node == {"a": 2, "b": 1, "c": 1, "d": 2}


def test_coverage_off_path_node_counts_zero():
    s = scenario(
        [node("a", Stage.prevention), node("b", Stage.response), node("loose")],
        [("a", "b"), ("a", "loose")],
    )
    rep = coverage(s)
    # loose is a sink too (out-degree 0), so it appears; but a node with
    # no incident path keeps its zero entry
    assert rep.per_node["loose"] == 1

    s2 = scenario(
        [node("a", Stage.prevention), node("b", Stage.response), node("x")],
        [("a", "b"), ("x", "b")],
    )
    rep2 = coverage(s2)
    assert set(rep2.per_node) == {"a", "b", "x"}


def test_report_to_dict_shape():
    doc = report_to_dict(coverage(diamond()))
    assert set(doc) == {
        "scenario",
        "statuses",
        "sources",
        "sinks",
        "path_count",
        "capped",
        "uncut_paths",
        "min_defense_depth",
        "min_cut_size",
        "min_cut_example",
        "per_node",
    }
    assert doc["statuses"] == ["implemented"]
    assert doc["uncut_paths"] == [["a", "b", "d"], ["a", "c", "d"]]


# --- minimum cut ---------------------------------------------------------------


def test_min_cut_diamond():
    g = build_graph(diamond())
    size, example = min_cut(g, ("a",), ("d",))
    assert size == 2
    assert example == ("b", "c")


def test_min_cut_single_chain():
    s = scenario(
        [node("a", Stage.prevention), node("b"), node("c", Stage.response)],
        [("a", "b"), ("b", "c")],
    )
    g = build_graph(s)
    size, example = min_cut(g, ("a",), ("c",))
    assert (size, example) == (1, ("b",))


def test_min_cut_terminus_fallback():
    # source -> sink direct edge: no interior node can cut it
    s = scenario([node("a", Stage.prevention), node("b", Stage.response)], [("a", "b")])
    g = build_graph(s)
    size, example = min_cut(g, ("a",), ("b",))
    assert size == 1
    assert example == ("a",)


def test_min_cut_against_brute_force_oracle():
    for seed in range(50):
        scen = make_random_dag(seed)
        g = build_graph(scen)
        sources, sinks = sources_and_sinks(g)
        size, example = min_cut(g, sources, sinks)

        node_ids = sorted(g.nodes)
        edge_pairs = [(e.from_node, e.to_node) for e in scen.edges]
        oracle_size, oracle_example = brute_force_min_cut(node_ids, edge_pairs, sources, sinks)

        assert size == oracle_size, f"seed {seed}: size {size} vs oracle {oracle_size}"
        assert example == oracle_example, f"seed {seed}: example {example} vs {oracle_example}"
        assert len(example) == size, f"seed {seed}"
        # soundness: the returned set really disconnects
        assert not still_connected(node_ids, edge_pairs, sources, sinks, set(example)), f"seed {seed}"
        # minimality: dropping any member reconnects
        for member in example:
            rest = set(example) - {member}
            assert still_connected(node_ids, edge_pairs, sources, sinks, rest), f"seed {seed}"


def test_min_cut_ignores_cap_and_statuses():
    rep = coverage(layered_graph(), cap=2)
    assert rep.capped
    assert rep.min_cut_size == 2
    assert rep.min_cut_example == ("b1", "b2")


# --- monotonicity under added controls -----------------------------------------


def test_coverage_monotone_in_controls():
    for seed in range(200):
        scen = make_random_dag(seed)
        rng = random.Random(10_000 + seed)
        controls = []
        for i, n in enumerate(scen.nodes):
            if rng.random() < 0.6:
                status = rng.choice(list(ControlStatus))
                controls.append(Control(f"c{i}", n.node_id, "generated", status))
        scen = Scenario(
            id=scen.id,
            title=scen.title,
            impact=scen.impact,
            likelihood=scen.likelihood,
            nodes=scen.nodes,
            edges=scen.edges,
            controls=tuple(controls),
        )
        before = coverage(scen)

        upgrades = {
            c.control_id: ControlStatus.implemented
            for c in controls
            if rng.random() < 0.5
        }
        after = coverage(with_control_statuses(scen, upgrades))

        assert set(after.uncut_paths) <= set(before.uncut_paths), f"seed {seed}"
        assert len(after.uncut_paths) <= len(before.uncut_paths), f"seed {seed}"
        assert after.min_defense_depth >= before.min_defense_depth, f"seed {seed}"
        # structure-only fields never move
        assert after.path_count == before.path_count, f"seed {seed}"
        assert after.min_cut_size == before.min_cut_size, f"seed {seed}"


# --- lint -----------------------------------------------------------------------


def test_lint_fixture_clean(fixture_model):
    for s in fixture_model.scenarios:
        assert lint_chain(s) == []


def test_lint_stage_regression():
    s = scenario(
        [node("a", Stage.response), node("b", Stage.prevention)],
        [("a", "b")],
        controls=(Control("c1", "a", "x"),),
    )
    diags = lint_chain(s)
    assert [d.code for d in diags] == ["stage-regression"]
    assert diags[0].location == "S/a->b"


def test_lint_isolated_node():
    s = scenario(
        [node("a", Stage.prevention), node("b", Stage.response), node("off")],
        [("a", "b")],
        controls=(Control("c1", "a", "x"),),
    )
    diags = lint_chain(s)
    assert [d.code for d in diags] == ["isolated-node"]
    assert diags[0].location == "S/off"
    # no edges at all: the advisory stays quiet
    s2 = scenario([node("a"), node("b")], [], controls=(Control("c1", "a", "x"),))
    assert lint_chain(s2) == []


def test_lint_uncontrolled_scenario():
    diags = lint_chain(diamond())
    assert [d.code for d in diags] == ["uncontrolled-scenario"]


def test_lint_cycle_present():
    s = scenario(
        [node("a"), node("b")],
        [("a", "b"), ("b", "a")],
        controls=(Control("c1", "a", "x"),),
    )
    assert [d.code for d in lint_chain(s)] == ["cycle-present"]


def test_lint_warnings_only():
    s = scenario(
        [node("a", Stage.response), node("b", Stage.prevention), node("off")],
        [("a", "b"), ("b", "a")],
    )
    diags = lint_chain(s)
    assert {d.severity for d in diags} == {"warning"}
    assert {d.code for d in diags} == {
        "stage-regression",
        "isolated-node",
        "uncontrolled-scenario",
        "cycle-present",
    }
