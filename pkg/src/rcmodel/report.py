"""Deterministic renderers: DOT chain diagrams and markdown reports.

Both renderers are pure functions of their inputs and emit LF-separated
text ending in a newline, so golden files stay byte-stable across runs
and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import (
    DEFAULT_STATUSES,
    CoverageReport,
    NoTerminiError,
    controlled_nodes,
    coverage,
)
from .model import ControlStatus, RiskModel, Scenario, rank_scenarios
from .taxonomy import Taxonomy, builtin_taxonomy


@dataclass(frozen=True)
class RenderOptions:
    show_controls: bool = True
    statuses: frozenset[ControlStatus] = field(default=DEFAULT_STATUSES)
    highlight_cut: bool = False


def _dq(s: str) -> str:
    """Quote a DOT identifier or label chunk."""
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(
    scenario: Scenario,
    taxonomy: Taxonomy | None = None,
    report: CoverageReport | None = None,
    options: RenderOptions | None = None,
) -> str:
    """Layer-clustered DOT digraph for one scenario.

    All three layer clusters are emitted in taxonomy order even when
    empty. Nodes are sorted by node id within their cluster and edges by
    (from, to). Controlled nodes (per ``options.statuses``) get a double
    border; with ``highlight_cut`` and a report, the example cut nodes
    are filled.
    """
    taxonomy = taxonomy or builtin_taxonomy()
    options = options or RenderOptions()
    controlled = controlled_nodes(scenario, options.statuses) if options.show_controls else set()
    cut = set(report.min_cut_example) if options.highlight_cut and report is not None else set()

    by_layer: dict[str, list] = {layer.id: [] for layer in taxonomy.layers}
    for node in sorted(scenario.nodes, key=lambda n: n.node_id):
        by_layer[node.factor.layer_id].append(node)

    lines = [f"digraph {_dq(scenario.id)} {{"]
    lines.append("  rankdir=LR;")
    lines.append("  node [shape=box, style=rounded];")
    for layer in taxonomy.layers:
        lines.append(f"  subgraph cluster_{layer.id} {{")
        lines.append(f"    label={_dq(layer.name)};")
        for node in by_layer[layer.id]:
            factor = taxonomy.resolve(node.factor)
            # keep the \n escape literal so DOT breaks the label line
            name = factor.name.replace("\\", "\\\\").replace('"', '\\"')
            attrs = [f'label="{name}\\n({node.stage.name})"']
            if node.node_id in controlled:
                attrs.append("peripheries=2")
            if node.node_id in cut:
                attrs.append('style="rounded,filled"')
                attrs.append("fillcolor=lightgrey")
            lines.append(f"    {_dq(node.node_id)} [{', '.join(attrs)}];")
        lines.append("  }")
    for edge in sorted(scenario.edges, key=lambda e: (e.from_node, e.to_node)):
        lines.append(f"  {_dq(edge.from_node)} -> {_dq(edge.to_node)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cell(text: str) -> str:
    return text.replace("|", "\\|")


def _staged_cell(node, taxonomy: Taxonomy) -> str:
    layer = taxonomy.find_layer(node.factor.layer_id)
    factor = taxonomy.resolve(node.factor)
    text = node.note if node.note else factor.name
    return _cell(f"[{layer.name}] {text} ({node.factor.factor_id})")


def render_markdown(
    model: RiskModel,
    rankings: list[tuple[str, int]] | None = None,
    reports: dict[str, CoverageReport] | None = None,
    taxonomy: Taxonomy | None = None,
) -> str:
    """Full markdown report: profile, ranking, staged factors, controls,
    and a coverage summary per scenario.

    ``rankings`` defaults to ``rank_scenarios(model)`` and ``reports`` to
    a default-status coverage run per scenario; scenarios without termini
    are reported as not analyzable.
    """
    taxonomy = taxonomy or builtin_taxonomy()
    if rankings is None:
        rankings = rank_scenarios(model)
    if reports is None:
        reports = {}
        for scenario in model.scenarios:
            try:
                reports[scenario.id] = coverage(scenario, taxonomy=taxonomy)
            except NoTerminiError:
                pass
    rank_of = {sid: i + 1 for i, (sid, _) in enumerate(rankings)}
    score_of = dict(rankings)

    out = [f"# Risk model: {model.profile.name}", ""]

    out.append("## Service profile")
    out.append("")
    if model.profile.attributes:
        out.append("| Attribute | Value |")
        out.append("| --- | --- |")
        for key, value in model.profile.attributes:
            out.append(f"| {_cell(key)} | {_cell(value)} |")
    else:
        out.append("No profile attributes.")
    out.append("")

    out.append("## Scenario ranking")
    out.append("")
    out.append("| Rank | ID | Title | Impact | Likelihood | Score |")
    out.append("| --- | --- | --- | --- | --- | --- |")
    ordered = sorted(model.scenarios, key=lambda s: rank_of.get(s.id, 0))
    for scenario in ordered:
        out.append(
            f"| {rank_of.get(scenario.id, '')} | {scenario.id} | {_cell(scenario.title)} "
            f"| {scenario.impact.name} | {scenario.likelihood.name} "
            f"| {score_of.get(scenario.id, '')} |"
        )
    out.append("")

    for scenario in ordered:
        out.append(f"## {scenario.id}: {_cell(scenario.title)}")
        out.append("")
        if scenario.references:
            for ref in scenario.references:
                out.append(f"- Reference: {_cell(ref)}")
            out.append("")

        out.append("### Staged factors")
        out.append("")
        out.append("| Prevention | Detection | Response |")
        out.append("| --- | --- | --- |")
        columns = {stage: [] for stage in ("prevention", "detection", "response")}
        for node in scenario.nodes:
            columns[node.stage.name].append(_staged_cell(node, taxonomy))
        height = max((len(c) for c in columns.values()), default=0)
        for i in range(height):
            row = [
                columns[stage][i] if i < len(columns[stage]) else ""
                for stage in ("prevention", "detection", "response")
            ]
            out.append(f"| {row[0]} | {row[1]} | {row[2]} |")
        if height == 0:
            out.append("|  |  |  |")
        out.append("")

        out.append("### Controls")
        out.append("")
        out.append("| Layer | Factor | Control | Status |")
        out.append("| --- | --- | --- | --- |")
        if scenario.controls:
            for control in scenario.controls:
                node = scenario.find_node(control.target)
                if node is not None:
                    layer_name = taxonomy.find_layer(node.factor.layer_id).name
                    factor_name = taxonomy.resolve(node.factor).name
                else:
                    layer_name = ""
                    factor_name = control.target
                out.append(
                    f"| {_cell(layer_name)} | {_cell(factor_name)} "
                    f"| {_cell(control.description)} | {control.status.name} |"
                )
        else:
            out.append("| none |  |  |  |")
        if not scenario.controls:
            out.append("")
            out.append("Note: uncontrolled-scenario (no controls defined yet).")
        out.append("")

        out.append("### Coverage")
        out.append("")
        report = reports.get(scenario.id)
        if report is None:
            out.append("Not analyzable: the chain has no identifiable sources or sinks.")
        else:
            example = ", ".join(report.min_cut_example) if report.min_cut_example else "none"
            out.append(f"- Sources: {', '.join(report.sources)}")
            out.append(f"- Sinks: {', '.join(report.sinks)}")
            capped = " (capped)" if report.capped else ""
            out.append(f"- Paths: {report.path_count}{capped}")
            out.append(f"- Uncut paths: {len(report.uncut_paths)}")
            out.append(f"- Minimum defense depth: {report.min_defense_depth}")
            out.append(f"- Minimum cut size: {report.min_cut_size} (example: {example})")
        out.append("")

    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + "\n"
