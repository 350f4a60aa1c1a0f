"""Risk model documents: service profile, scenarios, chains, controls.

Model values are immutable; every mutation in :mod:`rcmodel.edits`
produces a new value. Validation returns diagnostics as data instead of
raising, so authoring tools can show all problems at once.

Diagnostic codes form a closed set, documented in the README:

errors   unknown-factor, dangling-edge, dangling-control, self-loop,
         duplicate-scenario-id, duplicate-node-id, duplicate-control-id,
         duplicate-edge, duplicate-attr-key, empty-profile-name,
         empty-description
warnings isolated-node, empty-scenario, all-controls-rejected
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .diagnostics import ERROR, WARNING, Diagnostic, SourceSpan
from .taxonomy import FactorPath, Taxonomy, UnknownPathError

__all__ = [
    "ERROR",
    "WARNING",
    "Diagnostic",
    "SourceSpan",
    "Ordinal",
    "Stage",
    "ControlStatus",
    "ServiceProfile",
    "FactorNode",
    "ChainEdge",
    "Control",
    "Scenario",
    "RiskModel",
    "ModelShapeError",
    "validate_model",
    "rank_scenarios",
    "with_control_statuses",
    "model_to_dict",
    "model_from_dict",
    "node_from_dict",
    "edge_from_dict",
    "control_from_dict",
    "scenario_from_dict",
]


class Ordinal(enum.Enum):
    """Three-point impact/likelihood scale; scores multiply the values."""

    low = 1
    medium = 2
    high = 3


class Stage(enum.Enum):
    """Role a factor plays along the chain; ordered by appearance."""

    prevention = 0
    detection = 1
    response = 2


class ControlStatus(enum.Enum):
    proposed = 0
    planned = 1
    implemented = 2
    rejected = 3


@dataclass(frozen=True)
class ServiceProfile:
    name: str
    attributes: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple((k, v) for k, v in self.attributes))


@dataclass(frozen=True)
class FactorNode:
    node_id: str
    factor: FactorPath
    stage: Stage
    note: str | None = None


@dataclass(frozen=True)
class ChainEdge:
    from_node: str
    to_node: str


@dataclass(frozen=True)
class Control:
    control_id: str
    target: str
    description: str
    status: ControlStatus = ControlStatus.proposed


@dataclass(frozen=True)
class Scenario:
    id: str
    title: str
    impact: Ordinal
    likelihood: Ordinal
    references: tuple[str, ...] = ()
    nodes: tuple[FactorNode, ...] = ()
    edges: tuple[ChainEdge, ...] = ()
    controls: tuple[Control, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "references", tuple(self.references))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "controls", tuple(self.controls))

    def node_ids(self) -> set[str]:
        return {n.node_id for n in self.nodes}

    def find_node(self, node_id: str) -> FactorNode | None:
        return next((n for n in self.nodes if n.node_id == node_id), None)

    def find_control(self, control_id: str) -> Control | None:
        return next((c for c in self.controls if c.control_id == control_id), None)

    def controls_for(self, node_id: str) -> tuple[Control, ...]:
        return tuple(c for c in self.controls if c.target == node_id)


@dataclass(frozen=True)
class RiskModel:
    profile: ServiceProfile
    scenarios: tuple[Scenario, ...] = ()
    taxonomy_ref: str = "builtin"

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))

    def find_scenario(self, scenario_id: str) -> Scenario | None:
        return next((s for s in self.scenarios if s.id == scenario_id), None)


def validate_model(model: RiskModel, taxonomy: Taxonomy) -> list[Diagnostic]:
    """Structural validation. Empty list means valid with no advisories.

    Errors break analysis; warnings mark suspicious but legal shapes.
    Pure and idempotent: the same value always yields the same list.
    """
    diags: list[Diagnostic] = []

    def err(code: str, message: str, location: str):
        diags.append(Diagnostic(ERROR, code, message, location))

    def warn(code: str, message: str, location: str):
        diags.append(Diagnostic(WARNING, code, message, location))

    if not model.profile.name:
        err("empty-profile-name", "service profile name is empty", "profile")
    seen_keys: set[str] = set()
    for key, _ in model.profile.attributes:
        if key in seen_keys:
            err("duplicate-attr-key", f"duplicate profile attribute key {key!r}", "profile")
        seen_keys.add(key)

    seen_scenarios: set[str] = set()
    for scenario in model.scenarios:
        if scenario.id in seen_scenarios:
            err("duplicate-scenario-id", f"duplicate scenario id {scenario.id!r}", scenario.id)
        seen_scenarios.add(scenario.id)

        seen_nodes: set[str] = set()
        for node in scenario.nodes:
            loc = f"{scenario.id}/{node.node_id}"
            if node.node_id in seen_nodes:
                err("duplicate-node-id", f"duplicate node id {node.node_id!r}", loc)
            seen_nodes.add(node.node_id)
            try:
                taxonomy.resolve(node.factor)
            except UnknownPathError as exc:
                err("unknown-factor", str(exc), loc)

        node_ids = scenario.node_ids()
        seen_edges: set[tuple[str, str]] = set()
        for edge in scenario.edges:
            loc = f"{scenario.id}/{edge.from_node}->{edge.to_node}"
            for endpoint in (edge.from_node, edge.to_node):
                if endpoint not in node_ids:
                    err("dangling-edge", f"edge endpoint {endpoint!r} is not a node in {scenario.id}", loc)
            if edge.from_node == edge.to_node:
                err("self-loop", f"edge {edge.from_node!r} -> {edge.to_node!r} is a self-loop", loc)
            key = (edge.from_node, edge.to_node)
            if key in seen_edges:
                err("duplicate-edge", f"duplicate edge {edge.from_node} -> {edge.to_node}", loc)
            seen_edges.add(key)

        seen_controls: set[str] = set()
        for control in scenario.controls:
            loc = f"{scenario.id}/{control.control_id}"
            if control.control_id in seen_controls:
                err("duplicate-control-id", f"duplicate control id {control.control_id!r}", loc)
            seen_controls.add(control.control_id)
            if control.target not in node_ids:
                err("dangling-control", f"control target {control.target!r} is not a node in {scenario.id}", loc)
            if not control.description:
                err("empty-description", f"control {control.control_id!r} has an empty description", loc)

        if not scenario.nodes:
            warn("empty-scenario", f"scenario {scenario.id} has no factor nodes", scenario.id)
        if scenario.edges:
            on_edge = {e.from_node for e in scenario.edges} | {e.to_node for e in scenario.edges}
            for node in scenario.nodes:
                if node.node_id not in on_edge:
                    warn(
                        "isolated-node",
                        f"node {node.node_id!r} is on no edge",
                        f"{scenario.id}/{node.node_id}",
                    )
        for node in scenario.nodes:
            attached = scenario.controls_for(node.node_id)
            if attached and all(c.status is ControlStatus.rejected for c in attached):
                warn(
                    "all-controls-rejected",
                    f"every control on node {node.node_id!r} is rejected",
                    f"{scenario.id}/{node.node_id}",
                )
    return diags


def rank_scenarios(model: RiskModel) -> list[tuple[str, int]]:
    """Scenarios ordered by impact x likelihood, ties broken by id."""
    scored = [(s.id, s.impact.value * s.likelihood.value) for s in model.scenarios]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


def with_control_statuses(scenario: Scenario, overrides: dict[str, ControlStatus]) -> Scenario:
    """Copy of ``scenario`` with some control statuses replaced (what-if)."""
    unknown = set(overrides) - {c.control_id for c in scenario.controls}
    if unknown:
        raise KeyError(f"unknown control ids: {sorted(unknown)}")
    controls = tuple(
        replace(c, status=overrides.get(c.control_id, c.status)) for c in scenario.controls
    )
    return replace(scenario, controls=controls)


# --- JSON wire shape -------------------------------------------------------
#
# {profile: {name, attributes: [{key, value}]}, taxonomy: "builtin",
#  scenarios: [{id, title, impact, likelihood, references: [...],
#               nodes: [{id, factor, stage, note}], edges: [{from, to}],
#               controls: [{id, target, description, status}]}]}


class ModelShapeError(ValueError):
    """The JSON payload does not have the model wire shape."""


def model_to_dict(model: RiskModel) -> dict:
    return {
        "profile": {
            "name": model.profile.name,
            "attributes": [{"key": k, "value": v} for k, v in model.profile.attributes],
        },
        "taxonomy": model.taxonomy_ref,
        "scenarios": [
            {
                "id": s.id,
                "title": s.title,
                "impact": s.impact.name,
                "likelihood": s.likelihood.name,
                "references": list(s.references),
                "nodes": [
                    {"id": n.node_id, "factor": str(n.factor), "stage": n.stage.name, "note": n.note}
                    for n in s.nodes
                ],
                "edges": [{"from": e.from_node, "to": e.to_node} for e in s.edges],
                "controls": [
                    {"id": c.control_id, "target": c.target, "description": c.description, "status": c.status.name}
                    for c in s.controls
                ],
            }
            for s in model.scenarios
        ],
    }


def _expect(value, type_, where: str):
    if not isinstance(value, type_):
        raise ModelShapeError(f"{where}: expected {type_.__name__}, got {type(value).__name__}")
    return value


def _enum(enum_cls, value, where: str):
    _expect(value, str, where)
    try:
        return enum_cls[value]
    except KeyError:
        allowed = "/".join(m.name for m in enum_cls)
        raise ModelShapeError(f"{where}: expected one of {allowed}, got {value!r}") from None


def _path(value, where: str) -> FactorPath:
    _expect(value, str, where)
    try:
        return FactorPath.from_text(value)
    except ValueError as exc:
        raise ModelShapeError(f"{where}: {exc}") from None


def node_from_dict(nd, where: str = "node") -> FactorNode:
    _expect(nd, dict, where)
    note = nd.get("note")
    if note is not None:
        _expect(note, str, f"{where}.note")
    return FactorNode(
        node_id=_expect(nd.get("id"), str, f"{where}.id"),
        factor=_path(nd.get("factor"), f"{where}.factor"),
        stage=_enum(Stage, nd.get("stage"), f"{where}.stage"),
        note=note,
    )


def edge_from_dict(ed, where: str = "edge") -> ChainEdge:
    _expect(ed, dict, where)
    return ChainEdge(
        from_node=_expect(ed.get("from"), str, f"{where}.from"),
        to_node=_expect(ed.get("to"), str, f"{where}.to"),
    )


def control_from_dict(cd, where: str = "control") -> Control:
    _expect(cd, dict, where)
    return Control(
        control_id=_expect(cd.get("id"), str, f"{where}.id"),
        target=_expect(cd.get("target"), str, f"{where}.target"),
        description=_expect(cd.get("description"), str, f"{where}.description"),
        status=_enum(ControlStatus, cd.get("status", "proposed"), f"{where}.status"),
    )


def scenario_from_dict(sd, where: str = "scenario") -> Scenario:
    _expect(sd, dict, where)
    nodes = [
        node_from_dict(nd, f"{where}.nodes[{j}]")
        for j, nd in enumerate(_expect(sd.get("nodes", []), list, f"{where}.nodes"))
    ]
    edges = [
        edge_from_dict(ed, f"{where}.edges[{j}]")
        for j, ed in enumerate(_expect(sd.get("edges", []), list, f"{where}.edges"))
    ]
    controls = [
        control_from_dict(cd, f"{where}.controls[{j}]")
        for j, cd in enumerate(_expect(sd.get("controls", []), list, f"{where}.controls"))
    ]
    references = _expect(sd.get("references", []), list, f"{where}.references")
    for j, ref in enumerate(references):
        _expect(ref, str, f"{where}.references[{j}]")
    return Scenario(
        id=_expect(sd.get("id"), str, f"{where}.id"),
        title=_expect(sd.get("title", ""), str, f"{where}.title"),
        impact=_enum(Ordinal, sd.get("impact"), f"{where}.impact"),
        likelihood=_enum(Ordinal, sd.get("likelihood"), f"{where}.likelihood"),
        references=tuple(references),
        nodes=tuple(nodes),
        edges=tuple(edges),
        controls=tuple(controls),
    )


def model_from_dict(data) -> RiskModel:
    """Parse the wire shape back into a model. Raises ModelShapeError."""
    _expect(data, dict, "root")
    profile_data = _expect(data.get("profile"), dict, "profile")
    name = _expect(profile_data.get("name", ""), str, "profile.name")
    attributes = []
    for i, row in enumerate(_expect(profile_data.get("attributes", []), list, "profile.attributes")):
        _expect(row, dict, f"profile.attributes[{i}]")
        attributes.append(
            (
                _expect(row.get("key"), str, f"profile.attributes[{i}].key"),
                _expect(row.get("value"), str, f"profile.attributes[{i}].value"),
            )
        )
    taxonomy_ref = _expect(data.get("taxonomy", "builtin"), str, "taxonomy")
    if taxonomy_ref != "builtin":
        raise ModelShapeError("taxonomy: only 'builtin' is supported")
    scenarios = [
        scenario_from_dict(sd, f"scenarios[{i}]")
        for i, sd in enumerate(_expect(data.get("scenarios", []), list, "scenarios"))
    ]
    return RiskModel(
        profile=ServiceProfile(name=name, attributes=tuple(attributes)),
        scenarios=tuple(scenarios),
        taxonomy_ref=taxonomy_ref,
    )
