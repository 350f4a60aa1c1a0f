"""Edit operations: structured, validated mutations of model values.

Models are immutable, so every operation returns a fresh RiskModel. An
edit that cannot be applied (missing target, duplicate id, or a change
that would make the model invalid) returns a Diagnostic instead and the
caller keeps the original value. ``apply_edits`` applies a batch with
all-or-nothing semantics.

Removals do not cascade: removing a node while edges or controls still
reference it is rejected, so clients delete dependents first (or batch
the deletions in one ``apply_edits`` call).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import (
    ERROR,
    ChainEdge,
    Control,
    ControlStatus,
    Diagnostic,
    FactorNode,
    ModelShapeError,
    Ordinal,
    RiskModel,
    Scenario,
    Stage,
    _enum,
    _expect,
    _path,
    control_from_dict,
    edge_from_dict,
    node_from_dict,
    scenario_from_dict,
    validate_model,
)
from .taxonomy import FactorPath, Taxonomy, builtin_taxonomy


@dataclass(frozen=True)
class AddScenario:
    scenario: Scenario


@dataclass(frozen=True)
class RemoveScenario:
    scenario_id: str


@dataclass(frozen=True)
class UpdateScenario:
    scenario_id: str
    title: str | None = None
    impact: Ordinal | None = None
    likelihood: Ordinal | None = None
    references: tuple[str, ...] | None = None


@dataclass(frozen=True)
class AddNode:
    scenario_id: str
    node: FactorNode


@dataclass(frozen=True)
class RemoveNode:
    scenario_id: str
    node_id: str


@dataclass(frozen=True)
class UpdateNode:
    scenario_id: str
    node_id: str
    factor: FactorPath | None = None
    stage: Stage | None = None
    note: str | None = None
    clear_note: bool = False


@dataclass(frozen=True)
class AddEdge:
    scenario_id: str
    edge: ChainEdge


@dataclass(frozen=True)
class RemoveEdge:
    scenario_id: str
    edge: ChainEdge


@dataclass(frozen=True)
class AddControl:
    scenario_id: str
    control: Control


@dataclass(frozen=True)
class RemoveControl:
    scenario_id: str
    control_id: str


@dataclass(frozen=True)
class UpdateControl:
    scenario_id: str
    control_id: str
    target: str | None = None
    description: str | None = None
    status: ControlStatus | None = None


@dataclass(frozen=True)
class SetControlStatus:
    scenario_id: str
    control_id: str
    status: ControlStatus


Edit = (
    AddScenario
    | RemoveScenario
    | UpdateScenario
    | AddNode
    | RemoveNode
    | UpdateNode
    | AddEdge
    | RemoveEdge
    | AddControl
    | RemoveControl
    | UpdateControl
    | SetControlStatus
)


def _fail(code: str, message: str, location: str) -> Diagnostic:
    return Diagnostic(ERROR, code, message, location=location)


def _replace_scenario(model: RiskModel, updated: Scenario) -> RiskModel:
    scenarios = tuple(updated if s.id == updated.id else s for s in model.scenarios)
    return replace(model, scenarios=scenarios)


def _apply_structural(model: RiskModel, edit: Edit) -> RiskModel | Diagnostic:
    if isinstance(edit, AddScenario):
        if model.find_scenario(edit.scenario.id) is not None:
            return _fail(
                "duplicate-scenario-id",
                f"scenario id {edit.scenario.id!r} already exists",
                edit.scenario.id,
            )
        return replace(model, scenarios=model.scenarios + (edit.scenario,))

    if isinstance(edit, RemoveScenario):
        if model.find_scenario(edit.scenario_id) is None:
            return _fail(
                "unknown-scenario", f"no scenario {edit.scenario_id!r}", edit.scenario_id
            )
        return replace(
            model, scenarios=tuple(s for s in model.scenarios if s.id != edit.scenario_id)
        )

    scenario = model.find_scenario(edit.scenario_id)
    if scenario is None:
        return _fail("unknown-scenario", f"no scenario {edit.scenario_id!r}", edit.scenario_id)
    loc = scenario.id

    if isinstance(edit, UpdateScenario):
        updated = scenario
        if edit.title is not None:
            updated = replace(updated, title=edit.title)
        if edit.impact is not None:
            updated = replace(updated, impact=edit.impact)
        if edit.likelihood is not None:
            updated = replace(updated, likelihood=edit.likelihood)
        if edit.references is not None:
            updated = replace(updated, references=tuple(edit.references))
        return _replace_scenario(model, updated)

    if isinstance(edit, AddNode):
        if scenario.find_node(edit.node.node_id) is not None:
            return _fail(
                "duplicate-node-id",
                f"node id {edit.node.node_id!r} already exists in {loc}",
                f"{loc}/{edit.node.node_id}",
            )
        return _replace_scenario(model, replace(scenario, nodes=scenario.nodes + (edit.node,)))

    if isinstance(edit, RemoveNode):
        if scenario.find_node(edit.node_id) is None:
            return _fail(
                "unknown-node", f"no node {edit.node_id!r} in {loc}", f"{loc}/{edit.node_id}"
            )
        on_edge = any(edit.node_id in (e.from_node, e.to_node) for e in scenario.edges)
        if on_edge:
            return _fail(
                "node-in-use",
                f"node {edit.node_id!r} is still referenced by an edge",
                f"{loc}/{edit.node_id}",
            )
        if any(c.target == edit.node_id for c in scenario.controls):
            return _fail(
                "node-in-use",
                f"node {edit.node_id!r} is still referenced by a control",
                f"{loc}/{edit.node_id}",
            )
        nodes = tuple(n for n in scenario.nodes if n.node_id != edit.node_id)
        return _replace_scenario(model, replace(scenario, nodes=nodes))

    if isinstance(edit, UpdateNode):
        node = scenario.find_node(edit.node_id)
        if node is None:
            return _fail(
                "unknown-node", f"no node {edit.node_id!r} in {loc}", f"{loc}/{edit.node_id}"
            )
        if edit.factor is not None:
            node = replace(node, factor=edit.factor)
        if edit.stage is not None:
            node = replace(node, stage=edit.stage)
        if edit.clear_note:
            node = replace(node, note=None)
        elif edit.note is not None:
            node = replace(node, note=edit.note)
        nodes = tuple(node if n.node_id == edit.node_id else n for n in scenario.nodes)
        return _replace_scenario(model, replace(scenario, nodes=nodes))

    if isinstance(edit, AddEdge):
        key = (edit.edge.from_node, edit.edge.to_node)
        if any((e.from_node, e.to_node) == key for e in scenario.edges):
            return _fail(
                "duplicate-edge",
                f"edge {key[0]} -> {key[1]} already exists in {loc}",
                f"{loc}/{key[0]}->{key[1]}",
            )
        return _replace_scenario(model, replace(scenario, edges=scenario.edges + (edit.edge,)))

    if isinstance(edit, RemoveEdge):
        key = (edit.edge.from_node, edit.edge.to_node)
        edges = tuple(e for e in scenario.edges if (e.from_node, e.to_node) != key)
        if len(edges) == len(scenario.edges):
            return _fail(
                "unknown-edge",
                f"no edge {key[0]} -> {key[1]} in {loc}",
                f"{loc}/{key[0]}->{key[1]}",
            )
        return _replace_scenario(model, replace(scenario, edges=edges))

    if isinstance(edit, AddControl):
        if scenario.find_control(edit.control.control_id) is not None:
            return _fail(
                "duplicate-control-id",
                f"control id {edit.control.control_id!r} already exists in {loc}",
                f"{loc}/{edit.control.control_id}",
            )
        return _replace_scenario(
            model, replace(scenario, controls=scenario.controls + (edit.control,))
        )

    if isinstance(edit, RemoveControl):
        if scenario.find_control(edit.control_id) is None:
            return _fail(
                "unknown-control",
                f"no control {edit.control_id!r} in {loc}",
                f"{loc}/{edit.control_id}",
            )
        controls = tuple(c for c in scenario.controls if c.control_id != edit.control_id)
        return _replace_scenario(model, replace(scenario, controls=controls))

    if isinstance(edit, (UpdateControl, SetControlStatus)):
        control = scenario.find_control(edit.control_id)
        if control is None:
            return _fail(
                "unknown-control",
                f"no control {edit.control_id!r} in {loc}",
                f"{loc}/{edit.control_id}",
            )
        if isinstance(edit, SetControlStatus):
            control = replace(control, status=edit.status)
        else:
            if edit.target is not None:
                control = replace(control, target=edit.target)
            if edit.description is not None:
                control = replace(control, description=edit.description)
            if edit.status is not None:
                control = replace(control, status=edit.status)
        controls = tuple(
            control if c.control_id == edit.control_id else c for c in scenario.controls
        )
        return _replace_scenario(model, replace(scenario, controls=controls))

    raise TypeError(f"unsupported edit type {type(edit).__name__}")


def apply_edit(
    model: RiskModel, edit: Edit, taxonomy: Taxonomy | None = None
) -> RiskModel | Diagnostic:
    """Apply one edit. Returns the new model, or the first error found."""
    result = _apply_structural(model, edit)
    if isinstance(result, Diagnostic):
        return result
    taxonomy = taxonomy or builtin_taxonomy()
    for diag in validate_model(result, taxonomy):
        if diag.severity == ERROR:
            return diag
    return result


def apply_edits(
    model: RiskModel, edits: list[Edit], taxonomy: Taxonomy | None = None
) -> RiskModel | Diagnostic:
    """Apply a batch atomically; on the first failure the batch is void."""
    current = model
    for i, edit in enumerate(edits, start=1):
        result = apply_edit(current, edit, taxonomy)
        if isinstance(result, Diagnostic):
            return Diagnostic(
                severity=result.severity,
                code=result.code,
                message=f"edit {i} ({_op_name(type(edit))}): {result.message}",
                location=result.location,
                span=result.span,
            )
        current = result
    return current


# wire format: {"op": <name>, ...}; ids are plain strings, payloads are the
# same JSON objects the model wire shape uses

_OPS: dict[str, type] = {
    "add_scenario": AddScenario,
    "remove_scenario": RemoveScenario,
    "update_scenario": UpdateScenario,
    "add_node": AddNode,
    "remove_node": RemoveNode,
    "update_node": UpdateNode,
    "add_edge": AddEdge,
    "remove_edge": RemoveEdge,
    "add_control": AddControl,
    "remove_control": RemoveControl,
    "update_control": UpdateControl,
    "set_control_status": SetControlStatus,
}


def _op_name(cls: type) -> str:
    for name, known in _OPS.items():
        if known is cls:
            return name
    return cls.__name__


def edit_from_dict(data) -> Edit:
    """Parse one edit from its JSON shape. Raises ModelShapeError."""
    _expect(data, dict, "edit")
    op = _expect(data.get("op"), str, "edit.op")
    if op not in _OPS:
        raise ModelShapeError(f"edit.op: unknown operation {op!r}")

    if op == "add_scenario":
        return AddScenario(scenario=scenario_from_dict(data.get("scenario"), "edit.scenario"))
    if op == "remove_scenario":
        return RemoveScenario(scenario_id=_expect(data.get("scenario"), str, "edit.scenario"))

    scenario_id = _expect(data.get("scenario"), str, "edit.scenario")
    if op == "update_scenario":
        title = data.get("title")
        if title is not None:
            _expect(title, str, "edit.title")
        impact = data.get("impact")
        likelihood = data.get("likelihood")
        references = data.get("references")
        if references is not None:
            _expect(references, list, "edit.references")
            for j, ref in enumerate(references):
                _expect(ref, str, f"edit.references[{j}]")
            references = tuple(references)
        return UpdateScenario(
            scenario_id=scenario_id,
            title=title,
            impact=_enum(Ordinal, impact, "edit.impact") if impact is not None else None,
            likelihood=(
                _enum(Ordinal, likelihood, "edit.likelihood") if likelihood is not None else None
            ),
            references=references,
        )
    if op == "add_node":
        return AddNode(scenario_id=scenario_id, node=node_from_dict(data.get("node"), "edit.node"))
    if op == "remove_node":
        return RemoveNode(scenario_id=scenario_id, node_id=_expect(data.get("node"), str, "edit.node"))
    if op == "update_node":
        factor = data.get("factor")
        stage = data.get("stage")
        clear_note = "note" in data and data["note"] is None
        note = data.get("note")
        if note is not None:
            _expect(note, str, "edit.note")
        return UpdateNode(
            scenario_id=scenario_id,
            node_id=_expect(data.get("node"), str, "edit.node"),
            factor=_path(factor, "edit.factor") if factor is not None else None,
            stage=_enum(Stage, stage, "edit.stage") if stage is not None else None,
            note=note,
            clear_note=clear_note,
        )
    if op == "add_edge":
        return AddEdge(scenario_id=scenario_id, edge=edge_from_dict(data.get("edge"), "edit.edge"))
    if op == "remove_edge":
        return RemoveEdge(scenario_id=scenario_id, edge=edge_from_dict(data.get("edge"), "edit.edge"))
    if op == "add_control":
        return AddControl(
            scenario_id=scenario_id, control=control_from_dict(data.get("control"), "edit.control")
        )
    if op == "remove_control":
        return RemoveControl(
            scenario_id=scenario_id, control_id=_expect(data.get("control"), str, "edit.control")
        )
    if op == "update_control":
        target = data.get("target")
        if target is not None:
            _expect(target, str, "edit.target")
        description = data.get("description")
        if description is not None:
            _expect(description, str, "edit.description")
        status = data.get("status")
        return UpdateControl(
            scenario_id=scenario_id,
            control_id=_expect(data.get("control"), str, "edit.control"),
            target=target,
            description=description,
            status=_enum(ControlStatus, status, "edit.status") if status is not None else None,
        )
    return SetControlStatus(
        scenario_id=scenario_id,
        control_id=_expect(data.get("control"), str, "edit.control"),
        status=_enum(ControlStatus, data.get("status"), "edit.status"),
    )
