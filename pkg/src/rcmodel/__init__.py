"""Risk-model-as-code toolkit for AI service risk chains.

Author models in the ``.rcm`` text format, validate factor references
against the builtin three-layer taxonomy, analyze chain coverage and
minimum cuts, render DOT/markdown, and serve an editing UI over HTTP.
"""

from .analysis import (
    ChainGraph,
    CoverageReport,
    NoTerminiError,
    build_graph,
    controlled_nodes,
    coverage,
    enumerate_paths,
    lint_chain,
    min_cut,
    report_to_dict,
    sources_and_sinks,
)
from .diagnostics import ERROR, WARNING
from .dsl import ParseResult, parse, serialize
from .edits import (
    AddControl,
    AddEdge,
    AddNode,
    AddScenario,
    Edit,
    RemoveControl,
    RemoveEdge,
    RemoveNode,
    RemoveScenario,
    SetControlStatus,
    UpdateControl,
    UpdateNode,
    UpdateScenario,
    apply_edit,
    apply_edits,
    edit_from_dict,
)
from .model import (
    ChainEdge,
    Control,
    ControlStatus,
    Diagnostic,
    FactorNode,
    ModelShapeError,
    Ordinal,
    RiskModel,
    Scenario,
    ServiceProfile,
    SourceSpan,
    Stage,
    model_from_dict,
    model_to_dict,
    rank_scenarios,
    validate_model,
    with_control_statuses,
)
from .report import RenderOptions, render_dot, render_markdown
from .taxonomy import (
    Component,
    FactorDef,
    FactorPath,
    Layer,
    Taxonomy,
    UnknownPathError,
    builtin_taxonomy,
    resolve,
    taxonomy_to_dict,
    validate_taxonomy,
)

__version__ = "0.1.0"

__all__ = [
    "AddControl",
    "AddEdge",
    "AddNode",
    "AddScenario",
    "ChainEdge",
    "ChainGraph",
    "Component",
    "Control",
    "ControlStatus",
    "CoverageReport",
    "Diagnostic",
    "ERROR",
    "Edit",
    "FactorDef",
    "FactorNode",
    "FactorPath",
    "Layer",
    "ModelShapeError",
    "NoTerminiError",
    "Ordinal",
    "ParseResult",
    "RemoveControl",
    "RemoveEdge",
    "RemoveNode",
    "RemoveScenario",
    "RenderOptions",
    "RiskModel",
    "Scenario",
    "ServiceProfile",
    "SetControlStatus",
    "SourceSpan",
    "Stage",
    "Taxonomy",
    "UnknownPathError",
    "UpdateControl",
    "UpdateNode",
    "UpdateScenario",
    "WARNING",
    "apply_edit",
    "apply_edits",
    "build_graph",
    "builtin_taxonomy",
    "controlled_nodes",
    "coverage",
    "edit_from_dict",
    "enumerate_paths",
    "lint_chain",
    "min_cut",
    "model_from_dict",
    "model_to_dict",
    "parse",
    "rank_scenarios",
    "render_dot",
    "render_markdown",
    "report_to_dict",
    "resolve",
    "serialize",
    "sources_and_sinks",
    "taxonomy_to_dict",
    "validate_model",
    "validate_taxonomy",
    "with_control_statuses",
]
