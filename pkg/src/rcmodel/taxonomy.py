"""Builtin factor taxonomy: three layers, ten components, 38 risk factors.

Factors are addressed by a three-part path ``layer.component.factor``.
Path tokens are derived from the display names by lowercasing and
replacing non-alphanumeric runs with underscores, so the registry is
diff-friendly and stable. Custom taxonomies of the same shape are
allowed; run them through :func:`validate_taxonomy` before use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import ERROR, Diagnostic

_ID_RE = re.compile(r"[a-z][a-z0-9_]*$")


class UnknownPathError(KeyError):
    """A factor path that does not resolve in the active taxonomy."""

    def __init__(self, path: "FactorPath", segment: str):
        super().__init__(f"unknown {segment} in factor path '{path}'")
        self.path = path
        self.segment = segment  # "layer" | "component" | "factor"

    def __str__(self) -> str:
        return f"unknown {self.segment} in factor path '{self.path}'"


@dataclass(frozen=True)
class FactorDef:
    id: str
    name: str
    description: str


@dataclass(frozen=True)
class Component:
    id: str
    name: str
    factors: tuple[FactorDef, ...]


@dataclass(frozen=True)
class Layer:
    id: str
    name: str
    ordinal: int
    components: tuple[Component, ...]


@dataclass(frozen=True, order=True)
class FactorPath:
    """Canonical address of a factor: ``layer.component.factor``."""

    layer_id: str
    component_id: str
    factor_id: str

    @classmethod
    def from_text(cls, text: str) -> "FactorPath":
        parts = text.split(".")
        if len(parts) != 3 or not all(parts):
            raise ValueError(f"factor path must have form layer.component.factor, got {text!r}")
        return cls(*parts)

    def __str__(self) -> str:
        return f"{self.layer_id}.{self.component_id}.{self.factor_id}"


@dataclass(frozen=True)
class Taxonomy:
    layers: tuple[Layer, ...]

    def find_layer(self, layer_id: str) -> Layer | None:
        for layer in self.layers:
            if layer.id == layer_id:
                return layer
        return None

    def resolve(self, path: FactorPath) -> FactorDef:
        """Return the unique factor definition at ``path``.

        Raises :class:`UnknownPathError` naming the first missing segment.
        """
        layer = self.find_layer(path.layer_id)
        if layer is None:
            raise UnknownPathError(path, "layer")
        component = next((c for c in layer.components if c.id == path.component_id), None)
        if component is None:
            raise UnknownPathError(path, "component")
        factor = next((f for f in component.factors if f.id == path.factor_id), None)
        if factor is None:
            raise UnknownPathError(path, "factor")
        return factor

    def iter_paths(self):
        """Yield every (FactorPath, FactorDef) pair in registry order."""
        for layer in self.layers:
            for component in layer.components:
                for factor in component.factors:
                    yield FactorPath(layer.id, component.id, factor.id), factor

    def factor_count(self) -> int:
        return sum(len(c.factors) for layer in self.layers for c in layer.components)

    def component_count(self) -> int:
        return sum(len(layer.components) for layer in self.layers)


def resolve(taxonomy: Taxonomy, path: FactorPath) -> FactorDef:
    """Module-level spelling of :meth:`Taxonomy.resolve`."""
    return taxonomy.resolve(path)


def _d(code: str, message: str, location: str) -> Diagnostic:
    return Diagnostic(ERROR, code, message, location=location)


def validate_taxonomy(taxonomy: Taxonomy) -> list[Diagnostic]:
    """Structural validation for custom taxonomies. Empty list means valid."""
    diags: list[Diagnostic] = []
    seen_layers: set[str] = set()
    seen_paths: set[tuple[str, str, str]] = set()
    for layer in taxonomy.layers:
        if not _ID_RE.match(layer.id):
            diags.append(_d("bad-token", f"layer id {layer.id!r} is not a lowercase token", layer.id))
        if layer.id in seen_layers:
            diags.append(_d("duplicate-id", f"duplicate layer id {layer.id!r}", layer.id))
        seen_layers.add(layer.id)
        seen_components: set[str] = set()
        for component in layer.components:
            loc = f"{layer.id}.{component.id}"
            if not _ID_RE.match(component.id):
                diags.append(_d("bad-token", f"component id {component.id!r} is not a lowercase token", loc))
            if component.id in seen_components:
                diags.append(_d("duplicate-id", f"duplicate component id {component.id!r} in layer {layer.id}", loc))
            seen_components.add(component.id)
            if not component.factors:
                diags.append(_d("empty-component", f"component {loc} defines no factors", loc))
            seen_factors: set[str] = set()
            for factor in component.factors:
                floc = f"{loc}.{factor.id}"
                if not _ID_RE.match(factor.id):
                    diags.append(_d("bad-token", f"factor id {factor.id!r} is not a lowercase token", floc))
                if factor.id in seen_factors:
                    diags.append(_d("duplicate-id", f"duplicate factor id {factor.id!r} in component {loc}", floc))
                seen_factors.add(factor.id)
                if not factor.description:
                    diags.append(_d("empty-description", f"factor {floc} has an empty description", floc))
                key = (layer.id, component.id, factor.id)
                if key in seen_paths:
                    diags.append(_d("duplicate-id", f"duplicate full path {floc}", floc))
                seen_paths.add(key)
    return diags


def taxonomy_to_dict(taxonomy: Taxonomy) -> dict:
    """JSON-ready tree: layers > components > factors."""
    return {
        "layers": [
            {
                "id": layer.id,
                "name": layer.name,
                "ordinal": layer.ordinal,
                "components": [
                    {
                        "id": component.id,
                        "name": component.name,
                        "factors": [
                            {"id": f.id, "name": f.name, "description": f.description}
                            for f in component.factors
                        ],
                    }
                    for component in layer.components
                ],
            }
            for layer in taxonomy.layers
        ]
    }


_BUILTIN = Taxonomy(
    layers=(
        Layer(
            id="ai_system",
            name="AI system",
            ordinal=0,
            components=(
                Component(
                    id="ai_model",
                    name="AI model",
                    factors=(
                        FactorDef("accuracy", "Accuracy", "Predictive performance"),
                        FactorDef("generalization", "Generalization", "Generalization performance (impact of algorithmic bias)"),
                        FactorDef("robustness", "Robustness", "Noise resistance"),
                        FactorDef("interpretability", "Interpretability", "Model interpretability"),
                    ),
                ),
                Component(
                    id="data",
                    name="Data",
                    factors=(
                        FactorDef("data_quality", "Data quality", "Data integrity and timeliness"),
                        FactorDef("data_balance", "Data balance", "Impact of data bias"),
                    ),
                ),
                Component(
                    id="application",
                    name="Application",
                    factors=(
                        FactorDef("process_integrity", "Process integrity", "Application integrity of rule-based logic"),
                        FactorDef("connectivity", "Connectivity", "Protocol for connection with external systems"),
                    ),
                ),
                Component(
                    id="system_environment",
                    name="System environment",
                    factors=(
                        FactorDef("capability", "Capability", "Processing performance or system scalability"),
                        FactorDef("stability", "Stability", "Stable running with error collection and reproductivity"),
                        FactorDef("confidentiality", "Confidentiality", "System confidentiality"),
                        FactorDef("availability", "Availability", "System availability"),
                        FactorDef("traceability", "Traceability", "Transaction traceability or detection errors"),
                    ),
                ),
            ),
        ),
        Layer(
            id="service_provider",
            name="Service provider",
            ordinal=1,
            components=(
                Component(
                    id="code_of_conduct",
                    name="Code of Conduct",
                    factors=(
                        FactorDef("accountability", "Accountability", "Accountability of service providing"),
                        FactorDef("dignity", "Dignity", "Protection of the rights of user decision"),
                        FactorDef("privacy", "Privacy", "Protection of privacy"),
                        FactorDef("fairness", "Fairness", "Non discrimination"),
                        FactorDef("transparency", "Transparency", "Appropriate information visualization"),
                    ),
                ),
                Component(
                    id="operation",
                    name="Operation",
                    factors=(
                        FactorDef("scalability", "Scalability", "Service scalability"),
                        FactorDef("sustainability", "Sustainability", "Maintain the quality of service"),
                        FactorDef("agility", "Agility", "Agile process for development"),
                        FactorDef("safety", "Safety", "Harmless"),
                        FactorDef("accessibility", "Accessibility", "Access control and authentication"),
                        FactorDef("auditability", "Auditability", "Internal and external auditability"),
                    ),
                ),
                Component(
                    id="communication",
                    name="Communication",
                    factors=(
                        FactorDef("consensus", "Consensus", "Consensus between service provider and users"),
                        FactorDef("usability", "Usability", "Easy to use"),
                        FactorDef("understandability", "Understandability", "Easy to understand"),
                        FactorDef("correspondence", "Correspondence", "Cooperation with user and stakeholders including external specialist"),
                    ),
                ),
            ),
        ),
        Layer(
            id="users",
            name="Users",
            ordinal=2,
            components=(
                Component(
                    id="understand",
                    name="Understand",
                    factors=(
                        FactorDef("user_responsibility", "User responsibility", "User responsibility"),
                        FactorDef("expectation", "Expectation", "Expectation of the performance of AI service"),
                        FactorDef("human_autonomy", "Human autonomy", "Human autonomy"),
                        FactorDef("effectiveness", "Effectiveness", "Effectiveness of the risk from AI service"),
                    ),
                ),
                Component(
                    id="action",
                    name="Action",
                    factors=(
                        FactorDef("proper_use", "Proper use", "Proper use"),
                        FactorDef("self_defense", "Self-defense", "Self-defense"),
                    ),
                ),
                Component(
                    id="user_environment",
                    name="User environment",
                    factors=(
                        FactorDef("user_ability", "User ability", "Literacy, experience, and skill"),
                        FactorDef("awareness", "Awareness", "Recognize the AI existence"),
                        FactorDef("controllability", "Controllability", "User options to control"),
                        FactorDef("limitation", "Limitation", "Restrict user's wrong option"),
                    ),
                ),
            ),
        ),
    )
)


def builtin_taxonomy() -> Taxonomy:
    """The builtin registry: 3 layers, 10 components, 38 factors."""
    return _BUILTIN
