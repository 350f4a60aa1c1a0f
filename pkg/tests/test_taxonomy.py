"""Tests for the built-in factor taxonomy."""

import pytest

from rcmodel import (
    Component,
    Diagnostic,
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


@pytest.fixture(scope="module")
def tax() -> Taxonomy:
    return builtin_taxonomy()


def test_counts(tax):
    assert len(tax.layers) == 3
    assert tax.component_count() == 10
    assert tax.factor_count() == 38


def test_layer_ids_and_names(tax):
    assert [l.id for l in tax.layers] == ["ai_system", "service_provider", "users"]
    assert [l.name for l in tax.layers] == ["AI system", "Service provider", "Users"]
    assert [l.ordinal for l in tax.layers] == [0, 1, 2]


def test_component_ids(tax):
    by_layer = {l.id: [c.id for c in l.components] for l in tax.layers}
    assert by_layer["ai_system"] == ["ai_model", "data", "application", "system_environment"]
    assert by_layer["service_provider"] == ["code_of_conduct", "operation", "communication"]
    assert by_layer["users"] == ["understand", "action", "user_environment"]


SPOT_PAIRS = [
    ("ai_system.ai_model.robustness", "Robustness", "Noise resistance"),
    ("ai_system.ai_model.interpretability", "Interpretability", "Model interpretability"),
    ("ai_system.data.data_balance", "Data balance", "Impact of data bias"),
    ("ai_system.system_environment.traceability", "Traceability", "Transaction traceability or detection errors"),
    ("service_provider.code_of_conduct.fairness", "Fairness", "Non discrimination"),
    ("service_provider.code_of_conduct.transparency", "Transparency", "Appropriate information visualization"),
    ("service_provider.operation.sustainability", "Sustainability", "Maintain the quality of service"),
    ("service_provider.communication.consensus", "Consensus", "Consensus between service provider and users"),
    ("users.understand.human_autonomy", "Human autonomy", "Human autonomy"),
    ("users.action.proper_use", "Proper use", "Proper use"),
    ("users.user_environment.awareness", "Awareness", "Recognize the AI existence"),
    ("users.user_environment.limitation", "Limitation", "Restrict user's wrong option"),
]


@pytest.mark.parametrize("path,name,description", SPOT_PAIRS)
def test_factor_spot_checks(tax, path, name, description):
    factor = tax.resolve(FactorPath.from_text(path))
    assert factor.name == name
    assert factor.description == description


def test_resolve_module_helper(tax):
    factor = resolve(tax, FactorPath.from_text("ai_system.data.data_quality"))
    assert isinstance(factor, FactorDef)
    assert factor.id == "data_quality"


def test_resolve_unknown_layer(tax):
    with pytest.raises(UnknownPathError) as exc:
        tax.resolve(FactorPath("platform", "data", "data_quality"))
    assert exc.value.segment == "layer"


def test_resolve_unknown_component(tax):
    with pytest.raises(UnknownPathError) as exc:
        tax.resolve(FactorPath("ai_system", "hardware", "data_quality"))
    assert exc.value.segment == "component"


def test_resolve_unknown_factor(tax):
    with pytest.raises(UnknownPathError) as exc:
        tax.resolve(FactorPath("ai_system", "data", "speed"))
    assert exc.value.segment == "factor"


def test_unknown_path_error_is_key_error(tax):
    with pytest.raises(KeyError):
        tax.resolve(FactorPath.from_text("no.such.factor"))


def test_factor_path_from_text_rejects_bad_shapes():
    with pytest.raises(ValueError):
        FactorPath.from_text("only.two")
    with pytest.raises(ValueError):
        FactorPath.from_text("a.b.c.d")
    with pytest.raises(ValueError):
        FactorPath.from_text("a..c")


def test_factor_path_str_round_trip():
    p = FactorPath.from_text("users.action.self_defense")
    assert str(p) == "users.action.self_defense"
    assert FactorPath.from_text(str(p)) == p


def test_factor_paths_order_lexicographically():
    a = FactorPath.from_text("ai_system.data.data_balance")
    b = FactorPath.from_text("ai_system.data.data_quality")
    c = FactorPath.from_text("users.action.proper_use")
    assert a < b < c


def test_iter_paths_total_and_resolvable(tax):
    pairs = list(tax.iter_paths())
    assert len(pairs) == 38
    paths = [p for p, _ in pairs]
    assert len(set(paths)) == 38
    for path, factor in pairs:
        assert tax.resolve(path) is factor


def test_find_layer(tax):
    assert tax.find_layer("users").name == "Users"
    assert tax.find_layer("missing") is None


def test_validate_builtin_clean(tax):
    assert validate_taxonomy(tax) == []


def _factor(fid="f"):
    return FactorDef(id=fid, name="F", description="d")


def _layer(lid="l0", ordinal=0, components=None):
    if components is None:
        components = (Component(id="c", name="C", factors=(_factor(),)),)
    return Layer(id=lid, name=lid.upper(), ordinal=ordinal, components=components)


def test_validate_duplicate_layer_id():
    diags = validate_taxonomy(Taxonomy(layers=(_layer("same", 0), _layer("same", 1))))
    assert any(d.code == "duplicate-id" for d in diags)
    assert all(isinstance(d, Diagnostic) for d in diags)


def test_validate_empty_component():
    comp = Component(id="c", name="C", factors=())
    diags = validate_taxonomy(Taxonomy(layers=(_layer(components=(comp,)),)))
    assert [d.code for d in diags] == ["empty-component"]


def test_validate_bad_token():
    comp = Component(id="Bad Id", name="C", factors=(_factor(),))
    diags = validate_taxonomy(Taxonomy(layers=(_layer(components=(comp,)),)))
    assert any(d.code == "bad-token" for d in diags)


def test_validate_empty_description():
    comp = Component(id="c", name="C", factors=(FactorDef(id="f", name="F", description=""),))
    diags = validate_taxonomy(Taxonomy(layers=(_layer(components=(comp,)),)))
    assert [d.code for d in diags] == ["empty-description"]


def test_validate_duplicate_factor_id():
    comp = Component(id="c", name="C", factors=(_factor("f"), _factor("f")))
    diags = validate_taxonomy(Taxonomy(layers=(_layer(components=(comp,)),)))
    assert any(d.code == "duplicate-id" and "factor" in d.message for d in diags)


def test_taxonomy_to_dict_shape(tax):
    doc = taxonomy_to_dict(tax)
    assert set(doc) == {"layers"}
    assert len(doc["layers"]) == 3
    first = doc["layers"][0]
    assert set(first) == {"id", "name", "ordinal", "components"}
    comp = first["components"][0]
    assert set(comp) == {"id", "name", "factors"}
    factor = comp["factors"][0]
    assert set(factor) == {"id", "name", "description"}
    total = sum(len(c["factors"]) for l in doc["layers"] for c in l["components"])
    assert total == 38
