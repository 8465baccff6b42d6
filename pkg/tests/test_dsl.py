from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from cloakforge import dsl
from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge.errors import ParseError, ResolveError, UnknownRecipe, ValidationError
from cloakforge.magmal import MagmalComonad

CHAIN3 = json.loads((dsl.CORPUS_DIR / "chain3.json").read_text(encoding="utf-8"))
POSET = {"kind": "poset", "name": "p", "payload": {"elements": ["a", "b"], "leq": [["a", "b"]]}}


def roundtrip(obj, name):
    text = dsl.serialize(dsl.to_doc(obj, name))
    [(got_name, got)] = dsl.Workspace(dsl.parse_documents(text)).build_all()[-1:]
    return text, got_name, got


@pytest.mark.parametrize("path", dsl.corpus_files(), ids=lambda p: p.name)
def test_corpus_roundtrips_byte_for_byte(path):
    text = path.read_text(encoding="utf-8")
    docs = dsl.parse_documents(text)
    assert dsl.serialize(docs if len(docs) > 1 else docs[0]) == text


@pytest.mark.parametrize("path", dsl.corpus_files(), ids=lambda p: p.name)
def test_corpus_files_load(path):
    items = dsl.load_file(path)
    assert items and all(isinstance(n, str) for n, _ in items)


def test_corpus_has_the_named_examples():
    names = {p.name for p in dsl.corpus_files()}
    assert {"chain3.json", "diamond.json", "diamond-g-meet-a.json", "chain3-g-drop-m.json"} <= names


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(g.heyting_lattices(5)))
def test_lattice_roundtrip(L):
    text, _, got = roundtrip(L, L.name)
    assert fc.find_isomorphism(got.base, L.base) is not None
    assert dsl.serialize(dsl.to_doc(got, L.name)) == text


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([G for L in g.heyting_lattices(4) for G in g.interior_operators(L)]))
def test_comonad_roundtrip(G):
    _, _, got = roundtrip(G, "g")
    assert isinstance(got, MagmalComonad)
    assert got.g.functor.obj_map == G.g.functor.obj_map


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(g.monoids_upto(3)))
def test_monoid_roundtrip(H):
    _, _, got = roundtrip(H, "h")
    # element labels come back as strings
    assert got.unit == str(H.unit)
    assert got.mul == {(str(a), str(b)): str(c) for (a, b), c in H.mul.items()}


def test_array_document_with_name_reference():
    text = json.dumps([POSET, {"kind": "category", "name": "c", "payload": {
        "objects": ["x"], "morphisms": [{"name": "id_x", "src": "x", "dst": "x"}], "identities": {"x": "id_x"},
        "compose": [["id_x", "id_x", "id_x"]]}}])
    docs = dsl.parse_documents(text)
    assert [d.name for d in docs] == ["p", "c"]


def test_recipe_reference_in_a_document():
    doc = {"kind": "comonad", "name": "g", "payload": {"base": "recipe:heyting-chain(3)",
                                                        "obj_map": {"0": "0", "m": "0", "1": "1"}}}
    [(name, G)] = dsl.Workspace(dsl.parse_documents(json.dumps(doc))).build_all()
    assert G.g.functor.obj_map == (0, 0, 2)


def test_non_monotone_map_is_a_validation_error():
    doc = {"kind": "comonad", "name": "bad", "payload": {"base": CHAIN3, "obj_map": {"0": "0", "m": "1", "1": "0"}}}
    with pytest.raises(ValidationError) as e:
        dsl.parse_documents(json.dumps(doc, indent=2))
    assert e.value.line == 4 and e.value.col is not None
    assert any("m<=1" in v for v in e.value.violations)


def test_duplicate_key_is_a_parse_error():
    with pytest.raises(ParseError) as e:
        dsl.parse_documents('{"kind": "poset", "name": "p", "name": "q", "payload": {}}')
    assert "duplicate key" in str(e.value) and e.value.line == 1


def test_duplicate_instance_names():
    with pytest.raises(ParseError, match="duplicate instance name"):
        dsl.parse_documents(json.dumps([POSET, POSET]))


def test_syntax_error_has_position_and_expectation():
    with pytest.raises(ParseError) as e:
        dsl.parse_documents('{"kind": "poset",\n "name": "p" "payload": {}}')
    assert (e.value.line, e.value.col) == (2, 14)
    assert e.value.expected == ["','"]


def test_unknown_element_is_a_resolve_error():
    with pytest.raises(ResolveError) as e:
        dsl.parse_documents('{"kind": "poset", "name": "p", "payload": {"elements": ["a"], "leq": [["a", "z"]]}}')
    assert e.value.name == "z" and e.value.line == 1


def test_unknown_reference_is_a_resolve_error():
    bad = {"kind": "comonad", "name": "c", "payload": {"base": "nope", "obj_map": {}}}
    with pytest.raises(ResolveError) as e:
        dsl.parse_documents(json.dumps([POSET, bad]))
    assert e.value.name == "nope"


def test_unknown_kind():
    with pytest.raises(ParseError, match="unknown kind"):
        dsl.parse_documents('{"kind": "widget", "name": "p", "payload": {}}')


def test_missing_required_payload_key():
    with pytest.raises(ParseError, match="lacks 'leq'"):
        dsl.parse_documents('{"kind": "poset", "name": "p", "payload": {"elements": []}}')


def test_single_instance_parse_rejects_arrays():
    with pytest.raises(ParseError):
        dsl.parse_instance(json.dumps([POSET, dict(POSET, name="q")]))


def test_load_input_from_files_and_recipes(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps(POSET), encoding="utf-8")
    [(name, P)] = dsl.load_input(str(f))
    assert name == "p" and P.n_obj == 2
    assert dsl.load_input("recipe:diamond")[0][0] == "diamond"


def test_generated_instance_serializes(tmp_path):
    docs = dsl.generate_instance("diamond")
    f = tmp_path / "d.json"
    f.write_text(dsl.serialize(docs if len(docs) > 1 else docs[0]), encoding="utf-8")
    [(_, D)] = dsl.load_file(f)
    assert fc.find_isomorphism(D.base, g.diamond().base) is not None


def test_bad_recipe():
    with pytest.raises(UnknownRecipe):
        dsl.load_input("recipe:heyting-chain(x)")
