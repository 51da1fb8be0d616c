import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotalg import (
    ResiduatedAlgebra,
    algebra_to_document,
    doc_to_algebra,
    emit_document,
    lift_modal,
    load,
    parse_document,
    rotate,
)
from rotalg.document import fixture_names, read_text
from rotalg.enumeration import enumerate_forests, godel_from_forest
from rotalg.errors import InconsistentTables, NoResiduum, ParseError, SchemaError

TWO = {"elements": ["0", "1"], "covers": [["0", "1"]]}


def test_shipped_fixtures():
    assert fixture_names() == ["fig1_godel", "fig2_godel"]
    A, m, doc = load("fig1_godel")
    assert A.labels == ("⊥", "a", "b", "c", "⊤")
    assert doc.name
    assert m.box_labels() == {"⊥": "⊥", "a": "a", "b": "c", "c": "b", "⊤": "⊤"}
    assert m.diamond_labels() == {"⊥": "⊥", "a": "⊥", "b": "a", "c": "a", "⊤": "a"}
    _, m2, _ = load("fig2_godel.json")
    assert m2.diamond_labels()["a"] == "a"


def test_round_trip_of_fixtures():
    for name in fixture_names():
        text = read_text(name)
        doc = parse_document(text)
        assert parse_document(emit_document(doc)) == doc


def test_rotated_document_round_trip(fig1):
    A, m = fig1
    R = rotate(A, "plus")
    doc = algebra_to_document(R.algebra, lift_modal(R, m), {"note": "lifted"})
    assert doc.fixpoint == "(⊥,⊥)"
    assert doc.star is not None  # not meet
    again = parse_document(emit_document(doc))
    assert again == doc
    B, L = doc_to_algebra(again)
    assert B.same_tables(R.algebra)
    assert L.box == lift_modal(R, m).box


def test_empty_elements_rejected():
    with pytest.raises(SchemaError) as err:
        parse_document('{"elements": [], "covers": []}')
    assert err.value.field == "elements"


@pytest.mark.parametrize("doc, field", [
    ({"elements": ["0", "0"]}, "elements"),
    ({**TWO, "colour": 1}, "colour"),
    ({**TWO, "covers": [["0", "2"]]}, "covers"),
    ({**TWO, "covers": [["0"]]}, "covers"),
    ({**TWO, "star": [["0", "0"]]}, "star"),
    ({**TWO, "fixpoint": "x"}, "fixpoint"),
    ({**TWO, "modal": {"box": {"0": "0", "1": "1"}}}, "modal.diamond"),
    ({**TWO, "modal": {"box": {"0": "0"}, "diamond": {"0": "0", "1": "1"}}}, "modal.box"),
    ({**TWO, "modal": {"box": {}, "diamond": {}, "ring": {}}}, "modal"),
    ({**TWO, "format": "rotalg/9"}, "format"),
    ([1, 2], "document"),
])
def test_schema_errors_name_the_field(doc, field):
    with pytest.raises(SchemaError) as err:
        parse_document(json.dumps(doc))
    assert err.value.field == field


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_document('{\n  "elements": ["0", "1"],\n  "covers": [["0" "1"]]\n}')
    assert (err.value.line, err.value.column) == (3, 19)


def test_bad_star_table_is_rejected_downstream():
    doc = parse_document(json.dumps({
        "elements": ["⊥", "p", "q", "⊤"],
        "covers": [["⊥", "p"], ["⊥", "q"], ["p", "⊤"], ["q", "⊤"]],
        "star": [["⊥"] * 4, ["⊥"] * 4, ["⊥"] * 4, ["⊥", "⊥", "⊥", "⊤"]],
    }))
    with pytest.raises(NoResiduum, match="⊤"):
        doc_to_algebra(doc)


def test_star_defaults_to_meet():
    A, m = doc_to_algebra(parse_document(json.dumps(TWO)))
    assert (A.star == A.meet).all() and m is None


def test_missing_source():
    with pytest.raises(FileNotFoundError):
        read_text("no_such_fixture")


def test_inconsistent_arrow_is_rejected():
    A, _ = doc_to_algebra(parse_document(json.dumps(TWO)))
    with pytest.raises(InconsistentTables):
        ResiduatedAlgebra(A.lattice, arrow=[[1, 1], [1, 1]])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.sampled_from(list(enumerate_forests(n)))),
       st.sampled_from([None, "plus", "minus"]))
def test_emit_parse_is_identity(F, mode):
    A = godel_from_forest(F)
    if mode is not None:
        A = rotate(A, mode).algebra
    doc = algebra_to_document(A)
    assert parse_document(emit_document(doc)) == doc
    B, _ = doc_to_algebra(doc)
    assert B.same_tables(A)
