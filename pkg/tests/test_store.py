import pytest
from hypothesis import given, settings, strategies as st

from hbfp.store import (
    DuplicateLabel,
    InvalidLabel,
    NodeReferenced,
    RelationState,
    StoreError,
    UnknownNode,
    UnknownRow,
    cell_eq,
    format_pair,
)
from helpers import build, image_labels


def test_add_first_node():
    s = RelationState()
    n = s.add_node("ann")
    assert n.id == 1 and n.label == "ann"
    assert len(s.nodes) == 1


def test_duplicate_label():
    s = build("a")
    with pytest.raises(DuplicateLabel):
        s.add_node("a")


@pytest.mark.parametrize("label", ["", "a b", "x=y", "null", "tab\there", 3])
def test_invalid_labels(label):
    with pytest.raises(InvalidLabel):
        RelationState().add_node(label)


def test_nodes_independent_of_rows():
    s = build(["ann", "bob"], [("ann", "bob")])
    s.add_node("eve")
    assert len(s.nodes) == 3 and len(s) == 1


def test_remove_node():
    s = build("a")
    s.remove_node(s.node("a"))
    assert s.nodes == []


def test_remove_referenced_node_lists_rows():
    s = build("ab", [("a", "b"), ("b", "b"), ("a", None)])
    with pytest.raises(NodeReferenced) as info:
        s.remove_node(s.node("a"))
    assert info.value.row_ids == [1, 3]


def test_remove_unreferenced_node():
    s = build("ab", [("a", "a")])
    s.remove_node(s.node("b"))
    assert [n.label for n in s.nodes] == ["a"]


def test_insert_with_null_and_diagonal():
    s = build("a", [("a", None), ("a", "a")])
    assert image_labels(s) == {("a", None), ("a", "a")}


def test_duplicate_rows_collapse_in_image():
    s = build("ab", [("a", "b"), ("a", "b"), ("b", "a")])
    assert len(s) == 3
    assert image_labels(s) == {("a", "b"), ("b", "a")}
    assert s.pair_count((s.node("a"), s.node("b"))) == 2


def test_insert_unknown_node():
    s = build("a")
    other = build("ab").node("b")
    with pytest.raises(UnknownNode):
        s.insert_row_raw(s.node("a"), other)


def test_update_keeps_row_id():
    s = build("ab", [("a", "b")])
    s.update_row_raw(1, s.node("a"), None)
    assert s.row(1).pair == (s.node("a"), None)
    assert image_labels(s) == {("a", None)}


def test_update_errors():
    s = build("a", [("a", "a")])
    with pytest.raises(UnknownRow):
        s.update_row_raw(9, None, None)
    with pytest.raises(UnknownNode):
        s.update_row_raw(1, build("ab").node("b"), None)


def test_delete_and_retire_id():
    s = build("ab", [("a", "b"), ("a", "b")])
    s.delete_row_raw(1)
    assert len(s) == 1 and image_labels(s) == {("a", "b")}
    with pytest.raises(UnknownRow):
        s.delete_row_raw(1)
    s.delete_row_raw(2)
    assert s.image() == frozenset()
    assert s.insert_row_raw(None, None) == 3


def test_image_excluding_respects_duplicates():
    s = build("ab", [("a", "b"), ("a", "b"), ("b", "a")])
    ab = (s.node("a"), s.node("b"))
    assert ab in s.image_excluding(1)
    s.delete_row_raw(2)
    assert ab not in s.image_excluding(1)
    assert s.image_excluding(None) == set(s.image())


def test_cell_equality_treats_null_as_unequal():
    s = build("a")
    a = s.node("a")
    assert cell_eq(a, a)
    assert not cell_eq(None, None)
    assert not cell_eq(a, None)


def test_format_pair():
    s = build("a")
    assert format_pair((s.node("a"), None)) == "(a,null)"


def test_copy_is_independent():
    s = build("ab", [("a", "b")])
    c = s.copy()
    c.insert_row_raw(None, None)
    c.add_node("c")
    assert len(s) == 1 and len(s.nodes) == 2
    assert c.fingerprint() != s.fingerprint()


def test_restore_validates_counters():
    s = build("ab", [("a", "b")])
    with pytest.raises(StoreError):
        RelationState.restore(s.nodes, s.rows, next_node_id=2, next_row_id=2)
    with pytest.raises(StoreError):
        RelationState.restore(s.nodes, s.rows, next_node_id=3, next_row_id=1)
    r = RelationState.restore(s.nodes, s.rows, 3, 2)
    assert r.fingerprint() == s.fingerprint()


ops = st.lists(
    st.tuples(st.sampled_from(["ins", "upd", "del"]), st.integers(0, 40), st.integers(-1, 3), st.integers(-1, 3)),
    max_size=40,
)


@settings(max_examples=200, deadline=None)
@given(ops)
def test_raw_mutations_keep_invariants(script):
    s = build("abcd")
    nodes = s.nodes
    issued = []

    def cell(k):
        return None if k < 0 else nodes[k]

    for op, k, f, g in script:
        rows = s.rows
        if op == "ins" or not rows:
            issued.append(s.insert_row_raw(cell(f), cell(g)))
        elif op == "upd":
            s.update_row_raw(rows[k % len(rows)].row_id, cell(f), cell(g))
        else:
            s.delete_row_raw(rows[k % len(rows)].row_id)
        # image equals a fresh scan of rows
        assert s.image() == frozenset(r.pair for r in s.rows)
        for r in s.rows:
            for c in r.pair:
                assert c is None or s.has_node(c)
    assert issued == sorted(set(issued))
    assert [r.row_id for r in s.rows] == sorted(r.row_id for r in s.rows)
