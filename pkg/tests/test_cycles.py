import random

from hypothesis import given, settings, strategies as st

from hbfp.cycles import NullCyclePolicy, closure_entries, is_cycle, transitive_closure
from graph_oracles import expected_cycle, warshall
from helpers import build, labelled


def test_self_loop_is_a_cycle():
    s = build("a")
    a = s.node("a")
    assert is_cycle(s, None, a, a)


def test_reverse_pair_is_a_cycle():
    s = build("ab", [("b", "a")])
    assert is_cycle(s, None, s.node("a"), s.node("b"))


def test_path_back_is_a_cycle():
    s = build("abc", [("b", "c"), ("c", "a")])
    assert is_cycle(s, None, s.node("a"), s.node("b"))


def test_empty_image_has_no_cycle():
    s = build("ab")
    assert not is_cycle(s, None, s.node("a"), s.node("b"))


def test_null_policy():
    s = build("b")
    b = s.node("b")
    assert not is_cycle(s, None, None, b)
    assert not is_cycle(s, None, b, None, NullCyclePolicy.NEVER_CYCLES)
    assert is_cycle(s, None, None, b, NullCyclePolicy.PAPER_LITERAL)


def test_excluded_row_does_not_count():
    s = build("ab", [("b", "a")])
    a, b = s.node("a"), s.node("b")
    assert not is_cycle(s, 1, a, b)
    s.insert_row_raw(b, a)
    assert is_cycle(s, 1, a, b)


def test_closure_examples():
    assert labelled(transitive_closure(build("abc", [("a", "b"), ("b", "c")]))) == {
        ("a", "b"), ("b", "c"), ("a", "c"),
    }
    assert transitive_closure(build("a")) == frozenset()
    assert labelled(transitive_closure(build("ab", [("a", "b"), ("b", "a")]))) == {
        ("a", "b"), ("b", "a"), ("a", "a"), ("b", "b"),
    }


def test_closure_ignores_null_pairs_and_excluded_row():
    s = build("abc", [("a", "b"), ("b", None), (None, "c"), ("b", "c")])
    assert labelled(transitive_closure(s, excluded_row=4)) == {("a", "b")}


def test_levels_are_path_lengths():
    s = build("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    levels = {(e.d.label, e.a.label): e.level for e in closure_entries(s)}
    assert levels == {
        ("a", "b"): 1, ("b", "c"): 1, ("c", "d"): 1,
        ("a", "c"): 2, ("b", "d"): 2, ("a", "d"): 3,
    }


def test_level_count_bounded_by_node_count_squared():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 6)
        labels = "abcdef"[:n]
        pairs = [(x, y) for x in labels for y in labels if rng.random() < 0.4]
        entries = closure_entries(build(labels, pairs))
        assert len({(e.d, e.a) for e in entries}) == len(entries)
        assert max((e.level for e in entries), default=0) <= n * n


graphs = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n),
    )
)


@settings(max_examples=300, deadline=None)
@given(graphs)
def test_closure_matches_warshall(g):
    n, edges = g
    labels = "abcdef"[:n]
    pairs = [(labels[i], labels[j]) for i, j in edges]
    s = build(labels, pairs)
    assert labelled(transitive_closure(s)) == warshall(labels, set(pairs))


@settings(max_examples=300, deadline=None)
@given(graphs, st.data())
def test_is_cycle_matches_dfs(g, data):
    n, edges = g
    labels = "abcdef"[:n]
    s = build(labels, [(labels[i], labels[j]) for i, j in edges])
    excluded = data.draw(st.one_of(st.none(), st.integers(1, max(1, len(edges)))))
    u = data.draw(st.one_of(st.none(), st.sampled_from(s.nodes)))
    v = data.draw(st.one_of(st.none(), st.sampled_from(s.nodes)))
    assert is_cycle(s, excluded, u, v) == expected_cycle(s.rows, excluded, u, v)
