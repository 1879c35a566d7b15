import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isobias.graph import (Dataset, GraphError, IsoMode, degree_sequence, encode_labels, make_dataset,
                           make_graph)

from helpers import complete, graph, path, star


def test_both_orientations_collapse():
    g, rep = make_graph(3, [(0, 1), (1, 0), (1, 2)])
    assert g.edges == ((0, 1), (1, 2))
    assert rep.duplicates == 1
    assert rep.self_loops == 0


def test_single_vertex():
    g, rep = make_graph(1, [])
    assert g.node_count == 1 and g.edge_count == 0
    assert rep == type(rep)()


def test_self_loop_dropped_with_warning(caplog):
    g, rep = make_graph(4, [(0, 0), (0, 1)])
    assert g.edges == ((0, 1),)
    assert rep.self_loops == 1
    assert "self-loop" in caplog.text


@pytest.mark.parametrize("edges", [[(0, 3)], [(-1, 0)]])
def test_endpoint_out_of_range(edges):
    with pytest.raises(GraphError):
        make_graph(3, edges)


def test_label_length_mismatch():
    with pytest.raises(GraphError):
        make_graph(3, [(0, 1)], node_labels=[0, 1])
    with pytest.raises(GraphError):
        make_graph(3, [(0, 1)], edge_labels=[0, 1])


def test_edge_label_conflict_keeps_first():
    g, rep = make_graph(2, [(0, 1), (1, 0)], edge_labels=[3, 4])
    assert g.edge_labels == (3,)
    assert rep.label_conflicts == 1


def test_constructor_rejects_unnormalised_edges():
    g = graph(3, [(0, 1)])
    with pytest.raises(GraphError):
        type(g)(3, ((1, 0),))
    with pytest.raises(GraphError):
        type(g)(3, ((0, 1), (0, 1)))


def test_graph_is_immutable():
    g = graph(3, [(0, 1)], [0, 1, 2])
    with pytest.raises(dataclasses.FrozenInstanceError):
        g.node_count = 4
    assert isinstance(g.edges, tuple) and isinstance(g.node_labels, tuple)


@pytest.mark.parametrize("g, expected", [
    (complete(3), [2, 2, 2]),
    (path(3), [2, 1, 1]),
    (star(3), [3, 1, 1, 1]),
])
def test_degree_sequence(g, expected):
    assert degree_sequence(g) == expected


edge_lists = st.integers(1, 9).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=30)))


@given(edge_lists, st.randoms(use_true_random=False))
@settings(max_examples=200, deadline=None)
def test_normalisation_is_order_independent(data, rnd):
    n, edges = data
    shuffled = list(edges)
    rnd.shuffle(shuffled)
    shuffled = [(v, u) if rnd.random() < 0.5 else (u, v) for u, v in shuffled]
    assert make_graph(n, edges)[0].edges == make_graph(n, shuffled)[0].edges


@given(edge_lists, st.randoms(use_true_random=False))
@settings(max_examples=200, deadline=None)
def test_degree_sequence_relabel_invariant(data, rnd):
    n, edges = data
    g = make_graph(n, edges)[0]
    perm = list(range(n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert degree_sequence(h) == degree_sequence(g)
    assert len(degree_sequence(g)) == n
    for v in range(n):
        assert len(h.neighbors(perm[v])) == len(g.neighbors(v))


def test_relabel_moves_labels():
    g = graph(3, [(0, 1)], [5, 6, 7])
    h = g.relabel([2, 0, 1])
    assert h.edges == ((0, 2),)
    assert h.node_labels == (6, 7, 5)


def test_mode_label_requirements():
    plain = graph(2, [(0, 1)])
    nl = graph(2, [(0, 1)], [0, 1])
    full = graph(2, [(0, 1)], [0, 1], [0])
    assert plain.has_labels_for(IsoMode.TOPOLOGY)
    assert not plain.has_labels_for(IsoMode.NODE_LABELS)
    assert nl.has_labels_for(IsoMode.NODE_LABELS)
    assert not nl.has_labels_for(IsoMode.NODE_AND_EDGE_LABELS)
    assert full.has_labels_for(IsoMode.NODE_AND_EDGE_LABELS)


@pytest.mark.parametrize("text, mode", [("topology", IsoMode.TOPOLOGY), ("NodeLabels", IsoMode.NODE_LABELS),
                                        ("node-edge-labels", IsoMode.NODE_AND_EDGE_LABELS)])
def test_mode_parse(text, mode):
    assert IsoMode.parse(text) is mode


def test_dataset_invariants():
    with pytest.raises(GraphError):
        Dataset("x", (graph(1, []),), ())
    ds = make_dataset("x", [graph(1, []), graph(2, [(0, 1)])], ["b", "a"])
    assert ds.class_labels == (1, 0)
    assert ds.class_names == ("a", "b")
    assert ds.num_classes == 2 and len(ds) == 2


def test_subset_drops_unused_classes():
    ds = make_dataset("x", [graph(1, [])] * 3, [3, 7, 9])
    sub = ds.subset([2, 0])
    assert sub.class_names == (3, 9)
    assert sub.class_labels == (1, 0)


def test_encode_labels_dense_and_sorted():
    ids, names = encode_labels([10, 2, 10, 5])
    assert names == (2, 5, 10)
    assert ids == [2, 0, 2, 1]
    rng = random.Random(0)
    vals = [rng.randrange(100) for _ in range(50)]
    ids, names = encode_labels(vals)
    assert [names[i] for i in ids] == vals
