import itertools
import json
from fractions import Fraction
from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isobias.audit import (OrbitPartition, audit, audit_metrics, compute_orbits,
                           histogram_csv, orbit_histogram)
from isobias.canon import LabelsRequired
from isobias.graph import IsoMode

from helpers import complete, cycle, dataset, disjoint, path, random_graph, shuffled

T, NL = IsoMode.TOPOLOGY, IsoMode.NODE_LABELS


def vf2_orbits(ds, mode):
    """Reference partition from pairwise VF2 tests, independent of certificates."""
    match = nx.algorithms.isomorphism.categorical_node_match("l", None) if mode is NL else None
    nxg = []
    for g in ds.graphs:
        h = nx.Graph()
        h.add_nodes_from((v, {"l": g.node_labels[v] if g.node_labels else 0}) for v in range(g.node_count))
        h.add_edges_from(g.edges)
        nxg.append(h)
    parent = list(range(len(ds)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(len(ds)), 2):
        gi, gj = ds.graphs[i], ds.graphs[j]
        if (gi.node_count, gi.edge_count) != (gj.node_count, gj.edge_count) or find(i) == find(j):
            continue
        if nx.is_isomorphic(nxg[i], nxg[j], node_match=match):
            parent[find(j)] = find(i)
    groups = {}
    for i in range(len(ds)):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(sorted(g)) for g in groups.values())


def brute_metrics(ds, orbits):
    """I, pair count and mismatched count straight from the definitions, pair by pair."""
    same = {(i, j) for o in orbits for i, j in itertools.combinations(o, 2)}
    iso_graphs = {i for p in same for i in p}
    mismatched = {i for i, j in same if ds.class_labels[i] != ds.class_labels[j]}
    mismatched |= {j for i, j in same if ds.class_labels[i] != ds.class_labels[j]}
    # a graph is mismatched if its orbit has >1 label even when its own pair partners agree
    for o in orbits:
        if len({ds.class_labels[i] for i in o}) > 1:
            mismatched |= set(o)
    return len(iso_graphs), len(same), len(mismatched)


def test_k3_k3_p3():
    ds = dataset([complete(3), complete(3), path(3)], [0, 1, 0])
    orbits = compute_orbits(ds)
    assert orbits.orbits == ((0, 1), (2,))
    rep = audit_metrics(ds, orbits)
    j = rep.to_json()
    assert (rep.I, j["I_pct"], j["IP_pct"], j["mismatched_pct"]) == (2, 66.67, 33.33, 66.67)
    assert rep.I_pct == Fraction(200, 3) and rep.IP_pct == Fraction(100, 3)
    assert brute_metrics(ds, orbits.orbits) == (2, 1, 2)


def test_all_distinct():
    ds = dataset([path(2), path(3), path(4), cycle(4)], [0, 1, 0, 1])
    rep = audit(ds)
    assert (rep.I, rep.iso_pairs, rep.mismatched) == (0, 0, 0)
    assert rep.orbits_nontrivial == 0 and rep.orbits_total == 4


def test_empty_dataset():
    rep = audit(dataset([], []))
    assert rep.N == 0 and rep.I_pct == 0 and rep.IP_pct == 0
    assert rep.to_json()["histogram"] == []


def test_histogram_examples():
    part = OrbitPartition(T, 3, ((0, 1), (2,)))
    assert orbit_histogram(part) == ({2: 1}, 1)
    big = OrbitPartition(T, 300, (tuple(range(300)),))
    assert orbit_histogram(big) == ({300: 1}, 0)
    assert histogram_csv({2: 1, 5: 3}) == "orbit_size,count\n2,1\n5,3\n"


def test_requires_labels():
    with pytest.raises(LabelsRequired):
        compute_orbits(dataset([path(3)], [0]), NL)


def test_json_schema_keys():
    rep = audit(dataset([complete(3), complete(3)], [0, 0]))
    keys = set(rep.to_json())
    assert {"dataset", "mode", "N", "orbits_nontrivial", "orbits_total", "I", "I_pct", "IP_pct",
            "mismatched", "mismatched_pct", "histogram"} <= keys
    json.dumps(rep.to_json())


def test_mutag_topology(mutag):
    rep = audit(mutag, T)
    assert rep.I == 79
    j = rep.to_json()
    assert (j["I_pct"], j["IP_pct"], j["mismatched_pct"]) == (42.02, 0.49, 6.91)
    hist = rep.histogram
    assert sum(s * c for s, c in hist.items()) == 79
    assert sum(hist.values()) == rep.orbits_nontrivial


@pytest.mark.parametrize("mode", [T, NL])
def test_mutag_matches_vf2_partition(mutag, mode):
    assert list(compute_orbits(mutag, mode).orbits) == vf2_orbits(mutag, mode)


def test_cuneiform_matches_vf2_partition(cuneiform):
    assert list(compute_orbits(cuneiform, T).orbits) == vf2_orbits(cuneiform, T)


def test_trust_certificates_gives_same_partition(mutag):
    assert compute_orbits(mutag, T, trust_certificates=True) == compute_orbits(mutag, T)


def test_parallel_workers_give_same_partition(mutag):
    assert compute_orbits(mutag, T, jobs=3) == compute_orbits(mutag, T)


def test_node_labels_refine_topology(mutag, cuneiform):
    for ds in (mutag, cuneiform):
        topo = compute_orbits(ds, T).orbit_index()
        nl = compute_orbits(ds, NL)
        for o in nl.orbits:
            assert len({topo[i] for i in o}) == 1
        assert audit_metrics(ds, nl).I <= audit(ds, T).I


@st.composite
def small_datasets(draw):
    rnd = draw(st.randoms(use_true_random=False))
    base = [random_graph(rnd, rnd.randrange(1, 6), 0.5, n_labels=2) for _ in range(draw(st.integers(1, 5)))]
    gs, ys = [], []
    for _ in range(draw(st.integers(0, 14))):
        g = base[rnd.randrange(len(base))]
        gs.append(shuffled(g, rnd))
        ys.append(rnd.randrange(3))
    return dataset(gs, ys)


@given(small_datasets())
@settings(max_examples=120, deadline=None)
def test_metric_invariants(ds):
    for mode in (T, NL):
        orbits = compute_orbits(ds, mode)
        rep = audit_metrics(ds, orbits)
        assert sorted(i for o in orbits.orbits for i in o) == list(range(len(ds)))
        assert rep.I == sum(len(o) for o in orbits.nontrivial)
        assert rep.I + rep.trivial_orbits == len(ds)
        for pct in (rep.I_pct, rep.IP_pct, rep.mismatched_pct):
            assert 0 <= pct <= 100
        assert rep.mismatched <= rep.I
        pairs_from_hist = sum(c * comb(s, 2) for s, c in rep.histogram.items())
        if len(ds) > 1:
            assert rep.IP_pct == Fraction(100 * pairs_from_hist, comb(len(ds), 2))
        assert (rep.I, rep.iso_pairs, rep.mismatched) == brute_metrics(ds, orbits.orbits)
        assert list(orbits.orbits) == vf2_orbits(ds, mode)


@given(small_datasets(), st.randoms(use_true_random=False))
@settings(max_examples=80, deadline=None)
def test_shuffle_stability(ds, rnd):
    order = list(range(len(ds)))
    rnd.shuffle(order)
    moved = ds.subset(order)
    # class labels are irrelevant to orbits; compare partitions mapped back to original ids
    a = {frozenset(o) for o in compute_orbits(ds).orbits}
    b = {frozenset(order[i] for i in o) for o in compute_orbits(moved).orbits}
    assert a == b


def test_report_is_deterministic(mutag):
    a = json.dumps(audit(mutag, T).to_json(), sort_keys=True)
    b = json.dumps(audit(mutag, T, jobs=2).to_json(), sort_keys=True)
    assert a == b


def test_disconnected_graphs_grouped():
    g1 = disjoint(cycle(3), path(2))
    g2 = disjoint(path(2), cycle(3))
    g3 = disjoint(cycle(5))
    rep = audit(dataset([g1, g2, g3], [0, 0, 1]))
    assert rep.orbits_nontrivial == 1 and rep.I == 2 and rep.mismatched == 0
