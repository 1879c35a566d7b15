import random

from hypothesis import given, settings
from hypothesis import strategies as st

from isobias.audit import compute_orbits
from isobias.canon import is_isomorphic
from isobias.cleanse import clean, verify_clean
from isobias.tu import load_dataset, write_dataset

from helpers import complete, cycle, dataset, path, random_graph, shuffled


def test_mutag(mutag):
    out, rep = clean(mutag)
    j = rep.to_json()
    assert len(out) == rep.cleaned_size == 135
    assert j["retention_pct"] == 71.81
    assert (j["avg_nodes"], j["avg_edges"], j["classes"], j["min_class"], j["max_class"]) == \
        (18.85, 20.84, 2, 42, 93)
    assert rep.cleaned_size + rep.removed_mismatched_orbits == rep.orbits_total
    assert verify_clean(out) == (True, [])


def test_cuneiform_is_all_mismatched(cuneiform):
    out, rep = clean(cuneiform)
    # every graph sits in a non-trivial orbit with conflicting labels, or is kept once
    assert rep.cleaned_size + rep.removed_mismatched_orbits == rep.orbits_total
    assert verify_clean(out)[0]


def test_lowest_id_kept_and_order_preserved():
    ds = dataset([path(3), complete(3), path(3), cycle(4), complete(3)], ["a", "b", "a", "c", "d"])
    out, rep = clean(ds)
    # K3 orbit {1, 4} has labels b/d and is dropped; P3 keeps id 0
    assert [g.same_as(ds.graphs[i]) for g, i in zip(out.graphs, (0, 3))] == [True, True]
    assert out.class_names == ("a", "c")
    assert (rep.removed_mismatched_orbits, rep.removed_mismatched_graphs, rep.removed_duplicates) == (1, 2, 1)


def test_verify_clean_examples():
    assert verify_clean(dataset([complete(3), complete(3)], [0, 0])) == (False, [(0, 1)])
    assert verify_clean(dataset([], [])) == (True, [])


def test_empty():
    out, rep = clean(dataset([], []))
    assert len(out) == 0 and rep.retention == 0


def test_idempotent_on_disk(mutag, tmp_path):
    once, _ = clean(mutag)
    d1 = write_dataset(once, tmp_path / "a")
    twice, rep2 = clean(load_dataset(d1))
    d2 = write_dataset(twice, tmp_path / "b")
    assert rep2.cleaned_size == len(once)
    for f in sorted(d1.iterdir()):
        assert f.read_bytes() == (d2 / f.name).read_bytes()


@st.composite
def noisy(draw):
    rnd = draw(st.randoms(use_true_random=False))
    base = [random_graph(rnd, rnd.randrange(1, 6), 0.5) for _ in range(draw(st.integers(1, 5)))]
    gs, ys = [], []
    for _ in range(draw(st.integers(0, 15))):
        gs.append(shuffled(base[rnd.randrange(len(base))], rnd))
        ys.append(rnd.randrange(2))
    return dataset(gs, ys)


@given(noisy())
@settings(max_examples=100, deadline=None)
def test_clean_properties(ds):
    out, rep = clean(ds)
    again, _ = clean(out)
    assert all(a.same_as(b) for a, b in zip(out.graphs, again.graphs)) and len(out) == len(again)
    assert verify_clean(out)[0]
    for g in out.graphs:
        assert any(is_isomorphic(g, h) is not None for h in ds.graphs)
    orbits = compute_orbits(ds)
    assert rep.cleaned_size + rep.removed_mismatched_orbits == len(orbits.orbits)
    assert rep.retention * len(ds) == 100 * len(out) or not len(ds)


def test_uses_topology_even_with_labels():
    a = path(3, [0, 1, 0])
    b = path(3, [1, 1, 1])
    out, rep = clean(dataset([a, b], [0, 0]))
    assert len(out) == 1 and rep.removed_duplicates == 1


def test_keeps_attributes_and_labels(cuneiform):
    rng = random.Random(0)
    ids = rng.sample(range(len(cuneiform)), 10)
    out, _ = clean(cuneiform.subset(sorted(ids)))
    for g in out.graphs:
        assert g.node_attributes is not None and g.node_labels is not None
