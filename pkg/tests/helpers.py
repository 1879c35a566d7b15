"""Small graph constructors shared by the tests."""

from __future__ import annotations

import random

from isobias.graph import Graph, make_dataset, make_graph


def graph(n: int, edges, labels=None, edge_labels=None) -> Graph:
    return make_graph(n, edges, node_labels=labels, edge_labels=edge_labels)[0]


def cycle(n: int, labels=None) -> Graph:
    return graph(n, [(i, (i + 1) % n) for i in range(n)], labels)


def path(n: int, labels=None) -> Graph:
    return graph(n, [(i, i + 1) for i in range(n - 1)], labels)


def star(leaves: int) -> Graph:
    return graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    return graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def disjoint(*gs: Graph) -> Graph:
    edges, labels, off = [], [], 0
    for g in gs:
        edges += [(u + off, v + off) for u, v in g.edges]
        labels += list(g.node_labels or [0] * g.node_count)
        off += g.node_count
    has = all(g.node_labels is not None for g in gs)
    return graph(off, edges, labels if has else None)


def dataset(graphs, labels, name="T"):
    return make_dataset(name, graphs, labels)


def random_graph(rng: random.Random, n: int, p: float, n_labels: int = 0, n_edge_labels: int = 0) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    labels = [rng.randrange(n_labels) for _ in range(n)] if n_labels else None
    elabels = [rng.randrange(n_edge_labels) for _ in edges] if n_edge_labels else None
    return graph(n, edges, labels, elabels)


def shuffled(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.node_count))
    rng.shuffle(perm)
    return g.relabel(perm)
