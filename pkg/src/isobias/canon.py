"""Colour refinement and individualization-refinement canonical labelling.

The search tree is explored depth first. Each node refines the colouring,
records the tuple of cell sizes as its invariant, and branches on the first
smallest non-singleton cell. A leaf is scored by the sequence of invariants
along its path followed by the relabelled graph; the minimum score is the
canonical form. Subtrees whose invariant prefix is already worse than the best
leaf are cut, and automorphisms found from equal leaves prune sibling branches
lying in the same orbit of the point-wise stabilizer of the current path.
"""

from __future__ import annotations

import sys
from array import array
from dataclasses import dataclass
from typing import NewType, Sequence

from .graph import Graph, IsoMode, degree_sequence

DEFAULT_BUDGET = 10**7

Certificate = NewType("Certificate", bytes)

_MODE_CODE = {IsoMode.TOPOLOGY: 0, IsoMode.NODE_LABELS: 1, IsoMode.NODE_AND_EDGE_LABELS: 2}


class CanonError(Exception):
    pass


class LabelsRequired(CanonError, ValueError):
    pass


class BudgetExceeded(CanonError):
    def __init__(self, budget: int, graph_id: int | None = None):
        self.budget = budget
        self.graph_id = graph_id
        where = f"graph {graph_id}" if graph_id is not None else "graph"
        super().__init__(f"canonical search on {where} exceeded {budget} search nodes")


class InvalidColoring(CanonError, ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    """Vertex colouring with contiguous colour ids; cells are ordered by colour."""

    color_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.color_of and set(self.color_of) != set(range(max(self.color_of) + 1)):
            raise InvalidColoring("colour ids must be contiguous from 0")

    @classmethod
    def uniform(cls, n: int) -> "Coloring":
        return cls((0,) * n)

    @classmethod
    def from_values(cls, values: Sequence) -> "Coloring":
        """Colour by rank of each vertex's value."""
        rank = {v: i for i, v in enumerate(sorted(set(values)))}
        return cls(tuple(rank[v] for v in values))

    @property
    def num_colors(self) -> int:
        return max(self.color_of) + 1 if self.color_of else 0

    @property
    def cells(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.color_of):
            out[c].append(v)
        return tuple(tuple(c) for c in out)

    @property
    def is_discrete(self) -> bool:
        return self.num_colors == len(self.color_of)


def _require(g: Graph, mode: IsoMode) -> None:
    if mode.uses_node_labels and g.node_labels is None:
        raise LabelsRequired(f"{mode.value} mode needs node labels")
    if mode.uses_edge_labels and g.edge_labels is None:
        raise LabelsRequired(f"{mode.value} mode needs edge labels")


def initial_coloring(g: Graph, mode: IsoMode) -> Coloring:
    _require(g, mode)
    if mode.uses_node_labels:
        return Coloring.from_values(g.node_labels)
    return Coloring.uniform(g.node_count)


def _refine(adj, colors: list[int], labeled: bool) -> list[int]:
    # adj entries are neighbour ids, or (neighbour, edge label) when labeled.
    n = len(colors)
    num = max(colors) + 1 if n else 0
    while num < n:
        size = [0] * num
        for c in colors:
            size[c] += 1
        sigs = []
        append = sigs.append
        if labeled:
            for v in range(n):
                c = colors[v]
                if size[c] == 1:
                    append((c,))
                else:
                    append((c, tuple(sorted([(colors[u], lab) for u, lab in adj[v]]))))
        else:
            for v in range(n):
                c = colors[v]
                if size[c] == 1:
                    append((c,))
                else:
                    append((c, tuple(sorted([colors[u] for u in adj[v]]))))
        uniq = sorted(set(sigs))
        if len(uniq) == num:
            break
        rank = {s: i for i, s in enumerate(uniq)}
        colors = [rank[s] for s in sigs]
        num = len(uniq)
    return colors


def _adjacency(g: Graph, mode: IsoMode):
    if mode.uses_edge_labels:
        return g.labeled_adjacency, True
    return g.adjacency, False


def refine(g: Graph, initial: Coloring | None, mode: IsoMode = IsoMode.TOPOLOGY) -> Coloring:
    """Coarsest equitable refinement of ``initial``.

    New colours are numbered by the rank of (old colour, neighbour-colour
    multiset), so cell order is inherited from ``initial``.
    """
    _require(g, mode)
    if initial is None:
        initial = initial_coloring(g, mode)
    if len(initial.color_of) != g.node_count:
        raise InvalidColoring("colouring length differs from node count")
    if mode.uses_node_labels:
        owner: dict[int, int] = {}
        for c, lab in zip(initial.color_of, g.node_labels):
            if owner.setdefault(c, lab) != lab:
                raise InvalidColoring("initial colouring must refine the node-label partition")
    adj, labeled = _adjacency(g, mode)
    return Coloring(tuple(_refine(adj, list(initial.color_of), labeled)))


def _individualize(colors: list[int], v: int) -> list[int]:
    cv = colors[v]
    out = [c + 1 if c > cv else c for c in colors]
    for u, c in enumerate(colors):
        if c == cv and u != v:
            out[u] = cv + 1
    return out


def _cell_sizes(colors: list[int]) -> tuple[int, ...]:
    size = [0] * (max(colors) + 1)
    for c in colors:
        size[c] += 1
    return tuple(size)


class _Search:
    def __init__(self, g: Graph, mode: IsoMode, budget: int, graph_id: int | None):
        self.g = g
        self.mode = mode
        self.n = g.node_count
        self.adj, self.labeled = _adjacency(g, mode)
        self.budget = budget
        self.graph_id = graph_id
        self.nodes = 0
        self.best_traces: list[tuple[int, ...]] | None = None
        self.best_leaf: tuple | None = None
        self.best_colors: list[int] | None = None
        self.best_prefix: list[int] = []
        self.autos: list[list[int]] = []

    def leaf_encoding(self, pos: list[int]) -> tuple:
        g = self.g
        if self.mode.uses_node_labels:
            labs = [0] * self.n
            for v, lab in enumerate(g.node_labels):
                labs[pos[v]] = lab
            labs_t = tuple(labs)
        else:
            labs_t = ()
        if self.mode.uses_edge_labels:
            edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v]), lab)
                           for (u, v), lab in zip(g.edges, g.edge_labels))
        else:
            edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges)
        return labs_t, tuple(edges)

    def run(self) -> None:
        start = list(initial_coloring(self.g, self.mode).color_of)
        colors = _refine(self.adj, start, self.labeled)
        limit = sys.getrecursionlimit()
        if limit < 2 * self.n + 200:
            sys.setrecursionlimit(2 * self.n + 200)
        self._visit(colors, [], [])

    def _leaf(self, colors: list[int], prefix: list[int], traces: list) -> int:
        # Returns the depth to resume from: the common ancestor with the best
        # leaf when an automorphism maps that leaf here, else this leaf's depth.
        enc = self.leaf_encoding(colors)
        if self.best_traces is None or traces < self.best_traces or (
                traces == self.best_traces and enc < self.best_leaf):
            self.best_traces, self.best_leaf, self.best_colors = traces, enc, colors
            self.best_prefix = prefix
        elif traces == self.best_traces and enc == self.best_leaf:
            inv = [0] * self.n
            for v, p in enumerate(colors):
                inv[p] = v
            gamma = [inv[p] for p in self.best_colors]
            if any(gamma[v] != v for v in range(self.n)):
                self.autos.append(gamma)
                common = 0
                for a, b in zip(prefix, self.best_prefix):
                    if a != b:
                        break
                    common += 1
                return common
        return len(prefix)

    def _orbit_roots(self, prefix: list[int]) -> list[int]:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gamma in self.autos:
            if all(gamma[p] == p for p in prefix):
                for v in range(self.n):
                    a, b = find(v), find(gamma[v])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return [find(v) for v in range(self.n)]

    def _visit(self, colors: list[int], prefix: list[int], traces: list) -> int:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget, self.graph_id)
        depth = len(prefix)
        sizes = _cell_sizes(colors) if colors else ()
        if len(sizes) == self.n:
            return self._leaf(colors, prefix, traces)
        target, best_size = -1, self.n + 1
        for c, s in enumerate(sizes):
            if 1 < s < best_size:
                target, best_size = c, s
        members = [v for v, c in enumerate(colors) if c == target]
        explored: list[int] = []
        roots: list[int] | None = None
        seen_autos = -1
        for v in members:
            if explored and self.autos:
                if seen_autos != len(self.autos):
                    roots = self._orbit_roots(prefix)
                    seen_autos = len(self.autos)
                rv = roots[v]
                if any(roots[w] == rv for w in explored):
                    continue
            explored.append(v)
            child = _refine(self.adj, _individualize(colors, v), self.labeled)
            path = traces + [_cell_sizes(child)]
            if self.best_traces is not None and path > self.best_traces[: len(path)]:
                continue
            resume = self._visit(child, prefix + [v], path)
            if resume < depth:
                return resume
        return depth


@dataclass(frozen=True)
class CanonicalForm:
    mode: IsoMode
    labeling: tuple[int, ...]
    certificate: Certificate
    search_nodes: int
    automorphisms_found: int


def _encode(mode: IsoMode, n: int, leaf: tuple) -> Certificate:
    labs, edges = leaf
    data = array("q", [_MODE_CODE[mode], n, len(labs)])
    data.extend(labs)
    data.append(len(edges))
    for e in edges:
        data.extend(e)
    return Certificate(b"ISO1" + data.tobytes())


def canonical_form(g: Graph, mode: IsoMode = IsoMode.TOPOLOGY, budget: int = DEFAULT_BUDGET,
                   graph_id: int | None = None) -> CanonicalForm:
    mode = IsoMode.parse(mode)
    _require(g, mode)
    search = _Search(g, mode, budget, graph_id)
    if g.node_count == 0:
        leaf: tuple = ((), ())
        labeling: tuple[int, ...] = ()
    else:
        search.run()
        leaf = search.best_leaf
        labeling = tuple(search.best_colors)
    return CanonicalForm(mode, labeling, _encode(mode, g.node_count, leaf),
                         search.nodes, len(search.autos))


def certificate(g: Graph, mode: IsoMode = IsoMode.TOPOLOGY, budget: int = DEFAULT_BUDGET,
                graph_id: int | None = None) -> Certificate:
    return canonical_form(g, mode, budget, graph_id).certificate


def invariant_key(g: Graph, mode: IsoMode) -> tuple:
    """Cheap isomorphism invariant used to skip pairs that cannot match."""
    key: tuple = (g.node_count, g.edge_count, tuple(degree_sequence(g)))
    if mode.uses_node_labels:
        key += (tuple(sorted(g.node_labels)),)
    if mode.uses_edge_labels:
        key += (tuple(sorted(g.edge_labels)),)
    return key


def verify_witness(g1: Graph, g2: Graph, phi: Sequence[int], mode: IsoMode) -> bool:
    n = g1.node_count
    if n != g2.node_count or g1.edge_count != g2.edge_count or sorted(phi) != list(range(n)):
        return False
    if mode.uses_node_labels:
        if any(g1.node_labels[v] != g2.node_labels[phi[v]] for v in range(n)):
            return False
    target = g2.edge_label_map() if mode.uses_edge_labels else None
    edges2 = set(g2.edges)
    for k, (u, v) in enumerate(g1.edges):
        a, b = phi[u], phi[v]
        e = (a, b) if a < b else (b, a)
        if e not in edges2:
            return False
        if target is not None and target[e] != g1.edge_labels[k]:
            return False
    return True


def is_isomorphic(g1: Graph, g2: Graph, mode: IsoMode = IsoMode.TOPOLOGY,
                  budget: int = DEFAULT_BUDGET) -> tuple[int, ...] | None:
    """Return a verified isomorphism ``phi`` (``phi[v]`` in ``g2``) or None."""
    mode = IsoMode.parse(mode)
    _require(g1, mode)
    _require(g2, mode)
    if invariant_key(g1, mode) != invariant_key(g2, mode):
        return None
    c1 = canonical_form(g1, mode, budget)
    c2 = canonical_form(g2, mode, budget)
    if c1.certificate != c2.certificate:
        return None
    inv2 = [0] * g2.node_count
    for v, p in enumerate(c2.labeling):
        inv2[p] = v
    phi = tuple(inv2[p] for p in c1.labeling)
    if not verify_witness(g1, g2, phi, mode):
        raise CanonError("certificate match produced an invalid witness")
    return phi
