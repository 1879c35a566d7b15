"""Immutable graph and dataset model shared by the rest of the package."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graph input."""


class IsoMode(enum.Enum):
    TOPOLOGY = "topology"
    NODE_LABELS = "node-labels"
    NODE_AND_EDGE_LABELS = "node-edge-labels"

    @classmethod
    def parse(cls, value: "str | IsoMode") -> "IsoMode":
        if isinstance(value, IsoMode):
            return value
        key = value.strip().lower().replace("_", "-")
        aliases = {"topo": "topology", "labels": "node-labels", "nodes": "node-labels",
                   "nodelabels": "node-labels", "nodeandedgelabels": "node-edge-labels",
                   "node-and-edge-labels": "node-edge-labels", "all-labels": "node-edge-labels"}
        key = aliases.get(key, key)
        for mode in cls:
            if mode.value == key:
                return mode
        raise ValueError(f"unknown isomorphism mode {value!r}")

    @property
    def uses_node_labels(self) -> bool:
        return self is not IsoMode.TOPOLOGY

    @property
    def uses_edge_labels(self) -> bool:
        return self is IsoMode.NODE_AND_EDGE_LABELS


@dataclass(frozen=True)
class NormalizationReport:
    self_loops: int = 0
    duplicates: int = 0
    label_conflicts: int = 0

    def __add__(self, other: "NormalizationReport") -> "NormalizationReport":
        return NormalizationReport(self.self_loops + other.self_loops,
                                   self.duplicates + other.duplicates,
                                   self.label_conflicts + other.label_conflicts)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..node_count-1``.

    ``edges`` is the sorted tuple of ``(u, v)`` pairs with ``u < v``. Edge-keyed
    data (``edge_labels``, ``edge_attributes``) is aligned with ``edges``.
    Build instances with :func:`make_graph`; the constructor only validates.
    """

    node_count: int
    edges: tuple[Edge, ...]
    node_labels: tuple[int, ...] | None = None
    edge_labels: tuple[int, ...] | None = None
    node_attributes: tuple[tuple[float, ...], ...] | None = None
    edge_attributes: tuple[tuple[float, ...], ...] | None = None
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _ladj: tuple[tuple[tuple[int, int], ...], ...] | None = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.node_count
        if n < 0:
            raise GraphError("node_count must be non-negative")
        prev = None
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < n):
                raise GraphError(f"edge {e} is not a normalized pair in range [0, {n})")
            if prev is not None and e <= prev:
                raise GraphError("edges must be sorted and unique")
            prev = e
        if self.node_labels is not None and len(self.node_labels) != n:
            raise GraphError(f"node_labels has {len(self.node_labels)} entries, expected {n}")
        if self.node_attributes is not None and len(self.node_attributes) != n:
            raise GraphError("node_attributes length differs from node_count")
        for name in ("edge_labels", "edge_attributes"):
            val = getattr(self, name)
            if val is not None and len(val) != len(self.edges):
                raise GraphError(f"{name} must align with the edge set")

        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        if self.edge_labels is not None:
            ladj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
            for (u, v), lab in zip(self.edges, self.edge_labels):
                ladj[u].append((v, lab))
                ladj[v].append((u, lab))
            object.__setattr__(self, "_ladj", tuple(tuple(sorted(a)) for a in ladj))
        else:
            object.__setattr__(self, "_ladj", None)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @property
    def labeled_adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...] | None:
        """Per-vertex ``(neighbor, edge label)`` pairs, or None without edge labels."""
        return self._ladj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def edge_label_map(self) -> dict[Edge, int]:
        if self.edge_labels is None:
            return {}
        return dict(zip(self.edges, self.edge_labels))

    def has_labels_for(self, mode: IsoMode) -> bool:
        if mode.uses_node_labels and self.node_labels is None:
            return False
        if mode.uses_edge_labels and self.edge_labels is None:
            return False
        return True

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        n = self.node_count
        if sorted(perm) != list(range(n)):
            raise GraphError("perm is not a permutation of the vertex set")
        raw = [(perm[u], perm[v]) for u, v in self.edges]
        nl = None
        if self.node_labels is not None:
            tmp = [0] * n
            for v, lab in enumerate(self.node_labels):
                tmp[perm[v]] = lab
            nl = tmp
        na = None
        if self.node_attributes is not None:
            tmpa: list = [None] * n
            for v, a in enumerate(self.node_attributes):
                tmpa[perm[v]] = a
            na = tmpa
        g, _ = make_graph(n, raw, node_labels=nl, edge_labels=self.edge_labels,
                          node_attributes=na, edge_attributes=self.edge_attributes)
        return g

    def same_as(self, other: "Graph") -> bool:
        """Structural identity (not isomorphism): identical vertex numbering and data."""
        return (self.node_count == other.node_count and self.edges == other.edges
                and self.node_labels == other.node_labels
                and self.edge_labels == other.edge_labels
                and self.node_attributes == other.node_attributes
                and self.edge_attributes == other.edge_attributes)

    __eq__ = same_as

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges, self.node_labels, self.edge_labels))


def make_graph(
    node_count: int,
    edge_list: Iterable[tuple[int, int]],
    node_labels: Sequence[int] | None = None,
    edge_labels: Sequence[int] | None = None,
    node_attributes: Sequence[Sequence[float]] | None = None,
    edge_attributes: Sequence[Sequence[float]] | None = None,
) -> tuple[Graph, NormalizationReport]:
    """Normalize a raw edge list into a :class:`Graph`.

    Both orientations and repeated entries collapse to one undirected edge,
    self-loops are dropped. Per-edge data given for the raw list is kept from
    the first occurrence of each edge; disagreeing later occurrences are
    counted as label conflicts.
    """
    if node_count < 0:
        raise GraphError("node_count must be non-negative")
    raw = list(edge_list)
    if edge_labels is not None and len(edge_labels) != len(raw):
        raise GraphError(f"edge_labels has {len(edge_labels)} entries for {len(raw)} raw edges")
    if edge_attributes is not None and len(edge_attributes) != len(raw):
        raise GraphError("edge_attributes must align with the raw edge list")
    if node_labels is not None and len(node_labels) != node_count:
        raise GraphError(f"node_labels has {len(node_labels)} entries, expected {node_count}")
    if node_attributes is not None and len(node_attributes) != node_count:
        raise GraphError("node_attributes length differs from node_count")

    loops = dups = conflicts = 0
    seen: dict[Edge, int] = {}
    for i, (u, v) in enumerate(raw):
        u, v = int(u), int(v)
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise GraphError(f"edge ({u}, {v}) out of range for {node_count} vertices")
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        first = seen.get(key)
        if first is None:
            seen[key] = i
            continue
        dups += 1
        if edge_labels is not None and edge_labels[first] != edge_labels[i]:
            conflicts += 1
    if loops:
        logger.warning("dropped %d self-loop(s)", loops)

    edges = tuple(sorted(seen))
    elab = tuple(int(edge_labels[seen[e]]) for e in edges) if edge_labels is not None else None
    eattr = (tuple(tuple(float(x) for x in edge_attributes[seen[e]]) for e in edges)
             if edge_attributes is not None else None)
    nlab = tuple(int(x) for x in node_labels) if node_labels is not None else None
    nattr = (tuple(tuple(float(x) for x in row) for row in node_attributes)
             if node_attributes is not None else None)
    g = Graph(node_count, edges, nlab, elab, nattr, eattr)
    return g, NormalizationReport(loops, dups, conflicts)


def degree_sequence(g: Graph) -> list[int]:
    return sorted((len(a) for a in g.adjacency), reverse=True)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered graphs with per-graph class labels.

    Labels are dense integer ids; the ``*_names`` tuples map an id back to the
    value found in the source files (ints, or tuples for multi-column labels).
    """

    name: str
    graphs: tuple[Graph, ...]
    class_labels: tuple[int, ...]
    class_names: tuple[Hashable, ...] = ()
    node_label_names: tuple[Hashable, ...] | None = None
    edge_label_names: tuple[Hashable, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.graphs) != len(self.class_labels):
            raise GraphError(f"{len(self.graphs)} graphs but {len(self.class_labels)} class labels")
        if not self.class_names and self.class_labels:
            object.__setattr__(self, "class_names", tuple(range(max(self.class_labels) + 1)))
        for y in self.class_labels:
            if not 0 <= y < len(self.class_names):
                raise GraphError(f"class label id {y} has no entry in class_names")

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def num_classes(self) -> int:
        return len(set(self.class_labels))

    @property
    def has_node_labels(self) -> bool:
        return bool(self.graphs) and all(g.node_labels is not None for g in self.graphs)

    @property
    def has_edge_labels(self) -> bool:
        return bool(self.graphs) and all(g.edge_labels is not None for g in self.graphs)

    def supports(self, mode: IsoMode) -> bool:
        if not self.graphs:
            return True
        return all(g.has_labels_for(mode) for g in self.graphs)

    def subset(self, ids: Sequence[int], name: str | None = None) -> "Dataset":
        """Dataset restricted to ``ids`` (in the given order); unused classes are dropped."""
        ids = list(ids)
        used = sorted({self.class_labels[i] for i in ids})
        remap = {old: new for new, old in enumerate(used)}
        return Dataset(
            name=name or self.name,
            graphs=tuple(self.graphs[i] for i in ids),
            class_labels=tuple(remap[self.class_labels[i]] for i in ids),
            class_names=tuple(self.class_names[c] for c in used),
            node_label_names=self.node_label_names,
            edge_label_names=self.edge_label_names,
        )


def encode_labels(values: Iterable[Hashable]) -> tuple[list[int], tuple[Hashable, ...]]:
    """Map arbitrary sortable label values to dense ids ordered by value."""
    values = list(values)
    names = tuple(sorted(set(values)))
    index = {v: i for i, v in enumerate(names)}
    return [index[v] for v in values], names


def make_dataset(name: str, graphs: Sequence[Graph], labels: Sequence[Hashable]) -> Dataset:
    """Convenience constructor taking raw (non-dense) class label values."""
    ids, names = encode_labels(labels)
    return Dataset(name, tuple(graphs), tuple(ids), names)


def label_name_lookup(names: Mapping[int, Hashable] | Sequence[Hashable]) -> dict[Hashable, int]:
    if isinstance(names, Mapping):
        return {v: k for k, v in names.items()}
    return {v: i for i, v in enumerate(names)}
