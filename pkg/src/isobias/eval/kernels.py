"""Vertex-histogram and Weisfeiler-Lehman subtree kernels over a whole dataset."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..graph import Dataset, Graph


@dataclass(frozen=True, eq=False)
class GramMatrix:
    values: np.ndarray
    kernel: str
    normalized: bool = False

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("Gram matrix must be square")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def normalize(self) -> "GramMatrix":
        """Cosine normalisation ``K(x,y) / sqrt(K(x,x) K(y,y))``.

        Rows with a zero diagonal are left zero apart from a unit diagonal.
        """
        if self.normalized:
            return self
        d = np.sqrt(np.clip(np.diag(self.values), 0.0, None))
        safe = np.where(d > 0, d, 1.0)
        out = self.values / safe[:, None] / safe[None, :]
        zero = d == 0
        out[zero, :] = 0.0
        out[:, zero] = 0.0
        np.fill_diagonal(out, 1.0)
        out = (out + out.T) / 2
        return GramMatrix(out, self.kernel, True)

    def sub(self, rows, cols) -> np.ndarray:
        return self.values[np.ix_(list(rows), list(cols))]


def _initial_labels(g: Graph) -> list[int]:
    return list(g.node_labels) if g.node_labels is not None else [0] * g.node_count


def _count_matrix(per_graph: list[list[int]], width: int) -> sp.csr_matrix:
    rows, cols = [], []
    for r, labs in enumerate(per_graph):
        rows.extend([r] * len(labs))
        cols.extend(labs)
    data = np.ones(len(rows), dtype=np.int64)
    return sp.csr_matrix((data, (rows, cols)), shape=(len(per_graph), width), dtype=np.int64)


def wl_features(ds: Dataset, h: int) -> sp.csr_matrix:
    """Stacked WL label-count vectors for iterations ``0..h`` (one row per graph)."""
    if h < 0:
        raise ValueError("h must be non-negative")
    labels = [_initial_labels(g) for g in ds.graphs]
    seen0 = sorted({x for labs in labels for x in labs})
    index0 = {x: i for i, x in enumerate(seen0)}
    labels = [[index0[x] for x in labs] for labs in labels]
    blocks = [_count_matrix(labels, max(len(seen0), 1))]
    for _ in range(h):
        table: dict[tuple, int] = {}
        new_labels = []
        for g, labs in zip(ds.graphs, labels):
            adj = g.adjacency
            nl = []
            for v in range(g.node_count):
                key = (labs[v], tuple(sorted(labs[u] for u in adj[v])))
                nl.append(table.setdefault(key, len(table)))
            new_labels.append(nl)
        labels = new_labels
        blocks.append(_count_matrix(labels, max(len(table), 1)))
    return sp.hstack(blocks, format="csr")


def _gram(features: sp.csr_matrix, kernel: str, normalize: bool) -> GramMatrix:
    k = (features @ features.T).toarray().astype(float)
    gram = GramMatrix(k, kernel)
    return gram.normalize() if normalize else gram


def vertex_histogram_kernel(ds: Dataset, normalize: bool = False) -> GramMatrix:
    return _gram(wl_features(ds, 0), "vh", normalize)


def wl_kernel(ds: Dataset, h: int = 5, normalize: bool = False) -> GramMatrix:
    return _gram(wl_features(ds, h), f"wl{h}", normalize)


def gram_for(ds: Dataset, kernel: str, h: int = 5, normalize: bool = False) -> GramMatrix:
    kernel = kernel.lower()
    if kernel in ("vh", "v", "vertex", "vertex-histogram"):
        return vertex_histogram_kernel(ds, normalize)
    if kernel == "wl":
        return wl_kernel(ds, h, normalize)
    raise ValueError(f"unknown kernel {kernel!r}")
