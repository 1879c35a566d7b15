"""Reader and writer for the multi-file graph benchmark format.

A dataset ``DS`` lives in a directory holding ``DS_A.txt`` (``i, j`` per line,
1-based global node ids), ``DS_graph_indicator.txt`` (graph id per node) and
``DS_graph_labels.txt`` (class per graph), plus optional node/edge label and
attribute files aligned with the node and ``_A.txt`` lines respectively.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable

from .graph import Dataset, Graph, GraphError, NormalizationReport, encode_labels, make_graph
from .numbers import round_half_up

logger = logging.getLogger(__name__)

MANDATORY = ("A", "graph_indicator", "graph_labels")
OPTIONAL = ("node_labels", "edge_labels", "node_attributes", "edge_attributes")


class DatasetFormatError(ValueError):
    """The directory does not hold a well-formed dataset."""


@dataclass(frozen=True)
class LoadReport:
    name: str
    normalization: NormalizationReport
    ignored_files: tuple[str, ...] = ()


def _rows(path: Path) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        out = []
        for line in fh:
            line = line.strip()
            if line:
                out.append([tok.strip() for tok in line.split(",")])
        return out


def _scalar(tok: str) -> int | float:
    try:
        return int(tok)
    except ValueError:
        try:
            return float(tok)
        except ValueError:
            raise DatasetFormatError(f"non-numeric value {tok!r}") from None


def _label_value(row: list[str]) -> Hashable:
    if len(row) == 1:
        return _scalar(row[0])
    return tuple(_scalar(t) for t in row)


def _float_row(row: list[str], path: Path, lineno: int) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in row)
    except ValueError:
        raise DatasetFormatError(f"{path.name}:{lineno}: bad real value in {row}") from None


def resolve_name(directory: Path) -> str:
    name = directory.name
    if (directory / f"{name}_A.txt").exists():
        return name
    candidates = sorted(p.name[: -len("_A.txt")] for p in directory.glob("*_A.txt"))
    if len(candidates) == 1:
        return candidates[0]
    raise DatasetFormatError(f"cannot find {name}_A.txt in {directory}")


def load_dataset(
    directory: str | os.PathLike,
    multiplicity_as_edge_label: bool = False,
    with_report: bool = False,
) -> Dataset | tuple[Dataset, LoadReport]:
    """Load a dataset directory.

    With ``multiplicity_as_edge_label`` the number of parallel copies of an
    edge (per orientation) is folded into its edge label instead of being
    collapsed silently.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DatasetFormatError(f"{directory} is not a directory")
    name = resolve_name(directory)
    paths = {key: directory / f"{name}_{key}.txt" for key in MANDATORY + OPTIONAL}
    for key in MANDATORY:
        if not paths[key].exists():
            raise DatasetFormatError(f"missing mandatory file {paths[key].name}")
    ignored = []
    if (directory / f"{name}_graph_attributes.txt").exists():
        logger.info("%s: graph attributes present, ignored", name)
        ignored.append(f"{name}_graph_attributes.txt")

    indicator_rows = _rows(paths["graph_indicator"])
    class_rows = _rows(paths["graph_labels"])
    edge_rows = _rows(paths["A"])
    n_graphs = len(class_rows)
    n_nodes = len(indicator_rows)

    graph_of: list[int] = []
    local_id: list[int] = []
    sizes = [0] * n_graphs
    for lineno, row in enumerate(indicator_rows, 1):
        gid = _scalar(row[0])
        if not isinstance(gid, int) or not 1 <= gid <= n_graphs:
            raise DatasetFormatError(f"{paths['graph_indicator'].name}:{lineno}: graph id {row[0]} "
                                     f"outside 1..{n_graphs}")
        gid -= 1
        graph_of.append(gid)
        local_id.append(sizes[gid])
        sizes[gid] += 1

    def _aligned(key: str, count: int, what: str) -> list[list[str]] | None:
        if not paths[key].exists():
            return None
        rows = _rows(paths[key])
        if len(rows) != count:
            raise DatasetFormatError(f"{paths[key].name} has {len(rows)} lines, expected {count} ({what})")
        return rows

    node_label_rows = _aligned("node_labels", n_nodes, "one per node")
    edge_label_rows = _aligned("edge_labels", len(edge_rows), "one per _A.txt line")
    node_attr_rows = _aligned("node_attributes", n_nodes, "one per node")
    edge_attr_rows = _aligned("edge_attributes", len(edge_rows), "one per _A.txt line")

    per_graph_edges: list[list[tuple[int, int]]] = [[] for _ in range(n_graphs)]
    per_graph_eidx: list[list[int]] = [[] for _ in range(n_graphs)]
    for lineno, row in enumerate(edge_rows, 1):
        if len(row) != 2:
            raise DatasetFormatError(f"{paths['A'].name}:{lineno}: expected 'i, j', got {row}")
        i, j = _scalar(row[0]), _scalar(row[1])
        for x in (i, j):
            if not isinstance(x, int) or not 1 <= x <= n_nodes:
                raise DatasetFormatError(f"{paths['A'].name}:{lineno}: node {x} absent from graph indicator")
        gi, gj = graph_of[i - 1], graph_of[j - 1]
        if gi != gj:
            raise DatasetFormatError(f"{paths['A'].name}:{lineno}: edge ({i}, {j}) crosses graphs "
                                     f"{gi + 1} and {gj + 1}")
        per_graph_edges[gi].append((local_id[i - 1], local_id[j - 1]))
        per_graph_eidx[gi].append(lineno - 1)

    node_label_ids = node_label_names = None
    if node_label_rows is not None:
        node_label_ids, node_label_names = encode_labels(_label_value(r) for r in node_label_rows)

    edge_label_ids = edge_label_names = None
    if edge_label_rows is not None or multiplicity_as_edge_label:
        raw_vals: list[Hashable] = ([_label_value(r) for r in edge_label_rows]
                                    if edge_label_rows is not None else [0] * len(edge_rows))
        if multiplicity_as_edge_label:
            raw_vals = _fold_multiplicity(raw_vals, per_graph_edges, per_graph_eidx)
        edge_label_ids, edge_label_names = encode_labels(raw_vals)

    node_attrs = None
    if node_attr_rows is not None:
        node_attrs = [_float_row(r, paths["node_attributes"], k + 1) for k, r in enumerate(node_attr_rows)]
        _check_ragged(node_attrs, paths["node_attributes"])
    edge_attrs = None
    if edge_attr_rows is not None:
        edge_attrs = [_float_row(r, paths["edge_attributes"], k + 1) for k, r in enumerate(edge_attr_rows)]
        _check_ragged(edge_attrs, paths["edge_attributes"])

    nodes_of: list[list[int]] = [[] for _ in range(n_graphs)]
    for node, gid in enumerate(graph_of):
        nodes_of[gid].append(node)

    graphs = []
    total = NormalizationReport()
    for gid in range(n_graphs):
        eidx = per_graph_eidx[gid]
        nodes = nodes_of[gid]
        g, rep = make_graph(
            sizes[gid],
            per_graph_edges[gid],
            node_labels=[node_label_ids[v] for v in nodes] if node_label_ids is not None else None,
            edge_labels=[edge_label_ids[k] for k in eidx] if edge_label_ids is not None else None,
            node_attributes=[node_attrs[v] for v in nodes] if node_attrs is not None else None,
            edge_attributes=[edge_attrs[k] for k in eidx] if edge_attrs is not None else None,
        )
        graphs.append(g)
        total = total + rep
    if total.duplicates:
        logger.info("%s: collapsed %d duplicate/reverse edge entries", name, total.duplicates)
    if total.label_conflicts:
        logger.warning("%s: %d edges carry conflicting labels across duplicates; kept first",
                       name, total.label_conflicts)

    class_ids, class_names = encode_labels(_label_value(r) for r in class_rows)
    ds = Dataset(name, tuple(graphs), tuple(class_ids), class_names,
                 node_label_names, edge_label_names)
    if with_report:
        return ds, LoadReport(name, total, tuple(ignored))
    return ds


def _fold_multiplicity(raw_vals, per_graph_edges, per_graph_eidx):
    out = list(raw_vals)
    for edges, eidx in zip(per_graph_edges, per_graph_eidx):
        counts = Counter(edges)
        for (u, v), k in zip(edges, eidx):
            mult = max(counts[(u, v)], counts[(v, u)])
            out[k] = (raw_vals[k], mult)
    return out


def _check_ragged(rows: list[tuple[float, ...]], path: Path) -> None:
    if rows and len({len(r) for r in rows}) != 1:
        raise DatasetFormatError(f"{path.name}: ragged attribute rows")


def _fmt_value(v: Hashable) -> str:
    if isinstance(v, tuple):
        return ", ".join(_fmt_value(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


def write_dataset(ds: Dataset, directory: str | os.PathLike, name: str | None = None) -> Path:
    """Write ``ds`` in the multi-file format; both edge orientations are emitted."""
    name = name or ds.name
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    with_nl = ds.has_node_labels
    with_el = ds.has_edge_labels
    with_na = bool(ds.graphs) and all(g.node_attributes is not None for g in ds.graphs)
    with_ea = bool(ds.graphs) and all(g.edge_attributes is not None for g in ds.graphs)

    a_lines, ind_lines, nl_lines, el_lines, na_lines, ea_lines = [], [], [], [], [], []
    offset = 1
    for gid, g in enumerate(ds.graphs, 1):
        ind_lines.extend([str(gid)] * g.node_count)
        if with_nl:
            names = ds.node_label_names
            nl_lines.extend(_fmt_value(names[x] if names else x) for x in g.node_labels)
        if with_na:
            na_lines.extend(", ".join(repr(x) for x in row) for row in g.node_attributes)
        for k, (u, v) in enumerate(g.edges):
            a_lines.append(f"{u + offset}, {v + offset}")
            a_lines.append(f"{v + offset}, {u + offset}")
            if with_el:
                names = ds.edge_label_names
                lab = _fmt_value(names[g.edge_labels[k]] if names else g.edge_labels[k])
                el_lines.extend([lab, lab])
            if with_ea:
                row = ", ".join(repr(x) for x in g.edge_attributes[k])
                ea_lines.extend([row, row])
        offset += g.node_count

    def _put(key: str, lines: list[str]) -> None:
        with open(directory / f"{name}_{key}.txt", "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in lines))

    _put("A", a_lines)
    _put("graph_indicator", ind_lines)
    _put("graph_labels", [_fmt_value(ds.class_names[y]) for y in ds.class_labels])
    for key, flag, lines in (("node_labels", with_nl, nl_lines), ("edge_labels", with_el, el_lines),
                             ("node_attributes", with_na, na_lines),
                             ("edge_attributes", with_ea, ea_lines)):
        path = directory / f"{name}_{key}.txt"
        if flag:
            _put(key, lines)
        elif path.exists():
            path.unlink()
    return directory


def dataset_stats(ds: Dataset) -> dict:
    n = len(ds)
    avg_nodes = sum(g.node_count for g in ds.graphs) / n if n else 0.0
    avg_edges = sum(g.edge_count for g in ds.graphs) / n if n else 0.0
    return {
        "dataset": ds.name,
        "N": n,
        "C": ds.num_classes,
        "avg_nodes": round_half_up(avg_nodes, 2),
        "avg_edges": round_half_up(avg_edges, 2),
        "avg_nodes_raw": avg_nodes,
        "avg_edges_raw": avg_edges,
        "has_node_labels": ds.has_node_labels,
        "has_edge_labels": ds.has_edge_labels,
    }


__all__ = ["DatasetFormatError", "LoadReport", "load_dataset", "write_dataset", "dataset_stats",
           "GraphError", "Graph"]
