"""Command-line entry point: ``isobias {stats,audit,clean,eval,isocheck}``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .audit import audit_metrics, compute_orbits, histogram_csv
from .canon import DEFAULT_BUDGET, BudgetExceeded, LabelsRequired, is_isomorphic
from .cleanse import clean
from .graph import Dataset, Graph, GraphError, IsoMode, label_name_lookup
from .tu import DatasetFormatError, dataset_stats, load_dataset, write_dataset

logger = logging.getLogger("isobias")

EXIT_OK, EXIT_NOT_ISO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(value: str) -> int:
    s = int(value, 0)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return s


def _c_grid(value: str) -> tuple[float, ...]:
    try:
        grid = tuple(float(x) for x in value.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad C grid {value!r}") from None
    if not grid or any(c <= 0 for c in grid):
        raise argparse.ArgumentTypeError("C grid needs positive values")
    return grid


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isobias", description="Isomorphism audits, cleaning and bias-aware evaluation "
                                              "for graph classification datasets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser, out: bool = True):
        sp.add_argument("dataset", type=Path, help="dataset directory")
        sp.add_argument("--multiplicity-as-edge-label", action="store_true",
                        help="fold parallel-edge counts into edge labels")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search nodes per graph")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--seed", type=_seed, default=1)
        if out:
            sp.add_argument("--out", type=Path, help="directory for report files")

    sp = sub.add_parser("stats", help="dataset statistics")
    common(sp)

    sp = sub.add_parser("audit", help="orbit metrics")
    common(sp)
    sp.add_argument("--mode", action="append", choices=[m.value for m in IsoMode],
                    help="repeatable; default topology plus node-labels when labels exist")
    sp.add_argument("--trust-certificates", action="store_true",
                    help="skip witness verification inside certificate buckets")

    sp = sub.add_parser("clean", help="drop duplicates and label-conflicting orbits")
    common(sp)
    sp.add_argument("--name", help="dataset name for the written files")

    sp = sub.add_parser("eval", help="k-fold evaluation with isomorphism accounting")
    common(sp)
    sp.add_argument("--kernel", default="wl", choices=["wl", "vh"])
    sp.add_argument("--h", type=int, default=5)
    sp.add_argument("--folds", type=int, default=10)
    sp.add_argument("--C-grid", dest="c_grid", type=_c_grid, default=None)
    sp.add_argument("--peering", default="all", choices=["none", "ph", "p", "all"],
                    help="variant to print (all three are always written)")
    sp.add_argument("--link-mode", default=IsoMode.TOPOLOGY.value, choices=[m.value for m in IsoMode])
    sp.add_argument("--normalize", action="store_true", help="cosine-normalise the kernel")
    sp.add_argument("--predictions", type=Path, help="CSV of external predictions")

    sp = sub.add_parser("isocheck", help="test two graphs for isomorphism")
    sp.add_argument("first", type=Path, help="dataset directory")
    sp.add_argument("second", type=Path, help="dataset directory (may equal the first)")
    sp.add_argument("--index-a", type=int, default=0, help="0-based graph index in the first dataset")
    sp.add_argument("--index-b", type=int, default=0, help="0-based graph index in the second dataset")
    sp.add_argument("--mode", default=IsoMode.TOPOLOGY.value, choices=[m.value for m in IsoMode])
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--multiplicity-as-edge-label", action="store_true")
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _header(command: str, args: argparse.Namespace, ds: Dataset) -> dict:
    return {"tool": "isobias", "version": __version__, "command": command, "seed": args.seed,
            "dataset": ds.name, "source": str(args.dataset)}


def _emit(args: argparse.Namespace, files: dict[str, str]) -> None:
    if args.out is None:
        return
    args.out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (args.out / name).write_text(text, encoding="utf-8")


def _load(args: argparse.Namespace) -> Dataset:
    return load_dataset(args.dataset, multiplicity_as_edge_label=args.multiplicity_as_edge_label)


def cmd_stats(args: argparse.Namespace) -> int:
    ds = _load(args)
    st = dataset_stats(ds)
    print(f"{st['dataset']}: N={st['N']} C={st['C']} avg_nodes={st['avg_nodes']} "
          f"avg_edges={st['avg_edges']} node_labels={'+' if st['has_node_labels'] else '-'} "
          f"edge_labels={'+' if st['has_edge_labels'] else '-'}")
    _emit(args, {"stats.json": _dump({**_header("stats", args, ds), "stats": st})})
    return EXIT_OK


def _audit_modes(args: argparse.Namespace, ds: Dataset) -> list[IsoMode]:
    if args.mode:
        modes = list(dict.fromkeys(IsoMode.parse(m) for m in args.mode))
        for m in modes:
            if not ds.supports(m):
                raise UsageError(f"{m.value} mode needs label files that {ds.name} does not have")
        return modes
    modes = [IsoMode.TOPOLOGY]
    if ds.graphs and ds.has_node_labels:
        modes.append(IsoMode.NODE_LABELS)
    return modes


def cmd_audit(args: argparse.Namespace) -> int:
    ds = _load(args)
    modes = _audit_modes(args, ds)
    reports, hist_rows = [], []
    print(f"{'dataset':<18} {'N':>6} {'orbits':>6} {'I':>6} {'I%':>7} {'IP%':>7} {'MM%':>7}  mode")
    for m in modes:
        orbits = compute_orbits(ds, m, trust_certificates=args.trust_certificates,
                                budget=args.budget, jobs=args.jobs)
        rep = audit_metrics(ds, orbits)
        reports.append(rep.to_json())
        print(f"{rep.table_row()}  {m.value}")
        body = histogram_csv(rep.histogram).splitlines()
        hist_rows.extend(f"{m.value},{line}" for line in body[1:])
        hist_header = "mode," + body[0]
    files = {"audit.json": _dump({**_header("audit", args, ds), "reports": reports}),
             "histogram.csv": "\n".join([hist_header, *hist_rows]) + "\n"}
    _emit(args, files)
    return EXIT_OK


def cmd_clean(args: argparse.Namespace) -> int:
    ds = _load(args)
    cleaned, report = clean(ds, budget=args.budget, jobs=args.jobs)
    print(report.table_row())
    if args.out is not None:
        write_dataset(cleaned, args.out, args.name or ds.name)
        (args.out / "clean_report.json").write_text(
            _dump({**_header("clean", args, ds), "report": report.to_json()}), encoding="utf-8")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    from .eval import DEFAULT_C_GRID, evaluate, load_predictions

    ds = _load(args)
    link = IsoMode.parse(args.link_mode)
    if not ds.supports(link):
        raise UsageError(f"link mode {link.value} needs label files that {ds.name} does not have")
    preds = fold_of = None
    if args.predictions is not None:
        try:
            preds, fold_of = load_predictions(args.predictions, ds)
        except (OSError, ValueError) as exc:
            raise UsageError(f"{args.predictions}: {exc}") from exc
        if fold_of is None and len(preds) != len(ds):
            raise UsageError("predictions must cover every graph when no fold column is given")
    result = evaluate(ds, kernel=args.kernel, h=args.h, k=args.folds, seed=args.seed,
                      C_grid=args.c_grid or DEFAULT_C_GRID, link_mode=link, normalize=args.normalize,
                      predictions=preds, fold_assignment=fold_of, jobs=args.jobs)
    rows = result.table_rows()
    if args.peering != "all":
        rows = [rows[["none", "ph", "p"].index(args.peering)]]
    for r in rows:
        print(f"{ds.name:<18} {r}")
    payload = {**_header("eval", args, ds),
               "config": {"kernel": args.kernel, "h": args.h, "folds": args.folds,
                          "normalize": args.normalize, "peering": args.peering,
                          "predictions": str(args.predictions) if args.predictions else None},
               "result": result.to_json()}
    _emit(args, {"eval.json": _dump(payload)})
    return EXIT_OK


def _pick(ds: Dataset, index: int) -> Graph:
    if not 0 <= index < len(ds):
        raise UsageError(f"{ds.name} has no graph {index}")
    return ds.graphs[index]


def _rekey(g: Graph, names: Sequence | None, lookup: dict) -> Graph:
    """Express node labels of ``g`` in another dataset's label ids, via the original values."""
    if g.node_labels is None or names is None:
        return g
    fresh = len(lookup)
    out = []
    for x in g.node_labels:
        name = names[x]
        if name not in lookup:
            lookup[name] = fresh
            fresh += 1
        out.append(lookup[name])
    return dataclasses.replace(g, node_labels=tuple(out))


def cmd_isocheck(args: argparse.Namespace) -> int:
    mode = IsoMode.parse(args.mode)
    ds1 = load_dataset(args.first, multiplicity_as_edge_label=args.multiplicity_as_edge_label)
    ds2 = load_dataset(args.second, multiplicity_as_edge_label=args.multiplicity_as_edge_label)
    g1, g2 = _pick(ds1, args.index_a), _pick(ds2, args.index_b)
    for ds, g in ((ds1, g1), (ds2, g2)):
        if not g.has_labels_for(mode):
            raise UsageError(f"{mode.value} mode needs label files that {ds.name} does not have")
    if mode.uses_node_labels:
        lookup = label_name_lookup(ds1.node_label_names or ())
        g2 = _rekey(g2, ds2.node_label_names, lookup)
    if mode.uses_edge_labels and g2.edge_labels is not None and ds2.edge_label_names is not None:
        lookup = label_name_lookup(ds1.edge_label_names or ())
        fresh = len(lookup)
        labels = []
        for x in g2.edge_labels:
            name = ds2.edge_label_names[x]
            if name not in lookup:
                lookup[name] = fresh
                fresh += 1
            labels.append(lookup[name])
        g2 = dataclasses.replace(g2, edge_labels=tuple(labels))
    phi = is_isomorphic(g1, g2, mode, args.budget)
    if phi is None:
        print("not isomorphic")
        return EXIT_NOT_ISO
    print("isomorphic")
    print("witness " + " ".join(f"{v}->{w}" for v, w in enumerate(phi)))
    return EXIT_OK


COMMANDS = {"stats": cmd_stats, "audit": cmd_audit, "clean": cmd_clean, "eval": cmd_eval,
            "isocheck": cmd_isocheck}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, DatasetFormatError, GraphError, LabelsRequired) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
