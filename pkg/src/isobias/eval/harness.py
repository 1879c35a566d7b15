"""Cross-validated evaluation with isomorphism-bias accounting."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import fmean, pstdev
from typing import Mapping, Sequence

from ..audit import compute_orbits
from ..graph import Dataset, IsoMode
from ..numbers import frac_json, round_half_up
from .bias import (Decomposition, IsoLinkage, PeeringMode, accuracy, apply_peering, check_property1,
                   decompose_accuracy, link_test_to_train)
from .folds import FoldSplit, folds_from_assignment, kfold
from .kernels import gram_for
from .svm import DEFAULT_C_GRID, train_classifier

VARIANTS = (PeeringMode.NONE, PeeringMode.PH, PeeringMode.P)


@dataclass(frozen=True)
class VariantScore:
    decomposition: Decomposition
    acc_homogeneous: Fraction
    property1: bool

    def to_json(self) -> dict:
        d = self.decomposition
        return {
            "acc_test": round_half_up(d.acc_test, 3),
            "acc_new": round_half_up(d.acc_new, 3),
            "acc_iso": round_half_up(d.acc_iso, 3),
            "acc_iso_homogeneous": round_half_up(self.acc_homogeneous, 3),
            "property1": self.property1,
            "exact": {"acc_test": frac_json(d.acc_test), "acc_new": frac_json(d.acc_new),
                      "acc_iso": frac_json(d.acc_iso),
                      "acc_iso_homogeneous": frac_json(self.acc_homogeneous)},
        }


@dataclass(frozen=True)
class FoldEvaluation:
    fold: int
    n_test: int
    n_new: int
    n_iso: int
    n_homogeneous: int
    chosen_C: float | None
    scores: Mapping[PeeringMode, VariantScore]
    predictions: Mapping[int, int] = field(repr=False, default_factory=dict)

    @property
    def peering_bound(self) -> bool:
        """PH never loses to the base model and is perfect on the homogeneous part."""
        base, ph = self.scores[PeeringMode.NONE], self.scores[PeeringMode.PH]
        perfect = self.n_homogeneous == 0 or ph.acc_homogeneous == 1
        return ph.decomposition.acc_test >= base.decomposition.acc_test and perfect

    def to_json(self) -> dict:
        return {
            "fold": self.fold,
            "sizes": {"test": self.n_test, "new": self.n_new, "iso": self.n_iso,
                      "iso_homogeneous": self.n_homogeneous},
            "chosen_C": self.chosen_C,
            "peering_bound": self.peering_bound,
            "variants": {m.value: s.to_json() for m, s in self.scores.items()},
        }


@dataclass(frozen=True)
class EvaluationResult:
    dataset: str
    model: str
    seed: int
    k: int
    link_mode: IsoMode
    C_grid: tuple[float, ...]
    folds: tuple[FoldEvaluation, ...]

    def fold_values(self, mode: PeeringMode, what: str) -> list[Fraction]:
        out = []
        for f in self.folds:
            d = f.scores[mode].decomposition
            if what == "acc_test":
                out.append(d.acc_test)
            elif what == "acc_new" and d.n_new:
                out.append(d.acc_new)
            elif what == "acc_iso" and d.n_iso:
                out.append(d.acc_iso)
            elif what == "acc_iso_homogeneous" and f.n_homogeneous:
                out.append(f.scores[mode].acc_homogeneous)
        return out

    def mean(self, mode: PeeringMode | str, what: str = "acc_test") -> float:
        """Mean over folds; acc_new/acc_iso average only folds where the set is non-empty."""
        vals = self.fold_values(PeeringMode.parse(mode), what)
        return fmean(float(v) for v in vals) if vals else 0.0

    def std(self, mode: PeeringMode | str, what: str = "acc_test") -> float:
        vals = self.fold_values(PeeringMode.parse(mode), what)
        return pstdev(float(v) for v in vals) if len(vals) > 1 else 0.0

    def label(self, mode: PeeringMode) -> str:
        suffix = {PeeringMode.NONE: "", PeeringMode.PH: "-PH", PeeringMode.P: "-P"}[mode]
        return self.model + suffix

    def summary(self) -> dict:
        out = {}
        for m in VARIANTS:
            out[m.value] = {
                "model": self.label(m),
                **{f"mean_{w}": round_half_up(self.mean(m, w), 3)
                   for w in ("acc_test", "acc_new", "acc_iso", "acc_iso_homogeneous")},
                "std_acc_test": round_half_up(self.std(m), 3),
            }
        return out

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "model": self.model,
            "seed": self.seed,
            "folds_k": self.k,
            "link_mode": self.link_mode.value,
            "C_grid": list(self.C_grid),
            "summary": self.summary(),
            "folds": [f.to_json() for f in self.folds],
        }

    def table_rows(self) -> list[str]:
        rows = []
        for m in VARIANTS:
            rows.append(f"{self.label(m):<8} {self.mean(m):.3f} ({self.mean(m, 'acc_iso'):.3f})")
        return rows


def _score_fold(ds: Dataset, split: FoldSplit, linkage: IsoLinkage, base: Mapping[int, int],
                chosen_C: float | None) -> FoldEvaluation:
    truth = ds.class_labels
    homog = linkage.homogeneous_iso
    scores = {}
    for mode in VARIANTS:
        preds = apply_peering(base, linkage, mode)
        dec = decompose_accuracy(preds, truth, linkage)
        scores[mode] = VariantScore(dec, accuracy(preds, truth, homog), check_property1(dec))
    return FoldEvaluation(split.fold, len(split.test), len(linkage.y_new), len(linkage.y_iso),
                          len(homog), chosen_C, scores, dict(base))


def evaluate(ds: Dataset, kernel: str = "wl", h: int = 5, k: int = 10, seed: int = 1,
             C_grid: Sequence[float] = DEFAULT_C_GRID, link_mode: IsoMode | str = IsoMode.TOPOLOGY,
             normalize: bool = False, predictions: Mapping[int, int] | None = None,
             fold_assignment: Sequence[int] | None = None, jobs: int = 1) -> EvaluationResult:
    """k-fold evaluation of a kernel SVM, or of externally supplied predictions.

    Every fold is scored three ways: the model itself, its peering model on
    homogeneous linked test graphs (PH) and on all linked test graphs (P).
    """
    link_mode = IsoMode.parse(link_mode)
    if fold_assignment is not None:
        splits = folds_from_assignment(fold_assignment, ds.class_labels, seed)
    else:
        splits = kfold(ds.class_labels, k, seed)
    orbits = compute_orbits(ds, link_mode, jobs=jobs)

    if predictions is not None:
        model = "external"
        gram = None
    else:
        model = {"wl": "WL", "vh": "V", "v": "V"}.get(kernel.lower(), kernel.upper())
        gram = gram_for(ds, kernel, h, normalize)

    folds = []
    for split in splits:
        linkage = link_test_to_train(ds, split, link_mode, orbits)
        if gram is None:
            base = {t: predictions[t] for t in split.test if t in predictions}
            chosen = None
        else:
            clf = train_classifier(gram, split.train, ds.class_labels, C_grid, split.validation)
            pred = clf.predict(gram, split.test)
            base = {t: int(p) for t, p in zip(split.test, pred)}
            chosen = clf.chosen_C
        folds.append(_score_fold(ds, split, linkage, base, chosen))
    return EvaluationResult(ds.name, model, seed, len(splits), link_mode,
                            tuple(float(c) for c in C_grid), tuple(folds))


def load_predictions(path: str | os.PathLike, ds: Dataset) -> tuple[dict[int, int], list[int] | None]:
    """Read ``graph_id,predicted_label[,fold]`` rows (0-based graph ids, original label values).

    Returns predictions as class-label ids and, when a ``fold`` column is
    present, the fold id of every graph.
    """
    lookup = {str(v): i for i, v in enumerate(ds.class_names)}
    preds: dict[int, int] = {}
    folds: dict[int, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"graph_id", "predicted_label"} <= set(reader.fieldnames):
            raise ValueError("prediction file needs graph_id and predicted_label columns")
        for row in reader:
            gid = int(row["graph_id"])
            if not 0 <= gid < len(ds):
                raise ValueError(f"graph_id {gid} out of range")
            raw = row["predicted_label"].strip()
            if raw not in lookup:
                raise ValueError(f"unknown class label {raw!r} for graph {gid}")
            if gid in preds:
                raise ValueError(f"duplicate prediction for graph {gid}")
            preds[gid] = lookup[raw]
            if row.get("fold") not in (None, ""):
                folds[gid] = int(row["fold"])
    fold_of = None
    if folds:
        if len(folds) != len(ds):
            raise ValueError("fold column must cover every graph")
        fold_of = [folds[i] for i in range(len(ds))]
    return preds, fold_of
