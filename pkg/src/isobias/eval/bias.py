"""Train/test isomorphism linkage, accuracy decomposition and peering models."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..audit import OrbitPartition, compute_orbits
from ..graph import Dataset, IsoMode
from .folds import FoldSplit


class PeeringMode(enum.Enum):
    NONE = "none"
    PH = "ph"
    P = "p"

    @classmethod
    def parse(cls, value: "str | PeeringMode") -> "PeeringMode":
        if isinstance(value, PeeringMode):
            return value
        return cls(value.strip().lower())


@dataclass(frozen=True)
class IsoLinkage:
    """For each test graph, the training graphs isomorphic to it.

    ``homogeneous`` holds for a linked test graph whose training copies all
    carry its own class label, i.e. its orbit restricted to this split is
    label-consistent. ``train_consistent`` only asks the training copies to
    agree among themselves.
    """

    test_ids: tuple[int, ...]
    linked: Mapping[int, tuple[int, ...]]
    linked_labels: Mapping[int, tuple[int, ...]]
    homogeneous: Mapping[int, bool]
    train_consistent: Mapping[int, bool]

    @property
    def y_iso(self) -> tuple[int, ...]:
        return tuple(t for t in self.test_ids if self.linked[t])

    @property
    def y_new(self) -> tuple[int, ...]:
        return tuple(t for t in self.test_ids if not self.linked[t])

    @property
    def homogeneous_iso(self) -> tuple[int, ...]:
        return tuple(t for t in self.y_iso if self.homogeneous[t])

    @property
    def is_homogeneous(self) -> bool:
        return all(self.homogeneous[t] for t in self.y_iso)


def link_test_to_train(ds: Dataset, split: FoldSplit, mode: IsoMode | str = IsoMode.TOPOLOGY,
                       orbits: OrbitPartition | None = None) -> IsoLinkage:
    mode = IsoMode.parse(mode)
    if orbits is None:
        orbits = compute_orbits(ds, mode)
    elif orbits.mode is not mode:
        raise ValueError(f"orbits were computed in {orbits.mode.value} mode, not {mode.value}")
    orbit_of = orbits.orbit_index()
    train_by_orbit: dict[int, list[int]] = {}
    for i in split.train:
        train_by_orbit.setdefault(orbit_of[i], []).append(i)
    linked, labels, homog, consistent = {}, {}, {}, {}
    y = ds.class_labels
    for t in split.test:
        ids = tuple(sorted(train_by_orbit.get(orbit_of[t], ())))
        labs = tuple(y[i] for i in ids)
        linked[t] = ids
        labels[t] = labs
        consistent[t] = bool(ids) and len(set(labs)) == 1
        homog[t] = consistent[t] and labs[0] == y[t]
    return IsoLinkage(tuple(split.test), linked, labels, homog, consistent)


def _acc(correct: int, total: int) -> Fraction:
    return Fraction(correct, total) if total else Fraction(0)


@dataclass(frozen=True)
class Decomposition:
    acc_test: Fraction
    acc_new: Fraction
    acc_iso: Fraction
    n_test: int
    n_new: int
    n_iso: int

    def identity_holds(self) -> bool:
        return self.n_test * self.acc_test == self.n_new * self.acc_new + self.n_iso * self.acc_iso


def accuracy(predictions: Mapping[int, int], truth: Sequence[int], ids: Sequence[int]) -> Fraction:
    return _acc(sum(predictions[i] == truth[i] for i in ids), len(ids))


def decompose_accuracy(predictions: Mapping[int, int], truth: Sequence[int],
                       linkage: IsoLinkage) -> Decomposition:
    missing = [t for t in linkage.test_ids if t not in predictions]
    if missing:
        raise ValueError(f"no prediction for test graphs {missing[:5]}")
    new, iso = linkage.y_new, linkage.y_iso
    ok_new = sum(predictions[i] == truth[i] for i in new)
    ok_iso = sum(predictions[i] == truth[i] for i in iso)
    n = len(linkage.test_ids)
    dec = Decomposition(_acc(ok_new + ok_iso, n), _acc(ok_new, len(new)), _acc(ok_iso, len(iso)),
                        n, len(new), len(iso))
    if not dec.identity_holds():
        raise ArithmeticError("accuracy decomposition identity violated")
    return dec


def majority_label(labels: Sequence[int]) -> int:
    counts = Counter(labels)
    top = max(counts.values())
    return min(c for c, k in counts.items() if k == top)


def apply_peering(predictions: Mapping[int, int], linkage: IsoLinkage,
                  mode: PeeringMode | str) -> dict[int, int]:
    """PH copies the training label onto homogeneous linked test graphs; P uses a
    majority vote of the training copies (ties to the smallest label) on all of
    them. Unlinked predictions are untouched."""
    mode = PeeringMode.parse(mode)
    out = dict(predictions)
    if mode is PeeringMode.NONE:
        return out
    for t in linkage.y_iso:
        labs = linkage.linked_labels[t]
        if mode is PeeringMode.PH:
            if linkage.homogeneous[t]:
                out[t] = labs[0]
        else:
            out[t] = majority_label(labs)
    return out


def check_property1(dec: Decomposition) -> bool:
    """``acc_test > acc_new`` exactly when ``acc_iso > acc_new``."""
    if dec.n_iso == 0:
        return True
    return (dec.acc_test > dec.acc_new) == (dec.acc_iso > dec.acc_new)
