from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FoldSplit:
    fold: int
    train: tuple[int, ...]
    test: tuple[int, ...]
    validation: tuple[int, ...]
    seed: int

    @property
    def fit(self) -> tuple[int, ...]:
        """Training ids outside the validation part."""
        val = set(self.validation)
        return tuple(i for i in self.train if i not in val)


def _class_grouped_order(ids: Sequence[int], labels: Sequence[int], rng: np.random.Generator) -> list[int]:
    groups: dict[int, list[int]] = defaultdict(list)
    for i in ids:
        groups[labels[i]].append(i)
    order: list[int] = []
    for c in sorted(groups):
        members = groups[c]
        order.extend(members[j] for j in rng.permutation(len(members)))
    return order


def kfold(labels: Sequence[int], k: int = 10, seed: int = 0, validation_fraction: float = 0.2) -> list[FoldSplit]:
    """Stratified k-fold split with a stratified validation part in each train split.

    Class members are shuffled and dealt round-robin across folds, so test
    folds differ in size by at most one and each class is spread evenly.
    """
    labels = list(labels)
    n = len(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < k:
        raise ValueError(f"cannot split {n} graphs into {k} folds")
    counts: dict[int, int] = defaultdict(int)
    for y in labels:
        counts[y] += 1
    small = sorted(c for c, m in counts.items() if m < k)
    if small:
        logger.warning("classes %s have fewer than %d members; they cannot be stratified", small, k)

    rng = np.random.default_rng(seed)
    fold_of = [0] * n
    for j, i in enumerate(_class_grouped_order(range(n), labels, rng)):
        fold_of[i] = j % k

    step = max(2, round(1 / validation_fraction)) if validation_fraction > 0 else 0
    splits = []
    for f in range(k):
        test = tuple(i for i in range(n) if fold_of[i] == f)
        train = tuple(i for i in range(n) if fold_of[i] != f)
        val: tuple[int, ...] = ()
        if step:
            vrng = np.random.default_rng([seed, f])
            val = tuple(sorted(_class_grouped_order(train, labels, vrng)[::step]))
        splits.append(FoldSplit(f, train, test, val, seed))
    return splits


def folds_from_assignment(fold_of: Sequence[int], labels: Sequence[int], seed: int = 0) -> list[FoldSplit]:
    """Splits from an explicit fold id per graph (validation parts left empty)."""
    ks = sorted(set(fold_of))
    out = []
    for f in ks:
        test = tuple(i for i, x in enumerate(fold_of) if x == f)
        train = tuple(i for i, x in enumerate(fold_of) if x != f)
        out.append(FoldSplit(f, train, test, (), seed))
    return out
