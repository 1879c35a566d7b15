"""Remove isomorphic duplicates and label-conflicting orbits from a dataset."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .audit import OrbitPartition, compute_orbits
from .canon import DEFAULT_BUDGET
from .graph import Dataset, IsoMode
from .numbers import frac_json, percent, round_half_up


@dataclass(frozen=True)
class CleanReport:
    dataset: str
    original_size: int
    cleaned_size: int
    orbits_total: int
    removed_mismatched_orbits: int
    removed_mismatched_graphs: int
    removed_duplicates: int
    avg_nodes: float
    avg_edges: float
    num_classes: int
    min_class: int
    max_class: int

    @property
    def retention(self) -> Fraction:
        return percent(self.cleaned_size, self.original_size)

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "original_size": self.original_size,
            "cleaned_size": self.cleaned_size,
            "retention_pct": round_half_up(self.retention),
            "retention_exact": frac_json(self.retention),
            "orbits_total": self.orbits_total,
            "removed_mismatched_orbits": self.removed_mismatched_orbits,
            "removed_mismatched_graphs": self.removed_mismatched_graphs,
            "removed_duplicates": self.removed_duplicates,
            "avg_nodes": round_half_up(self.avg_nodes),
            "avg_edges": round_half_up(self.avg_edges),
            "classes": self.num_classes,
            "min_class": self.min_class,
            "max_class": self.max_class,
        }

    def table_row(self) -> str:
        j = self.to_json()
        return (f"{self.dataset:<18} {self.cleaned_size:>6} {j['retention_pct']:>7} "
                f"{j['avg_nodes']:>8} {j['avg_edges']:>8} {self.num_classes:>4} "
                f"{self.min_class:>6} {self.max_class:>6}")


def clean(ds: Dataset, orbits: OrbitPartition | None = None, *, budget: int = DEFAULT_BUDGET,
          jobs: int = 1) -> tuple[Dataset, CleanReport]:
    """Keep the lowest-id graph of every single-label orbit; drop mixed-label orbits.

    Orbits are taken in topology mode unless a partition is supplied.
    """
    if orbits is None:
        orbits = compute_orbits(ds, IsoMode.TOPOLOGY, budget=budget, jobs=jobs)
    kept = []
    bad_orbits = bad_graphs = 0
    for orbit in orbits.orbits:
        if len({ds.class_labels[i] for i in orbit}) > 1:
            bad_orbits += 1
            bad_graphs += len(orbit)
        else:
            kept.append(orbit[0])
    kept.sort()
    out = ds.subset(kept)
    sizes = Counter(out.class_labels)
    n = len(out)
    report = CleanReport(
        dataset=ds.name,
        original_size=len(ds),
        cleaned_size=n,
        orbits_total=len(orbits.orbits),
        removed_mismatched_orbits=bad_orbits,
        removed_mismatched_graphs=bad_graphs,
        removed_duplicates=len(ds) - n - bad_graphs,
        avg_nodes=sum(g.node_count for g in out.graphs) / n if n else 0.0,
        avg_edges=sum(g.edge_count for g in out.graphs) / n if n else 0.0,
        num_classes=len(sizes),
        min_class=min(sizes.values()) if sizes else 0,
        max_class=max(sizes.values()) if sizes else 0,
    )
    return out, report


def verify_clean(ds: Dataset, *, budget: int = DEFAULT_BUDGET) -> tuple[bool, list[tuple[int, int]]]:
    """True when no two graphs are isomorphic (topology); otherwise the offending pairs."""
    orbits = compute_orbits(ds, IsoMode.TOPOLOGY, budget=budget)
    violations = [pair for o in orbits.nontrivial for pair in itertools.combinations(o, 2)]
    return not violations, violations
