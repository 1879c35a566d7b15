"""Orbit partitions of a dataset and the isomorphism quality metrics."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .canon import (DEFAULT_BUDGET, BudgetExceeded, CanonError, CanonicalForm, LabelsRequired,
                    canonical_form, invariant_key, verify_witness)
from .graph import Dataset, Graph, IsoMode
from .numbers import frac_json, percent, round_half_up


@dataclass(frozen=True)
class OrbitPartition:
    mode: IsoMode
    size: int
    orbits: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(o[0] for o in self.orbits)

    @property
    def nontrivial(self) -> tuple[tuple[int, ...], ...]:
        return tuple(o for o in self.orbits if len(o) > 1)

    def orbit_index(self) -> list[int]:
        """Orbit id of every graph."""
        out = [-1] * self.size
        for k, orbit in enumerate(self.orbits):
            for i in orbit:
                out[i] = k
        return out


def _forms(graphs: Sequence[tuple[int, Graph]], mode: IsoMode, budget: int,
           jobs: int) -> dict[int, CanonicalForm]:
    if jobs > 1 and len(graphs) > 64:
        ids = [i for i, _ in graphs]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = pool.map(canonical_form, [g for _, g in graphs], [mode] * len(ids),
                            [budget] * len(ids), ids, chunksize=32)
            return dict(zip(ids, futs))
    return {i: canonical_form(g, mode, budget, graph_id=i) for i, g in graphs}


def compute_orbits(ds: Dataset, mode: IsoMode | str = IsoMode.TOPOLOGY, *,
                   trust_certificates: bool = False, budget: int = DEFAULT_BUDGET,
                   jobs: int = 1) -> OrbitPartition:
    """Group graphs into isomorphism classes.

    Graphs are first bucketed by a cheap invariant (node/edge counts, degree
    sequence, label multisets); certificates are only computed inside buckets
    with more than one member. Each certificate class is checked by verifying
    an explicit isomorphism to its lowest-id member.
    """
    mode = IsoMode.parse(mode)
    for i, g in enumerate(ds.graphs):
        if not g.has_labels_for(mode):
            raise LabelsRequired(f"graph {i} lacks the labels needed for {mode.value} mode")
    buckets: dict[tuple, list[int]] = defaultdict(list)
    for i, g in enumerate(ds.graphs):
        buckets[invariant_key(g, mode)].append(i)

    pending = [(i, ds.graphs[i]) for ids in buckets.values() if len(ids) > 1 for i in ids]
    forms = _forms(pending, mode, budget, jobs)

    orbits: list[tuple[int, ...]] = []
    for ids in buckets.values():
        if len(ids) == 1:
            orbits.append((ids[0],))
            continue
        by_cert: dict[bytes, list[int]] = defaultdict(list)
        for i in ids:
            by_cert[forms[i].certificate].append(i)
        for members in by_cert.values():
            members.sort()
            if not trust_certificates:
                rep = members[0]
                inv = [0] * ds.graphs[rep].node_count
                for v, p in enumerate(forms[rep].labeling):
                    inv[p] = v
                for i in members[1:]:
                    phi = [inv[p] for p in forms[i].labeling]
                    if not verify_witness(ds.graphs[i], ds.graphs[rep], phi, mode):
                        raise CanonError(f"certificate collision between graphs {rep} and {i}")
            orbits.append(tuple(members))
    orbits.sort()
    return OrbitPartition(mode, len(ds), tuple(orbits))


def orbit_histogram(orbits: OrbitPartition) -> tuple[dict[int, int], int]:
    """Counts of non-trivial orbit sizes, and the number of trivial orbits."""
    hist: dict[int, int] = defaultdict(int)
    trivial = 0
    for o in orbits.orbits:
        if len(o) > 1:
            hist[len(o)] += 1
        else:
            trivial += 1
    return dict(sorted(hist.items())), trivial


def histogram_csv(hist: dict[int, int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["orbit_size", "count"])
    for size, count in sorted(hist.items()):
        w.writerow([size, count])
    return buf.getvalue()


@dataclass(frozen=True)
class AuditReport:
    dataset: str
    mode: IsoMode
    N: int
    orbits_nontrivial: int
    orbits_total: int
    I: int
    iso_pairs: int
    mismatched: int
    mismatched_orbits: int
    histogram: dict[int, int] = field(default_factory=dict)
    trivial_orbits: int = 0

    @property
    def I_pct(self) -> Fraction:
        return percent(self.I, self.N)

    @property
    def IP_pct(self) -> Fraction:
        return percent(self.iso_pairs, comb(self.N, 2))

    @property
    def mismatched_pct(self) -> Fraction:
        return percent(self.mismatched, self.N)

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "mode": self.mode.value,
            "N": self.N,
            "orbits_nontrivial": self.orbits_nontrivial,
            "orbits_total": self.orbits_total,
            "I": self.I,
            "I_pct": round_half_up(self.I_pct),
            "IP_pct": round_half_up(self.IP_pct),
            "mismatched": self.mismatched,
            "mismatched_pct": round_half_up(self.mismatched_pct),
            "histogram": [[s, c] for s, c in sorted(self.histogram.items())],
            "exact": {
                "I_pct": frac_json(self.I_pct),
                "IP_pct": frac_json(self.IP_pct),
                "mismatched_pct": frac_json(self.mismatched_pct),
                "iso_pairs": self.iso_pairs,
                "pairs": comb(self.N, 2),
            },
        }

    def table_row(self) -> str:
        j = self.to_json()
        return (f"{self.dataset:<18} {self.N:>6} {self.orbits_nontrivial:>6} {self.I:>6} "
                f"{j['I_pct']:>7} {j['IP_pct']:>7} {j['mismatched_pct']:>7}")


def audit_metrics(ds: Dataset, orbits: OrbitPartition) -> AuditReport:
    if orbits.size != len(ds):
        raise ValueError("orbit partition was computed for a different dataset")
    hist, trivial = orbit_histogram(orbits)
    iso = pairs = mismatched = mismatched_orbits = 0
    for o in orbits.orbits:
        s = len(o)
        if s < 2:
            continue
        iso += s
        pairs += comb(s, 2)
        if len({ds.class_labels[i] for i in o}) > 1:
            mismatched += s
            mismatched_orbits += 1
    return AuditReport(
        dataset=ds.name, mode=orbits.mode, N=len(ds),
        orbits_nontrivial=len(orbits.orbits) - trivial, orbits_total=len(orbits.orbits),
        I=iso, iso_pairs=pairs, mismatched=mismatched, mismatched_orbits=mismatched_orbits,
        histogram=hist, trivial_orbits=trivial,
    )


def audit(ds: Dataset, mode: IsoMode | str = IsoMode.TOPOLOGY, **kwargs) -> AuditReport:
    return audit_metrics(ds, compute_orbits(ds, mode, **kwargs))


__all__ = ["OrbitPartition", "AuditReport", "compute_orbits", "audit_metrics", "orbit_histogram",
           "histogram_csv", "audit", "BudgetExceeded"]
