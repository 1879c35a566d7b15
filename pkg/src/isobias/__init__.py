"""Isomorphism audits for graph classification datasets."""

__version__ = "0.1.0"

from .audit import AuditReport, OrbitPartition, audit, audit_metrics, compute_orbits
from .canon import (BudgetExceeded, CanonicalForm, Coloring, LabelsRequired, canonical_form,
                    certificate, is_isomorphic, refine)
from .cleanse import CleanReport, clean, verify_clean
from .graph import Dataset, Graph, GraphError, IsoMode, make_dataset, make_graph
from .tu import DatasetFormatError, dataset_stats, load_dataset, write_dataset

__all__ = [
    "AuditReport", "BudgetExceeded", "CanonicalForm", "CleanReport", "Coloring", "Dataset",
    "DatasetFormatError", "Graph", "GraphError", "IsoMode", "LabelsRequired", "OrbitPartition",
    "audit", "audit_metrics", "canonical_form", "certificate", "clean", "compute_orbits",
    "dataset_stats", "is_isomorphic", "load_dataset", "make_dataset", "make_graph", "refine",
    "verify_clean", "write_dataset",
]
