"""Independence statements implied by directed acyclic graphs, via edge matrices."""

from .binary import BinaryMatrix, LabeledBinary
from .graph import (
    IndexPartition,
    ParentGraph,
    Query,
    build_parent_graph,
    defining_independencies,
    reorder,
)
from .operators import SingularPivotError, inv_k, inv_set, transitive_closure, zer_k, zer_set
from .separation import Verdict, check_all, d_separated, matrix_criterion, moral_separated

__all__ = [
    "BinaryMatrix",
    "LabeledBinary",
    "IndexPartition",
    "ParentGraph",
    "Query",
    "build_parent_graph",
    "defining_independencies",
    "reorder",
    "SingularPivotError",
    "inv_k",
    "inv_set",
    "zer_k",
    "zer_set",
    "transitive_closure",
    "Verdict",
    "check_all",
    "d_separated",
    "matrix_criterion",
    "moral_separated",
]

__version__ = "0.1.0"
