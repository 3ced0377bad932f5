"""Global identifiability of dynamical networks from graph topology, with an exact rational-function oracle."""

from __future__ import annotations

from .errors import (
    ArithmeticDomainError,
    BudgetExceededError,
    ConstructionFailedError,
    CriteriaDisagreement,
    InputError,
    InternalConsistencyError,
    NetidentError,
    PreconditionError,
    SingularMatrixError,
)
from .graph import Graph, PathSet, constrained_path_set_exists, max_vertex_disjoint_paths, reachable_set
from .identify import (
    Counterexample,
    DerivedInclusion,
    PathWitness,
    Verdict,
    identifiable_graph,
    identifiable_node,
    necessary_cardinality,
    square_case_equivalence,
    sufficient_constrained_paths,
)
from .matrix import RatMatrix, normal_rank
from .oracle import (
    NetworkMatrix,
    OracleReport,
    OracleVerdict,
    construct_counterexample,
    lift_counterexample,
    rank_trials,
    sample_admissible,
    transfer_block_rank,
    transfer_matrix,
)
from .ratfunc import Poly, Properness, RatFunc
from .simplification import DerivedResult, OrderPolicy, inclusion_verdict, simplify

__version__ = "0.1.0"

__all__ = [
    "ArithmeticDomainError",
    "BudgetExceededError",
    "ConstructionFailedError",
    "Counterexample",
    "CriteriaDisagreement",
    "DerivedInclusion",
    "DerivedResult",
    "Graph",
    "InputError",
    "InternalConsistencyError",
    "NetidentError",
    "NetworkMatrix",
    "OracleReport",
    "OracleVerdict",
    "OrderPolicy",
    "PathSet",
    "PathWitness",
    "Poly",
    "PreconditionError",
    "Properness",
    "RatFunc",
    "RatMatrix",
    "SingularMatrixError",
    "Verdict",
    "constrained_path_set_exists",
    "construct_counterexample",
    "identifiable_graph",
    "identifiable_node",
    "inclusion_verdict",
    "lift_counterexample",
    "max_vertex_disjoint_paths",
    "necessary_cardinality",
    "normal_rank",
    "rank_trials",
    "reachable_set",
    "sample_admissible",
    "simplify",
    "square_case_equivalence",
    "sufficient_constrained_paths",
    "transfer_block_rank",
    "transfer_matrix",
]
