"""Identifiability verdicts for a node's outgoing transfer functions and for whole graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import CriteriaDisagreement, PreconditionError
from .graph import DEFAULT_BUDGET, Graph, PathSet, VertexSet, constrained_path_set_exists
from .oracle import NetworkMatrix, construct_counterexample, lift_counterexample
from .simplification import DerivedResult, OrderPolicy, inclusion_verdict, simplify


@dataclass(frozen=True)
class DerivedInclusion:
    """Derived-set witness: the verdict is whether the anchors sit inside ``derived.derived_set``."""

    derived: DerivedResult

    def to_json(self) -> dict:
        return {"type": "derived_inclusion", "derived": self.derived.to_json()}


@dataclass(frozen=True)
class Counterexample:
    """Admissible matrix on the original graph whose transfer block loses rank."""

    matrix: NetworkMatrix
    derived: DerivedResult

    def to_json(self) -> dict:
        return {
            "type": "counterexample",
            "derived": self.derived.to_json(),
            "matrix": self.matrix.to_json(),
        }


@dataclass(frozen=True)
class PathWitness:
    paths: PathSet

    def to_json(self) -> dict:
        return {"type": "path_witness", "paths": self.paths.to_json()}


Certificate = Union[DerivedInclusion, Counterexample, PathWitness]


def certificate_from_json(doc: dict, graph: Graph) -> Certificate:
    kind = doc["type"]
    if kind == "derived_inclusion":
        return DerivedInclusion(DerivedResult.from_json(doc["derived"], graph))
    if kind == "counterexample":
        return Counterexample(NetworkMatrix.from_json(doc["matrix"]), DerivedResult.from_json(doc["derived"], graph))
    if kind == "path_witness":
        return PathWitness(PathSet.from_json(doc["paths"]))
    raise ValueError(f"unknown certificate type {kind!r}")


@dataclass(frozen=True)
class Verdict:
    identifiable: bool
    certificate: Certificate | None
    node: int | None = None
    measured: VertexSet = ()
    checked_nodes: tuple[Verdict, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.identifiable

    def to_json(self) -> dict:
        return {
            "identifiable": self.identifiable,
            "node": self.node,
            "measured": list(self.measured),
            "certificate": self.certificate.to_json() if self.certificate is not None else None,
            "checked_nodes": [v.to_json() for v in self.checked_nodes],
        }

    @classmethod
    def from_json(cls, doc: dict, graph: Graph) -> Verdict:
        cert = doc["certificate"]
        return cls(
            doc["identifiable"],
            certificate_from_json(cert, graph) if cert is not None else None,
            doc["node"],
            tuple(doc["measured"]),
            tuple(cls.from_json(v, graph) for v in doc["checked_nodes"]),
        )


def identifiable_node(
    g: Graph,
    i: int,
    C: Iterable[int],
    with_counterexample: bool = False,
    seed: int = 0,
    policy: OrderPolicy | None = None,
) -> Verdict:
    """Are the transfer functions on the outgoing edges of ``i`` identifiable from ``C``?

    Decided by simplifying ``C`` with respect to the out-neighbours of ``i``
    and testing inclusion.  A sink is identifiable vacuously.  With
    ``with_counterexample`` a negative verdict carries an admissible matrix on
    ``g`` for which ``rank T_{C, N_i^+}`` drops.
    """
    measured = g.vertex_set(C)
    anchors = g.out_neighbours(i)
    derived = simplify(g, anchors, measured, policy)
    ok = inclusion_verdict(derived, anchors)
    if ok or not with_counterexample:
        return Verdict(ok, DerivedInclusion(derived), i, measured)
    local = construct_counterexample(derived, anchors, seed)
    lifted = lift_counterexample(derived, local, seed)
    return Verdict(False, Counterexample(lifted, derived), i, measured)


def identifiable_graph(
    g: Graph, C: Iterable[int], policy: OrderPolicy | None = None
) -> Verdict:
    """Is every transfer function of ``g`` identifiable from ``C``?

    Each node gets its own simplification; nodes with identical out-neighbour
    sets share one.
    """
    measured = g.vertex_set(C)
    cache: dict[VertexSet, DerivedResult] = {}
    per_node = []
    for i in g.vertices:
        anchors = g.out_neighbours(i)
        if anchors not in cache:
            cache[anchors] = simplify(g, anchors, measured, policy)
        derived = cache[anchors]
        per_node.append(Verdict(inclusion_verdict(derived, anchors), DerivedInclusion(derived), i, measured))
    failing = next((v for v in per_node if not v.identifiable), None)
    return Verdict(
        failing is None,
        failing.certificate if failing is not None else None,
        None,
        measured,
        tuple(per_node),
    )


def necessary_cardinality(g: Graph, i: int, C: Iterable[int]) -> bool:
    """Cheap necessary condition: no more out-neighbours than measured nodes."""
    return len(g.out_neighbours(i)) <= len(g.vertex_set(C))


def sufficient_constrained_paths(
    g: Graph, i: int, C: Iterable[int], budget: int = DEFAULT_BUDGET
) -> tuple[bool, PathSet | None]:
    """Sufficient (not necessary) path test: a constrained set of ``|N_i^+|`` paths into ``C``."""
    anchors = g.out_neighbours(i)
    return constrained_path_set_exists(g, anchors, C, len(anchors), budget)


def square_case_equivalence(g: Graph, i: int, C: Iterable[int], budget: int = DEFAULT_BUDGET) -> bool:
    """When ``|C| == |N_i^+|`` the simplification verdict and the constrained-path verdict coincide.

    Returns the shared value; raises :class:`CriteriaDisagreement` if they differ.
    """
    measured = g.vertex_set(C)
    if len(measured) != len(g.out_neighbours(i)):
        raise PreconditionError(
            f"square case needs |C| == |N_i^+|, got {len(measured)} and {len(g.out_neighbours(i))}"
        )
    by_simplification = identifiable_node(g, i, measured).identifiable
    by_paths, _ = sufficient_constrained_paths(g, i, measured, budget)
    if by_simplification != by_paths:
        raise CriteriaDisagreement(
            f"node {i}, C={list(measured)}: simplification says {by_simplification}, paths say {by_paths}"
        )
    return by_simplification
