"""The graph simplification process.

Operation 1 deletes every outgoing edge of the current measured set ``W``.
Operation 2 swaps a node ``k`` in ``W - U`` for its in-neighbour ``j`` when
``j`` is the only in-neighbour of ``k`` reachable from the anchor set ``U``.
Alternating the two until neither changes anything yields a derived graph and
a derived vertex set, recorded together with the full operation trace.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError, InternalConsistencyError
from .graph import Edge, Graph, VertexSet, reachable_set


class StepKind(str, enum.Enum):
    REMOVE_OUTGOING = "remove_outgoing"
    REPLACE = "replace"


@dataclass(frozen=True)
class SimplifyStep:
    kind: StepKind
    removed_edges: tuple[Edge, ...] = ()
    replaced: tuple[int, int] | None = None  # (k, j): k left W, j entered

    def to_json(self) -> dict:
        if self.kind is StepKind.REMOVE_OUTGOING:
            return {"kind": self.kind.value, "removed_edges": [list(e) for e in self.removed_edges]}
        assert self.replaced is not None
        return {"kind": self.kind.value, "replaced": list(self.replaced)}

    @classmethod
    def from_json(cls, doc: dict) -> SimplifyStep:
        kind = StepKind(doc["kind"])
        if kind is StepKind.REMOVE_OUTGOING:
            return cls(kind, removed_edges=tuple(tuple(e) for e in doc["removed_edges"]))
        k, j = doc["replaced"]
        return cls(kind, replaced=(k, j))


@dataclass(frozen=True)
class OrderPolicy:
    """How operation 2 picks among eligible nodes.

    ``seed=None`` is the deterministic policy (smallest eligible ``k``);
    otherwise eligible choices are drawn from a generator seeded with ``seed``.
    """

    seed: int | None = None

    @classmethod
    def deterministic(cls) -> OrderPolicy:
        return cls(None)

    @classmethod
    def seeded(cls, seed: int) -> OrderPolicy:
        return cls(seed)

    @classmethod
    def parse(cls, text: str) -> OrderPolicy:
        if text == "det":
            return cls.deterministic()
        if text.startswith("seed:"):
            try:
                return cls.seeded(int(text[5:]))
            except ValueError:
                pass
        raise InputError(f"order policy must be 'det' or 'seed:N', got {text!r}")

    def __str__(self) -> str:
        return "det" if self.seed is None else f"seed:{self.seed}"


@dataclass(frozen=True)
class DerivedResult:
    graph: Graph
    measured: VertexSet
    anchors: VertexSet
    derived_graph: Graph
    derived_set: VertexSet
    trace: tuple[SimplifyStep, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "anchors": list(self.anchors),
            "measured": list(self.measured),
            "derived_set": list(self.derived_set),
            "derived_edges": [list(e) for e in self.derived_graph.sorted_edges()],
            "trace": [s.to_json() for s in self.trace],
        }

    @classmethod
    def from_json(cls, doc: dict, graph: Graph) -> DerivedResult:
        """Rebuild from a document; the trace is replayed and must reproduce the stored result."""
        anchors = graph.vertex_set(doc["anchors"])
        measured = graph.vertex_set(doc["measured"])
        trace = tuple(SimplifyStep.from_json(s) for s in doc["trace"])
        dg, dw = replay(graph, anchors, measured, trace)
        if dw != tuple(doc["derived_set"]) or dg.sorted_edges() != [tuple(e) for e in doc["derived_edges"]]:
            raise InputError("trace replay does not reproduce the stored derived graph/set")
        return cls(graph, measured, anchors, dg, dw, trace)


def apply_op1(g: Graph, W: Iterable[int]) -> tuple[Graph, tuple[Edge, ...]]:
    """Remove every outgoing edge of the nodes in ``W``."""
    removed = tuple(sorted((w, v) for w in g.vertex_set(W) for v in g.out_neighbours(w)))
    if not removed:
        return g, ()
    return g.without_edges(removed), removed


def eligible_replacements(g: Graph, U: Iterable[int], W: Iterable[int]) -> list[tuple[int, int]]:
    """All ``(k, j)`` where ``k`` in ``W - U`` has ``j`` as its only ``U``-reachable in-neighbour."""
    u = set(g.vertex_set(U))
    reach = set(reachable_set(g, u))
    out = []
    for k in g.vertex_set(W):
        if k in u:
            continue
        live = [j for j in g.in_neighbours(k) if j in reach]
        if len(live) == 1:
            out.append((k, live[0]))
    return out


def _replace(W: Iterable[int], k: int, j: int) -> VertexSet:
    return tuple(sorted((set(W) - {k}) | {j}))


def apply_op2(
    g: Graph, U: Iterable[int], W: Iterable[int], rng: random.Random | None = None
) -> tuple[VertexSet, int, int] | None:
    """Apply operation 2 once; ``None`` when no node is eligible.

    Picks the smallest eligible ``k`` unless ``rng`` is given.  ``W`` is a set,
    so replacing ``k`` by a ``j`` already in ``W`` shrinks it.
    """
    choices = eligible_replacements(g, U, W)
    if not choices:
        return None
    k, j = rng.choice(choices) if rng is not None else choices[0]
    return _replace(W, k, j), k, j


def simplify(
    g: Graph, U: Iterable[int], W: Iterable[int], policy: OrderPolicy | None = None
) -> DerivedResult:
    """Run operations 1 and 2 alternately until a fixpoint is reached."""
    anchors = g.vertex_set(U)
    measured = g.vertex_set(W)
    policy = policy or OrderPolicy.deterministic()
    rng = random.Random(policy.seed) if policy.seed is not None else None

    cur_g, cur_w = g, measured
    trace: list[SimplifyStep] = []
    replacements = 0
    while True:
        cur_g, removed = apply_op1(cur_g, cur_w)
        if removed:
            trace.append(SimplifyStep(StepKind.REMOVE_OUTGOING, removed_edges=removed))
        step = apply_op2(cur_g, anchors, cur_w, rng)
        if step is None:
            break
        cur_w, k, j = step
        trace.append(SimplifyStep(StepKind.REPLACE, replaced=(k, j)))
        replacements += 1
        # a vertex whose outgoing edges are gone can never be swapped in again
        if replacements > g.n:
            raise InternalConsistencyError("simplification exceeded |V| replacement rounds")
    return DerivedResult(g, measured, anchors, cur_g, cur_w, tuple(trace))


def replay(
    g: Graph, U: Iterable[int], W: Iterable[int], trace: Iterable[SimplifyStep]
) -> tuple[Graph, VertexSet]:
    """Re-execute a trace from ``(g, W)``, checking every step is legal."""
    anchors = g.vertex_set(U)
    cur_g, cur_w = g, g.vertex_set(W)
    for step in trace:
        if step.kind is StepKind.REMOVE_OUTGOING:
            expected = apply_op1(cur_g, cur_w)[1]
            if tuple(sorted(step.removed_edges)) != expected:
                raise InputError(f"illegal operation 1 step {step.removed_edges}")
            cur_g = cur_g.without_edges(step.removed_edges)
        else:
            if step.replaced not in eligible_replacements(cur_g, anchors, cur_w):
                raise InputError(f"illegal operation 2 step {step.replaced}")
            k, j = step.replaced
            cur_w = _replace(cur_w, k, j)
    return cur_g, cur_w


def inclusion_verdict(d: DerivedResult, U: Iterable[int]) -> bool:
    """``U`` is contained in the derived vertex set."""
    anchors = d.graph.vertex_set(U)
    if anchors != d.anchors:
        raise InputError(f"derived result was computed for anchors {list(d.anchors)}, not {list(anchors)}")
    return set(anchors) <= set(d.derived_set)
