"""Exact cross-checks for identifiability verdicts.

Positive verdicts are probed by sampling admissible network matrices and
computing the normal rank of ``T_{W,U}`` where ``T = (I - G)^-1``.  Negative
verdicts are certified by building an explicit admissible network matrix for
which that rank drops, following the constructive argument on the derived
graph and then undoing the simplification trace.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    ArithmeticDomainError,
    ConstructionFailedError,
    InputError,
    InternalConsistencyError,
    PreconditionError,
)
from .graph import Edge, Graph, VertexSet, reachable_set
from .matrix import (
    RatMatrix,
    adjugate,
    inverse,
    normal_rank,
    principal_minors_nonzero,
    rational_rank,
    random_probe,
)
from .ratfunc import RatFunc
from .simplification import DerivedResult, StepKind, inclusion_verdict

COEFF_RANGE = 1000
DEFAULT_TRIALS = 64
RETRY_BUDGET = 200


@dataclass(frozen=True)
class NetworkMatrix:
    """Transfer functions on the edges of a graph.

    ``entries[(j, i)]`` is the function on edge ``j -> i``, i.e. the matrix
    entry ``G[i, j]``.
    """

    graph: Graph
    entries: Mapping[Edge, RatFunc] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))

    @property
    def n(self) -> int:
        return self.graph.n

    def matrix(self) -> RatMatrix:
        n = self.n
        rows = [[RatFunc()] * n for _ in range(n)]
        for (j, i), f in self.entries.items():
            rows[i - 1][j - 1] = f
        return RatMatrix(rows)

    def i_minus_g(self) -> RatMatrix:
        n = self.n
        rows = [[RatFunc.const(1) if r == c else RatFunc() for c in range(n)] for r in range(n)]
        for (j, i), f in self.entries.items():
            rows[i - 1][j - 1] = -f
        return RatMatrix(rows)

    def audit(self) -> list[str]:
        """Violations of properness, graph consistency and well-posedness (empty if admissible)."""
        problems = []
        if set(self.entries) != set(self.graph.edges):
            missing = sorted(set(self.graph.edges) - set(self.entries))
            extra = sorted(set(self.entries) - set(self.graph.edges))
            problems.append(f"P2: support mismatch, missing {missing}, extra {extra}")
        for e, f in self.entries.items():
            if f.is_zero():
                problems.append(f"P2: entry on edge {e} is zero")
            elif not f.is_proper():
                problems.append(f"P1: entry on edge {e} is improper")
        if not any(p.startswith("P1") for p in problems):
            if not principal_minors_nonzero(self.limit_matrix()):
                problems.append("P3: a principal minor of lim (I - G) vanishes")
        return problems

    def limit_matrix(self) -> list[list[Fraction]]:
        """``lim_{z->oo} (I - G(z))`` computed from leading coefficients."""
        n = self.n
        lim = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        for (j, i), f in self.entries.items():
            lim[i - 1][j - 1] = -f.limit_at_infinity()
        return lim

    def is_admissible(self) -> bool:
        return not self.audit()

    def restricted_to(self, g: Graph) -> NetworkMatrix:
        return NetworkMatrix(g, {e: f for e, f in self.entries.items() if e in g.edges})

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "entries": [
                {"from": j, "to": i, **f.to_json()} for (j, i), f in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> NetworkMatrix:
        g = Graph.from_json(doc["graph"])
        entries = {}
        for e in doc["entries"]:
            key = (e["from"], e["to"])
            if key in entries:
                raise InputError(f"duplicate entry for edge {key}")
            entries[key] = RatFunc.from_json(e)
        return cls(g, entries)


class OracleVerdict(str, enum.Enum):
    ALL_FULL_RANK = "all_full_rank"
    DEFICIENCY_FOUND = "deficiency_found"


@dataclass(frozen=True)
class OracleReport:
    trials: int
    target_rank: int
    ranks: tuple[int, ...]
    verdict: OracleVerdict
    seed: int
    witness: NetworkMatrix | None = None

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "target_rank": self.target_rank,
            "ranks": list(self.ranks),
            "verdict": self.verdict.value,
            "seed": self.seed,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }

    @classmethod
    def from_json(cls, doc: dict) -> OracleReport:
        w = doc.get("witness")
        return cls(
            doc["trials"],
            doc["target_rank"],
            tuple(doc["ranks"]),
            OracleVerdict(doc["verdict"]),
            doc["seed"],
            NetworkMatrix.from_json(w) if w is not None else None,
        )


def _nonzero_int(rng: random.Random, bound: int) -> int:
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    return c


def _as_rng(seed: int | random.Random | None) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def sample_admissible(
    g: Graph, seed: int | random.Random | None = 0, bound: int = COEFF_RANGE
) -> NetworkMatrix:
    """Put ``c/z`` with a random nonzero integer ``c`` on every edge.

    Strictly proper entries make ``lim (I - G) = I``, so the result is
    admissible by construction.
    """
    rng = _as_rng(seed)
    return NetworkMatrix(g, {e: RatFunc.over_z(_nonzero_int(rng, bound)) for e in g.sorted_edges()})


def transfer_matrix(G: NetworkMatrix) -> RatMatrix:
    """``T = (I - G)^-1`` exactly."""
    return inverse(G.i_minus_g())


def _index(vs: Iterable[int]) -> list[int]:
    return [v - 1 for v in vs]


def bordered_matrix(G: NetworkMatrix, rows: VertexSet, cols: VertexSet) -> RatMatrix:
    """``[[I - G, E_cols], [E_rows^T, 0]]``.

    When ``I - G`` is invertible its rank is ``n + rank T_{rows,cols}``
    (Schur complement), which lets the exact rank of a transfer block be read
    off without inverting anything symbolically.
    """
    n = G.n
    base = G.i_minus_g().tolist()
    zero, one = RatFunc(), RatFunc.const(1)
    top = [row + [one if r + 1 == c else zero for c in cols] for r, row in enumerate(base)]
    bottom = [[one if w == c + 1 else zero for c in range(n)] + [zero] * len(cols) for w in rows]
    return RatMatrix(top + bottom)


def _probe_transfer_rank(G: NetworkMatrix, rows: VertexSet, cols: VertexSet, rng: random.Random) -> int | None:
    """Numeric rank of ``T_{rows,cols}`` at one random point, ``None`` if the point is bad."""
    n = G.n
    lam = random_probe(rng)
    try:
        a = G.i_minus_g().evaluate(lam)
    except ArithmeticDomainError:
        return None
    # solve (I - G(lam)) X = E_cols
    aug = [row + [Fraction(int(r + 1 == c)) for c in cols] for r, row in enumerate(a)]
    k = len(cols)
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[p], aug[c] = aug[c], aug[p]
        inv = 1 / aug[c][c]
        rc = aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                ri = aug[i]
                for j in range(c, n + k):
                    ri[j] -= f * rc[j]
    block = [[aug[w - 1][n + j] for j in range(k)] for w in rows]
    return rational_rank(block)


def transfer_block_rank(
    G: NetworkMatrix, rows: Iterable[int], cols: Iterable[int], rng: random.Random | None = None
) -> int:
    """Normal rank of ``T_{rows,cols}(z; G)``, exact.

    A numeric probe settles the full-rank case; anything short of full rank is
    decided by fraction-free elimination of the bordered matrix.
    """
    rows, cols = G.graph.vertex_set(rows), G.graph.vertex_set(cols)
    if not rows or not cols:
        return 0
    rng = rng or random.Random(0)
    full = min(len(rows), len(cols))
    for _ in range(3):
        r = _probe_transfer_rank(G, rows, cols, rng)
        if r is not None:
            if r == full:
                return full
            break
    return normal_rank(bordered_matrix(G, rows, cols), rng) - G.n


def rank_trials(
    g: Graph,
    U: Iterable[int],
    W: Iterable[int],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> OracleReport:
    """Sample ``trials`` admissible matrices and record ``rank T_{W,U}`` for each.

    Trial ``t`` uses its own generator seeded from ``(seed, t)``, so the report
    does not depend on evaluation order.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    cols, rows = g.vertex_set(U), g.vertex_set(W)
    ranks = []
    witness = None
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        G = sample_admissible(g, rng)
        r = transfer_block_rank(G, rows, cols, rng)
        ranks.append(r)
        if r < len(cols) and witness is None:
            witness = G
    verdict = OracleVerdict.ALL_FULL_RANK if witness is None else OracleVerdict.DEFICIENCY_FOUND
    return OracleReport(trials, len(cols), tuple(ranks), verdict, seed, witness)


def strip_incoming(g: Graph, U: Iterable[int]) -> Graph:
    u = set(U)
    return g.without_edges([e for e in g.edges if e[1] in u])


def construct_counterexample(
    d: DerivedResult,
    U: Iterable[int],
    seed: int | random.Random | None = 0,
    max_attempts: int = RETRY_BUDGET,
) -> NetworkMatrix:
    """Admissible matrix on the derived graph (anchors' in-edges removed) with ``rank T_{D(W),U} < |U|``.

    Requires ``U`` not contained in ``D(W)``.  Every "there exists" step of
    the construction is realised by resampling random integers; the result is
    audited exactly before it is returned.
    """
    anchors = d.graph.vertex_set(U)
    if inclusion_verdict(d, anchors):
        raise PreconditionError("anchors are contained in the derived set; no counterexample exists")
    rng = _as_rng(seed)
    dg = strip_incoming(d.derived_graph, anchors)
    dw = d.derived_set
    ubar = tuple(sorted(set(anchors) - set(dw)))
    wbar = tuple(sorted(set(dw) - set(anchors)))
    wbar_set = set(wbar)
    reach = set(reachable_set(dg, ubar))
    feeders = tuple(sorted({j for (j, w) in dg.edges if w in wbar_set and j in reach}))
    solved_edges = {(j, w) for (j, w) in dg.edges if w in wbar_set and j in reach}
    rest = [v for v in dg.vertices if v not in wbar_set]
    rest_pos = {v: k for k, v in enumerate(rest)}
    # one source per feeder with a path to it; its adjugate entry must come out nonzero
    witness_source = {}
    for nv in feeders:
        witness_source[nv] = next(u for u in ubar if nv in reachable_set(dg, [u]))

    diagnostics: dict[str, int] = {"adjugate_zero": 0, "b_failed": 0, "solve_failed": 0, "audit_failed": 0}
    for attempt in range(max_attempts):
        bound = COEFF_RANGE * (1 + attempt // 50)
        entries = {
            e: RatFunc.over_z(_nonzero_int(rng, bound))
            for e in dg.sorted_edges()
            if e not in solved_edges
        }
        # adj(I - G) restricted to the complement of wbar does not involve the entries being solved for
        block = NetworkMatrix(
            Graph(dg.n, frozenset(e for e in entries if e[0] not in wbar_set and e[1] not in wbar_set)),
            {e: f for e, f in entries.items() if e[0] not in wbar_set and e[1] not in wbar_set},
        ).i_minus_g().submatrix(_index(rest), _index(rest))
        adj = adjugate(block)

        def a(row: int, col: int) -> RatFunc:
            return adj[rest_pos[row], rest_pos[col]]

        if any(a(nv, witness_source[nv]).is_zero() for nv in feeders):
            diagnostics["adjugate_zero"] += 1
            continue
        ab = None
        for _ in range(20):
            b = {u: _nonzero_int(rng, 10) for u in ubar}
            cand = {nv: sum((a(nv, u) * b[u] for u in ubar), RatFunc()) for nv in feeders}
            if all(cand.values()):
                ab = cand
                break
        if ab is None:
            diagnostics["b_failed"] += 1
            continue

        ok = True
        for w in wbar:
            ins = [j for j in dg.in_neighbours(w) if j in reach]
            if not ins:
                continue
            if len(ins) == 1:
                raise InternalConsistencyError(f"node {w} has a single reachable in-neighbour in a derived graph")
            # solve on the feeder whose (Ab) entry is most proper so the solved entry stays strictly proper
            last = min(ins, key=lambda j: (ab[j].relative_degree, j))
            acc = RatFunc()
            for j in ins:
                if j == last:
                    continue
                f = RatFunc.over_z(_nonzero_int(rng, bound))
                entries[(j, w)] = f
                acc = acc + f * ab[j]
            solved = -acc / ab[last]
            if solved.is_zero() or not solved.is_strictly_proper():
                ok = False
                break
            entries[(last, w)] = solved
        if not ok:
            diagnostics["solve_failed"] += 1
            continue

        G = NetworkMatrix(dg, entries)
        if G.audit() or transfer_block_rank(G, dw, anchors, rng) >= len(anchors):
            diagnostics["audit_failed"] += 1
            continue
        return G
    raise ConstructionFailedError(
        f"no counterexample after {max_attempts} attempts", diagnostics
    )


def lift_counterexample(
    d: DerivedResult,
    G_derived: NetworkMatrix,
    seed: int | random.Random | None = 0,
) -> NetworkMatrix:
    """Carry a rank-deficient matrix on the derived graph back to the original graph.

    Edges dropped along the way (anchors' incoming edges, then each batch of
    operation 1 removals in reverse) come back with fresh ``c/z`` entries;
    none of these re-additions can change the rank of the relevant transfer
    block, and replacements touch only the tracked measured set.
    """
    rng = _as_rng(seed)
    anchors = set(d.anchors)
    missing = d.derived_graph.edges - G_derived.graph.edges
    if any(e[1] not in anchors for e in missing) or not G_derived.graph.edges <= d.derived_graph.edges:
        raise InputError("matrix graph is not the derived graph (up to anchors' incoming edges)")
    entries = dict(G_derived.entries)
    for e in sorted(missing):
        entries[e] = RatFunc.over_z(_nonzero_int(rng, COEFF_RANGE))
    for step in reversed(d.trace):
        if step.kind is StepKind.REMOVE_OUTGOING:
            for e in step.removed_edges:
                entries[e] = RatFunc.over_z(_nonzero_int(rng, COEFF_RANGE))
    G = NetworkMatrix(d.graph, entries)
    problems = G.audit()
    if problems:
        raise InternalConsistencyError(f"lifted matrix is not admissible: {problems}")
    if transfer_block_rank(G, d.measured, d.anchors, rng) >= len(d.anchors):
        raise InternalConsistencyError("lifted matrix lost its rank deficiency")
    return G
