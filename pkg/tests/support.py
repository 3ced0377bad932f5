"""Shared fixtures-by-import: golden graphs, random generators and brute-force oracles.

The brute-force routines deliberately avoid the flow / backtracking code in
the package so they can serve as independent references on small graphs.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations
from pathlib import Path

from netident.graph import Graph
from netident.ratfunc import RatFunc

DATA = Path(__file__).parent / "data"

# criterion number -> (passed, title, detail); filled by the acceptance suite, printed by conftest
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str, str]] = {}

BIPARTITE = Graph.from_edges(5, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)])
LADDER = Graph.from_edges(
    8, [(1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (4, 7), (4, 8), (5, 7), (5, 8)]
)
FEEDFORWARD = Graph.from_edges(6, [(1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (4, 5), (4, 6)])
# seven-node network measured at {5, 6, 7}; every node is identifiable
SEVEN_NODE = Graph.from_edges(
    7,
    [(1, 2), (2, 1), (1, 3), (1, 4), (2, 3), (2, 5), (3, 6), (3, 5),
     (4, 6), (4, 7), (4, 3), (6, 5), (6, 7)],
)


def random_graph(rng: random.Random, n: int, density: float) -> Graph:
    edges = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b and rng.random() < density]
    return Graph.from_edges(n, edges)


def random_subset(rng: random.Random, g: Graph, lo: int = 0, hi: int | None = None) -> tuple[int, ...]:
    hi = g.n if hi is None else min(hi, g.n)
    k = rng.randint(min(lo, hi), hi)
    return tuple(sorted(rng.sample(list(g.vertices), k)))


def random_instance(
    rng: random.Random, n_lo: int = 2, n_hi: int = 7, d_lo: float = 0.2, d_hi: float = 0.6
) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """Random graph plus nonempty anchor set ``U`` and measured set ``W``."""
    n = rng.randint(n_lo, n_hi)
    g = random_graph(rng, n, rng.uniform(d_lo, d_hi))
    U = random_subset(rng, g, 1, max(1, n // 2))
    W = random_subset(rng, g, 1, n)
    return g, U, W



    return RatFunc.over_z(Fraction(c), power)


# ---------------------------------------------------------------- brute force


def all_paths(g: Graph, forbidden: set[int] = frozenset()) -> list[tuple[int, ...]]:
    """Every simple path with at least one edge that avoids ``forbidden``."""
    out: list[tuple[int, ...]] = []

    def extend(path: list[int]) -> None:
        for nxt in g.out_neighbours(path[-1]):
            if nxt in forbidden or nxt in path:
                continue
            path.append(nxt)
            out.append(tuple(path))
            extend(path)
            path.pop()

    for v in g.vertices:
        if v not in forbidden:
            extend([v])
    return out


def has_path(g: Graph, a: int, b: int) -> bool:
    """Transitive closure by repeated squaring of the adjacency relation (a == b counts)."""
    reach = {(v, v) for v in g.vertices} | set(g.edges)
    while True:
        nxt = reach | {(x, z) for (x, y) in reach for (y2, z) in reach if y == y2}
        if nxt == reach:
            return (a, b) in reach
        reach = nxt


def _split(U, W):
    u, w = set(U), set(W)
    return sorted(u - w), sorted(w - u), u & w


def brute_max_disjoint(g: Graph, U, W) -> int:
    """Largest family of pairwise vertex-disjoint paths from ``U - W`` to ``W - U`` plus ``|U & W|``."""
    src, snk, both = _split(U, W)
    cands = [p for p in all_paths(g, both) if p[0] in src and p[-1] in snk]
    best = 0

    def grow(start: int, used: set[int], size: int) -> None:
        nonlocal best
        best = max(best, size)
        for idx in range(start, len(cands)):
            p = cands[idx]
            if used.isdisjoint(p):
                grow(idx + 1, used | set(p), size + 1)

    grow(0, set(), 0)
    return best + len(both)


def brute_min_cut(g: Graph, U, W) -> int:
    """Smallest vertex set meeting every path from ``U - W`` to ``W - U`` (plus ``|U & W|``)."""
    src, snk, both = _split(U, W)
    cands = [set(p) for p in all_paths(g, both) if p[0] in src and p[-1] in snk]
    verts = [v for v in g.vertices if v not in both]
    for size in range(len(verts) + 1):
        for cut in combinations(verts, size):
            c = set(cut)
            if all(p & c for p in cands):
                return size + len(both)
    raise AssertionError("unreachable")


def brute_linkings(g: Graph, sources, sinks, forbidden=frozenset()) -> list[frozenset[tuple[int, ...]]]:
    """All distinct families of disjoint paths matching ``sources`` onto ``sinks`` (any bijection)."""
    cands = [p for p in all_paths(g, set(forbidden)) if p[0] in sources and p[-1] in sinks]
    found = set()
    for perm in permutations(sinks):
        pairs = list(zip(sources, perm))

        def rec(i: int, used: set[int], acc: list[tuple[int, ...]]) -> None:
            if i == len(pairs):
                found.add(frozenset(acc))
                return
            s, t = pairs[i]
            for p in cands:
                if p[0] == s and p[-1] == t and used.isdisjoint(p):
                    rec(i + 1, used | set(p), acc + [p])

        rec(0, set(), [])
    return sorted(found, key=lambda f: sorted(f))


def brute_constrained(g: Graph, U, W, m: int) -> bool:
    src, snk, both = _split(U, W)
    need = max(0, m - len(both))
    if need == 0:
        return True
    for ubar in combinations(src, need):
        for wbar in combinations(snk, need):
            if len(brute_linkings(g, ubar, wbar, both)) == 1:
                return True
    return False
