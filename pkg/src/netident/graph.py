"""Directed graphs, reachability and vertex-disjoint path machinery.

Vertices are the integers ``1..n`` in every public signature.  Vertex sets are
returned as sorted tuples so results are reproducible and hashable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .errors import BudgetExceededError, InputError

Edge = tuple[int, int]
VertexSet = tuple[int, ...]

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class Graph:
    """Simple directed graph on vertices ``1..n``."""

    n: int
    edges: frozenset[Edge] = frozenset()
    _out: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)
    _in: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise InputError(f"vertex count must be a non-negative integer, got {self.n!r}")
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        out: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        inn: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for a, b in edges:
            if a == b:
                raise InputError(f"self-loop ({a},{b}) not allowed in a simple graph")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise InputError(f"edge ({a},{b}) has an endpoint outside 1..{self.n}")
            out[a].append(b)
            inn[b].append(a)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_out", {v: tuple(sorted(s)) for v, s in out.items()})
        object.__setattr__(self, "_in", {v: tuple(sorted(s)) for v, s in inn.items()})

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> Graph:
        edges = list(edges)
        if len(set(edges)) != len(edges):
            raise InputError("duplicate edges")
        return cls(n, frozenset(edges))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def out_neighbours(self, v: int) -> VertexSet:
        self._check(v)
        return self._out[v]

    def in_neighbours(self, v: int) -> VertexSet:
        self._check(v)
        return self._in[v]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def without_edges(self, edges: Iterable[Edge]) -> Graph:
        return Graph(self.n, self.edges.difference(edges))

    def with_edges(self, edges: Iterable[Edge]) -> Graph:
        return Graph(self.n, self.edges.union(edges))

    def _check(self, v: int) -> None:
        if v not in self._out:
            raise InputError(f"vertex {v} outside 1..{self.n}")

    def vertex_set(self, vs: Iterable[int]) -> VertexSet:
        """Validate and normalise a vertex collection to a sorted tuple."""
        out = set()
        for v in vs:
            self._check(v)
            out.add(v)
        return tuple(sorted(out))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, doc: dict) -> Graph:
        return cls.from_edges(doc["n"], [tuple(e) for e in doc["edges"]])


@dataclass(frozen=True)
class PathSet:
    """Vertex-disjoint paths, each stored as its vertex sequence.

    ``trivial`` holds the vertices counted as zero-length paths (members of
    ``U & W``).
    """

    paths: tuple[tuple[int, ...], ...] = ()
    trivial: VertexSet = ()

    def __post_init__(self) -> None:
        seen: set[int] = set(self.trivial)
        if len(seen) != len(self.trivial):
            raise InputError("repeated zero-length path")
        for p in self.paths:
            if len(p) < 2:
                raise InputError(f"path {p} has no edge")
            if len(set(p)) != len(p):
                raise InputError(f"path {p} repeats a vertex")
            if seen.intersection(p):
                raise InputError(f"path {p} is not vertex-disjoint from the others")
            seen.update(p)

    def __len__(self) -> int:
        return len(self.paths) + len(self.trivial)

    def edge_lists(self) -> list[list[Edge]]:
        return [list(zip(p, p[1:])) for p in self.paths]

    def vertices(self) -> set[int]:
        out = set(self.trivial)
        for p in self.paths:
            out.update(p)
        return out

    def is_valid_in(self, g: Graph) -> bool:
        return all(e in g.edges for el in self.edge_lists() for e in el)

    def to_json(self) -> dict:
        return {
            "paths": [[list(e) for e in el] for el in self.edge_lists()],
            "trivial": list(self.trivial),
        }

    @classmethod
    def from_json(cls, doc: dict) -> PathSet:
        paths = []
        for el in doc["paths"]:
            if not el:
                raise InputError("empty path")
            seq = [el[0][0]]
            for a, b in el:
                if a != seq[-1]:
                    raise InputError(f"path edges do not chain: {el}")
                seq.append(b)
            paths.append(tuple(seq))
        return cls(tuple(paths), tuple(doc["trivial"]))


def reachable_set(g: Graph, sources: Iterable[int]) -> VertexSet:
    """All vertices reachable from ``sources``, which count as reachable themselves."""
    start = g.vertex_set(sources)
    seen = set(start)
    queue = deque(start)
    while queue:
        v = queue.popleft()
        for w in g._out[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return tuple(sorted(seen))


def _split_flow(
    g: Graph, sources: VertexSet, sinks: VertexSet, forbidden: frozenset[int]
) -> list[tuple[int, ...]]:
    """Maximum set of vertex-disjoint source->sink paths via node-split unit-capacity flow.

    Paths never pass through ``forbidden`` vertices, never re-enter a source
    and never leave a sink, so each path has exactly one source and one sink.
    """
    if not sources or not sinks:
        return []
    src_set, snk_set = set(sources), set(sinks)
    # vertex v splits into 2v (in) and 2v+1 (out); 0 is the super source, 1 the super sink
    s, t = 0, 1
    residual: dict[tuple[int, int], int] = {}
    arcs: list[tuple[int, int]] = []
    adj: dict[int, list[int]] = {s: [], t: []}

    def arc(a: int, b: int) -> None:
        arcs.append((a, b))
        residual[(a, b)] = 1
        residual.setdefault((b, a), 0)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for v in g.vertices:
        if v not in forbidden:
            arc(2 * v, 2 * v + 1)
    for a, b in g.sorted_edges():
        if a in forbidden or b in forbidden or a in snk_set or b in src_set:
            continue
        arc(2 * a + 1, 2 * b)
    for u in sources:
        arc(s, 2 * u)
    for w in sinks:
        arc(2 * w + 1, t)
    for k in adj:
        adj[k].sort()

    while True:
        parent = {s: s}
        queue = deque([s])
        while queue and t not in parent:
            a = queue.popleft()
            for b in adj[a]:
                if b not in parent and residual[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if t not in parent:
            break
        b = t
        while b != s:
            a = parent[b]
            residual[(a, b)] -= 1
            residual[(b, a)] += 1
            b = a

    succ = {a: b for a, b in arcs if a >= 2 and b >= 2 and a % 2 == 1 and residual[(a, b)] == 0}
    paths = []
    for u in sources:
        if residual[(s, 2 * u)]:
            continue
        seq = [u]
        v = u
        while v not in snk_set:
            v = succ[2 * v + 1] // 2
            seq.append(v)
        paths.append(tuple(seq))
    return paths


def _split_sets(g: Graph, U: Iterable[int], W: Iterable[int]) -> tuple[VertexSet, VertexSet, VertexSet]:
    u, w = set(g.vertex_set(U)), set(g.vertex_set(W))
    return tuple(sorted(u - w)), tuple(sorted(w - u)), tuple(sorted(u & w))


def max_vertex_disjoint_paths(g: Graph, U: Iterable[int], W: Iterable[int]) -> tuple[int, PathSet]:
    """Maximum number of vertex-disjoint paths from ``U`` to ``W`` with a witness.

    Vertices of ``U & W`` count as zero-length paths; the remaining paths run
    from ``U - W`` to ``W - U`` and avoid ``U & W``.
    """
    src, snk, both = _split_sets(g, U, W)
    paths = _split_flow(g, src, snk, frozenset(both))
    ps = PathSet(tuple(sorted(paths)), both)
    return len(ps), ps


def _simple_paths(
    g: Graph, start: int, targets: set[int], blocked: set[int]
) -> Iterator[tuple[int, ...]]:
    """Simple paths from ``start`` that stop at the first target reached, in lexicographic order."""
    stack = [start]
    on_path = {start}

    def walk(v: int) -> Iterator[tuple[int, ...]]:
        for w in g._out[v]:
            if w in on_path or w in blocked:
                continue
            stack.append(w)
            if w in targets:
                yield tuple(stack)
            else:
                on_path.add(w)
                yield from walk(w)
                on_path.discard(w)
            stack.pop()

    yield from walk(start)


def _can_still_link(g: Graph, sources: list[int], targets: set[int], blocked: set[int]) -> bool:
    # each pending source must reach some free target without touching blocked vertices
    for u in sources:
        seen = {u}
        queue = deque([u])
        found = False
        while queue and not found:
            v = queue.popleft()
            for w in g._out[v]:
                if w in targets:
                    found = True
                    break
                if w not in seen and w not in blocked:
                    seen.add(w)
                    queue.append(w)
        if not found:
            return False
    return True


def enumerate_linkings(
    g: Graph,
    sources: VertexSet,
    sinks: VertexSet,
    forbidden: Iterable[int] = (),
    limit: int | None = None,
) -> list[tuple[tuple[int, ...], ...]]:
    """Sets of vertex-disjoint paths that start at every source and end at every sink.

    Requires ``len(sources) == len(sinks)``.  Enumeration is exhaustive (up to
    ``limit`` results) and yields path sets in lexicographic order.
    """
    if len(sources) != len(sinks):
        raise InputError("linkings need as many sources as sinks")
    forbidden = set(forbidden)
    found: list[tuple[tuple[int, ...], ...]] = []
    if not sources:
        return [()]
    order = list(sources)

    def rec(idx: int, used: set[int], free_sinks: set[int], acc: list[tuple[int, ...]]) -> bool:
        if idx == len(order):
            found.append(tuple(acc))
            return limit is not None and len(found) >= limit
        u = order[idx]
        pending = order[idx + 1:]
        # other pending sources are start points and cannot be crossed
        blocked = used | forbidden | set(pending)
        for p in _simple_paths(g, u, free_sinks, blocked):
            end = p[-1]
            now_used = used | set(p)
            rest = free_sinks - {end}
            if pending and not _can_still_link(g, pending, rest, now_used | forbidden | set(pending)):
                continue
            acc.append(p)
            stop = rec(idx + 1, now_used, rest, acc)
            acc.pop()
            if stop:
                return True
        return False

    rec(0, set(), set(sinks), [])
    return found


def constrained_path_set_exists(
    g: Graph,
    U: Iterable[int],
    W: Iterable[int],
    m: int,
    budget: int = DEFAULT_BUDGET,
) -> tuple[bool, PathSet | None]:
    """Is there a constrained set of ``m`` vertex-disjoint paths from ``U`` to ``W``?

    Constrained means: for its own start set and end set, the path set is the
    only set of that many vertex-disjoint paths.  Overlap vertices ``U & W``
    count as zero-length paths and are avoided by the remaining paths.
    """
    if m < 0:
        raise InputError("m must be non-negative")
    src, snk, both = _split_sets(g, U, W)
    need = max(0, m - len(both))
    if need == 0:
        return True, PathSet((), both)
    if need > len(src) or need > len(snk):
        return False, None
    work = comb(len(src), need) * comb(len(snk), need)
    if work > budget:
        raise BudgetExceededError(
            f"{work} endpoint pairs to examine exceeds the budget of {budget}"
        )
    forbidden = frozenset(both)
    for ubar in combinations(src, need):
        for wbar in combinations(snk, need):
            if len(_split_flow(g, ubar, wbar, forbidden)) < need:
                continue
            links = enumerate_linkings(g, ubar, wbar, forbidden, limit=2)
            if len(links) == 1:
                return True, PathSet(tuple(sorted(links[0])), both)
    return False, None


def count_linkings(
    g: Graph, sources: VertexSet, sinks: VertexSet, forbidden: Iterable[int] = (), limit: int | None = None
) -> int:
    return len(enumerate_linkings(g, sources, sinks, forbidden, limit))
