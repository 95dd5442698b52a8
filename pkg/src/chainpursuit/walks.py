"""Walks, delta-optimality, discrepancy pairs and delta-deformations.

A walk is stored as a tuple of vertex indices with no two equal consecutive
vertices.  Stay-put steps of the reflexive graph are collapsed, so a rewrite
that would produce ``... a a ...`` yields the shorter walk ``... a ...``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .graph import UNREACHABLE, Graph, geodesics

Walk = tuple[int, ...]

DEFAULT_BUDGET = 1_000_000


class BudgetExceeded(RuntimeError):
    """A closure or enumeration exceeded its state budget.

    ``partial`` holds whatever was collected before giving up.
    """

    def __init__(self, message: str, partial: object = None) -> None:
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True, order=True)
class DiscrepancyPair:
    i: int
    j: int
    gap: int
    dist: int


@dataclass(frozen=True)
class Closure:
    walks: frozenset[Walk]
    shortened: bool

    def min_length(self) -> int:
        return min(len(w) for w in self.walks)


def as_walk(vertices: Iterable[int]) -> Walk:
    w = tuple(int(v) for v in vertices)
    if not w:
        raise ValueError("a walk needs at least one vertex")
    return w


def collapse(vertices: Iterable[int]) -> Walk:
    """Drop consecutive repeats (stay-put steps)."""
    out: list[int] = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    return tuple(out)


def validate_walk(g: Graph, w: Sequence[int]) -> bool:
    """True iff every consecutive pair of ``w`` is an edge of ``g``."""
    if not w:
        return False
    for v in w:
        g.check_vertex(v)
    return all(g.has_edge(a, b) for a, b in zip(w, w[1:]))


def is_delta_optimal(g: Graph, w: Sequence[int], delta: int) -> bool:
    """Every pair ``delta`` apart along ``w`` is exactly ``delta`` hops apart."""
    if delta < 1:
        raise ValueError("delta must be at least 1")
    d = g.dist
    return all(d[w[i]][w[i + delta]] == delta for i in range(len(w) - delta))


def is_locally_geodesic(g: Graph, w: Sequence[int], delta: int) -> bool:
    """True iff no atomic ``delta``-deformation can shorten ``w``.

    Equivalent to delta-optimality for walks with more than ``delta`` steps;
    a shorter walk must be a shortest path outright.
    """
    span = min(delta, len(w) - 1)
    if span <= 0:
        return True
    d = g.dist
    return all(d[w[i]][w[i + span]] == span for i in range(len(w) - span))


def is_shortest_path(g: Graph, w: Sequence[int]) -> bool:
    return g.dist[w[0]][w[-1]] == len(w) - 1


def discrepancy_pairs(g: Graph, w: Sequence[int]) -> list[DiscrepancyPair]:
    """All index pairs minimizing ``j - i`` subject to ``j - i > d(w_i, w_j)``.

    Sorted by ``i``.  Empty exactly when ``w`` is a shortest path.
    """
    d = g.dist
    n = len(w)
    for gap in range(2, n):
        found = []
        for i in range(n - gap):
            dij = d[w[i]][w[i + gap]]
            if dij != UNREACHABLE and gap > dij:
                found.append(DiscrepancyPair(i, i + gap, gap, dij))
        if found:
            return found
    return []


def bounded_walks(g: Graph, a: int, b: int, max_edges: int) -> list[Walk]:
    """All walks ``a -> b`` of at most ``max_edges`` edges (no stay-put steps).

    ``(a,)`` is included when ``a == b``.
    """
    db = g.dist[b]
    if db[a] == UNREACHABLE or db[a] > max_edges:
        return []
    out: list[Walk] = []
    path = [a]

    def extend(x: int, left: int) -> None:
        if x == b:
            out.append(tuple(path))
        for y in g.adj[x]:
            if 0 <= db[y] <= left - 1:
                path.append(y)
                extend(y, left - 1)
                path.pop()

    extend(a, max_edges)
    return out


def atomic_deformations(g: Graph, w: Sequence[int], delta: int) -> set[Walk]:
    """Every atomic ``delta``-deformation of ``w``, including ``w`` itself.

    A sub-walk of at most ``delta - 1`` vertices strictly between positions
    ``i`` and ``j`` is replaced by any sub-walk that is no longer and keeps
    the result a walk.  Anchoring at both ends loses nothing: endpoints of
    ``w`` must be preserved anyway.
    """
    if delta < 2:
        raise ValueError("delta must be at least 2")
    w = tuple(w)
    n = len(w)
    out = {w}
    memo: dict[tuple[int, int, int], list[Walk]] = {}
    for i in range(n - 1):
        for j in range(i + 1, min(n - 1, i + delta) + 1):
            key = (w[i], w[j], j - i)
            if key not in memo:
                memo[key] = bounded_walks(g, w[i], w[j], j - i)
            head, tail = w[:i], w[j + 1:]
            for seg in memo[key]:
                out.add(head + seg + tail)
    return out


def geodesic_swaps(g: Graph, w: Walk, delta: int) -> Iterator[Walk]:
    """Equal-length atomic deformations of a locally geodesic walk.

    Each ``delta``-window (or the whole walk when it is shorter) is replaced
    by another shortest path between the window's endpoints.
    """
    n = len(w)
    span = min(delta, n - 1)
    if span <= 0:
        return
    for i in range(n - span):
        a, b = w[i], w[i + span]
        for seg in geodesics(g, a, b):
            if seg != w[i:i + span + 1]:
                yield w[:i] + seg + w[i + span + 1:]


def _neighbours(g: Graph, w: Walk, delta: int) -> Iterable[Walk]:
    if is_locally_geodesic(g, w, delta):
        return geodesic_swaps(g, w, delta)
    return atomic_deformations(g, w, delta)


def deformation_closure(
    g: Graph, w: Sequence[int], delta: int, budget: int = DEFAULT_BUDGET
) -> Closure:
    """BFS closure of ``w`` under atomic ``delta``-deformations.

    ``shortened`` is True iff some reachable walk is strictly shorter than
    ``w``; in that case the shorter strata are explored as well.
    """
    if delta < 2:
        raise ValueError("delta must be at least 2")
    start = as_walk(w)
    if not validate_walk(g, start):
        raise ValueError(f"{list(start)} is not a walk of the graph")
    seen = {start}
    q = deque([start])
    while q:
        cur = q.popleft()
        for nxt in _neighbours(g, cur, delta):
            if nxt not in seen:
                if len(seen) >= budget:
                    partial = Closure(frozenset(seen), any(len(x) < len(start) for x in seen))
                    raise BudgetExceeded(
                        f"deformation closure exceeded {budget} states", partial
                    )
                seen.add(nxt)
                q.append(nxt)
    return Closure(frozenset(seen), any(len(x) < len(start) for x in seen))


def equal_length_component(
    g: Graph, w: Walk, delta: int, budget: int = DEFAULT_BUDGET
) -> tuple[set[Walk], bool]:
    """Walks reachable from ``w`` without shortening, plus a shortened flag.

    Walks that admit a shortening rewrite are recorded but not expanded: the
    flag is already decided and the component cannot be a closed class.
    """
    seen = {w}
    q = deque([w])
    shortened = False
    while q:
        cur = q.popleft()
        if not is_locally_geodesic(g, cur, delta):
            shortened = True
            continue
        for nxt in geodesic_swaps(g, cur, delta):
            if nxt not in seen:
                if len(seen) >= budget:
                    raise BudgetExceeded(
                        f"class exploration exceeded {budget} states", seen
                    )
                seen.add(nxt)
                q.append(nxt)
    return seen, shortened
