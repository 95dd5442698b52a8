"""Finite simple graphs, hop distances, disks and shortest-path counting.

Vertices are dense indices ``0..n-1``.  Every vertex is implicitly adjacent to
itself for pursuit purposes, but self-loops are never stored.
"""

from __future__ import annotations

import json
import random
from collections import deque
from functools import cached_property
from typing import Iterable, Mapping, Sequence

UNREACHABLE = -1
INT64_MAX = 2**63 - 1


class GraphFormatError(ValueError):
    """Raised when graph-file text cannot be parsed into a valid graph."""


class UnreachableError(ValueError):
    """Raised when an operation needs two vertices in the same component."""


class PathCountOverflow(OverflowError):
    """Raised when a shortest-path count does not fit in a signed 64-bit int."""


class PathLimitExceeded(RuntimeError):
    """Raised when path enumeration would return more than the caller's limit."""


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Immutable once built; distance and path-count tables are computed lazily
    and cached on the instance.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        labels: Mapping[int, str] | None = None,
        meta: Mapping[str, object] | None = None,
    ) -> None:
        if n < 0:
            raise GraphFormatError(f"vertex count must be non-negative, got {n}")
        norm: set[tuple[int, int]] = set()
        for e in edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {list(e)} must have two endpoints")
            u, v = int(e[0]), int(e[1])
            for x in (u, v):
                if not 0 <= x < n:
                    raise GraphFormatError(f"vertex {x} out of range for n={n}")
            if u == v:
                raise GraphFormatError(
                    f"explicit self-loop at {u}; reflexivity is implicit"
                )
            key = (min(u, v), max(u, v))
            if key in norm:
                raise GraphFormatError(f"duplicate edge {list(key)}")
            norm.add(key)
        self.n = n
        self.edges = frozenset(norm)
        self.labels = dict(labels) if labels else {}
        # free-form extras carried through load/dump (comments, marked terminals)
        self.meta = dict(meta) if meta else {}
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)
        self._adjset = tuple(frozenset(a) for a in self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    @cached_property
    def dist(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_bfs_distances(self, s) for s in range(self.n))

    @cached_property
    def _counts(self) -> "_CountRows":
        # _counts[v][u] = number of shortest u->v paths, 0 when unreachable
        return _CountRows(self)

    @cached_property
    def diameter(self) -> int:
        """Largest finite distance (0 for the empty or single-vertex graph)."""
        return max((d for row in self.dist for d in row), default=0)

    @cached_property
    def connected(self) -> bool:
        return self.n == 0 or UNREACHABLE not in self.dist[0]

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``keep``; also returns new-index -> old-index."""
        old = sorted(set(keep))
        index = {v: i for i, v in enumerate(old)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(old), edges), old


class _CountRows:
    """Per-target path-count rows, built on first use.

    Lazy so that an overflow toward one target does not poison queries
    toward the others.
    """

    def __init__(self, g: Graph) -> None:
        self._g = g
        self._rows: dict[int, tuple[int, ...]] = {}

    def __getitem__(self, v: int) -> tuple[int, ...]:
        row = self._rows.get(v)
        if row is None:
            row = self._rows[v] = _bfs_counts(self._g, v)
        return row


def _bfs_distances(g: Graph, s: int) -> tuple[int, ...]:
    d = [UNREACHABLE] * g.n
    d[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if d[w] == UNREACHABLE:
                d[w] = d[u] + 1
                q.append(w)
    return tuple(d)


def _bfs_counts(g: Graph, s: int) -> tuple[int, ...]:
    d = [UNREACHABLE] * g.n
    c = [0] * g.n
    d[s], c[s] = 0, 1
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if d[w] == UNREACHABLE:
                d[w] = d[u] + 1
                q.append(w)
            if d[w] == d[u] + 1:
                c[w] += c[u]
                if c[w] > INT64_MAX:
                    raise PathCountOverflow(
                        f"shortest-path count from {s} to {w} exceeds 64 bits"
                    )
    return tuple(c)


# --------------------------------------------------------------------------
# file format


def load_graph(text: str) -> Graph:
    """Parse graph-file text (JSON object or ``n`` + ``u v`` edge-list lines)."""
    stripped = text.strip()
    if not stripped:
        raise GraphFormatError("empty graph file")
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed JSON: {exc}") from exc
        if not isinstance(doc, dict) or "n" not in doc:
            raise GraphFormatError("JSON graph must be an object with key 'n'")
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise GraphFormatError("'n' must be an integer")
        edges = doc.get("edges", [])
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and all(isinstance(x, int) for x in e) for e in edges
        ):
            raise GraphFormatError("'edges' must be a list of [u, v] integer pairs")
        raw_labels = doc.get("labels") or {}
        if not isinstance(raw_labels, dict):
            raise GraphFormatError("'labels' must be an object")
        try:
            labels = {int(k): str(v) for k, v in raw_labels.items()}
        except ValueError as exc:
            raise GraphFormatError(f"bad label key: {exc}") from exc
        for k in labels:
            if not 0 <= k < n:
                raise GraphFormatError(f"label for vertex {k} out of range")
        meta = {k: v for k, v in doc.items() if k not in ("n", "edges", "labels")}
        return Graph(n, edges, labels, meta)

    lines = [ln.split("#", 1)[0].strip() for ln in stripped.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise GraphFormatError(f"edge line must be 'u v', got {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        raise GraphFormatError(f"malformed edge list: {exc}") from exc
    return Graph(n, edges)


def dump_graph(g: Graph, fmt: str = "json") -> str:
    """Serialize ``g``; ``load_graph(dump_graph(g))`` reproduces it exactly."""
    edges = sorted(g.edges)
    if fmt == "edgelist":
        return "".join([f"{g.n}\n"] + [f"{u} {v}\n" for u, v in edges])
    if fmt != "json":
        raise ValueError(f"unknown graph format {fmt!r}")
    doc: dict[str, object] = {"n": g.n, "edges": [list(e) for e in edges]}
    if g.labels:
        doc["labels"] = {str(k): g.labels[k] for k in sorted(g.labels)}
    for k in sorted(g.meta):
        doc[k] = g.meta[k]
    return json.dumps(doc, sort_keys=False) + "\n"


# --------------------------------------------------------------------------
# distances and disks


def all_pairs_distances(g: Graph) -> tuple[tuple[int, ...], ...]:
    """BFS hop distances; ``UNREACHABLE`` marks disconnected pairs."""
    return g.dist


def disk(g: Graph, center: int, radius: int) -> frozenset[int]:
    """Vertices within ``radius`` hops of ``center``."""
    g.check_vertex(center)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    row = g.dist[center]
    return frozenset(u for u in range(g.n) if 0 <= row[u] <= radius)


# --------------------------------------------------------------------------
# shortest-path counting and sampling


def _require_connected(g: Graph, u: int, v: int) -> int:
    g.check_vertex(u)
    g.check_vertex(v)
    d = g.dist[u][v]
    if d == UNREACHABLE:
        raise UnreachableError(f"no path between {u} and {v}")
    return d


def count_shortest_paths(g: Graph, u: int, v: int) -> int:
    """Number of distinct shortest ``u -> v`` paths (1 when ``u == v``)."""
    _require_connected(g, u, v)
    return g._counts[v][u]


def count_shortest_paths_via_edge(g: Graph, u1: int, u2: int, v: int) -> int:
    """Shortest ``u1 -> v`` paths whose first step is ``u2``.

    ``u1 == u2 == v`` is the reflexive terminal case and counts 1.
    """
    d = _require_connected(g, u1, v)
    g.check_vertex(u2)
    if u1 == u2:
        if u1 == v:
            return 1
        raise ValueError(f"{u1}->{u2} is a stay-put step but {u1} != target {v}")
    if not g.has_edge(u1, u2):
        raise ValueError(f"{u1}{u2} is not an edge")
    if g.dist[u2][v] == d - 1:
        return g._counts[v][u2]
    return 0


def step_weights(g: Graph, frm: int, target: int) -> list[tuple[int, int]]:
    """``(next_vertex, path_count)`` for every first step toward ``target``."""
    d = _require_connected(g, frm, target)
    if d == 0:
        return [(frm, 1)]
    cnt = g._counts[target]
    dt = g.dist[target]
    return [(w, cnt[w]) for w in g.adj[frm] if dt[w] == d - 1]


def sample_pursuit_step(g: Graph, frm: int, target: int, rng: random.Random) -> int:
    """First vertex of a uniformly random shortest ``frm -> target`` path.

    Sampling is done with exact integer weights so that the marginal is
    exactly ``eta(frm->w, target) / eta(frm, target)``.
    """
    weights = step_weights(g, frm, target)
    if len(weights) == 1:
        return weights[0][0]
    r = rng.randrange(sum(c for _, c in weights))
    for w, c in weights:
        if r < c:
            return w
        r -= c
    raise AssertionError("unreachable: weights exhausted")


def sample_shortest_path(
    g: Graph, u: int, v: int, rng: random.Random
) -> tuple[int, ...]:
    """Uniformly random shortest ``u -> v`` path."""
    path = [u]
    while path[-1] != v:
        path.append(sample_pursuit_step(g, path[-1], v, rng))
    return tuple(path)


def enumerate_shortest_paths(
    g: Graph, u: int, v: int, limit: int = 100_000
) -> list[tuple[int, ...]]:
    """All shortest ``u -> v`` paths in lexicographic order.

    Raises :class:`PathLimitExceeded` if more than ``limit`` exist.
    """
    _require_connected(g, u, v)
    total = g._counts[v][u]
    if total > limit:
        raise PathLimitExceeded(f"{total} shortest paths from {u} to {v} > limit {limit}")
    dv = g.dist[v]
    out: list[tuple[int, ...]] = []
    path = [u]

    def extend(x: int) -> None:
        if x == v:
            out.append(tuple(path))
            return
        for w in g.adj[x]:
            if dv[w] == dv[x] - 1:
                path.append(w)
                extend(w)
                path.pop()

    extend(u)
    return out


def geodesics(g: Graph, u: int, v: int) -> list[tuple[int, ...]]:
    """Cached variant of :func:`enumerate_shortest_paths` without a limit."""
    cache = g.__dict__.setdefault("_geodesic_cache", {})
    key = (u, v)
    if key not in cache:
        cache[key] = enumerate_shortest_paths(g, u, v, limit=INT64_MAX)
    return cache[key]


# --------------------------------------------------------------------------
# named constructors


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a simple cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid_graph(rows: int, cols: int) -> Graph:
    """``rows x cols`` grid; vertex ``(r, c)`` has index ``r * cols + c``."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)
