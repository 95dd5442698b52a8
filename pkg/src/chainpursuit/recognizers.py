"""Chordality and pseudo-modularity recognition with checkable certificates."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .graph import Graph


def is_simplicial(g: Graph, v: int, alive: set[int] | None = None) -> bool:
    """True iff the neighbours of ``v`` (restricted to ``alive``) form a clique."""
    g.check_vertex(v)
    nb = [u for u in g.adj[v] if alive is None or u in alive]
    return all(g.has_edge(a, b) for a, b in combinations(nb, 2))


@dataclass(frozen=True)
class ChordalityCertificate:
    """Either a perfect elimination ordering or a chordless cycle of 4+ vertices."""

    ordering: tuple[int, ...] | None = None
    cycle: tuple[int, ...] | None = None

    @property
    def chordal(self) -> bool:
        return self.ordering is not None

    def to_json(self) -> dict[str, object]:
        if self.chordal:
            return {"chordal": True, "ordering": list(self.ordering or ())}
        return {"chordal": False, "chordless_cycle": list(self.cycle or ())}


def _chordless_cycle(g: Graph, alive: set[int]) -> tuple[int, ...]:
    # any non-chordal graph has a vertex v with non-adjacent neighbours a, b
    # joined by a path avoiding the rest of N[v]; a shortest one closes a
    # chordless cycle through v
    for v in sorted(alive):
        nb = [u for u in g.adj[v] if u in alive]
        for a, b in combinations(nb, 2):
            if g.has_edge(a, b):
                continue
            blocked = {v} | set(nb)
            allowed = (alive - blocked) | {a, b}
            prev = {a: a}
            q = deque([a])
            while q and b not in prev:
                x = q.popleft()
                for y in g.adj[x]:
                    if y in allowed and y not in prev and not (x == a and y == b):
                        prev[y] = x
                        q.append(y)
            if b in prev:
                path = [b]
                while path[-1] != a:
                    path.append(prev[path[-1]])
                return (v,) + tuple(reversed(path))
    raise AssertionError("no chordless cycle found in a graph without simplicial vertices")


def is_chordal(g: Graph) -> ChordalityCertificate:
    """Repeatedly remove the smallest simplicial vertex.

    Success yields a perfect elimination ordering; getting stuck yields a
    chordless cycle inside the residual graph.
    """
    alive = set(range(g.n))
    order: list[int] = []
    while alive:
        v = next((v for v in sorted(alive) if is_simplicial(g, v, alive)), None)
        if v is None:
            return ChordalityCertificate(cycle=_chordless_cycle(g, alive))
        order.append(v)
        alive.remove(v)
    return ChordalityCertificate(ordering=tuple(order))


def verify_elimination_ordering(g: Graph, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(g.n)):
        return False
    alive = set(range(g.n))
    for v in order:
        if not is_simplicial(g, v, alive):
            return False
        alive.remove(v)
    return True


def verify_chordless_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    k = len(cycle)
    if k < 4 or len(set(cycle)) != k:
        return False
    for a in range(k):
        for b in range(a + 1, k):
            consecutive = b == a + 1 or (a == 0 and b == k - 1)
            if g.has_edge(cycle[a], cycle[b]) != consecutive:
                return False
    return True


# --------------------------------------------------------------------------
# pseudo-modularity


@dataclass(frozen=True, order=True)
class Disk:
    center: int
    radius: int

    def members(self, g: Graph) -> frozenset[int]:
        row = g.dist[self.center]
        return frozenset(u for u in range(g.n) if 0 <= row[u] <= self.radius)


@dataclass(frozen=True)
class HellyResult:
    """``witness`` is three pairwise-intersecting disks with empty common part."""

    witness: tuple[Disk, Disk, Disk] | None = None

    @property
    def pseudo_modular(self) -> bool:
        return self.witness is None

    def to_json(self) -> dict[str, object]:
        if self.witness is None:
            return {"pseudo_modular": True}
        return {
            "pseudo_modular": False,
            "witness": [{"center": d.center, "radius": d.radius} for d in self.witness],
        }


def is_pseudo_modular(g: Graph) -> HellyResult:
    """Search every disk triple for a 3-Helly failure.

    Radii run from 0 to ``diameter - 1``: a disk of radius at least the
    diameter is the whole vertex set and cannot break the property.  The
    witness returned is the least under (centres, radii) order.
    """
    if not g.connected:
        raise ValueError("pseudo-modularity is only defined here for connected graphs")
    n = g.n
    dist = g.dist
    top = g.diameter  # radii 0 .. top-1
    mask = [[0] * top for _ in range(n)]
    for c in range(n):
        for u in range(n):
            for r in range(dist[c][u], top):
                mask[c][r] |= 1 << u
    for c1, c2, c3 in combinations(range(n), 3):
        d12, d13, d23 = dist[c1][c2], dist[c1][c3], dist[c2][c3]
        for r1 in range(top):
            m1 = mask[c1][r1]
            for r2 in range(max(0, d12 - r1), top):
                m12 = m1 & mask[c2][r2]
                if not m12:
                    continue
                lo3 = max(0, d13 - r1, d23 - r2)
                for r3 in range(lo3, top):
                    m3 = mask[c3][r3]
                    if m12 & m3:
                        # larger r3 only grows the disk
                        break
                    if m1 & m3 and mask[c2][r2] & m3:
                        return HellyResult((Disk(c1, r1), Disk(c2, r2), Disk(c3, r3)))
    return HellyResult()


def verify_helly_witness(g: Graph, witness: Sequence[Disk]) -> bool:
    a, b, c = (d.members(g) for d in witness)
    return bool(a & b) and bool(a & c) and bool(b & c) and not (a & b & c)

