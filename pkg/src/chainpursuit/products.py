"""Cartesian and strong graph products, walk projections and x/y-scores.

Product vertex ``(x, y)`` has flat index ``x * n2 + y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .graph import Graph
from .walks import Walk, as_walk, validate_walk

MAX_PRODUCT_VERTICES = 2_500

Kind = Literal["cartesian", "strong"]


class ProductSizeError(ValueError):
    pass


@dataclass(frozen=True)
class ProductGraph:
    graph: Graph
    g1: Graph
    g2: Graph
    kind: Kind

    @property
    def n1(self) -> int:
        return self.g1.n

    @property
    def n2(self) -> int:
        return self.g2.n

    def encode(self, x: int, y: int) -> int:
        if not (0 <= x < self.n1 and 0 <= y < self.n2):
            raise IndexError(f"({x}, {y}) outside a {self.n1}x{self.n2} product")
        return x * self.n2 + y

    def decode(self, v: int) -> tuple[int, int]:
        self.graph.check_vertex(v)
        return divmod(v, self.n2)


def _product(g1: Graph, g2: Graph, kind: Kind, cap: int) -> ProductGraph:
    if g1.n == 0 or g2.n == 0:
        raise ValueError("product factors must be non-empty")
    n = g1.n * g2.n
    if n > cap:
        raise ProductSizeError(f"product would have {n} vertices (cap {cap})")
    n2 = g2.n
    edges = []
    for x1 in range(g1.n):
        for y1 in range(n2):
            a = x1 * n2 + y1
            # x fixed, y moves
            edges.extend((a, x1 * n2 + y2) for y2 in g2.adj[y1] if y2 > y1)
            for x2 in g1.adj[x1]:
                if x2 < x1:
                    continue
                edges.append((a, x2 * n2 + y1))
                if kind == "strong":
                    edges.extend((a, x2 * n2 + y2) for y2 in g2.adj[y1])
    labels = {}
    if g1.labels or g2.labels:
        for x in range(g1.n):
            for y in range(n2):
                labels[x * n2 + y] = f"({g1.labels.get(x, x)},{g2.labels.get(y, y)})"
    return ProductGraph(Graph(n, edges, labels), g1, g2, kind)


def cartesian_product(g1: Graph, g2: Graph, cap: int = MAX_PRODUCT_VERTICES) -> ProductGraph:
    return _product(g1, g2, "cartesian", cap)


def strong_product(g1: Graph, g2: Graph, cap: int = MAX_PRODUCT_VERTICES) -> ProductGraph:
    return _product(g1, g2, "strong", cap)


@dataclass(frozen=True)
class ProjectedWalk:
    """A walk in a factor that may pause; ``stationary[k]`` marks step k -> k+1."""

    vertices: tuple[int, ...]
    stationary: tuple[bool, ...]


def project_walk(pg: ProductGraph, w: Sequence[int], factor: int) -> ProjectedWalk:
    """Coordinate-wise projection onto factor 1 or 2, keeping repeats."""
    if factor not in (1, 2):
        raise ValueError("factor must be 1 or 2")
    w = as_walk(w)
    if not validate_walk(pg.graph, w):
        raise ValueError(f"{list(w)} is not a walk of the product")
    coords = tuple(pg.decode(v)[factor - 1] for v in w)
    return ProjectedWalk(coords, tuple(a == b for a, b in zip(coords, coords[1:])))


def xy_scores(pg: ProductGraph, w: Sequence[int]) -> list[tuple[int, int]]:
    """``(x-score, y-score)`` for every interior vertex of a strong-product walk.

    The x-score of ``v_i`` is ``d1(v_{i-1}, v_{i+1}) - d1(v_i, v_{i+1})``,
    the y-score likewise in the second factor.
    """
    if pg.kind != "strong":
        raise ValueError("x/y-scores are defined for strong products")
    w: Walk = as_walk(w)
    if len(w) < 3:
        raise ValueError("scores need a walk of at least 3 vertices")
    if not validate_walk(pg.graph, w):
        raise ValueError(f"{list(w)} is not a walk of the product")
    d1, d2 = pg.g1.dist, pg.g2.dist
    pts = [pg.decode(v) for v in w]
    out = []
    for i in range(1, len(w) - 1):
        (xa, ya), (xb, yb), (xc, yc) = pts[i - 1], pts[i], pts[i + 1]
        xs = d1[xa][xc] - d1[xb][xc]
        ys = d2[ya][yc] - d2[yb][yc]
        if not (-1 <= xs <= 1 and -1 <= ys <= 1):
            raise AssertionError(f"score ({xs}, {ys}) out of range at index {i}")
        out.append((xs, ys))
    return out
