"""Exact analysis of the walk-valued Markov chain of chain pursuit.

States are walks from ``s`` to ``t``.  Closed communicating classes are found
by partitioning delta-optimal walks of each length into deformation classes;
only classes with no reachable shorter walk survive.  Everything here is
bounded by a caller-supplied maximum walk length (in vertices), since walk
spaces are infinite in general.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import UNREACHABLE, Graph, count_shortest_paths, enumerate_shortest_paths, sample_shortest_path
from .walks import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Walk,
    as_walk,
    equal_length_component,
)

EXACT_STATE_LIMIT = 2_000
RATIONAL_GUESS_DENOMINATOR = 10**9
POWER_TOL = 1e-12


class ChainError(ValueError):
    """Invalid input to a transition-matrix or stationary-vector computation."""


@dataclass(frozen=True)
class ClosedClass:
    walks: tuple[Walk, ...]
    length: int
    delta: int
    s: int
    t: int
    graph: Graph = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.walks)

    def __contains__(self, w: object) -> bool:
        return w in self._index

    @property
    def _index(self) -> dict[Walk, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {w: k for k, w in enumerate(self.walks)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, w: Walk) -> int:
        return self._index[w]

    @property
    def is_shortest(self) -> bool:
        return self.length == self.graph.dist[self.s][self.t] + 1


# --------------------------------------------------------------------------
# enumeration


def enumerate_delta_optimal_walks(
    g: Graph, s: int, t: int, delta: int, length: int, budget: int = DEFAULT_BUDGET
) -> list[Walk]:
    """Every delta-optimal walk ``s -> t`` with exactly ``length`` vertices.

    Depth-first with the delta-window prune and a distance-to-target prune;
    the output is in lexicographic order.
    """
    if delta < 2:
        raise ValueError("delta must be at least 2")
    g.check_vertex(s)
    g.check_vertex(t)
    d = g.dist
    dt = d[t]
    if dt[s] == UNREACHABLE or length < dt[s] + 1:
        return []
    out: list[Walk] = []
    path = [s]

    def extend() -> None:
        k = len(path)
        if k == length:
            if path[-1] == t:
                if len(out) >= budget:
                    raise BudgetExceeded(f"more than {budget} delta-optimal walks", out)
                out.append(tuple(path))
            return
        left = length - 1 - k
        back = path[k - delta] if k >= delta else -1
        for y in g.adj[path[-1]]:
            if dt[y] > left:
                continue
            if back >= 0 and d[back][y] != delta:
                continue
            path.append(y)
            extend()
            path.pop()

    extend()
    return out


def enumerate_closed_classes(
    g: Graph,
    s: int,
    t: int,
    delta: int,
    max_length: int,
    budget: int = DEFAULT_BUDGET,
    min_length: int | None = None,
) -> list[ClosedClass]:
    """All closed classes whose walks have at most ``max_length`` vertices."""
    if delta < 2:
        raise ValueError("delta must be at least 2")
    d0 = g.dist[s][t]
    if d0 == UNREACHABLE:
        raise ValueError(f"{s} and {t} are disconnected")
    lo = d0 + 1 if min_length is None else max(min_length, d0 + 1)
    classes: list[ClosedClass] = []
    for length in range(lo, max_length + 1):
        seen: set[Walk] = set()
        for w in enumerate_delta_optimal_walks(g, s, t, delta, length, budget):
            if w in seen:
                continue
            comp, shortened = equal_length_component(g, w, delta, budget)
            seen |= comp
            if not shortened:
                classes.append(ClosedClass(tuple(sorted(comp)), length, delta, s, t, g))
    classes.sort(key=lambda c: (c.length, c.walks))
    return classes


def class_of(g: Graph, w: Sequence[int], delta: int, budget: int = DEFAULT_BUDGET) -> ClosedClass | None:
    """The closed class containing ``w``, or None if ``w`` is transient."""
    w = as_walk(w)
    comp, shortened = equal_length_component(g, w, delta, budget)
    if shortened:
        return None
    return ClosedClass(tuple(sorted(comp)), len(w), delta, w[0], w[-1], g)


# --------------------------------------------------------------------------
# bounded verdicts


class Convergence(enum.Enum):
    CONVERGENT = "convergent-up-to-bound"
    COUNTEREXAMPLE = "counterexample"


class Stability(enum.Enum):
    STABLE = "stable-up-to-bound"
    MULTIPLE = "multiple-classes"
    NON_SHORTEST = "non-shortest-class"


@dataclass
class ConvergenceResult:
    verdict: Convergence
    max_length: int
    classes: list[ClosedClass]
    counterexample: ClosedClass | None = None

    @property
    def ok(self) -> bool:
        return self.verdict is Convergence.CONVERGENT


@dataclass
class StabilityResult:
    verdict: Stability
    max_length: int
    classes: list[ClosedClass]

    @property
    def ok(self) -> bool:
        return self.verdict is Stability.STABLE


def is_convergent_bounded(
    g: Graph, s: int, t: int, delta: int, max_length: int, budget: int = DEFAULT_BUDGET
) -> ConvergenceResult:
    """No closed class up to ``max_length`` vertices holds a non-shortest walk.

    A positive answer says nothing about longer walks.
    """
    classes = enumerate_closed_classes(g, s, t, delta, max_length, budget)
    bad = [c for c in classes if not c.is_shortest]
    if bad:
        return ConvergenceResult(Convergence.COUNTEREXAMPLE, max_length, classes, bad[0])
    return ConvergenceResult(Convergence.CONVERGENT, max_length, classes)


def is_stable_bounded(
    g: Graph,
    s: int,
    t: int,
    delta: int,
    max_length: int,
    budget: int = DEFAULT_BUDGET,
    classes: list[ClosedClass] | None = None,
) -> StabilityResult:
    """Exactly one closed class up to the bound, and it is every shortest path.

    ``classes`` may pass in an enumeration already done for the same bound.
    """
    if classes is None:
        classes = enumerate_closed_classes(g, s, t, delta, max_length, budget)
    if any(not c.is_shortest for c in classes):
        return StabilityResult(Stability.NON_SHORTEST, max_length, classes)
    if len(classes) != 1:
        return StabilityResult(Stability.MULTIPLE, max_length, classes)
    everything = enumerate_shortest_paths(g, s, t, limit=budget)
    if list(classes[0].walks) != everything:
        # shortest paths always split into classes, so this means a bug upstream
        raise AssertionError(f"unique class misses shortest paths between {s} and {t}")
    return StabilityResult(Stability.STABLE, max_length, classes)


# --------------------------------------------------------------------------
# transition probabilities


def _eta_ratio(g: Graph, x: int, nxt: int, target: int) -> Fraction:
    dist = g.dist
    d = dist[x][target]
    if d == 0:
        return Fraction(1) if nxt == x else Fraction(0)
    if nxt == x or not g.has_edge(x, nxt) or dist[nxt][target] != d - 1:
        return Fraction(0)
    return Fraction(count_shortest_paths(g, nxt, target), count_shortest_paths(g, x, target))


def transition_probability(cls: ClosedClass, u: Sequence[int], x: Sequence[int]) -> Fraction:
    """Probability that the next agent walks ``x`` given its predecessor walked ``u``.

    Product over positions of the chance of stepping from ``x_i`` to
    ``x_{i+1}`` while the predecessor sits at ``u_{i+delta}``; indices past
    the end clamp to the last vertex.
    """
    u, x = as_walk(u), as_walk(x)
    if u not in cls or x not in cls:
        raise ChainError("both walks must belong to the class")
    g, delta, n = cls.graph, cls.delta, len(u)
    p = Fraction(1)
    for i in range(n):
        target = u[min(i + delta, n - 1)]
        nxt = x[min(i + 1, n - 1)]
        p *= _eta_ratio(g, x[i], nxt, target)
        if not p:
            break
    return p


@dataclass(frozen=True)
class TransitionMatrix:
    states: tuple[Walk, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    def __len__(self) -> int:
        return len(self.states)

    def as_float(self) -> np.ndarray:
        return np.array([[float(p) for p in row] for row in self.rows], dtype=float)

    def _scaled(self) -> tuple[int, list[list[int]]]:
        # integer entries over one common denominator; exact sums without gcd churn
        den = math.lcm(*(p.denominator for row in self.rows for p in row))
        return den, [[p.numerator * (den // p.denominator) for p in row] for row in self.rows]

    def column_sums(self) -> list[Fraction]:
        den, ints = self._scaled()
        return [Fraction(sum(col), den) for col in zip(*ints)]

    def row_sums(self) -> list[Fraction]:
        den, ints = self._scaled()
        return [Fraction(sum(row), den) for row in ints]

    def is_doubly_stochastic(self) -> bool:
        den, ints = self._scaled()
        return all(sum(col) == den for col in zip(*ints)) and all(sum(row) == den for row in ints)


def _row_law(cls: ClosedClass, u: Walk) -> dict[Walk, Fraction]:
    """Every length-n walk with a nonzero product-formula weight given ``u``."""
    g, delta, n = cls.graph, cls.delta, len(u)
    dist = g.dist
    steps: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def moves(x: int, target: int) -> list[tuple[int, int]]:
        # geodesic successors of x toward target with their path counts
        key = (x, target)
        if key not in steps:
            d = dist[x][target]
            steps[key] = [(w, count_shortest_paths(g, w, target))
                          for w in g.adj[x] if dist[w][target] == d - 1]
        return steps[key]

    out: dict[Walk, Fraction] = {}
    # probabilities ride along as integer numerator/denominator pairs
    stack: list[tuple[Walk, int, int]] = [((u[0],), 1, 1)]
    while stack:
        x, num, den = stack.pop()
        i = len(x) - 1
        target = u[min(i + delta, n - 1)]
        if i == n - 1:
            if x[i] == target:
                out[x] = Fraction(num, den)
            continue
        if x[i] == target:
            continue
        total = count_shortest_paths(g, x[i], target)
        for w, c in moves(x[i], target):
            stack.append((x + (w,), num * c, den * total))
    return out


def transition_matrix(cls: ClosedClass) -> TransitionMatrix:
    """Exact matrix over the class; raises if a row fails to sum to 1.

    Rows are built by expanding the follower's choices from each walk, which
    gives the same entries as :func:`transition_probability` pair by pair.
    """
    rows = []
    for u in cls.walks:
        law = _row_law(cls, u)
        row = tuple(law.get(x, Fraction(0)) for x in cls.walks)
        total = sum((p for p in row if p), Fraction(0))
        if total != 1:
            raise ChainError(
                f"row for {list(u)} sums to {total}; the class is not closed"
            )
        rows.append(row)
    return TransitionMatrix(cls.walks, tuple(rows))


def _support(rows: Sequence[Sequence[object]]) -> list[list[int]]:
    return [[j for j, p in enumerate(r) if p] for r in rows]


def is_irreducible(m: TransitionMatrix) -> bool:
    succ = _support(m.rows)
    pred: list[list[int]] = [[] for _ in succ]
    for i, js in enumerate(succ):
        for j in js:
            pred[j].append(i)

    def reach(adj: list[list[int]]) -> int:
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen)

    n = len(succ)
    return n > 0 and reach(succ) == n and reach(pred) == n


def period(m: TransitionMatrix) -> int:
    """Period of an irreducible chain (1 means aperiodic)."""
    succ = _support(m.rows)
    level = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in succ[i]:
                if j not in level:
                    level[j] = level[i] + 1
                    nxt.append(j)
        frontier = nxt
    p = 0
    for i, js in enumerate(succ):
        for j in js:
            p = math.gcd(p, level[i] + 1 - level[j])
    return p


@dataclass(frozen=True)
class Stationary:
    vector: tuple
    method: str  # "exact" (rational solve) or "power-iteration"

    def is_uniform(self, tol: float = 1e-9) -> bool:
        n = len(self.vector)
        if self.method == "exact":
            return all(p == Fraction(1, n) for p in self.vector)
        return max(abs(float(p) - 1.0 / n) for p in self.vector) < tol


def _is_stationary(rows: Sequence[Sequence[Fraction]], pi: Sequence[Fraction]) -> bool:
    if sum(pi, Fraction(0)) != 1 or any(x < 0 for x in pi):
        return False
    den = math.lcm(*(x.denominator for x in pi), *(p.denominator for row in rows for p in row))
    acc = [0] * len(pi)
    for x, row in zip(pi, rows):
        if x:
            for j, p in enumerate(row):
                if p:
                    acc[j] += x.numerator * p.numerator * (den // x.denominator) * (den // p.denominator)
    return all(a == x.numerator * (den // x.denominator) * den for a, x in zip(acc, pi))


def _solve_bareiss(rows: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Fraction-free elimination on (P^T - I) pi = 0 with sum(pi) = 1 as last row."""
    n = len(rows)
    m = []
    for i in range(n):
        r = [rows[j][i] - (1 if i == j else 0) for j in range(n)] + [Fraction(0)]
        if i == n - 1:
            r = [Fraction(1)] * (n + 1)
        scale = math.lcm(*(v.denominator for v in r))
        m.append([v.numerator * (scale // v.denominator) for v in r])
    prev = 1
    for k in range(n):
        piv = next(r for r in range(k, n) if m[r][k] != 0)
        m[k], m[piv] = m[piv], m[k]
        rk, p = m[k], m[k][k]
        for i in range(k + 1, n):
            ri, f = m[i], m[i][k]
            if f:
                tail = [(v * p - f * w) // prev for v, w in zip(ri[k + 1:], rk[k + 1:])]
            else:
                tail = [v * p // prev for v in ri[k + 1:]]
            m[i] = ri[:k] + [0] + tail
        prev = p
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = m[i][n] - sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = Fraction(acc) / m[i][i]
    return x


def _solve_exact(rows: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    # a float solve rounded to nearby fractions is exact once it passes the
    # rational check, because an irreducible chain has one stationary vector
    n = len(rows)
    if n == 1:
        return [Fraction(1)]
    a = np.array([[float(p) for p in row] for row in rows]).T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        guess = np.linalg.solve(a, b)
        cand = [Fraction(float(v)).limit_denominator(RATIONAL_GUESS_DENOMINATOR) for v in guess]
        if _is_stationary(rows, cand):
            return cand
    except np.linalg.LinAlgError:
        pass
    return _solve_bareiss(rows)


def _power_iterate(m: TransitionMatrix, tol: float = POWER_TOL, max_iter: int = 1_000_000) -> list[float]:
    p = m.as_float()
    n = p.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = pi @ p
        nxt /= nxt.sum()
        if np.abs(nxt - pi).max() < tol:
            return nxt.tolist()
        pi = nxt
    raise ChainError("power iteration did not converge")


def stationary_distribution(m: TransitionMatrix, exact_limit: int = EXACT_STATE_LIMIT) -> Stationary:
    """Stationary vector of an irreducible aperiodic matrix.

    Exact up to ``exact_limit`` states: a float solve rounded to fractions
    and checked exactly, with fraction-free elimination when the check
    fails.  Double precision power iteration beyond.
    """
    if not is_irreducible(m):
        raise ChainError("transition matrix is reducible")
    if period(m) != 1:
        raise ChainError("transition matrix is periodic")
    if len(m) <= exact_limit:
        return Stationary(tuple(_solve_exact(m.rows)), "exact")
    return Stationary(tuple(_power_iterate(m)), "power-iteration")


def second_eigenvalue_modulus(m: TransitionMatrix) -> float:
    """Largest modulus among the non-unit eigenvalues (0 for one state)."""
    if len(m) == 1:
        return 0.0
    ev = sorted(np.abs(np.linalg.eigvals(m.as_float())), reverse=True)
    return float(ev[1])


# --------------------------------------------------------------------------
# shuffles


def shuffle_walk(g: Graph, u: Sequence[int], i: int, j: int, rng: random.Random) -> Walk:
    """Replace ``u[i..j]`` by a uniformly random shortest ``u[i] -> u[j]`` path.

    Indices are 0-based; ``j`` past the end clamps to the last vertex and
    ``i == j`` leaves the walk unchanged.
    """
    u = as_walk(u)
    n = len(u)
    if i < 0 or j < i or i >= n:
        raise IndexError(f"bad shuffle window ({i}, {j}) for a walk of {n} vertices")
    j = min(j, n - 1)
    if i == j:
        return u
    return u[:i] + sample_shortest_path(g, u[i], u[j], rng) + u[j + 1:]


def sequential_shuffle(g: Graph, u: Sequence[int], delta: int, rng: random.Random) -> Walk:
    """Apply the ``(i, i + delta)``-shuffles for ``i = 0 .. n-1`` in turn.

    For a walk in a closed class this samples the successor walk with the
    same law as the pursuit itself.
    """
    w = as_walk(u)
    for i in range(len(w)):
        if i >= len(w):
            break
        w = shuffle_walk(g, w, i, i + delta, rng)
    return w
