"""Seeded discrete-time simulation of probabilistic chain pursuit.

Agent ``A_0`` replays a fixed walk from ``s`` to ``t``.  Agent ``A_i`` appears
at ``s`` at tick ``i * delta`` and, on every tick, steps to the first vertex
of a uniformly random shortest path toward the position its predecessor held
at the start of that tick.  An agent stops for good once it stands on ``t``
after its predecessor has stopped there; passing through ``t`` earlier does
not stop it.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .graph import UNREACHABLE, Graph, sample_pursuit_step
from .walks import Walk, as_walk, collapse, validate_walk


@dataclass(frozen=True)
class PursuitConfig:
    graph: Graph
    s: int
    t: int
    delta: int
    initial_walk: Walk
    num_agents: int
    seed: int = 0

    def __post_init__(self) -> None:
        g = self.graph
        g.check_vertex(self.s)
        g.check_vertex(self.t)
        if self.delta < 2:
            raise ValueError("delta must exceed 1")
        if self.num_agents < 1:
            raise ValueError("num_agents must be at least 1")
        w = as_walk(self.initial_walk)
        object.__setattr__(self, "initial_walk", w)
        if w[0] != self.s or w[-1] != self.t:
            raise ValueError(f"initial walk must run from {self.s} to {self.t}")
        if not validate_walk(g, w):
            raise ValueError(f"initial walk {list(w)} is not a walk of the graph")
        if g.dist[self.s][self.t] == UNREACHABLE:
            raise ValueError(f"{self.s} and {self.t} are disconnected")


@dataclass
class PursuitTrace:
    """Realized walks, one per agent in emergence order.

    ``tick_log[T]`` maps every agent that has emerged by time ``T`` and has not
    stopped to its vertex at time ``T``; agents missing from it sit on ``t``.
    """

    walks: list[Walk]
    t: int
    delta: int
    tick_log: list[dict[int, int]] | None = field(default=None, repr=False)

    def lengths(self) -> list[int]:
        return [len(w) for w in self.walks]


def run_pursuit(cfg: PursuitConfig, record_ticks: bool = False) -> PursuitTrace:
    g, t, delta = cfg.graph, cfg.t, cfg.delta
    rng = random.Random(cfg.seed)
    n_agents = cfg.num_agents
    a0 = cfg.initial_walk

    pos: list[int] = [cfg.s] * n_agents
    raw: list[list[int]] = [[cfg.s] for _ in range(n_agents)]
    done = [False] * n_agents
    done[0] = len(a0) == 1
    if cfg.s == t:
        done = [True] * n_agents
    first_live = 0  # every agent below this index has stopped
    log: list[dict[int, int]] | None = [] if record_ticks else None

    tick = 0
    while first_live < n_agents:
        spawned = min(n_agents - 1, tick // delta)
        if log is not None:
            log.append({i: pos[i] for i in range(first_live, spawned + 1) if not done[i]})
        new_pos = pos[:]
        for i in range(first_live, spawned + 1):
            if done[i]:
                continue
            if i == 0:
                nxt = a0[tick + 1]
            else:
                nxt = sample_pursuit_step(g, pos[i], pos[i - 1], rng)
            new_pos[i] = nxt
            raw[i].append(nxt)
            if i == 0:
                if tick + 1 == len(a0) - 1:
                    done[0] = True
            elif nxt == t and done[i - 1]:
                done[i] = True
        pos = new_pos
        tick += 1
        while first_live < n_agents and done[first_live]:
            first_live += 1
    if log is not None:
        log.append({})

    walks = [a0] + [collapse(r) for r in raw[1:]]
    return PursuitTrace(walks=walks, t=t, delta=delta, tick_log=log)


def spawn_tick(trace: PursuitTrace, i: int) -> int:
    return i * trace.delta


def agent_distances(g: Graph, trace: PursuitTrace, i: int) -> list[int]:
    """``d(A_i, A_{i-1})`` at every logged tick from ``A_i``'s emergence on."""
    if trace.tick_log is None:
        raise ValueError("trace was recorded without a tick log")
    if i < 1:
        raise ValueError("agent index must be at least 1")
    out = []
    for tick in range(spawn_tick(trace, i), len(trace.tick_log)):
        snap = trace.tick_log[tick]
        a = snap.get(i, trace.t)
        b = snap.get(i - 1, trace.t)
        out.append(g.dist[a][b])
    return out


def distance_law_violations(g: Graph, trace: PursuitTrace) -> list[tuple[int, int, int]]:
    """``(agent, tick, distance)`` triples breaking the pursuit distance bound.

    The distance never exceeds ``delta`` nor any positive value it has
    already taken; from 0 it may rise to 1.
    """
    bad = []
    for i in range(1, len(trace.walks)):
        cap = trace.delta
        for k, d in enumerate(agent_distances(g, trace, i)):
            if d > cap:
                bad.append((i, spawn_tick(trace, i) + k, d))
            if d > 0:
                cap = min(cap, d)
    return bad


def visit_frequencies(trace: PursuitTrace, n: int) -> list[tuple[int, int, float]]:
    """``(vertex, walks containing it, fraction of agents)`` for every vertex."""
    if not trace.walks:
        raise ValueError("empty trace")
    counts: Counter[int] = Counter()
    for w in trace.walks:
        counts.update(set(w))
    total = len(trace.walks)
    return [(v, counts[v], counts[v] / total) for v in range(n)]


def stabilization_index(trace: PursuitTrace) -> int:
    """First agent index after which every walk length is final."""
    lengths = trace.lengths()
    final = lengths[-1]
    k = len(lengths)
    while k > 0 and lengths[k - 1] == final:
        k -= 1
    return k


def length_histogram(trace: PursuitTrace) -> dict[int, int]:
    return dict(sorted(Counter(trace.lengths()).items()))


def trace_records(trace: PursuitTrace) -> list[dict[str, object]]:
    return [{"index": i, "walk": list(w)} for i, w in enumerate(trace.walks)]


def tail_walks(trace: PursuitTrace, start: int | None = None, stride: int = 1) -> list[Walk]:
    """Walks from ``start`` (default: the stabilization index) every ``stride``."""
    if start is None:
        start = stabilization_index(trace)
    return trace.walks[start::stride]


def check_monotone_lengths(trace: PursuitTrace) -> bool:
    ls = trace.lengths()
    return all(b <= a for a, b in zip(ls, ls[1:]))

