import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainpursuit.graph import (
    UNREACHABLE,
    Graph,
    GraphFormatError,
    PathCountOverflow,
    PathLimitExceeded,
    UnreachableError,
    all_pairs_distances,
    count_shortest_paths,
    count_shortest_paths_via_edge,
    cycle_graph,
    disk,
    dump_graph,
    enumerate_shortest_paths,
    grid_graph,
    load_graph,
    path_graph,
    sample_pursuit_step,
    step_weights,
)

from oracles import floyd_warshall, shortest_paths


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


class TestLoad:
    def test_json_path(self):
        g = load_graph('{"n":3,"edges":[[0,1],[1,2]]}')
        assert g == path_graph(3)

    def test_json_cycle(self):
        g = load_graph('{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]}')
        assert g == cycle_graph(5)

    @pytest.mark.parametrize(
        "text",
        [
            '{"n":3,"edges":[[0,3]]}',
            '{"n":3,"edges":[[0,1],[1,0]]}',
            '{"n":3,"edges":[[1,1]]}',
            '{"n":3,"edges":[[0,1,2]]}',
            '{"n":"3","edges":[]}',
            '{"edges":[]}',
            "{not json",
            "",
            "3\n0 1 2\n",
            "x\n0 1\n",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(GraphFormatError):
            load_graph(text)

    def test_edge_list(self):
        g = load_graph("# a path\n3\n0 1\n1 2  # tail\n")
        assert g == path_graph(3)

    def test_labels_and_meta_round_trip(self):
        text = '{"n": 2, "edges": [[0, 1]], "labels": {"0": "a", "1": "b"}, "comment": "x"}\n'
        g = load_graph(text)
        assert g.labels == {0: "a", 1: "b"}
        assert g.meta == {"comment": "x"}
        assert dump_graph(g) == text

    @given(graphs(min_n=0))
    def test_round_trip(self, g):
        for fmt in ("json", "edgelist"):
            text = dump_graph(g, fmt)
            assert load_graph(text) == g
            assert dump_graph(load_graph(text), fmt) == text


class TestDistances:
    def test_examples(self):
        assert path_graph(3).dist[0][2] == 2
        c5 = cycle_graph(5).dist
        assert c5[0][2] == 2 and c5[0][3] == 2

    def test_unreachable(self):
        g = Graph(3, [(0, 1)])
        assert g.dist[0][2] == UNREACHABLE
        assert not g.connected

    @settings(max_examples=60)
    @given(graphs())
    def test_against_floyd_warshall(self, g):
        d = all_pairs_distances(g)
        assert [list(r) for r in d] == floyd_warshall(g)
        for u in range(g.n):
            assert d[u][u] == 0
            for v in range(g.n):
                assert d[u][v] == d[v][u]
                for w in range(g.n):
                    if min(d[u][v], d[v][w]) >= 0:
                        assert d[u][w] <= d[u][v] + d[v][w]


class TestDisk:
    def test_examples(self):
        assert disk(cycle_graph(5), 0, 1) == {4, 0, 1}
        assert disk(path_graph(3), 1, 1) == {0, 1, 2}
        g = grid_graph(3, 3)
        for v in range(g.n):
            assert disk(g, v, 0) == {v}

    def test_errors(self):
        with pytest.raises(IndexError):
            disk(path_graph(3), 3, 1)
        with pytest.raises(ValueError):
            disk(path_graph(3), 0, -1)


class TestCounting:
    def test_examples(self):
        c4 = cycle_graph(4)
        assert count_shortest_paths(c4, 0, 2) == 2
        assert count_shortest_paths(c4, 1, 1) == 1
        assert count_shortest_paths(grid_graph(3, 3), 0, 8) == 6
        assert count_shortest_paths_via_edge(c4, 0, 1, 2) == 1
        assert count_shortest_paths_via_edge(c4, 0, 1, 3) == 0
        assert count_shortest_paths_via_edge(c4, 2, 2, 2) == 1

    def test_errors(self):
        g = Graph(3, [(0, 1)])
        with pytest.raises(UnreachableError):
            count_shortest_paths(g, 0, 2)
        with pytest.raises(ValueError):
            count_shortest_paths_via_edge(cycle_graph(4), 0, 2, 2)
        with pytest.raises(ValueError):
            count_shortest_paths_via_edge(cycle_graph(4), 0, 0, 2)

    def test_overflow_is_an_error(self):
        # chain of 70 diamonds: 2**70 shortest paths end to end
        edges, k = [], 70
        for i in range(k):
            a, b, c, nxt = 3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3
            edges += [(a, b), (a, c), (b, nxt), (c, nxt)]
        g = Graph(3 * k + 1, edges)
        assert count_shortest_paths(g, 0, 3 * 60) == 2**60
        with pytest.raises(PathCountOverflow):
            count_shortest_paths(g, 0, 3 * k)

    @settings(max_examples=60)
    @given(graphs(min_n=2, max_n=6))
    def test_first_step_decomposition(self, g):
        for u in range(g.n):
            for v in range(g.n):
                if g.dist[u][v] < 0:
                    continue
                total = count_shortest_paths(g, u, v)
                if u == v:
                    parts = count_shortest_paths_via_edge(g, u, u, v)
                else:
                    parts = sum(count_shortest_paths_via_edge(g, u, w, v) for w in g.adj[u])
                assert parts == total
                brute = shortest_paths(g, u, v)
                assert total == len(brute)
                assert enumerate_shortest_paths(g, u, v) == brute


class TestEnumerate:
    def test_examples(self):
        assert enumerate_shortest_paths(cycle_graph(4), 0, 2) == [(0, 1, 2), (0, 3, 2)]
        assert enumerate_shortest_paths(path_graph(3), 0, 2) == [(0, 1, 2)]
        assert len(enumerate_shortest_paths(grid_graph(3, 3), 0, 8)) == 6

    def test_limit(self):
        with pytest.raises(PathLimitExceeded):
            enumerate_shortest_paths(grid_graph(3, 3), 0, 8, limit=5)


class TestSampling:
    def test_stay_put(self):
        rng = random.Random(0)
        assert sample_pursuit_step(cycle_graph(5), 3, 3, rng) == 3

    def test_unique_step(self):
        rng = random.Random(0)
        assert {sample_pursuit_step(path_graph(3), 0, 2, rng) for _ in range(50)} == {1}

    def test_deterministic(self):
        g = grid_graph(3, 3)
        a = [sample_pursuit_step(g, 0, 8, random.Random(5)) for _ in range(3)]
        b = [sample_pursuit_step(g, 0, 8, random.Random(5)) for _ in range(3)]
        assert a == b

    @pytest.mark.parametrize(
        "g,frm,target",
        [(cycle_graph(4), 0, 2), (grid_graph(3, 3), 0, 8), (grid_graph(3, 4), 0, 11)],
    )
    def test_frequencies_within_three_sigma(self, g, frm, target):
        draws = 100_000
        rng = random.Random(1234)
        counts = Counter(sample_pursuit_step(g, frm, target, rng) for _ in range(draws))
        total = count_shortest_paths(g, frm, target)
        for w, c in step_weights(g, frm, target):
            p = c / total
            sigma = (draws * p * (1 - p)) ** 0.5
            assert abs(counts[w] - draws * p) <= 3 * sigma
        assert sum(counts.values()) == draws
