import random
from collections import Counter
from fractions import Fraction

import pytest

from chainpursuit.fixtures import load_fixture, terminals
from chainpursuit.graph import cycle_graph, grid_graph, path_graph
from chainpursuit.markov import (
    ChainError,
    ClosedClass,
    Convergence,
    Stability,
    TransitionMatrix,
    class_of,
    enumerate_closed_classes,
    enumerate_delta_optimal_walks,
    is_convergent_bounded,
    is_irreducible,
    is_stable_bounded,
    period,
    second_eigenvalue_modulus,
    sequential_shuffle,
    shuffle_walk,
    stationary_distribution,
    transition_matrix,
    transition_probability,
)
from chainpursuit.markov import _is_stationary, _solve_bareiss, _solve_exact
from chainpursuit.walks import BudgetExceeded, deformation_closure, is_delta_optimal

from oracles import all_walks, follower_law, rational_stationary, terminal_components

F = Fraction


def walks_of(classes):
    return [c.walks for c in classes]


class TestEnumeration:
    def test_delta_optimal_examples(self):
        c5 = cycle_graph(5)
        assert enumerate_delta_optimal_walks(c5, 0, 1, 2, 5) == [(0, 4, 3, 2, 1)]
        assert enumerate_delta_optimal_walks(c5, 0, 1, 2, 2) == [(0, 1)]
        assert enumerate_delta_optimal_walks(path_graph(3), 0, 2, 2, 5) == []

    @pytest.mark.parametrize("name,s,t", [("c5", 0, 1), ("grid3", 0, 8), ("fig2a", 0, 9), ("fig6", 0, 4)])
    @pytest.mark.parametrize("delta", [2, 3])
    def test_delta_optimal_against_unpruned(self, name, s, t, delta):
        g = load_fixture(name)
        top = g.dist[s][t] + 5
        brute = all_walks(g, s, t, top)
        for length in range(1, top + 1):
            want = [w for w in brute if len(w) == length and is_delta_optimal(g, w, delta)]
            if length < g.dist[s][t] + 1:
                want = []
            assert enumerate_delta_optimal_walks(g, s, t, delta, length) == want

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_delta_optimal_walks(grid_graph(4, 4), 0, 15, 2, 7, budget=3)

    def test_class_examples(self):
        assert walks_of(enumerate_closed_classes(cycle_graph(4), 0, 2, 2, 8)) == [((0, 1, 2), (0, 3, 2))]
        c5 = enumerate_closed_classes(cycle_graph(5), 0, 1, 2, 9)
        assert [c.length for c in c5] == [2, 5, 7]
        assert c5[2].walks == ((0, 1, 2, 3, 4, 0, 1),)
        c5d3 = enumerate_closed_classes(cycle_graph(5), 0, 1, 3, 9)
        assert all(c.is_shortest for c in c5d3)

    @pytest.mark.parametrize(
        "name,s,t,delta,top",
        [
            ("c5", 0, 1, 2, 8),
            ("c5", 0, 2, 2, 8),
            ("c5", 0, 1, 3, 9),
            ("c6", 0, 1, 2, 8),
            ("c6", 0, 3, 3, 9),
            ("grid3", 0, 8, 2, 8),
            ("grid3", 1, 7, 2, 8),
            ("fig2a", 0, 9, 2, 8),
            ("fig6", 0, 4, 2, 7),
            ("fig6", 1, 3, 3, 7),
            ("fig9a", 0, 3, 2, 6),
            ("fig9b", 8, 12, 2, 7),
            ("fig11_outerplanar_b", 0, 4, 2, 7),
        ],
    )
    def test_classes_match_chain_oracle(self, name, s, t, delta, top):
        g = load_fixture(name)
        assert walks_of(enumerate_closed_classes(g, s, t, delta, top)) == terminal_components(g, s, t, delta, top)

    def test_class_round_trip_and_invariants(self):
        for name, s, t in [("grid3", 0, 8), ("c5", 0, 1), ("fig9b", 8, 12), ("fig2a", 0, 9)]:
            g = load_fixture(name)
            for cls in enumerate_closed_classes(g, s, t, 2, g.dist[s][t] + 4):
                assert {len(w) for w in cls.walks} == {cls.length}
                assert all(w[0] == s and w[-1] == t and is_delta_optimal(g, w, 2) for w in cls.walks)
                for w in cls.walks:
                    closure = deformation_closure(g, w, 2)
                    assert not closure.shortened
                    assert closure.walks == set(cls.walks)
                assert class_of(g, cls.walks[-1], 2) == cls

    def test_class_of_transient(self):
        assert class_of(grid_graph(3, 3), (0, 1, 4, 3, 6, 7, 8), 2) is None

    def test_delta_monotonicity(self):
        # convergent for delta=2 at bound L implies convergent for delta=3
        for name in ["grid3", "fig6", "c4", "k4", "fig11_outerplanar_b"]:
            g = load_fixture(name)
            for s in range(g.n):
                for t in range(g.n):
                    if s != t and is_convergent_bounded(g, s, t, 2, g.dist[s][t] + 4).ok:
                        assert is_convergent_bounded(g, s, t, 3, g.dist[s][t] + 4).ok


class TestVerdicts:
    def test_convergence_examples(self):
        assert is_convergent_bounded(grid_graph(3, 3), 0, 8, 2, 9).verdict is Convergence.CONVERGENT
        r = is_convergent_bounded(cycle_graph(5), 0, 1, 2, 7)
        assert r.verdict is Convergence.COUNTEREXAMPLE and r.counterexample.length == 5
        g = load_fixture("fig9a")
        s, t = terminals(g)
        r = is_convergent_bounded(g, s, t, 2, 5)
        assert not r.ok and r.counterexample.walks == ((0, 1, 2, 3),)

    def test_stability_examples(self):
        g = load_fixture("fig2a")
        s, t = terminals(g)
        r = is_stable_bounded(g, s, t, 2, 9)
        assert r.verdict is Stability.MULTIPLE and len(r.classes) == 2
        assert is_stable_bounded(cycle_graph(4), 0, 2, 2, 8).ok
        assert is_stable_bounded(cycle_graph(5), 0, 1, 2, 7).verdict is Stability.NON_SHORTEST

    def test_fig6_all_pairs_stable(self):
        g = load_fixture("fig6")
        for s in range(g.n):
            for t in range(g.n):
                if s != t:
                    assert is_stable_bounded(g, s, t, 2, g.dist[s][t] + 6).ok, (s, t)


class TestTransitions:
    def c4_class(self):
        return enumerate_closed_classes(cycle_graph(4), 0, 2, 2, 3)[0]

    def test_examples(self):
        cls = self.c4_class()
        assert transition_probability(cls, (0, 1, 2), (0, 3, 2)) == F(1, 2)
        assert transition_probability(cls, (0, 1, 2), (0, 1, 2)) == F(1, 2)
        m = transition_matrix(cls)
        assert m.rows == ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        single = class_of(cycle_graph(5), (0, 4, 3, 2, 1), 2)
        assert transition_matrix(single).rows == ((F(1),),)

    def test_not_in_class(self):
        with pytest.raises(ChainError):
            transition_probability(self.c4_class(), (0, 1, 2), (0, 1, 0, 1, 2))

    def test_bad_class_row_fails_loudly(self):
        g = grid_graph(3, 3)
        # half of the real class: rows cannot sum to 1
        fake = ClosedClass(((0, 1, 2, 5, 8), (0, 1, 4, 5, 8)), 5, 2, 0, 8, g)
        with pytest.raises(ChainError):
            transition_matrix(fake)

    @pytest.mark.parametrize(
        "name,s,t,delta,top",
        [("grid3", 0, 8, 2, 5), ("grid4", 0, 15, 2, 7), ("grid4", 0, 15, 3, 7), ("c5", 0, 1, 2, 7),
         ("fig2a", 0, 9, 2, 6), ("fig9b", 8, 12, 2, 6), ("fig6", 0, 4, 2, 4)],
    )
    def test_formula_matches_tick_enumeration(self, name, s, t, delta, top):
        g = load_fixture(name)
        for cls in enumerate_closed_classes(g, s, t, delta, top):
            for u in cls.walks:
                law = follower_law(g, u, delta)
                assert set(law) <= set(cls.walks)
                for x in cls.walks:
                    assert transition_probability(cls, u, x) == law.get(x, 0)

    @pytest.mark.parametrize("name,s,t,delta,top", [("grid4", 0, 15, 2, 7), ("c5", 0, 1, 2, 7),
                                                     ("fig9b", 8, 12, 2, 6), ("c6", 0, 3, 3, 8)])
    def test_matrix_rows_match_pairwise_formula(self, name, s, t, delta, top):
        g = load_fixture(name)
        for cls in enumerate_closed_classes(g, s, t, delta, top):
            m = transition_matrix(cls)
            for u, row in zip(cls.walks, m.rows):
                assert row == tuple(transition_probability(cls, u, x) for x in cls.walks)

    def test_grid_matrix_doubly_stochastic(self):
        cls = enumerate_closed_classes(grid_graph(3, 3), 0, 8, 2, 5)[0]
        m = transition_matrix(cls)
        assert len(m) == 6 and m.is_doubly_stochastic()
        st = stationary_distribution(m)
        assert st.method == "exact" and st.vector == (F(1, 6),) * 6


class TestStationary:
    def test_examples(self):
        half = TransitionMatrix(((0,), (1,)), ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))))
        assert stationary_distribution(half).vector == (F(1, 2), F(1, 2))
        assert stationary_distribution(TransitionMatrix(((0,),), ((F(1),),))).vector == (F(1),)

    def test_non_uniform_exact(self):
        m = TransitionMatrix(((0,), (1,)), ((F(1, 2), F(1, 2)), (F(1, 4), F(3, 4))))
        st = stationary_distribution(m)
        assert st.vector == (F(1, 3), F(2, 3))
        assert not st.is_uniform()
        assert not m.is_doubly_stochastic()

    def test_power_iteration_agrees(self):
        cls = enumerate_closed_classes(grid_graph(4, 4), 0, 15, 2, 7)[0]
        m = transition_matrix(cls)
        exact = stationary_distribution(m)
        approx = stationary_distribution(m, exact_limit=0)
        assert approx.method == "power-iteration"
        assert max(abs(float(a) - float(b)) for a, b in zip(exact.vector, approx.vector)) < 1e-9
        assert approx.is_uniform(1e-9)

    @pytest.mark.parametrize("weight", [3, 97, 10**6])
    def test_solvers_match_plain_elimination(self, weight):
        # large weights push denominators past the rounding cap, forcing the fallback
        rng = random.Random(weight)
        fallbacks = 0
        for _ in range(60):
            n = rng.randint(1, 8)
            rows = []
            for i in range(n):
                w = [rng.randint(0, weight) for _ in range(n)]
                w[(i + 1) % n] += 1
                total = sum(w)
                rows.append(tuple(F(x, total) for x in w))
            want = rational_stationary(rows)
            assert _solve_bareiss(rows) == want
            assert _solve_exact(rows) == want
            assert _is_stationary(rows, want)
            fallbacks += max(x.denominator for x in want) > 10**9
        if weight == 10**6:
            assert fallbacks > 0

    def test_reducible_and_periodic_rejected(self):
        red = TransitionMatrix(((0,), (1,)), ((F(1), F(0)), (F(0), F(1))))
        assert not is_irreducible(red)
        with pytest.raises(ChainError):
            stationary_distribution(red)
        flip = TransitionMatrix(((0,), (1,)), ((F(0), F(1)), (F(1), F(0))))
        assert is_irreducible(flip) and period(flip) == 2
        with pytest.raises(ChainError):
            stationary_distribution(flip)

    def test_second_eigenvalue(self):
        half = TransitionMatrix(((0,), (1,)), ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))))
        assert second_eigenvalue_modulus(half) == pytest.approx(0.0, abs=1e-12)
        m = TransitionMatrix(((0,), (1,)), ((F(3, 4), F(1, 4)), (F(1, 4), F(3, 4))))
        assert second_eigenvalue_modulus(m) == pytest.approx(0.5)


class TestShuffle:
    def test_identity_and_clamp(self):
        rng = random.Random(0)
        u = (0, 1, 2, 5, 8)
        g = grid_graph(3, 3)
        assert shuffle_walk(g, u, 2, 2, rng) == u
        assert shuffle_walk(g, u, 3, 99, rng)[:3] == u[:3]
        with pytest.raises(IndexError):
            shuffle_walk(g, u, 3, 1, rng)
        with pytest.raises(IndexError):
            shuffle_walk(g, u, 5, 6, rng)

    def test_rigid_path(self):
        rng = random.Random(0)
        g = path_graph(5)
        assert all(sequential_shuffle(g, (0, 1, 2, 3, 4), 2, rng) == (0, 1, 2, 3, 4) for _ in range(20))

    def test_c4_half_half(self):
        g = cycle_graph(4)
        rng = random.Random(11)
        n = 20_000
        c = Counter(sequential_shuffle(g, (0, 1, 2), 2, rng) for _ in range(n))
        assert set(c) == {(0, 1, 2), (0, 3, 2)}
        assert abs(c[(0, 1, 2)] - n / 2) <= 3 * (n / 4) ** 0.5
