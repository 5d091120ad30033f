import numpy as np
import pytest

from conflictmin import (
    ConflictMeasure,
    Graph,
    OpinionVector,
    SolveOptions,
    dense_forest_matrix,
    equilibrium,
    fj_step,
    measure,
    polarization_index,
)
from helpers import dense_inverse, er_graph, path_graph, random_connected, random_opinions

R, C = ConflictMeasure.RESISTANCE, ConflictMeasure.CONTROVERSY
TIGHT = SolveOptions(tolerance=1e-10)


class TestOpinionVector:
    def test_range_enforced(self):
        OpinionVector([0.0, 0.5, 1.0])
        with pytest.raises(ValueError):
            OpinionVector([-0.1, 0.5])
        with pytest.raises(ValueError):
            OpinionVector([0.1, 1.5])

    def test_zeroing(self):
        s = OpinionVector([0.2, 0.8, 1.0])
        s.zero(1)
        assert s.values[1] == 0.0
        t = s.zeroed([0, 2])
        assert list(t.values) == [0.0, 0.0, 0.0]
        assert list(s.values) == [0.2, 0.0, 1.0]

    def test_defensive_copy(self):
        raw = np.array([0.1, 0.2])
        s = OpinionVector(raw)
        raw[0] = 0.9
        assert s.values[0] == 0.1


class TestEquilibrium:
    def test_two_node_path(self):
        z = equilibrium(path_graph(2), OpinionVector([1.0, 0.0]), TIGHT)
        np.testing.assert_allclose(z.values, [2 / 3, 1 / 3], atol=1e-9)

    def test_all_ones_is_fixed(self):
        g = er_graph(np.random.default_rng(0), 30)
        z = equilibrium(g, OpinionVector(np.ones(g.n)), TIGHT)
        np.testing.assert_allclose(z.values, 1.0, atol=1e-9)

    def test_three_node_path_against_dense(self):
        z = equilibrium(path_graph(3), OpinionVector([1.0, 0.0, 0.0]), TIGHT)
        expected = dense_inverse(3, [(0, 1), (1, 2)]) @ [1.0, 0.0, 0.0]
        np.testing.assert_allclose(expected, [5 / 8, 1 / 4, 1 / 8])
        np.testing.assert_allclose(z.values, expected, atol=1e-9)

    def test_values_stay_in_unit_interval(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            g = random_connected(rng, int(rng.integers(2, 60)))
            z = equilibrium(g, random_opinions(rng, g.n)).values
            assert z.min() >= -1e-6 and z.max() <= 1.0 + 1e-6

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            equilibrium(path_graph(3), OpinionVector([1.0, 0.0]))


class TestFjStep:
    def test_direct_substitution(self):
        out = fj_step(path_graph(2), OpinionVector([1.0, 0.0]), np.zeros(2))
        np.testing.assert_allclose(out, [0.5, 0.0])

    def test_equilibrium_is_fixed_point(self):
        rng = np.random.default_rng(2)
        g = er_graph(rng, 25)
        s = random_opinions(rng, g.n)
        z = equilibrium(g, s, TIGHT).values
        np.testing.assert_allclose(fj_step(g, s, z), z, atol=1e-8)

    def test_iteration_converges_to_equilibrium(self):
        g = path_graph(2)
        s = OpinionVector([1.0, 0.0])
        z = np.zeros(2)
        for _ in range(200):
            z = fj_step(g, s, z)
        np.testing.assert_allclose(z, [2 / 3, 1 / 3], atol=1e-8)


class TestMeasure:
    def test_two_node_examples(self):
        g = path_graph(2)
        s = OpinionVector([1.0, 0.0])
        assert measure(g, s, R, TIGHT) == pytest.approx(2 / 3, abs=1e-9)
        assert measure(g, s, C, TIGHT) == pytest.approx(5 / 9, abs=1e-9)

    def test_zero_opinions(self):
        g = path_graph(4)
        s = OpinionVector(np.zeros(4))
        assert measure(g, s, R, TIGHT) == 0.0
        assert measure(g, s, C, TIGHT) == 0.0

    def test_three_node_derived(self):
        g = path_graph(3)
        s = OpinionVector([1.0, 0.0, 0.0])
        assert measure(g, s, R, TIGHT) == pytest.approx(5 / 8, abs=1e-9)
        assert measure(g, s, C, TIGHT) == pytest.approx(30 / 64, abs=1e-9)

    def test_bounds_and_ordering(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            g = random_connected(rng, int(rng.integers(2, 50)))
            s = random_opinions(rng, g.n)
            res = measure(g, s, R, TIGHT)
            con = measure(g, s, C, TIGHT)
            assert 0.0 <= con <= res + 1e-9
            assert res <= g.n

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(4)
        for n in (10, 60, 300):
            g = random_connected(rng, n)
            s = random_opinions(rng, g.n)
            omega = dense_inverse(g.n, g.edges)
            z = omega @ s.values
            for kind, expected in ((R, s.values @ z), (C, z @ z)):
                got = measure(g, s, kind)
                assert abs(got - expected) <= 1e-6 * (1.0 + expected)

    def test_polarization_index_is_controversy_per_node(self):
        g = path_graph(3)
        s = OpinionVector([1.0, 0.0, 0.0])
        assert polarization_index(g, s, TIGHT) == pytest.approx(30 / 64 / 3, abs=1e-9)


class TestDenseForestMatrix:
    def test_two_node_path(self):
        np.testing.assert_allclose(
            dense_forest_matrix(path_graph(2)), np.array([[2, 1], [1, 2]]) / 3
        )

    def test_three_node_path(self):
        expected = np.array([[5, 2, 1], [2, 4, 2], [1, 2, 5]]) / 8
        got = dense_forest_matrix(path_graph(3))
        np.testing.assert_allclose(got, expected, atol=1e-12)
        np.testing.assert_allclose(got.sum(axis=0), 1.0, atol=1e-9)
        np.testing.assert_allclose(got.sum(axis=1), 1.0, atol=1e-9)

    def test_single_isolated_node(self):
        np.testing.assert_allclose(dense_forest_matrix(Graph(1, [])), [[1.0]])

    def test_cap_refusal(self):
        with pytest.raises(ValueError, match="cap"):
            dense_forest_matrix(path_graph(5), cap=4)

    def test_doubly_stochastic_and_positive_on_random_graphs(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g = random_connected(rng, int(rng.integers(2, 60)))
            omega = dense_forest_matrix(g)
            np.testing.assert_allclose(omega.sum(axis=0), 1.0, atol=1e-9)
            np.testing.assert_allclose(omega.sum(axis=1), 1.0, atol=1e-9)
            assert omega.min() > -1e-12
            # connected graph: every pair is linked by some path, so strictly positive
            assert omega.min() > 0.0
