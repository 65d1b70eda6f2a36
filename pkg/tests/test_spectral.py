import math

import numpy as np
import pytest

from helpers import graph_complete, graph_cycle, path_metric
from mdrlab import metric, spectral
from mdrlab.errors import (
    CapExceeded,
    DegenerateConfiguration,
    Disconnected,
    GenerationFailure,
    NoGap,
    TooLarge,
)
from mdrlab.spectral import (
    Configuration,
    MarkovChainSpec,
    ReversibleChain,
    WeightedGraph,
    chain_from_graph,
    cheeger_sweep,
    dim_lower_exponent,
    gamma_bruteforce,
    gamma_hilbert,
    hilbert_rayleigh_identity,
    lambda2,
    markov_convexity_ratio,
    power_expander_check,
    random_regular_graph,
    random_reversible_chain,
    rayleigh,
    rayleigh_general,
    t_parameter,
)


def uniform_chain(a: np.ndarray) -> ReversibleChain:
    n = a.shape[0]
    return ReversibleChain(a, np.full(n, 1.0 / n))


def two_point_metric(d: float = 1.0):
    return path_metric([0.0, d])


class TestChainConstruction:
    def test_k2(self):
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        assert np.array_equal(chain.A, np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(chain.pi, [0.5, 0.5])

    def test_star_k13(self):
        g = WeightedGraph.build(4, [(0, 1), (0, 2), (0, 3)])
        chain = chain_from_graph(g)
        assert np.allclose(chain.pi, [0.5, 1 / 6, 1 / 6, 1 / 6])

    def test_random_graph_invariants(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n = int(rng.integers(3, 9))
            edges = [(i, j, float(rng.uniform(0.5, 2))) for i in range(n) for j in range(i + 1, n)]
            chain = chain_from_graph(WeightedGraph.build(n, edges))
            flows = chain.pi[:, None] * chain.A
            assert np.abs(flows - flows.T).max() <= 1e-12
            assert np.abs(chain.pi @ chain.A - chain.pi).max() <= 1e-10

    def test_disconnected(self):
        g = WeightedGraph.build(4, [(0, 1), (2, 3)])
        with pytest.raises(Disconnected):
            chain_from_graph(g)

    def test_json_roundtrip(self):
        chain = random_reversible_chain(5, 1)
        again = ReversibleChain.from_json(chain.to_json())
        assert np.allclose(again.A, chain.A)


class TestLambda2:
    def test_complete_graphs(self):
        for n in (3, 4, 6, 9):
            got = lambda2(chain_from_graph(graph_complete(n)))
            assert got == pytest.approx(-1.0 / (n - 1), abs=1e-12)

    def test_cycles(self):
        for n in (4, 5, 8, 12):
            got = lambda2(chain_from_graph(graph_cycle(n)))
            assert got == pytest.approx(math.cos(2 * math.pi / n), abs=1e-12)

    def test_identity_chain(self):
        assert lambda2(uniform_chain(np.eye(3))) == pytest.approx(1.0, abs=1e-12)


class TestRayleigh:
    def test_k2_two_values(self):
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        m = two_point_metric(3.0)
        for p in (1.0, 2.0, 3.0):
            assert rayleigh(Configuration(m), chain, p) == pytest.approx(2.0)

    def test_metric_scale_invariance(self):
        chain = random_reversible_chain(4, 2)
        m = metric.random_metric(4, 3, style="box")
        scaled = metric.build_metric(7.5 * m.dist)
        x1, x2 = Configuration(m), Configuration(scaled)
        assert rayleigh(x1, chain, 2.0) == pytest.approx(rayleigh(x2, chain, 2.0), rel=1e-12)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(4)
        chain = random_reversible_chain(5, 5)
        m = metric.random_metric(4, 6, style="box")
        idx = rng.integers(0, 4, size=5)
        x = Configuration(m, idx)
        num = den = 0.0
        for i in range(5):
            for j in range(5):
                d2 = m.dist[idx[i], idx[j]] ** 2
                num += chain.pi[i] * chain.A[i, j] * d2
                den += chain.pi[i] * chain.pi[j] * d2
        assert rayleigh(x, chain, 2.0) == pytest.approx(num / den, abs=1e-12)

    def test_degenerate(self):
        chain = random_reversible_chain(3, 7)
        m = two_point_metric()
        with pytest.raises(DegenerateConfiguration):
            rayleigh(Configuration(m, [0, 0, 0]), chain, 2.0)


class TestRayleighAlgebra:
    """The five structural clauses, each over 200 random instances."""

    def _instances(self, seed, count=200):
        rng = np.random.default_rng(seed)
        for _ in range(count):
            n = int(rng.integers(2, 7))
            chain = random_reversible_chain(n, rng.integers(2**32))
            m = metric.random_metric(int(rng.integers(2, 5)), rng.integers(2**32), style="box")
            idx = rng.integers(0, m.n, size=n)
            x = Configuration(m, idx)
            if x.is_constant():
                continue
            p = float(rng.choice([1.0, 2.0]))
            yield rng, chain, x, p

    def test_mixture_linearity(self):
        for rng, chain, x, p in self._instances(10):
            other = ReversibleChain(
                _partner(chain, rng), chain.pi
            )
            delta = float(rng.random())
            mix = ReversibleChain(delta * chain.A + (1 - delta) * other.A, chain.pi)
            want = delta * rayleigh(x, chain, p) + (1 - delta) * rayleigh(x, other, p)
            assert rayleigh(x, mix, p) == pytest.approx(want, abs=1e-12)

    def test_lazy_rescaling(self):
        for rng, chain, x, p in self._instances(11):
            delta = float(rng.random())
            lazy = ReversibleChain((1 - delta) * np.eye(chain.n) + delta * chain.A, chain.pi)
            assert rayleigh(x, lazy, p) == pytest.approx(delta * rayleigh(x, chain, p), abs=1e-12)

    def test_a_priori_bound(self):
        for _, chain, x, p in self._instances(12):
            assert rayleigh(x, chain, p) <= 2**p + 1e-12

    def test_product_subadditivity(self):
        for rng, chain, x, p in self._instances(13):
            other = ReversibleChain(_partner(chain, rng), chain.pi)
            lhs = rayleigh_general(x, chain.A @ other.A, chain.pi, p) ** (1 / p)
            rhs = rayleigh(x, chain, p) ** (1 / p) + rayleigh(x, other, p) ** (1 / p)
            assert lhs <= rhs + 1e-9

    def test_power_bound(self):
        for rng, chain, x, p in self._instances(14, count=100):
            base = rayleigh(x, chain, p)
            for t in (2, 3, 4):
                powered = rayleigh_general(x, np.linalg.matrix_power(chain.A, t), chain.pi, p)
                assert powered <= t**p * base + 1e-9


def _partner(chain, rng):
    n = chain.n
    a = rng.uniform(0.2, 1.0, (n, n))
    a = a / a.sum(axis=1, keepdims=True)
    accept = np.minimum(1.0, (chain.pi[None, :] * a.T) / (chain.pi[:, None] * a))
    out = a * accept
    np.fill_diagonal(out, 0.0)
    np.fill_diagonal(out, 1.0 - out.sum(axis=1))
    return out


class TestGamma:
    def test_hilbert_k4(self):
        assert gamma_hilbert(chain_from_graph(graph_complete(4))) == pytest.approx(0.75)

    def test_hilbert_c4(self):
        assert gamma_hilbert(chain_from_graph(graph_cycle(4))) == pytest.approx(1.0)

    def test_no_gap(self):
        with pytest.raises(NoGap):
            gamma_hilbert(uniform_chain(np.eye(3)))

    def test_bruteforce_k2(self):
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        assert gamma_bruteforce(chain, two_point_metric(), 2.0) == 0.5

    def test_bruteforce_degenerate(self):
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        single = metric.build_metric(np.zeros((1, 1)))
        with pytest.raises(DegenerateConfiguration):
            gamma_bruteforce(chain, single, 2.0)

    def test_bruteforce_label_invariance(self):
        chain = chain_from_graph(graph_cycle(4))
        m = two_point_metric()
        relabeled = metric.build_metric(m.dist[::-1, ::-1])
        assert gamma_bruteforce(chain, m, 2.0) == pytest.approx(
            gamma_bruteforce(chain, relabeled, 2.0), abs=1e-12
        )

    def test_bruteforce_matches_hilbert_on_k2(self):
        # two-point Euclidean configurations realize the spectral bound
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        assert gamma_bruteforce(chain, two_point_metric(), 2.0) == pytest.approx(
            gamma_hilbert(chain)
        )

    def test_bruteforce_size_cap(self):
        chain = random_reversible_chain(8, 0)
        with pytest.raises(TooLarge):
            gamma_bruteforce(chain, metric.random_metric(8, 1), 2.0)


class TestHilbertIdentity:
    def test_identity_chain(self):
        x = Configuration(metric.PointCloud(np.array([[0.0], [1.0], [3.0]]), "l2"))
        lhs, rhs = hilbert_rayleigh_identity(x, uniform_chain(np.eye(3)))
        assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)

    def test_k2_antipodal(self):
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        x = Configuration(metric.PointCloud(np.array([[1.0, 2.0], [-1.0, -2.0]]), "l2"))
        lhs, rhs = hilbert_rayleigh_identity(x, chain)
        assert lhs == pytest.approx(1.0)
        assert rhs == pytest.approx(1.0)  # A^2 = I so R = 0

    def test_random_instances(self):
        rng = np.random.default_rng(20)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            chain = random_reversible_chain(n, rng.integers(2**32))
            cloud = metric.PointCloud(rng.standard_normal((n, int(rng.integers(1, 4)))), "l2")
            x = Configuration(cloud)
            lhs, rhs = hilbert_rayleigh_identity(x, chain)
            assert abs(lhs - rhs) <= 1e-10
            a2 = ReversibleChain(chain.A @ chain.A, chain.pi)
            assert rayleigh(x, a2, 2.0) <= 1.0 + 1e-12


class TestTParameter:
    def test_k2_immediate(self):
        chain = chain_from_graph(WeightedGraph.build(2, [(0, 1)]))
        x = Configuration(metric.PointCloud(np.array([[0.0], [1.0]]), "l2"))
        t, achieved = t_parameter(x, chain, 1.0)
        assert t == 1
        assert achieved >= 1 - 1 / 4

    def test_spectral_ceiling(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            mdim = int(rng.integers(1, 8))
            chain = random_reversible_chain(n, rng.integers(2**32))
            cloud = metric.PointCloud(rng.standard_normal((n, mdim)), "l1")
            x = Configuration(cloud)
            d = math.sqrt(mdim)
            t, _ = t_parameter(x, chain, d)
            lam = lambda2(chain)
            assert t <= math.ceil(math.log(2 * d) / math.log(2 / (1 + lam)))

    def test_monotone_in_d(self):
        rng = np.random.default_rng(22)
        chain = random_reversible_chain(5, 23)
        cloud = metric.PointCloud(rng.standard_normal((5, 3)), "l1")
        x = Configuration(cloud)
        t1, _ = t_parameter(x, chain, math.sqrt(3))
        t2, _ = t_parameter(x, chain, 2 * math.sqrt(3))
        assert t2 >= t1

    def test_cap_exceeded(self):
        chain = random_reversible_chain(4, 24, lazy=0.999)
        cloud = metric.PointCloud(np.random.default_rng(1).standard_normal((4, 2)), "l1")
        with pytest.raises(CapExceeded):
            t_parameter(Configuration(cloud), chain, 50.0, t_cap=1)

    def test_constant_configuration(self):
        chain = random_reversible_chain(3, 25)
        cloud = metric.PointCloud(np.zeros((3, 2)), "l1")
        with pytest.raises(DegenerateConfiguration):
            t_parameter(Configuration(cloud), chain, 1.0)


class TestPowerExpander:
    def test_sixteenth_bound_and_consequence(self):
        rng = np.random.default_rng(30)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            mdim = int(rng.integers(1, 9))
            chain = random_reversible_chain(n, rng.integers(2**32))
            cloud = metric.PointCloud(rng.standard_normal((n, mdim)), "l1")
            x = Configuration(cloud)
            d = math.sqrt(mdim)
            val, t = power_expander_check(x, chain, d)
            assert val >= 1.0 / 16.0
            # explicit-constant chain: 1/R(x; A, X^2) <= 8 t^2
            r_x = rayleigh(x, chain, 2.0)
            assert 1.0 / r_x <= 8.0 * t**2 + 1e-9

    def test_linf_companion(self):
        rng = np.random.default_rng(31)
        chain = random_reversible_chain(5, 32)
        cloud = metric.PointCloud(rng.standard_normal((5, 4)), "linf")
        x = Configuration(cloud)
        val, t = power_expander_check(x, chain, 2.0)
        assert val >= 1.0 / 16.0

    def test_gamma_chain_bound(self):
        # sampled lower bound on gamma(A, l1^2) never beats 8 * ceiling^2
        rng = np.random.default_rng(33)
        for _ in range(20):
            n = int(rng.integers(3, 7))
            mdim = int(rng.integers(2, 6))
            chain = random_reversible_chain(n, rng.integers(2**32))
            d = math.sqrt(mdim)
            lam = lambda2(chain)
            ceiling = math.ceil(math.log(2 * d) / math.log(2 / (1 + lam)))
            sampled = spectral.gamma_sampled_lower_bound(chain, mdim, "l1", 40, rng.integers(2**32))
            assert sampled <= 8.0 * ceiling**2 + 1e-9


class TestDimLowerExponent:
    def test_constant_cloud(self):
        chain = random_reversible_chain(4, 40)
        cloud = metric.PointCloud(np.ones((4, 3)), "l2")
        assert dim_lower_exponent(cloud, chain) == (0.0, 0.0)

    def test_scale_invariance(self):
        rng = np.random.default_rng(41)
        chain = random_reversible_chain(6, 42)
        coords = rng.standard_normal((6, 4))
        _, e1 = dim_lower_exponent(metric.PointCloud(coords, "l2"), chain)
        _, e2 = dim_lower_exponent(metric.PointCloud(5.0 * coords, "l2"), chain)
        assert e1 == pytest.approx(e2, rel=1e-12)

    def test_expander_bourgain_cross_check(self):
        g = random_regular_graph(128, 4, 7)
        chain = chain_from_graph(g)
        cloud = metric.bourgain_embed(g.shortest_path_metric(), 8)
        alpha_hat, exponent = dim_lower_exponent(cloud, chain)
        assert exponent > 0
        # recompute both averages with direct double loops
        pi, a = chain.pi, chain.A
        d2 = cloud.pairwise() ** 2
        edge = sum(
            pi[i] * a[i, j] * d2[i, j] for i in range(128) for j in range(128)
        )
        pair = sum(
            pi[i] * pi[j] * d2[i, j] for i in range(128) for j in range(128)
        )
        want = (1 - lambda2(chain)) / math.sqrt(edge) * math.sqrt(pair)
        assert alpha_hat == pytest.approx(math.sqrt(edge), abs=1e-10)
        assert exponent == pytest.approx(want, abs=1e-10)


class TestCheeger:
    def test_bridged_triangles(self):
        g = WeightedGraph.build(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
        chain = chain_from_graph(g)
        cut, cond = cheeger_sweep(chain)
        assert set(cut) in ({0, 1, 2}, {3, 4, 5})
        # exhaustive oracle over all 2^6 bipartitions
        best = math.inf
        flows = chain.pi[:, None] * chain.A
        for mask in range(1, 2**6 - 1):
            side = np.array([(mask >> i) & 1 for i in range(6)], dtype=bool)
            vol = chain.pi[side].sum()
            cross = flows[side][:, ~side].sum()
            best = min(best, cross / min(vol, 1 - vol))
        assert cond == pytest.approx(best, abs=1e-12)

    def test_complete_graph_no_sparse_cut(self):
        chain = chain_from_graph(graph_complete(6))
        _, cond = cheeger_sweep(chain)
        assert cond >= 0.5 - 1e-9

    def test_cheeger_inequality_random(self):
        rng = np.random.default_rng(50)
        for _ in range(100):
            n = int(rng.integers(4, 12))
            w = rng.uniform(0.0, 1.0, (n, n))
            w = ((w + w.T) / 2 > 0.45).astype(float)
            np.fill_diagonal(w, 0.0)
            w += 1e-3  # keep connected
            np.fill_diagonal(w, 0.0)
            edges = [(i, j, w[i, j]) for i in range(n) for j in range(i + 1, n) if w[i, j] > 0]
            chain = chain_from_graph(WeightedGraph.build(n, edges))
            _, cond = cheeger_sweep(chain)
            assert cond <= math.sqrt(2 * (1 - lambda2(chain))) + 1e-12


class TestRandomRegular:
    def test_degrees(self):
        g = random_regular_graph(20, 3, 0)
        deg = np.zeros(20)
        for i, j, _ in g.edges:
            deg[i] += 1
            deg[j] += 1
        assert np.all(deg == 3)

    def test_expander_spectral_gap(self):
        for seed in range(20):
            g = random_regular_graph(128, 4, seed)
            assert lambda2(chain_from_graph(g)) < 0.95

    def test_average_distance(self):
        g = random_regular_graph(256, 4, 3)
        d = g.shortest_path_metric().dist
        avg = d.sum() / (256 * 255)
        assert avg >= 0.3 * math.log(256) / math.log(4)

    def test_parity_validation(self):
        with pytest.raises(ValueError):
            random_regular_graph(7, 3, 0)

    def test_generation_failure_cap(self):
        with pytest.raises(GenerationFailure):
            random_regular_graph(20, 4, 0, max_tries=0)


class TestMarkovConvexity:
    def _path_spec(self, horizon=8, q=2.0):
        p = np.zeros((5, 5))
        p[0, 1] = p[4, 3] = 1.0
        for i in (1, 2, 3):
            p[i, i - 1] = p[i, i + 1] = 0.5
        start = np.zeros(5)
        start[2] = 1.0
        m = path_metric(np.arange(5.0))
        return MarkovChainSpec(p, start, horizon, m, np.arange(5), q)

    def test_constant_map(self):
        spec = self._path_spec()
        const = MarkovChainSpec(
            spec.transition, spec.initial, spec.horizon, spec.space, np.zeros(5, dtype=int), 2.0
        )
        est = markov_convexity_ratio(const, method="dp")
        assert est.lhs == 0.0
        est_mc = markov_convexity_ratio(const, samples=2000, seed=0, method="mc")
        assert est_mc.lhs == 0.0

    def test_deterministic_chain(self):
        perm = np.roll(np.eye(5), 1, axis=1)  # cyclic permutation
        m = path_metric(np.arange(5.0))
        spec = MarkovChainSpec(perm, np.eye(5)[0], 8, m, np.arange(5), 2.0)
        assert markov_convexity_ratio(spec, method="dp").lhs == 0.0
        assert markov_convexity_ratio(spec, samples=2000, seed=1, method="mc").lhs == 0.0

    def test_monte_carlo_matches_dp(self):
        spec = self._path_spec()
        dp = markov_convexity_ratio(spec, method="dp")
        mc = markov_convexity_ratio(spec, samples=100_000, seed=2, method="mc")
        assert abs(mc.lhs**2 - dp.lhs**2) <= 3 * mc.lhs_q_se
        assert abs(mc.rhs**2 - dp.rhs**2) <= 3 * max(mc.rhs_q_se, 1e-12)

    def test_rhs_exact_on_unit_steps(self):
        # every step moves distance exactly 1, so rhs^q = horizon
        spec = self._path_spec(horizon=8, q=2.0)
        dp = markov_convexity_ratio(spec, method="dp")
        assert dp.rhs == pytest.approx(math.sqrt(8.0), abs=1e-12)

    def test_horizon_cap(self):
        spec = self._path_spec()
        big = MarkovChainSpec(
            spec.transition, spec.initial, 65, spec.space, spec.point_map, 2.0
        )
        with pytest.raises(Exception):
            markov_convexity_ratio(big, method="dp")
