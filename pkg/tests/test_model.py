import math

import numpy as np
import pytest
from scipy import stats

from sectorgraphs.degree_sets import DegreeSet
from sectorgraphs.geometry import TWO_PI, Point2, Sector, sector_contains
from sectorgraphs.model import (
    ModelParams,
    check_structure,
    degree_count,
    degree_summary,
    interior_out_degree_stats,
    sample_graph,
    sample_trial,
    write_edge_list,
    write_vertex_csv,
)
from sectorgraphs.randomness import TrialStream
from sectorgraphs.theory import mean_degree, radius_for_mean_degree

from oracles import brute_force_degrees, brute_force_graph, chi2_gof


class TestParams:
    def test_field_validation_messages(self):
        good = dict(n=10, alpha=math.pi, r=0.1, v=0.1, q=0.1)
        with pytest.raises(ValueError, match="n must"):
            ModelParams(**{**good, "n": 0})
        with pytest.raises(ValueError, match="alpha"):
            ModelParams(**{**good, "alpha": 3 * math.pi})
        with pytest.raises(ValueError, match="r must"):
            ModelParams(**{**good, "r": 0.5})
        with pytest.raises(ValueError, match="v must"):
            ModelParams(**{**good, "v": 1.0})
        with pytest.raises(ValueError, match="q must"):
            ModelParams(**{**good, "q": -0.2})
        with pytest.raises(ValueError, match="mode"):
            ModelParams(**{**good, "mode": "exact"})


class TestSampleGraph:
    def test_certain_arc_without_faults(self):
        # With v = q = 0 the arc relation is purely geometric, so any
        # realized geometry where j sits in i's sector yields the arc.
        params = ModelParams(n=2, alpha=TWO_PI, r=0.45, v=0.0, q=0.0, master_seed=5)
        for t in range(50):
            g = sample_trial(params, t)
            d = math.hypot(
                g.positions[1, 0] - g.positions[0, 0],
                g.positions[1, 1] - g.positions[0, 1],
            )
            if d <= params.r:
                assert (0, 1) in g.arc_set() and (1, 0) in g.arc_set()

    def test_single_vertex_has_no_arcs(self):
        params = ModelParams(n=1, alpha=math.pi, r=0.1, v=0.0, q=0.0)
        g = sample_trial(params, 0)
        assert g.arcs.shape == (0, 2)

    def test_arc_set_matches_brute_force_replay(self):
        params = ModelParams(
            n=200, alpha=1.9, r=0.08, v=0.2, q=0.3, mode="poisson", master_seed=99
        )
        for t in range(10):
            g = sample_trial(params, t)
            pos, orient, alive, adj = brute_force_graph(params, t)
            assert g.realized_count == pos.shape[0]
            assert np.array_equal(g.positions, pos)
            assert np.array_equal(g.orientations, orient)
            assert np.array_equal(g.alive, alive)
            want = set(zip(*[a.tolist() for a in np.nonzero(adj)]))
            assert g.arc_set() == want

    def test_positions_in_square_orientations_in_range(self):
        g = sample_trial(ModelParams(n=500, alpha=math.pi, r=0.05, v=0.0, q=0.0), 1)
        assert np.all((g.positions >= 0) & (g.positions <= 1))
        assert np.all((g.orientations >= 0) & (g.orientations < TWO_PI))


class TestDegrees:
    def test_empty_graph_summary(self):
        params = ModelParams(n=5, alpha=math.pi, r=0.1, v=0.99, q=0.0, master_seed=1)
        for t in range(40):
            g = sample_trial(params, t)
            s = degree_summary(g)
            if s.alive_count == 0:
                assert s.empty and s.max_out == 0 and s.max_in == 0
                return
        pytest.fail("no empty alive set found at v = 0.99")

    def test_full_disk_no_edge_faults_symmetric(self):
        params = ModelParams(n=300, alpha=TWO_PI, r=0.07, v=0.3, q=0.0, master_seed=2)
        for t in range(5):
            g = sample_trial(params, t)
            s = degree_summary(g)
            assert np.array_equal(s.out_degrees, s.in_degrees)
            assert s.max_out == s.max_in

    def test_degrees_match_brute_force(self):
        params = ModelParams(
            n=500, alpha=2.5, r=0.06, v=0.1, q=0.15, mode="binomial", master_seed=17
        )
        g = sample_trial(params, 3)
        _, _, alive, adj = brute_force_graph(params, 3)
        out_deg, in_deg = brute_force_degrees(adj)
        s = degree_summary(g)
        assert np.array_equal(s.out_degrees, out_deg[alive])
        assert np.array_equal(s.in_degrees, in_deg[alive])
        assert s.max_out == out_deg[alive].max()
        assert s.max_in == in_deg[alive].max()

    def test_structure_invariants_across_params(self):
        cases = [
            ModelParams(n=400, alpha=TWO_PI, r=0.06, v=0.0, q=0.0, master_seed=3),
            ModelParams(n=400, alpha=1.0, r=0.06, v=0.25, q=0.4, master_seed=4),
            ModelParams(n=300, alpha=0.4, r=0.1, v=0.5, q=0.0, mode="poisson", master_seed=5),
        ]
        for params in cases:
            for t in range(3):
                g = sample_trial(params, t)
                check_structure(g)
                s = degree_summary(g)
                assert int(s.out_degrees.sum()) == g.arcs.shape[0]
                assert int(s.in_degrees.sum()) == g.arcs.shape[0]
                if params.v == 0.0:
                    assert s.alive_count == g.realized_count

    def test_every_arc_in_sector(self):
        params = ModelParams(n=250, alpha=1.2, r=0.09, v=0.1, q=0.1, master_seed=8)
        g = sample_trial(params, 0)
        for i, j in g.arc_set():
            s = Sector(
                Point2(*g.positions[i]), float(g.orientations[i] % TWO_PI),
                params.alpha, params.r,
            )
            assert sector_contains(s, Point2(*g.positions[j]))

    def test_degree_count_cases(self):
        params = ModelParams(n=300, alpha=math.pi, r=0.08, v=0.2, q=0.1, master_seed=9)
        g = sample_trial(params, 0)
        s = degree_summary(g)
        assert degree_count(g, DegreeSet.all(), "out") == s.alive_count
        assert degree_count(g, DegreeSet.empty(), "out") == 0
        assert degree_count(g, DegreeSet.upper_tail(s.max_out), "out") >= 1
        assert degree_count(g, DegreeSet.upper_tail(s.max_in), "in") >= 1
        with pytest.raises(ValueError):
            degree_count(g, DegreeSet.all(), "total")


class TestStatistics:
    def test_interior_mean_out_degree_binomial(self):
        n, trials = 3000, 120
        r = radius_for_mean_degree(n, math.pi, 0.1, 0.2, 1.0)
        params = ModelParams(
            n=n, alpha=math.pi, r=r, v=0.1, q=0.2, mode="binomial", master_seed=77
        )
        mu = mean_degree(params)
        target = mu * (n - 1) / n
        means = []
        for t in range(trials):
            g = sample_trial(params, t)
            total, count = interior_out_degree_stats(g)
            means.append(total / count)
        got = float(np.mean(means))
        se = float(np.std(means) / math.sqrt(trials))
        assert abs(got - target) <= 4.0 * se

    def test_alive_count_distribution_binomial(self):
        n, v, trials = 400, 0.3, 2000
        params = ModelParams(n=n, alpha=1.0, r=0.02, v=v, q=0.0, master_seed=11)
        counts = np.array(
            [degree_summary(sample_trial(params, t)).alive_count for t in range(trials)]
        )
        observed = np.bincount(counts, minlength=n + 1)
        probs = stats.binom.pmf(np.arange(n + 1), n, 1 - v)
        stat, dof = chi2_gof(observed, probs)
        assert stat < stats.chi2.ppf(0.999, dof)

    def test_alive_count_distribution_poisson(self):
        n, v, trials = 300, 0.2, 2000
        params = ModelParams(
            n=n, alpha=1.0, r=0.02, v=v, q=0.0, mode="poisson", master_seed=12
        )
        counts = np.array(
            [degree_summary(sample_trial(params, t)).alive_count for t in range(trials)]
        )
        hi = int(counts.max()) + 1
        observed = np.bincount(counts, minlength=hi)
        probs = stats.poisson.pmf(np.arange(hi), n * (1 - v))
        stat, dof = chi2_gof(observed, probs)
        assert stat < stats.chi2.ppf(0.999, dof)


class TestDumps:
    def test_edge_list_format(self, tmp_path):
        params = ModelParams(n=60, alpha=math.pi, r=0.2, v=0.1, q=0.1, master_seed=21)
        g = sample_trial(params, 0)
        path = tmp_path / "edges.txt"
        write_edge_list(g, path)
        lines = path.read_text().splitlines()
        n, alive = map(int, lines[0].split())
        assert n == g.realized_count
        assert alive == degree_summary(g).alive_count
        listed = {tuple(map(int, line.split())) for line in lines[1:]}
        assert listed == g.arc_set()

    def test_vertex_csv_roundtrip(self, tmp_path):
        params = ModelParams(n=40, alpha=math.pi, r=0.2, v=0.2, q=0.0, master_seed=22)
        g = sample_trial(params, 0)
        path = tmp_path / "vertices.csv"
        write_vertex_csv(g, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "index,x,y,theta,alive"
        assert len(lines) == 1 + g.realized_count
        k, x, y, theta, alive = lines[1].split(",")
        assert int(k) == 0
        assert float(x) == g.positions[0, 0]
        assert float(y) == g.positions[0, 1]
        assert float(theta) == g.orientations[0]
        assert int(alive) == int(g.alive[0])


def test_stream_draw_order_is_documented_contract():
    # Positions, orientations, alive flags come off the generator in that
    # order; edge uniforms never touch generator state.
    params = ModelParams(n=50, alpha=math.pi, r=0.1, v=0.3, q=0.5, master_seed=31)
    g = sample_trial(params, 4)
    stream = TrialStream(31, 4)
    gen = stream.generator
    assert np.array_equal(g.positions, gen.random((50, 2)))
    assert np.array_equal(g.orientations, TWO_PI * gen.random(50))
    assert np.array_equal(g.alive, gen.random(50) < 1.0 - params.v)
    u1 = stream.pair_uniforms(np.array([3]), np.array([7]))
    u2 = TrialStream(31, 4).pair_uniforms(np.array([3]), np.array([7]))
    assert u1 == u2
    assert stream.pair_uniform(3, 7) == u1[0]
