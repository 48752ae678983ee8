"""Entangling-operation model: randomness contract and attempt accounting."""

import numpy as np
import pytest

from graphforge.eo import (
    AttemptCapExceeded,
    AttemptLedger,
    EoModel,
    attempt_fusion,
    build_epr,
    forced_outcome_fusion,
)
from graphforge.graph import GraphState


class TestModel:
    @pytest.mark.parametrize("p", [0.0, -0.1, 1.0000001, float("nan")])
    def test_probability_domain(self, p):
        with pytest.raises(ValueError):
            EoModel(p)

    def test_physical_regime_boundary(self):
        assert EoModel(0.5).in_physical_regime
        assert not EoModel(0.500001).in_physical_regime

    def test_same_seed_same_draws(self):
        a = EoModel(0.37, seed=11)
        b = EoModel(0.37, seed=11)
        assert [a.sample_success() for _ in range(200)] == \
               [b.sample_success() for _ in range(200)]

    def test_run_streams_are_distinct(self):
        draws = {}
        for lane in (0, 1):
            for idx in (0, 1):
                m = EoModel.for_run(0.5, 42, idx, lane=lane)
                draws[(lane, idx)] = tuple(m.rng.random(8))
        assert len(set(draws.values())) == 4

    def test_run_streams_are_replayable(self):
        a = EoModel.for_run(0.5, 42, 3, lane=1)
        b = EoModel.for_run(0.5, 42, 3, lane=1)
        assert tuple(a.rng.random(16)) == tuple(b.rng.random(16))

    def test_one_draw_per_sample(self):
        # sample_success must consume exactly one uniform from the stream
        m = EoModel(0.6, seed=5)
        ref = np.random.Generator(np.random.PCG64(np.random.SeedSequence(5)))
        expected = [bool(x < 0.6) for x in ref.random(100)]
        assert [m.sample_success() for _ in range(100)] == expected

    def test_binomial_rate_at_scale(self):
        m = EoModel(0.3, seed=0)
        n = 1_000_000
        hits = sum(m.rng.random(n) < m.p)
        # 0.002 is ~4.4 sigma at this n
        assert abs(hits / n - 0.3) < 0.002

    def test_vanishing_p_never_succeeds_in_practice(self):
        m = EoModel(1e-9, seed=1)
        assert not any(m.sample_success() for _ in range(10_000))


class TestLedger:
    def test_counts_stay_consistent(self):
        led = AttemptLedger()
        m = EoModel(0.5, seed=3)
        g = GraphState()
        for _ in range(50):
            u, v = g.add_vertex(), g.add_vertex()
            attempt_fusion(m, led, g, u, v)
        assert led.attempts == 50
        assert led.successes + led.failures == led.attempts

    def test_precondition_failure_consumes_nothing(self):
        led = AttemptLedger()
        m = EoModel(0.5, seed=9)
        g = GraphState.from_edges([0, 1], [(0, 1)])
        with pytest.raises(ValueError):
            attempt_fusion(m, led, g, 0, 1)
        with pytest.raises(KeyError):
            attempt_fusion(m, led, g, 0, 7)
        assert led.attempts == 0
        # the stream was not touched either
        fresh = EoModel(0.5, seed=9)
        assert m.rng.random() == fresh.rng.random()

    def test_forced_outcomes_are_ledgered(self):
        led = AttemptLedger()
        g = GraphState.from_edges([0, 1, 2, 3], [])
        rep = forced_outcome_fusion(g, led, 0, 1, "success")
        assert rep.success
        forced_outcome_fusion(g, led, 2, 3, "failure")
        assert (led.attempts, led.successes, led.failures) == (2, 1, 1)

    def test_forced_outcome_name_checked_before_mutation(self):
        led = AttemptLedger()
        g = GraphState.from_edges([0, 1], [])
        with pytest.raises(ValueError):
            forced_outcome_fusion(g, led, 0, 1, "maybe")
        assert led.attempts == 0
        assert g.vertices == (0, 1)


class TestBuildEpr:
    def test_result_is_one_bonded_pair(self):
        led = AttemptLedger()
        m = EoModel(0.5, seed=7)
        g = GraphState()
        far, leaf = build_epr(m, led, g)
        assert g.has_edge(far, leaf)
        assert g.degree(far) == 1 and g.degree(leaf) == 1
        assert led.epr_builds == 1
        assert led.successes == 1
        # failed attempts clean up after themselves
        assert g.num_vertices == 2

    def test_expected_attempts_match_geometric_mean(self):
        for p, mean, tol in ((0.5, 2.0, 0.02), (0.4, 2.5, 0.03)):
            led = AttemptLedger()
            m = EoModel(p, seed=13)
            g = GraphState()
            n = 100_000
            for _ in range(n):
                build_epr(m, led, g)
                g = GraphState()  # keep the scratch graph small
            assert led.epr_builds == n
            assert abs(led.attempts / n - mean) < tol

    def test_cap_raises_after_exact_budget(self):
        led = AttemptLedger()
        m = EoModel(1e-6, seed=0)
        g = GraphState()
        with pytest.raises(AttemptCapExceeded):
            build_epr(m, led, g, max_attempts=5)
        assert led.attempts == 5
        assert g.num_vertices == 0

    def test_zero_budget_still_counts_the_build(self):
        # the build counter ticks at entry, mirroring the kernel accounting
        led = AttemptLedger()
        m = EoModel(0.5, seed=0)
        g = GraphState()
        with pytest.raises(AttemptCapExceeded):
            build_epr(m, led, g, max_attempts=0)
        assert led.epr_builds == 1
        assert led.attempts == 0
