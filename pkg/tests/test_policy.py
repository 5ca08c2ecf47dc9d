import math

import numpy as np
import pytest

from opticbm import (
    NEVER,
    ModelParams,
    Regime,
    ThresholdPolicy,
    average_cost,
    corrective_only_cost,
    optimal_policy,
)
from conftest import base_params, random_params


class TestThresholdFormula:
    # Frozen from t* = ln(((mu1+mu2)c_p_so - mu1 c_c)
    #                    / ((mu1+mu2)c_p_uso - mu1 c_c)) / (mu1+mu2)
    # with mu1=1, mu2=0.4, c_c=15000, c_p_uso=10000:
    #   c_p_so=4000 -> ln(9400/1000)/1.4, etc.
    @pytest.mark.parametrize("c_p_so,t_star", [
        (4000.0, 1.600506920911399),   # ~1.60
        (6500.0, 1.2678231077940527),  # ~1.27
        (9000.0, 0.6253348123956428),  # ~0.63
    ])
    def test_reference_thresholds(self, c_p_so, t_star):
        res = optimal_policy(base_params(c_p_so=c_p_so))
        assert res.regime is Regime.TIME_DEPENDENT
        assert res.t_star == pytest.approx(t_star, abs=1e-12)
        assert res.policy.uso_threshold == res.t_star
        assert res.policy.replace_at_so

    def test_clamped_to_so_only_when_t_star_exceeds_tau(self):
        res = optimal_policy(base_params(tau=1.0, c_p_so=4000.0))
        assert res.regime is Regime.REPLACE_SO_ONLY
        assert res.policy == ThresholdPolicy.so_only()
        assert res.t_star == pytest.approx(1.600506920911399)

    def test_equal_costs_replace_always(self):
        # ln(1) = 0: with c_p_so = c_p_uso in the replacement regime the
        # policy is time-independent.
        p = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 9000.0, 9000.0)
        res = optimal_policy(p)
        assert res.regime is Regime.REPLACE_ALWAYS
        assert res.policy == ThresholdPolicy.always()

    def test_never_replace(self):
        p = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 11000.0, 11000.0)
        res = optimal_policy(p)  # 1.4 * 11000 > 15000
        assert res.regime is Regime.NEVER_REPLACE
        assert res.policy == ThresholdPolicy.never()

    def test_indifferent_resolved_to_do_nothing(self):
        # (mu1+mu2) c_p == mu1 c_c exactly: 2 * 5000 == 1 * 10000.
        p = ModelParams(1.0, 1.0, 0.5, 2.0, 10000.0, 5000.0, 5000.0)
        res = optimal_policy(p)
        assert res.regime is Regime.INDIFFERENT
        assert res.policy == ThresholdPolicy.never()

    def test_uso_never_worthwhile_gives_so_only(self):
        # c_p_so cheap but (mu1+mu2) c_p_uso >= mu1 c_c.
        p = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 4000.0, 11000.0)
        res = optimal_policy(p)
        assert res.regime is Regime.REPLACE_SO_ONLY
        assert res.policy.uso_threshold == NEVER

    def test_degenerate_denominator_folds_into_so_only(self):
        # (mu1+mu2) c_p_uso == mu1 c_c exactly: 2 * 7000 == 14000.
        p = ModelParams(1.0, 1.0, 0.5, 2.0, 14000.0, 3000.0, 7000.0)
        assert optimal_policy(p).regime is Regime.REPLACE_SO_ONLY


class TestPolicyProperties:
    def test_cost_scale_invariance(self, rng):
        for _ in range(100):
            p = random_params(rng)
            k = rng.uniform(0.01, 100.0)
            scaled = ModelParams(p.mu1, p.mu2, p.lam, p.tau,
                                 k * p.c_c, k * p.c_p_so, k * p.c_p_uso)
            a, b = optimal_policy(p), optimal_policy(scaled)
            assert a.regime is b.regime
            if a.t_star is None:
                assert b.t_star is None
            else:
                assert b.t_star == pytest.approx(a.t_star, rel=1e-9)

    def test_t_star_monotone_in_c_p_so_and_c_c(self, rng):
        # Raising c_p_so makes SO replacement less attractive relative to
        # USO replacement, so the threshold drops (cf. the reference
        # thresholds 1.60 > 1.27 > 0.63 as c_p_so rises); raising c_c also
        # drops it (failures costlier, replace at more USOs).
        found = 0
        while found < 50:
            p = random_params(rng)
            if optimal_policy(p).regime is not Regime.TIME_DEPENDENT:
                continue
            found += 1
            base = optimal_policy(p).t_star
            # non-increasing in c_p_so
            for f in (1.001, 1.01, 1.05):
                c_so = p.c_p_so * f
                if c_so > p.c_p_uso:
                    continue
                res = optimal_policy(ModelParams(p.mu1, p.mu2, p.lam, p.tau,
                                                 p.c_c, c_so, p.c_p_uso))
                if res.t_star is not None:
                    assert res.t_star <= base + 1e-12
            # non-increasing in c_c
            for f in (1.001, 1.01, 1.05):
                res = optimal_policy(ModelParams(p.mu1, p.mu2, p.lam, p.tau,
                                                 p.c_c * f, p.c_p_so, p.c_p_uso))
                if res.regime is Regime.TIME_DEPENDENT:
                    assert res.t_star <= base + 1e-12

    def test_equal_costs_never_time_dependent(self, rng):
        for _ in range(200):
            p = random_params(rng)
            c_p = p.c_p_so
            eq = ModelParams(p.mu1, p.mu2, p.lam, p.tau, p.c_c, c_p, c_p)
            res = optimal_policy(eq)
            assert res.regime in (Regime.REPLACE_ALWAYS, Regime.NEVER_REPLACE,
                                  Regime.INDIFFERENT)

    def test_optimal_beats_threshold_sweep(self, rng):
        grid_size = 1024
        for _ in range(200):
            p = random_params(rng)
            res = optimal_policy(p)
            if res.policy.replace_at_so:
                best = average_cost(p, res.policy).total
            else:
                best = corrective_only_cost(p).total
            # All closed-form-evaluable competitors: replace-at-SO with any
            # threshold (grid plus Never), and do-nothing.
            competitors = [average_cost(p, ThresholdPolicy(True, float(t))).total
                           for t in np.linspace(0.0, p.tau, grid_size)]
            competitors.append(average_cost(p, ThresholdPolicy.so_only()).total)
            competitors.append(corrective_only_cost(p).total)
            assert best <= min(competitors) + 1e-9
