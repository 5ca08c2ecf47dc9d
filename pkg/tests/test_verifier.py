import math

import numpy as np
import pytest

from opticbm import (
    ModelParams,
    NonThresholdStructure,
    ThresholdPolicy,
    average_cost,
    corrective_only_cost,
    extract_policy,
    f_difference,
    optimal_policy,
    solve_bellman,
)
from opticbm.policy import Regime
from conftest import base_params, random_params


def closed_form_optimal(p):
    res = optimal_policy(p)
    if res.policy.replace_at_so:
        return average_cost(p, res.policy).total
    return corrective_only_cost(p).total


class TestSolveBellman:
    def test_reference_average_cost(self):
        grid = solve_bellman(base_params(), n=2048)
        assert grid.g == pytest.approx(3384.09, abs=0.5)

    def test_rejects_coarse_grid(self):
        with pytest.raises(ValueError):
            solve_bellman(base_params(), n=32)

    def test_replace_always_regime_replaces_everywhere(self):
        # Equal preventive costs in the replacement regime: the USO action
        # is "replace" at every residual time. The gap at t=0 equals c_p
        # exactly in the continuous model, so skip the first node.
        p = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 4000.0, 4000.0)
        grid = solve_bellman(p, n=1024)
        gap = grid.f1 - grid.f2
        assert (gap[1:] > p.c_p_uso).all()
        ex = extract_policy(grid)
        assert ex.policy.replace_at_so
        assert ex.threshold <= grid.h + 1e-12

    def test_g_matches_closed_form_random(self, rng):
        for _ in range(30):
            p = random_params(rng)
            grid = solve_bellman(p, n=1024)
            cf = closed_form_optimal(p)
            assert abs(grid.g - cf) < 1e-3 * cf

    def test_grid_refinement_halves_error(self):
        p = base_params()
        cf = closed_form_optimal(p)
        errs = [abs(solve_bellman(p, n=n).g - cf) for n in (512, 1024, 2048, 4096)]
        for coarse, fine in zip(errs, errs[1:]):
            assert fine <= 0.5 * coarse + 1e-10 * cf

    def test_bellman_residual_after_convergence(self):
        from opticbm.verifier import _continuation

        p = base_params()
        tol = 1e-9 * p.c_c
        grid = solve_bellman(p, n=1024, tol=tol)
        t, h = grid.t, grid.h
        f1 = _continuation(t, h, p.mu1, p.lam, grid.v1_sc, grid.v1_uso, grid.v1_so0, grid.g)
        f2 = _continuation(t, h, p.mu2, p.lam, grid.v2_sc, grid.v2_uso, grid.v2_so0, grid.g)
        residual = max(
            np.abs(p.c_c + f2 - grid.v1_sc).max(),
            np.abs(f1 - grid.v2_sc).max(),
            np.abs(np.minimum(f1, p.c_p_uso + f2) - grid.v1_uso).max(),
            np.abs(np.minimum(f2, p.c_p_uso + f2) - grid.v2_uso).max(),
            abs(min(f1[-1], p.c_p_so + f2[-1]) - grid.v1_so0),
            abs(min(f2[-1], p.c_p_so + f2[-1]) - grid.v2_so0),
        )
        assert residual <= 10 * tol

    def test_anchored_at_state2_so(self):
        grid = solve_bellman(base_params(), n=512)
        assert grid.v2_so0 == pytest.approx(0.0, abs=1e-9 * 15000)


class TestExtractPolicy:
    @pytest.mark.parametrize("c_p_so,t_star", [
        (4000.0, 1.600506920911399),
        (9000.0, 0.6253348123956428),
    ])
    def test_threshold_recovered(self, c_p_so, t_star):
        p = base_params(c_p_so=c_p_so)
        grid = solve_bellman(p, n=4096)
        ex = extract_policy(grid)
        assert ex.policy.replace_at_so
        assert abs(ex.threshold - t_star) <= 2 * grid.h

    def test_never_replace_regime_selects_nothing(self):
        p = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 11000.0, 11000.0)
        grid = solve_bellman(p, n=1024)
        ex = extract_policy(grid)
        assert not ex.policy.replace_at_so
        assert ex.threshold is None

    def test_control_limit_structure_random(self, rng):
        # Covers all analytic regimes; the replace region must always
        # be a suffix interval of the grid.
        checked = 0
        while checked < 60:
            p = random_params(rng)
            grid = solve_bellman(p, n=1024)
            extract_policy(grid)  # must not raise NonThresholdStructure
            checked += 1

    def test_non_suffix_structure_detected(self):
        import dataclasses

        grid = solve_bellman(base_params(), n=512)
        f1 = grid.f1.copy()
        f1[100] = grid.f2[100] + grid.params.c_p_uso + 1.0  # isolated spike
        broken = dataclasses.replace(grid, f1=f1)
        with pytest.raises(NonThresholdStructure):
            extract_policy(broken)


class TestFDifference:
    def test_equal_cost_bounds(self):
        # Replace-always regime with c_p_so = c_p_uso = c_p: D(0) = c_p,
        # D increasing, and c_p < D(tau) < (lam c_p + mu1 c_c)/(mu1+mu2+lam).
        p = ModelParams(1.0, 0.4, 0.5, 2.0, 15000.0, 4000.0, 4000.0)
        fd = f_difference(p, ThresholdPolicy.always())
        c_p = 4000.0
        upper = (p.lam * c_p + p.mu1 * p.c_c) / (p.mu1 + p.mu2 + p.lam)
        assert fd.d[0] == pytest.approx(c_p)
        assert fd.increasing
        assert c_p < fd.d[-1] < upper

    def test_lambda_zero_monotone_to_fixed_point(self):
        p = base_params(lam=0.0)
        fd = f_difference(p, ThresholdPolicy.so_only())
        limit = p.mu1 * p.c_c / (p.mu1 + p.mu2)
        assert fd.increasing
        assert (fd.d <= limit + 1e-9).all()
        # Finite-difference check of D' = -(mu1+mu2) D + mu1 c_c.
        h = fd.t[1] - fd.t[0]
        deriv = np.gradient(fd.d, h)
        expected = -(p.mu1 + p.mu2) * fd.d + p.mu1 * p.c_c
        assert np.allclose(deriv[1:-1], expected[1:-1], rtol=1e-3, atol=1e-6 * limit)

    def test_crossing_at_t_star(self, rng):
        found = 0
        while found < 20:
            p = random_params(rng)
            res = optimal_policy(p)
            if res.regime is not Regime.TIME_DEPENDENT:
                continue
            found += 1
            fd = f_difference(p, res.policy)
            assert fd.crossing_uso == pytest.approx(res.t_star, rel=1e-9)

    def test_increasing_above_threshold_in_case_i(self, rng):
        found = 0
        while found < 20:
            p = random_params(rng)
            res = optimal_policy(p)
            if res.regime not in (Regime.TIME_DEPENDENT, Regime.REPLACE_ALWAYS):
                continue
            found += 1
            fd = f_difference(p, res.policy)
            above = fd.t >= res.policy.uso_threshold
            assert (np.diff(fd.d[above]) > 0).all()

    def test_matches_bellman_gap(self):
        p = base_params()
        grid = solve_bellman(p, n=2048)
        fd = f_difference(p, optimal_policy(p).policy, g=grid.g, n=2048)
        assert np.allclose(fd.d, grid.f1 - grid.f2, atol=5e-3 * p.c_c * grid.h)
