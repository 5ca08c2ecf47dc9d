"""Independent verification via a discretized average-cost SMDP solver.

The decision process lives on states (i, j, t): component condition
i in {1, 2}, epoch kind j in {SC, SO, USO}, residual time t to the next
scheduled opportunity. With the auxiliary continuation functions

    F_i(t) = exp(-(mu_i+lam) t) * ( integral_0^t (mu_i V(i,SC,y)
             + lam V(i,USO,y) - g) exp((mu_i+lam) y) dy + V(i,SO,0) ),

the optimality equations reduce to

    V(1,SC,t) = c_c + F_2(t)          V(2,SC,t) = F_1(t)
    V(i,USO,t) = min(F_i(t), c_p_uso + F_2(t))
    V(i,SO,0) = min(F_i(tau), c_p_so + F_2(tau)).

solve_bellman iterates this fixed point on a uniform grid (composite
trapezoid quadrature, relative value iteration anchored at (2,SO,0));
extract_policy reads the control limit off the converged grid; and
f_difference evaluates the gap D(t) = F_1(t) - F_2(t) from its
piecewise-linear ODE in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import NEVER, ModelParams, ThresholdPolicy


class NoConvergence(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"no convergence after {iterations} sweeps (residual {residual:.3e})")


class NonThresholdStructure(RuntimeError):
    """The USO replace set on the grid is not a suffix interval [t_hat, tau)."""


@dataclass(frozen=True)
class ValueGrid:
    """Converged relative values on a uniform residual-time grid.

    Values are anchored so that V(2,SO,0) = 0. f1/f2 are the
    continuation functions at the grid nodes, kept because the policy is
    read off their difference.
    """

    params: ModelParams
    t: np.ndarray  # n nodes on [0, tau]
    g: float
    v1_sc: np.ndarray
    v2_sc: np.ndarray
    v1_uso: np.ndarray
    v2_uso: np.ndarray
    v1_so0: float
    v2_so0: float
    f1: np.ndarray
    f2: np.ndarray

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def h(self) -> float:
        return float(self.t[1] - self.t[0])


def _cumtrapz(y: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum((y[1:] + y[:-1]) * (0.5 * h), out=out[1:])
    return out


def _continuation(t, h, mu, lam, v_sc, v_uso, v_so0, g):
    """F(t) by composite trapezoid with exact exponential weights."""
    w = np.exp((mu + lam) * t)
    integral = _cumtrapz((mu * v_sc + lam * v_uso - g) * w, h)
    return (integral + v_so0) / w


def solve_bellman(params: ModelParams, n: int = 2048, tol: Optional[float] = None,
                  max_iter: int = 100000) -> ValueGrid:
    """Solve the discretized optimality equations by relative value iteration.

    Each sweep recomputes F_1, F_2 from the current values, applies the
    minimum operators, and re-anchors: g absorbs the anchor value scaled
    by the anchor state's expected sojourn time. Terminates when the span
    of the per-sweep value changes and the g drift both fall below tol.
    """
    if n < 64:
        raise ValueError("n must be >= 64")
    if tol is None:
        tol = 1e-9 * params.c_c
    mu1, mu2, lam, tau = params.mu1, params.mu2, params.lam, params.tau
    t = np.linspace(0.0, tau, n)
    h = t[1] - t[0]

    v1_sc = np.zeros(n)
    v2_sc = np.zeros(n)
    v1_uso = np.zeros(n)
    v2_uso = np.zeros(n)
    v1_so0 = 0.0
    v2_so0 = 0.0
    g = 0.0
    # Expected time to the next epoch from the anchor (2,SO,0) under "do
    # nothing": min of tau, Exp(mu2) and Exp(lam).
    s_anchor = (1.0 - math.exp(-(mu2 + lam) * tau)) / (mu2 + lam)

    span = math.inf
    for it in range(1, max_iter + 1):
        f1 = _continuation(t, h, mu1, lam, v1_sc, v1_uso, v1_so0, g)
        f2 = _continuation(t, h, mu2, lam, v2_sc, v2_uso, v2_so0, g)
        n1_sc = params.c_c + f2
        n2_sc = f1
        n1_uso = np.minimum(f1, params.c_p_uso + f2)
        n2_uso = np.minimum(f2, params.c_p_uso + f2)
        n1_so0 = min(f1[-1], params.c_p_so + f2[-1])
        n2_so0 = min(f2[-1], params.c_p_so + f2[-1])

        anchor = n2_so0
        # Damped g step: the anchor-sojourn Newton step overshoots when
        # other states have much longer epochs, so take half of it.
        g += 0.5 * anchor / s_anchor

        changes = np.concatenate((
            n1_sc - v1_sc, n2_sc - v2_sc, n1_uso - v1_uso, n2_uso - v2_uso,
            [n1_so0 - v1_so0, n2_so0 - v2_so0],
        )) - anchor
        span = float(changes.max() - changes.min())

        v1_sc, v2_sc = n1_sc - anchor, n2_sc - anchor
        v1_uso, v2_uso = n1_uso - anchor, n2_uso - anchor
        v1_so0, v2_so0 = n1_so0 - anchor, n2_so0 - anchor

        if span < tol and 0.5 * abs(anchor) / s_anchor < tol:
            f1 = _continuation(t, h, mu1, lam, v1_sc, v1_uso, v1_so0, g)
            f2 = _continuation(t, h, mu2, lam, v2_sc, v2_uso, v2_so0, g)
            return ValueGrid(params, t, g, v1_sc, v2_sc, v1_uso, v2_uso,
                             v1_so0, v2_so0, f1, f2)
    raise NoConvergence(max_iter, span)


@dataclass(frozen=True)
class ExtractedPolicy:
    policy: ThresholdPolicy
    #: Smallest grid node where USO replacement begins, or None.
    threshold: Optional[float]


def extract_policy(grid: ValueGrid) -> ExtractedPolicy:
    """Read the greedy policy off a converged grid.

    Replace at a USO where F_1 - F_2 exceeds c_p_uso, and at the SO if
    the gap at tau exceeds c_p_so. The USO replace set must be a suffix
    interval of the grid (control-limit structure); anything else means
    the solver failed or the grid is too coarse.
    """
    p = grid.params
    gap = grid.f1 - grid.f2
    replace = gap > p.c_p_uso
    replace_at_so = bool(gap[-1] > p.c_p_so)
    if not replace.any():
        return ExtractedPolicy(ThresholdPolicy(replace_at_so, NEVER), None)
    k0 = int(np.argmax(replace))
    if not replace[k0:].all():
        raise NonThresholdStructure("USO replace set is not a suffix interval")
    t_hat = float(grid.t[k0])
    return ExtractedPolicy(ThresholdPolicy(replace_at_so, t_hat), t_hat)


@dataclass(frozen=True)
class FDifference:
    """The gap D(t) = F_1(t) - F_2(t) along the residual-time grid."""

    t: np.ndarray
    d: np.ndarray
    increasing: bool
    #: Where D crosses c_p_uso / c_p_so, if it does so within [0, tau].
    crossing_uso: Optional[float]
    crossing_so: Optional[float]


def f_difference(params: ModelParams, policy: ThresholdPolicy,
                 g: Optional[float] = None, boundary: Optional[float] = None,
                 n: int = 2048) -> FDifference:
    """Evaluate D(t) in closed form under a fixed threshold policy.

    On intervals where the USO action is constant D obeys a linear ODE:
    D' = -(mu1+mu2) D + mu1 c_c where USOs are ignored (t < t_tilde) and
    D' = -(mu1+mu2+lam) D + lam c_p_uso + mu1 c_c where they replace.
    The average cost g cancels out of the difference, so the ``g``
    argument only tags the solution it belongs to. ``boundary`` is D(0);
    for replace-at-SO policies D(0) = c_p_so identically (default).
    """
    mu1, mu2, lam, tau = params.mu1, params.mu2, params.lam, params.tau
    m = mu1 + mu2
    if boundary is None:
        boundary = params.c_p_so
    t_tilde = min(policy.uso_threshold, tau)

    t = np.linspace(0.0, tau, n)
    k_low = mu1 * params.c_c / m
    k_high = (lam * params.c_p_uso + mu1 * params.c_c) / (m + lam)
    d = np.empty(n)
    low = t < t_tilde
    d[low] = k_low + (boundary - k_low) * np.exp(-m * t[low])
    d_break = k_low + (boundary - k_low) * math.exp(-m * t_tilde)
    d[~low] = k_high + (d_break - k_high) * np.exp(-(m + lam) * (t[~low] - t_tilde))

    increasing = bool(np.all(np.diff(d) > 0))

    def crossing(level: float) -> Optional[float]:
        # D is monotone on each regime piece; solve analytically.
        for lo, hi, k, rate, d_lo in ((0.0, t_tilde, k_low, m, boundary),
                                      (t_tilde, tau, k_high, m + lam, d_break)):
            if hi <= lo or d_lo == k:
                continue
            ratio = (k - d_lo) / (k - level) if k != level else math.nan
            if ratio >= 1.0:
                x = lo + math.log(ratio) / rate
                if lo <= x <= hi:
                    return x
        return None

    return FDifference(t, d, increasing,
                       crossing_uso=crossing(params.c_p_uso),
                       crossing_so=crossing(params.c_p_so))
