"""Closed-form long-run average cost of threshold replacement policies.

For a policy that replaces at every scheduled opportunity and at
unscheduled opportunities with residual time >= t_tilde, cycles between
scheduled opportunities are renewal cycles of deterministic length tau,
and the long-run average cost is (expected cycle cost) / tau. The cycle
cost is driven by p1(t), the probability the component is satisfactory
when the residual time to the next scheduled opportunity is t; p1 solves
a two-regime linear ODE with a closed-form solution.

Also provides the degenerate policies: scheduled-only, unscheduled-only
and corrective-only replacement.
"""

from __future__ import annotations

import math

from .core import (
    NEVER,
    CostBreakdown,
    DomainError,
    ModelParams,
    ThresholdPolicy,
    UnsupportedPolicy,
)


def _p1_coeffs(params: ModelParams, t_tilde: float):
    """Shared constants of the p1 closed form.

    A is the stationary state-1 probability without USO removals, B the
    same with them; C is the matching constant at the regime breakpoint.
    """
    m = params.mu1 + params.mu2
    r = params.lam + m
    a = params.mu2 / m
    b = params.mu2 / r
    expo = r * (t_tilde - params.tau)
    assert expo <= 0.0, "breakpoint beyond the period: caller bug"
    c = b - a - b * math.exp(expo)
    return m, r, a, b, c


def p1_closed_form(params: ModelParams, t_tilde: float, t: float) -> float:
    """P(component in state 1 | residual time to next SO is t).

    Assumes the policy replaces at scheduled opportunities (each cycle
    starts in state 2) and at USOs with residual time >= t_tilde.
    """
    if not (0.0 <= t < params.tau):
        raise DomainError(f"t={t} outside [0, tau)")
    if not (0.0 <= t_tilde <= params.tau):
        raise DomainError(f"t_tilde={t_tilde} outside [0, tau]")
    m, r, a, b, c = _p1_coeffs(params, t_tilde)
    if t >= t_tilde:
        return b * (1.0 - math.exp(r * (t - params.tau)))
    return a + c * math.exp(m * (t - t_tilde))


def average_cost(params: ModelParams, policy: ThresholdPolicy) -> CostBreakdown:
    """Long-run average cost of a replace-at-SO threshold policy.

    Evaluated term by term from the closed form; the decomposition
    follows the cycle-cost expression

        c_p_so * p1(0)
        + (c_p_uso * lam + c_c * mu1) * int_{t_tilde}^{tau} p1
        + c_c * mu1 * int_0^{t_tilde} p1,

    divided by tau. The endpoints t_tilde in {0, tau} are included as
    continuous limits (replace-always and SO-only).
    """
    if not policy.replace_at_so:
        raise UnsupportedPolicy(
            "closed form requires replace_at_so; use the simulator or the "
            "Bellman solver for other policies"
        )
    t_tilde = policy.uso_threshold
    if t_tilde is NEVER or t_tilde == NEVER:
        t_tilde = params.tau
    if not (0.0 <= t_tilde <= params.tau):
        raise DomainError(f"uso_threshold={t_tilde} outside [0, tau]")

    m, r, a, b, c = _p1_coeffs(params, t_tilde)
    tau = params.tau
    # int_0^{t_tilde} p1 and int_{t_tilde}^{tau} p1, in closed form.
    int_low = a * t_tilde + c * (1.0 - math.exp(-m * t_tilde)) / m
    int_high = b * (tau - t_tilde - (1.0 - math.exp(r * (t_tilde - tau))) / r)
    p1_at_so = a + c * math.exp(-m * t_tilde)

    corrective = params.c_c * params.mu1 * (int_low + int_high) / tau
    preventive_uso = params.c_p_uso * params.lam * int_high / tau
    preventive_so = params.c_p_so * p1_at_so / tau
    return CostBreakdown(corrective, preventive_uso, preventive_so)


def so_only_cost(params: ModelParams) -> CostBreakdown:
    """Average cost when replacing only at scheduled opportunities."""
    m = params.mu1 + params.mu2
    a = params.mu2 / m
    weight = (1.0 - math.exp(-m * params.tau)) / (m * params.tau)
    corrective_rate = params.c_c * params.mu1 * a
    return CostBreakdown(
        corrective=corrective_rate * (1.0 - weight),
        preventive_uso=0.0,
        preventive_so=weight * params.mu2 * params.c_p_so,
    )


def uso_only_cost(params: ModelParams) -> CostBreakdown:
    """Average cost with only unscheduled opportunities (tau -> infinity).

    Replacement at USOs pays off only when (mu1+mu2)*c_p_uso < mu1*c_c;
    otherwise the optimal policy degenerates to corrective-only.
    """
    m = params.mu1 + params.mu2
    if m * params.c_p_uso >= params.mu1 * params.c_c:
        return corrective_only_cost(params)
    r = params.lam + m
    return CostBreakdown(
        corrective=params.c_c * params.mu1 * params.mu2 / r,
        preventive_uso=params.c_p_uso * params.lam * params.mu2 / r,
        preventive_so=0.0,
    )


def corrective_only_cost(params: ModelParams) -> CostBreakdown:
    """Average cost when the component is only replaced at failures."""
    m = params.mu1 + params.mu2
    return CostBreakdown(
        corrective=params.c_c * params.mu1 * params.mu2 / m,
        preventive_uso=0.0,
        preventive_so=0.0,
    )
