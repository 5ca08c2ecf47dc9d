"""Closed-form derivation of the optimal replacement policy.

The optimal long-run average-cost policy never replaces a state-2
component. For state 1 it is a control-limit policy in the residual time
until the next scheduled opportunity: replace at scheduled opportunities
and at unscheduled opportunities with residual time >= t*, where

    t* = max(0, ln(((mu1+mu2)*c_p_so - mu1*c_c)
                   / ((mu1+mu2)*c_p_uso - mu1*c_c)) / (mu1+mu2)),

whenever (mu1+mu2)*c_p_so < mu1*c_c, and do nothing otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .core import ModelParams, ThresholdPolicy


class Regime(Enum):
    """Which analytic case produced the optimal policy."""

    NEVER_REPLACE = "NeverReplace"
    REPLACE_ALWAYS = "ReplaceAlways"
    REPLACE_SO_ONLY = "ReplaceSOOnly"
    TIME_DEPENDENT = "TimeDependent"
    INDIFFERENT = "Indifferent"


@dataclass(frozen=True)
class OptimalPolicyResult:
    policy: ThresholdPolicy
    regime: Regime
    #: Unclamped threshold; present for TIME_DEPENDENT, and for
    #: REPLACE_SO_ONLY when it arose from t* >= tau.
    t_star: Optional[float] = None


def optimal_policy(params: ModelParams) -> OptimalPolicyResult:
    """Optimal stationary policy for the given parameters.

    Regime comparisons are exact (no epsilon band): callers with noisy
    inputs should pre-round.
    """
    m = params.mu1 + params.mu2
    failure_gain = params.mu1 * params.c_c

    if m * params.c_p_so > failure_gain:
        return OptimalPolicyResult(ThresholdPolicy.never(), Regime.NEVER_REPLACE)
    if m * params.c_p_so == failure_gain:
        # Cost-wise indifferent at a scheduled opportunity; resolved to
        # do-nothing (fewer interventions at equal cost).
        return OptimalPolicyResult(ThresholdPolicy.never(), Regime.INDIFFERENT)
    if m * params.c_p_uso >= failure_gain:
        # USO replacement is never worthwhile; t* would be infinite.
        return OptimalPolicyResult(ThresholdPolicy.so_only(), Regime.REPLACE_SO_ONLY)

    num = m * params.c_p_so - failure_gain
    den = m * params.c_p_uso - failure_gain
    t_star = max(0.0, math.log(num / den) / m)
    if t_star >= params.tau:
        # Unreachable by any USO inside a cycle.
        return OptimalPolicyResult(
            ThresholdPolicy.so_only(), Regime.REPLACE_SO_ONLY, t_star=t_star
        )
    if t_star == 0.0:
        return OptimalPolicyResult(ThresholdPolicy.always(), Regime.REPLACE_ALWAYS)
    return OptimalPolicyResult(
        ThresholdPolicy(replace_at_so=True, uso_threshold=t_star),
        Regime.TIME_DEPENDENT,
        t_star=t_star,
    )
