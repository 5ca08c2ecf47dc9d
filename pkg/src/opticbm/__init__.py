"""Optimal condition-based replacement with scheduled and unscheduled opportunities."""

from .core import (
    NEVER,
    ComponentState,
    CostBreakdown,
    CostOrderingViolated,
    DomainError,
    EpochKind,
    ModelParams,
    NonPositivePeriod,
    NonPositiveRate,
    ThresholdPolicy,
    UnsupportedPolicy,
    ValidationError,
    validate_params,
)
from .cost import (
    average_cost,
    corrective_only_cost,
    p1_closed_form,
    so_only_cost,
    uso_only_cost,
)
from .policy import OptimalPolicyResult, Regime, optimal_policy
from .sim import BACKEND, ProbeOutOfRange, SimConfig, SimReport, estimate_p1, simulate
from .verifier import (
    FDifference,
    NoConvergence,
    NonThresholdStructure,
    ValueGrid,
    extract_policy,
    f_difference,
    solve_bellman,
)

__version__ = "0.1.0"
