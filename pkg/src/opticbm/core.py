"""Domain types for the three-state opportunistic-replacement model.

A single component degrades perfect (2) -> satisfactory (1) -> failure,
with exponential sojourns at rates mu2 and mu1. Failures trigger an
immediate corrective replacement at cost c_c. Preventive replacement is
possible at scheduled opportunities (every tau time units, cost c_p_so)
and at unscheduled opportunities (Poisson rate lambda, cost c_p_uso).

All types here are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

#: Sentinel threshold meaning "never replace at an unscheduled opportunity".
NEVER = math.inf


class ValidationError(ValueError):
    """Base class for parameter/policy validation failures."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NonPositiveRate(ValidationError):
    pass


class NonPositivePeriod(ValidationError):
    pass


class CostOrderingViolated(ValidationError):
    pass


class DomainError(ValueError):
    """An argument falls outside its mathematical domain."""


class UnsupportedPolicy(ValueError):
    """The requested evaluator does not cover this policy family."""


class ComponentState(Enum):
    """Condition of the component between events.

    Failure is instantaneous (immediate corrective replacement), so only
    states 1 and 2 are ever persisted.
    """

    SATISFACTORY = 1
    PERFECT = 2


class EpochKind(Enum):
    """Kind of epoch in the embedded decision process.

    SC = autonomous state change (no decision), SO = scheduled
    opportunity (residual time is 0 by definition), USO = unscheduled
    opportunity.
    """

    SC = "SC"
    SO = "SO"
    USO = "USO"


@dataclass(frozen=True)
class ModelParams:
    """Validated model parameters.

    Rates are per unit time; costs are per replacement. Invariants:
    mu1, mu2, tau > 0; lam >= 0; 0 < c_p_so <= c_p_uso < c_c.
    """

    mu1: float
    mu2: float
    lam: float
    tau: float
    c_c: float
    c_p_so: float
    c_p_uso: float

    def __post_init__(self):
        for name in ("mu1", "mu2"):
            if not getattr(self, name) > 0:
                raise NonPositiveRate(name, "must be > 0")
        if self.lam < 0:
            raise NonPositiveRate("lam", "must be >= 0")
        if not self.tau > 0:
            raise NonPositivePeriod("tau", "must be > 0")
        if not self.c_p_so > 0:
            raise CostOrderingViolated("c_p_so", "must be > 0")
        if self.c_p_so > self.c_p_uso:
            raise CostOrderingViolated("c_p_so", "must be <= c_p_uso")
        if not self.c_p_uso < self.c_c:
            raise CostOrderingViolated("c_p_uso", "must be < c_c")


def validate_params(raw: Mapping[str, float] | ModelParams) -> ModelParams:
    """Build a validated ModelParams from a mapping or pass one through.

    Accepts "lambda" as an alias for the "lam" field (JSON scenarios use
    the former; Python cannot).
    """
    if isinstance(raw, ModelParams):
        return raw
    data = dict(raw)
    if "lambda" in data:
        data["lam"] = data.pop("lambda")
    required = ("mu1", "mu2", "lam", "tau", "c_c", "c_p_so", "c_p_uso")
    missing = [k for k in required if k not in data]
    if missing:
        raise ValidationError(missing[0], "missing required field")
    extra = set(data) - set(required)
    if extra:
        raise ValidationError(sorted(extra)[0], "unknown field")
    return ModelParams(**{k: float(data[k]) for k in required})


@dataclass(frozen=True)
class ThresholdPolicy:
    """Stationary replacement policy for a state-1 component.

    State-2 components are never replaced. At a scheduled opportunity the
    component is replaced iff ``replace_at_so``. At an unscheduled
    opportunity it is replaced iff the residual time until the next
    scheduled opportunity is >= ``uso_threshold`` (NEVER disables USO
    replacement entirely).
    """

    replace_at_so: bool
    uso_threshold: float = NEVER

    def __post_init__(self):
        if not (self.uso_threshold >= 0):
            raise DomainError("uso_threshold must be >= 0 or NEVER")

    @classmethod
    def never(cls) -> "ThresholdPolicy":
        """The do-nothing policy (corrective replacements only)."""
        return cls(replace_at_so=False, uso_threshold=NEVER)

    @classmethod
    def always(cls) -> "ThresholdPolicy":
        """Replace at every opportunity while in state 1."""
        return cls(replace_at_so=True, uso_threshold=0.0)

    @classmethod
    def so_only(cls) -> "ThresholdPolicy":
        """Replace only at scheduled opportunities."""
        return cls(replace_at_so=True, uso_threshold=NEVER)


@dataclass(frozen=True)
class CostBreakdown:
    """Long-run average cost per unit time, split by replacement type."""

    corrective: float
    preventive_uso: float
    preventive_so: float

    def __post_init__(self):
        for name in ("corrective", "preventive_uso", "preventive_so"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")

    @property
    def total(self) -> float:
        return self.corrective + self.preventive_uso + self.preventive_so
