"""Monte Carlo renewal-reward simulator for threshold policies.

Cycles are the periods between consecutive scheduled opportunities
(deterministic length tau). Each cycle draws from its own RNG substream,
so results are bit-deterministic regardless of how cycles are chunked
across worker threads.

The hot loop lives in a compiled extension (opticbm._ckernel) with a
pure-Python twin (opticbm._pykernel); the two produce bit-identical
output. Set OPTICBM_PURE=1 to force the fallback, OPTICBM_THREADS=k to
parallelize across cycle chunks (only effective when replace_at_so,
where cycles are independent).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import NEVER, DomainError, ModelParams, ThresholdPolicy, ValidationError

if os.environ.get("OPTICBM_PURE"):
    from . import _pykernel as _kernel
else:
    try:
        from . import _ckernel as _kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernel as _kernel  # type: ignore[no-redef]

BACKEND = _kernel.BACKEND

_Z95 = 1.959963984540054


class ProbeOutOfRange(DomainError):
    pass


@dataclass(frozen=True)
class SimConfig:
    cycles: int
    seed: int = 0
    #: Cycles discarded before statistics; only needed when the policy
    #: does not replace at scheduled opportunities (cycles then are not
    #: independent).
    warmup_cycles: int = 0

    def __post_init__(self):
        if self.cycles < 1:
            raise ValidationError("cycles", "must be >= 1")
        if not 0 <= self.warmup_cycles < self.cycles:
            raise ValidationError("warmup_cycles", "must be in [0, cycles)")


@dataclass(frozen=True)
class SimReport:
    mean_cost_rate: float
    ci_halfwidth: float
    failures: int
    uso_replacements: int
    so_replacements: int
    #: Per-cycle total costs after warmup (read-only view), for diagnostics.
    per_cycle_costs: Optional[np.ndarray] = None

    @property
    def total_cost(self) -> float:
        return float(self.per_cycle_costs.sum()) if self.per_cycle_costs is not None else math.nan


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("OPTICBM_THREADS", "1")))
    except ValueError:
        return 1


def _run_kernel(params: ModelParams, policy: ThresholdPolicy, cfg: SimConfig,
                probe_times: np.ndarray):
    """Run all cycles, chunked across threads when cycles are independent."""
    n = cfg.cycles
    fail = np.zeros(n, dtype=np.int64)
    uso = np.zeros(n, dtype=np.int64)
    so = np.zeros(n, dtype=np.int64)
    t_tilde = policy.uso_threshold
    args = (params.mu1, params.mu2, params.lam, params.tau, t_tilde,
            policy.replace_at_so, cfg.seed & (2**64 - 1))

    workers = _threads()
    if policy.replace_at_so and workers > 1 and n >= 2 * workers:
        bounds = np.linspace(0, n, workers + 1, dtype=np.int64)
        hits = [np.zeros(len(probe_times), dtype=np.int64) for _ in range(workers)]

        def job(w):
            lo, hi = int(bounds[w]), int(bounds[w + 1])
            _kernel.run_cycles(*args, lo, hi - lo, 2, probe_times,
                               fail[lo:hi], uso[lo:hi], so[lo:hi], hits[w])

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(job, range(workers)))
        probe_hits = np.sum(hits, axis=0, dtype=np.int64) if hits else np.zeros(0, np.int64)
    else:
        probe_hits = np.zeros(len(probe_times), dtype=np.int64)
        _kernel.run_cycles(*args, 0, n, 2, probe_times, fail, uso, so, probe_hits)
    return fail, uso, so, probe_hits


def simulate(params: ModelParams, policy: ThresholdPolicy, cfg: SimConfig) -> SimReport:
    """Estimate the long-run average cost rate of a policy.

    With replace_at_so the per-cycle costs are iid (every cycle starts
    with a perfect component) and the CI comes from their sample
    standard deviation; otherwise batch means over 100 batches are used
    after the configured warmup.
    """
    fail, uso, so, _ = _run_kernel(params, policy, cfg,
                                   np.zeros(0, dtype=np.float64))
    w = cfg.warmup_cycles
    fail, uso, so = fail[w:], uso[w:], so[w:]
    nc = len(fail)
    # Exact accounting: integer event counts, one multiplication each.
    n_fail = int(fail.sum())
    n_uso = int(uso.sum())
    n_so = int(so.sum())
    total_cost = params.c_c * n_fail + params.c_p_uso * n_uso + params.c_p_so * n_so
    mean_rate = total_cost / (nc * params.tau)

    costs = (params.c_c * fail + params.c_p_uso * uso + params.c_p_so * so).astype(np.float64)
    if policy.replace_at_so or nc < 200:
        sd = float(costs.std(ddof=1)) if nc > 1 else 0.0
        hw = _Z95 * sd / (math.sqrt(nc) * params.tau)
    else:
        nb = 100
        per_batch = nc // nb
        batch_rates = costs[: nb * per_batch].reshape(nb, per_batch).mean(axis=1) / params.tau
        hw = _Z95 * float(batch_rates.std(ddof=1)) / math.sqrt(nb)
    costs.setflags(write=False)
    return SimReport(
        mean_cost_rate=mean_rate,
        ci_halfwidth=hw,
        failures=n_fail,
        uso_replacements=n_uso,
        so_replacements=n_so,
        per_cycle_costs=costs,
    )


def estimate_p1(params: ModelParams, policy: ThresholdPolicy, cfg: SimConfig,
                probe_times: Sequence[float]) -> np.ndarray:
    """Empirical P(state 1) at each residual time in probe_times."""
    if not policy.replace_at_so:
        raise DomainError("estimate_p1 requires a replace-at-SO policy")
    probes = np.asarray(probe_times, dtype=np.float64)
    if np.any((probes < 0) | (probes >= params.tau)):
        raise ProbeOutOfRange(f"probe times must lie in [0, {params.tau})")
    # Kernel probes run on the in-cycle clock; residual t means tau - t.
    in_cycle = params.tau - probes
    order = np.argsort(in_cycle, kind="stable")
    _, _, _, hits = _run_kernel(params, policy, cfg, np.ascontiguousarray(in_cycle[order]))
    out = np.empty(len(probes), dtype=np.float64)
    out[order] = hits / cfg.cycles
    return out
