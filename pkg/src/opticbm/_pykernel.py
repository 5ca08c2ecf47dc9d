"""Pure-Python simulation kernel.

Reference implementation of the per-cycle event loop. The compiled
kernel in _ckernel.pyx mirrors this file draw for draw: both consume the
same SplitMix64 substream per cycle and perform the same floating-point
operations in the same order, so their outputs are bit-identical.

Stream derivation: cycle k uses the SplitMix64 stream whose initial
state is mix(mix(seed + (k+1)*GAMMA)); uniforms are the top 53 bits,
exponentials are inverse-CDF via log1p.
"""

from __future__ import annotations

import math

BACKEND = "python"

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix(z: int) -> int:
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def run_cycles(
    mu1: float,
    mu2: float,
    lam: float,
    tau: float,
    t_tilde: float,
    replace_at_so: bool,
    seed: int,
    start_cycle: int,
    n_cycles: int,
    start_state: int,
    probe_times,  # ascending in-cycle times, may be empty
    fail_counts,  # int64[n_cycles] out
    uso_counts,  # int64[n_cycles] out
    so_counts,  # int64[n_cycles] out
    probe_hits,  # int64[len(probe_times)] out, counts of state-1 observations
) -> int:
    """Simulate n_cycles periods of length tau; returns the final state."""
    seed &= _MASK
    n_probes = len(probe_times)
    state = start_state
    for k in range(n_cycles):
        s = _mix(_mix((seed + (start_cycle + k + 1) * _GAMMA) & _MASK))

        def draw(rate: float) -> float:
            nonlocal s
            s = (s + _GAMMA) & _MASK
            u = (_mix(s) >> 11) * _INV53
            return -math.log1p(-u) / rate

        t = 0.0
        t_sc = draw(mu2 if state == 2 else mu1)
        t_uso = draw(lam) if lam > 0.0 else math.inf
        pj = 0
        nf = nu = ns = 0
        while True:
            # Tie priority: SC before USO before SO.
            if t_sc <= t_uso and t_sc <= tau:
                ev_t, ev = t_sc, 0
            elif t_uso <= tau:
                ev_t, ev = t_uso, 1
            else:
                ev_t, ev = tau, 2
            while pj < n_probes and probe_times[pj] < ev_t:
                if state == 1:
                    probe_hits[pj] += 1
                pj += 1
            if ev == 2:
                # Probes at exactly tau observe the pre-action state.
                while pj < n_probes and probe_times[pj] <= tau:
                    if state == 1:
                        probe_hits[pj] += 1
                    pj += 1
                if replace_at_so and state == 1:
                    ns += 1
                    state = 2
                break
            t = ev_t
            if ev == 0:
                if state == 2:
                    state = 1
                    t_sc = t + draw(mu1)
                else:
                    nf += 1
                    state = 2
                    t_sc = t + draw(mu2)
            else:
                if state == 1 and tau - t >= t_tilde:
                    nu += 1
                    state = 2
                    t_sc = t + draw(mu2)
                t_uso = t + draw(lam)
        fail_counts[k] = nf
        uso_counts[k] = nu
        so_counts[k] = ns
    return state
