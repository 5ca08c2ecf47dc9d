# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Mirror of _pykernel.run_cycles, draw for draw; see that module for the
stream-derivation contract. Keep the two in lockstep."""

from libc.math cimport log1p, INFINITY

BACKEND = "cython"

cdef unsigned long long GAMMA = 0x9E3779B97F4A7C15ULL
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline unsigned long long _mix(unsigned long long z) nogil:
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z *= 0x94D049BB133111EBULL
    z ^= z >> 31
    return z


cdef inline double _draw(unsigned long long *s, double rate) nogil:
    s[0] = s[0] + GAMMA
    cdef double u = <double>(_mix(s[0]) >> 11) * INV53
    return -log1p(-u) / rate


def run_cycles(
    double mu1,
    double mu2,
    double lam,
    double tau,
    double t_tilde,
    bint replace_at_so,
    unsigned long long seed,
    long long start_cycle,
    long long n_cycles,
    int start_state,
    double[::1] probe_times,
    long long[::1] fail_counts,
    long long[::1] uso_counts,
    long long[::1] so_counts,
    long long[::1] probe_hits,
):
    cdef long long k
    cdef long long nf, nu, ns
    cdef int state = start_state
    cdef int ev
    cdef Py_ssize_t pj, n_probes = probe_times.shape[0]
    cdef unsigned long long s
    cdef double t, t_sc, t_uso, ev_t

    with nogil:
        for k in range(n_cycles):
            s = _mix(_mix(seed + <unsigned long long>(start_cycle + k + 1) * GAMMA))
            t = 0.0
            t_sc = _draw(&s, mu2 if state == 2 else mu1)
            t_uso = _draw(&s, lam) if lam > 0.0 else INFINITY
            pj = 0
            nf = nu = ns = 0
            while True:
                # Tie priority: SC before USO before SO.
                if t_sc <= t_uso and t_sc <= tau:
                    ev_t = t_sc
                    ev = 0
                elif t_uso <= tau:
                    ev_t = t_uso
                    ev = 1
                else:
                    ev_t = tau
                    ev = 2
                while pj < n_probes and probe_times[pj] < ev_t:
                    if state == 1:
                        probe_hits[pj] += 1
                    pj += 1
                if ev == 2:
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
                        t_sc = t + _draw(&s, mu1)
                    else:
                        nf += 1
                        state = 2
                        t_sc = t + _draw(&s, mu2)
                else:
                    if state == 1 and tau - t >= t_tilde:
                        nu += 1
                        state = 2
                        t_sc = t + _draw(&s, mu2)
                    t_uso = t + _draw(&s, lam)
            fail_counts[k] = nf
            uso_counts[k] = nu
            so_counts[k] = ns
    return state
