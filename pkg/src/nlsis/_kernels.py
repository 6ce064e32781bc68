"""Compiled inner loops for the collapsed clique and star chains.

Every jump consumes exactly two uniforms from the supplied generator:
one turned into the exponential waiting time by inverse CDF, one scaled
by the total rate to pick the event. The fixed draw pattern is what
makes seeded runs reproducible across entry points.

Stop reasons are small ints so the kernels stay tuple-returning:
0 absorbed, 1 time limit, 2 jump limit, 3 target level reached.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STOP_ABSORBED = 0
STOP_TIME = 1
STOP_JUMPS = 2
STOP_TARGET = 3


@njit(cache=True)
def clique_run(up, i0, t_max, max_jumps, target, record, times, counts, rng):
    # up[i] = aggregate infection rate with i infected; healing rate is i.
    # target < 0 disables level detection. With record=True the arrays
    # receive one row per jump and must hold max_jumps entries.
    i = i0
    t = 0.0
    jumps = 0
    peak = i0
    if i == 0:
        return t, jumps, peak, STOP_ABSORBED, i
    if target >= 0 and i >= target:
        return t, jumps, peak, STOP_TARGET, i
    while True:
        total = i + up[i]
        u1 = rng.random()
        dt = -np.log1p(-u1) / total
        if t + dt > t_max:
            return t_max, jumps, peak, STOP_TIME, i
        t = t + dt
        u2 = rng.random() * total
        if u2 < up[i]:
            i += 1
        else:
            i -= 1
        jumps += 1
        if record:
            times[jumps - 1] = t
            counts[jumps - 1] = i
        if i > peak:
            peak = i
        if i == 0:
            return t, jumps, peak, STOP_ABSORBED, i
        if target >= 0 and i >= target:
            return t, jumps, peak, STOP_TARGET, i
        if jumps >= max_jumps:
            return t, jumps, peak, STOP_JUMPS, i


@njit(cache=True)
def star_run(n, lam, center_rate, i0, c0, t_max, max_jumps, record, times, counts, centers, rng):
    # Two-layer chain: i leaves infected, c = 1 while the center is
    # infected. center_rate[i] is the reinfection rate of a healthy
    # center with i infected leaves. Absorbing state is (0, 0).
    i = i0
    c = c0
    t = 0.0
    jumps = 0
    peak = i0 + c0
    if i == 0 and c == 0:
        return t, jumps, peak, STOP_ABSORBED, i, c
    while True:
        if c == 1:
            leaf_up = lam * (n - i)
            total = leaf_up + i + 1.0
        else:
            leaf_up = 0.0
            total = i + center_rate[i]
        u1 = rng.random()
        dt = -np.log1p(-u1) / total
        if t + dt > t_max:
            return t_max, jumps, peak, STOP_TIME, i, c
        t = t + dt
        u2 = rng.random() * total
        if c == 1:
            if u2 < leaf_up:
                i += 1
            elif u2 < leaf_up + i:
                i -= 1
            else:
                c = 0
        else:
            if u2 < i:
                i -= 1
            else:
                c = 1
        jumps += 1
        if record:
            times[jumps - 1] = t
            counts[jumps - 1] = i
            centers[jumps - 1] = c
        if i + c > peak:
            peak = i + c
        if i == 0 and c == 0:
            return t, jumps, peak, STOP_ABSORBED, i, c
        if jumps >= max_jumps:
            return t, jumps, peak, STOP_JUMPS, i, c


@njit(cache=True)
def coupled_clique_run(up_lo, up_hi, i0_lo, i0_hi, big_lambda, t_max, max_jumps,
                       record, times, lo_path, hi_path, rng):
    # Uniformised pair: both chains advance on one Poisson(big_lambda)
    # clock and read the same uniform per epoch. Infection regions sit
    # at the bottom of [0, 1), healing regions at the top, so a chain
    # with pointwise larger infection rates can never fall below its
    # partner. Returns -1.0 for a survival time that never happened.
    inv = 1.0 / big_lambda
    i_lo = i0_lo
    i_hi = i0_hi
    t = 0.0
    jumps = 0
    peak_lo = i0_lo
    peak_hi = i0_hi
    surv_lo = -1.0
    surv_hi = -1.0
    jumps_lo = 0
    jumps_hi = 0
    violations = 0
    if i_lo == 0:
        surv_lo = 0.0
    if i_hi == 0:
        surv_hi = 0.0
    reason = STOP_ABSORBED
    while True:
        if surv_lo >= 0.0 and surv_hi >= 0.0:
            reason = STOP_ABSORBED
            break
        u1 = rng.random()
        dt = -np.log1p(-u1) * inv
        if t + dt > t_max:
            reason = STOP_TIME
            break
        t = t + dt
        u = rng.random()
        if surv_lo < 0.0:
            if u < up_lo[i_lo] * inv:
                i_lo += 1
            elif u > 1.0 - i_lo * inv:
                i_lo -= 1
        if surv_hi < 0.0:
            if u < up_hi[i_hi] * inv:
                i_hi += 1
            elif u > 1.0 - i_hi * inv:
                i_hi -= 1
        jumps += 1
        if surv_lo < 0.0:
            jumps_lo = jumps
        if surv_hi < 0.0:
            jumps_hi = jumps
        if record:
            times[jumps - 1] = t
            lo_path[jumps - 1] = i_lo
            hi_path[jumps - 1] = i_hi
        if i_lo > peak_lo:
            peak_lo = i_lo
        if i_hi > peak_hi:
            peak_hi = i_hi
        if i_lo > i_hi:
            violations += 1
        if i_lo == 0 and surv_lo < 0.0:
            surv_lo = t
        if i_hi == 0 and surv_hi < 0.0:
            surv_hi = t
        if jumps >= max_jumps:
            if surv_lo >= 0.0 and surv_hi >= 0.0:
                reason = STOP_ABSORBED
            else:
                reason = STOP_JUMPS
            break
    return (surv_lo, surv_hi, t, jumps, jumps_lo, jumps_hi,
            peak_lo, peak_hi, violations, reason, i_lo, i_hi)
