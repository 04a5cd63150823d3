"""Numba kernels: counter-based RNG, compensated sums, and the hot loops.

Everything here is deterministic for fixed inputs regardless of thread count:
parallel loops only ever split work whose per-item result is computed
sequentially (per draw, per node, per sample x), and reductions over items
happen outside in fixed order.
"""

from __future__ import annotations

import math

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

# the default TBB probe warns on this image; omp behaves identically for us
_numba_config.THREADING_LAYER = "omp"

_U64 = np.uint64

# splitmix64 finalizer constants
_M1 = _U64(0xBF58476D1CE4E5B9)
_M2 = _U64(0x94D049BB133111EB)
_GOLD = _U64(0x9E3779B97F4A7C15)

# phase lookup: e^{2 pi i k / 2^11} plus a short series for the remainder
_PH_BITS = 11
_PH_SIZE = 1 << _PH_BITS
_PH_ANG = 2.0 * math.pi / _PH_SIZE
_PH_COS = np.cos(_PH_ANG * np.arange(_PH_SIZE))
_PH_SIN = np.sin(_PH_ANG * np.arange(_PH_SIZE))
_TWO_PI_53 = 2.0 * math.pi / 9007199254740992.0  # 2 pi / 2^53


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _M1
    z = (z ^ (z >> _U64(27))) * _M2
    return z ^ (z >> _U64(31))


@njit(cache=True)
def zero_stream_keys(seed, n):
    """One RNG key per zero index; draw counters hash against these."""
    out = np.empty(n, dtype=np.uint64)
    base = _mix64(_U64(seed) ^ _GOLD)
    for i in range(n):
        out[i] = _mix64(base + _U64(i) * _M2)
    return out


@njit(cache=True, inline="always")
def _phase(key, ctr, cos_tab, sin_tab):
    """cos/sin of 2*pi*U for the counter-based uniform U in [0,1)."""
    v = _mix64(key ^ (_U64(ctr) * _GOLD))
    u = v >> _U64(11)
    idx = np.int64(u >> _U64(42))
    x = np.float64(u & _U64(0x3FFFFFFFFFF)) * _TWO_PI_53
    x2 = x * x
    cl = 1.0 + x2 * (-0.5 + x2 * (1.0 / 24.0))
    sl = x * (1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0)))
    ct = cos_tab[idx]
    st = sin_tab[idx]
    return ct * cl - st * sl, st * cl + ct * sl


@njit(cache=True, parallel=True)
def sample_draws(a, b, keys, n, draw0):
    """Draw n samples of X_j = sum_gamma [a_{gamma j} cos phi + b_{gamma j} sin phi].

    One fresh phase per zero per draw, shared across the r coordinates;
    Kahan accumulation over zeros in ascending order.
    """
    nz, r = a.shape
    out = np.empty((n, r), dtype=np.float64)
    cos_tab = _PH_COS
    sin_tab = _PH_SIN
    for d in prange(n):
        s = np.zeros(r, dtype=np.float64)
        c = np.zeros(r, dtype=np.float64)
        ctr = draw0 + d
        for i in range(nz):
            cs, sn = _phase(keys[i], ctr, cos_tab, sin_tab)
            for j in range(r):
                term = a[i, j] * cs + b[i, j] * sn
                y = term - c[j]
                t = s[j] + y
                c[j] = (t - s[j]) - y
                s[j] = t
        for j in range(r):
            out[d, j] = s[j]
    return out


@njit(cache=True)
def kahan_sum(values):
    s = 0.0
    c = 0.0
    for i in range(values.size):
        y = values[i] - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(cache=True)
def psi_scan(values, logs, queries, out, qstart, s, c):
    """Stream prime powers (ascending) through a Kahan sum, capturing the
    running psi at each query before the first value exceeding it.

    Returns (next query index, sum, compensation) so state carries across
    segments; results are therefore independent of segmentation.
    """
    qi = qstart
    nq = queries.size
    for i in range(values.size):
        v = values[i]
        while qi < nq and queries[qi] < v:
            out[qi] = s
            qi += 1
        y = logs[i] - c
        t = s + y
        c = (t - s) - y
        s = t
    return qi, s, c


@njit(cache=True, parallel=True)
def explicit_sum(gammas, wre, wim, us):
    """E^(Z)(e^u) = -2 sum_gamma Re(w(rho) e^{i gamma u}), Kahan in gamma."""
    n = us.size
    out = np.empty(n, dtype=np.float64)
    for k in prange(n):
        u = us[k]
        s = 0.0
        c = 0.0
        for i in range(gammas.size):
            ang = gammas[i] * u
            term = wre[i] * math.cos(ang) - wim[i] * math.sin(ang)
            y = term - c
            t = s + y
            c = (t - s) - y
            s = t
        out[k] = -2.0 * s
    return out


@njit(cache=True, parallel=True)
def explicit_sum_grid(gammas, wre, wim, u0, du, n_nodes):
    """explicit_sum on the uniform grid u0 + i*du, via per-zero phase rotation.

    Nodes are processed in fixed chunks of 1024; within a chunk each zero's
    phase advances by complex rotation (re-anchored exactly at every chunk
    start, so drift stays below ~1e-13 relative).  Node values never depend
    on thread count.
    """
    chunk = 1024
    out = np.empty(n_nodes, dtype=np.float64)
    n_chunks = (n_nodes + chunk - 1) // chunk
    for ci in prange(n_chunks):
        lo = ci * chunk
        hi = min(lo + chunk, n_nodes)
        m = hi - lo
        s = np.zeros(m, dtype=np.float64)
        c = np.zeros(m, dtype=np.float64)
        for i in range(gammas.size):
            g = gammas[i]
            ang0 = g * (u0 + lo * du)
            pr = math.cos(ang0)
            pi = math.sin(ang0)
            dr = math.cos(g * du)
            di = math.sin(g * du)
            ar = wre[i]
            ai = wim[i]
            for k in range(m):
                term = ar * pr - ai * pi
                y = term - c[k]
                t = s[k] + y
                c[k] = (t - s[k]) - y
                s[k] = t
                npr = pr * dr - pi * di
                pi = pr * di + pi * dr
                pr = npr
        for k in range(m):
            out[lo + k] = -2.0 * s[k]
    return out


@njit(cache=True)
def pair_count_within(sa, sb, thr):
    """#{(i, j) : |sa[i] - sb[j]| <= thr} for ascending arrays sa, sb."""
    n, m = sa.size, sb.size
    lo = 0
    hi = 0
    total = 0
    for i in range(n):
        x = sa[i]
        while lo < m and sb[lo] < x - thr:
            lo += 1
        if hi < lo:
            hi = lo
        while hi < m and sb[hi] <= x + thr:
            hi += 1
        total += hi - lo
    return total
