"""Segmented sieve: Lambda(n) ground truth, psi(x), and interval deviations.

psi queries stream every prime power in ascending order through a single
Kahan-compensated sum whose state carries across segments, so results are
bitwise independent of the segment size and identical between one batched
pass and repeated calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import RaceConfig

DEFAULT_CEILING = 10 ** 9
DEFAULT_SEGMENT = 1 << 20


def _simple_sieve(n: int) -> np.ndarray:
    """Primes <= n by a plain sieve of Eratosthenes."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _prime_powers(limit: int, base_primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Proper prime powers p^k <= limit (k >= 2) with Lambda = log p."""
    vals: list[int] = []
    logs: list[float] = []
    for p in base_primes:
        p = int(p)
        if p * p > limit:
            break
        q = p * p
        lp = math.log(p)
        while q <= limit:
            vals.append(q)
            logs.append(lp)
            q *= p
    order = np.argsort(np.array(vals, dtype=np.int64), kind="stable")
    return (
        np.array(vals, dtype=np.int64)[order],
        np.array(logs, dtype=np.float64)[order],
    )


class PsiSieve:
    """Answers cumulative psi(x) = sum_{n <= x} Lambda(n) queries by segmented
    sieving up to a configured ceiling (default 1e9)."""

    def __init__(self, ceiling: int = DEFAULT_CEILING, segment: int = DEFAULT_SEGMENT):
        if ceiling < 2:
            raise ValueError("ceiling must be >= 2")
        self.ceiling = int(ceiling)
        self.segment = int(segment)
        self._base = _simple_sieve(math.isqrt(self.ceiling))

    def psi_many(self, xs) -> np.ndarray:
        """psi at each real x in xs (any order); one sieve pass up to max x."""
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        if np.any(xs < 0):
            raise ValueError("psi is only defined for x >= 0")
        if np.any(xs > self.ceiling):
            raise ValueError(
                f"query {xs.max()} exceeds sieve ceiling {self.ceiling}"
            )
        # count n <= x, i.e. integer cutoffs floor(x)
        cut = np.floor(xs)
        order = np.argsort(cut, kind="stable")
        sorted_cut = cut[order]
        out_sorted = np.empty_like(sorted_cut)

        top = int(sorted_cut[-1])
        pp_vals, pp_logs = _prime_powers(top, self._base) if top >= 4 else (
            np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

        qi, s, c = 0, 0.0, 0.0
        ppi = 0
        lo = 2
        while lo <= top and qi < sorted_cut.size:
            hi = min(lo + self.segment, top + 1)
            mask = np.ones(hi - lo, dtype=bool)
            for p in self._base:
                p = int(p)
                if p * p >= hi:
                    break
                start = max(p * p, ((lo + p - 1) // p) * p)
                mask[start - lo :: p] = False
            if lo <= 2 < hi:
                mask[2 - lo] = True
            if lo <= 3 < hi:
                mask[3 - lo] = True
            primes = np.flatnonzero(mask) + lo
            # fold in prime powers lying in this segment, keeping ascending order
            npp = ppi
            while npp < pp_vals.size and pp_vals[npp] < hi:
                npp += 1
            if npp > ppi:
                seg_vals = np.concatenate((primes, pp_vals[ppi:npp]))
                seg_logs = np.concatenate((np.log(primes), pp_logs[ppi:npp]))
                o = np.argsort(seg_vals, kind="stable")
                seg_vals = seg_vals[o]
                seg_logs = seg_logs[o]
                ppi = npp
            else:
                seg_vals = primes
                seg_logs = np.log(primes)
            qi, s, c = _kernels.psi_scan(
                seg_vals.astype(np.float64), seg_logs, sorted_cut, out_sorted, qi, s, c
            )
            lo = hi
        out_sorted[qi:] = s

        out = np.empty_like(out_sorted)
        out[order] = out_sorted
        return out

    def psi(self, x: float) -> float:
        return float(self.psi_many([x])[0])

    def deviation_rows(self, xs, config: RaceConfig) -> np.ndarray:
        """E(x; delta, t_j) for each x in xs and each j: one pass, all endpoints.

        E = (psi(b) - psi(a) - delta*x) / sqrt(x) with half-open counting
        a < n <= b at the real endpoints a, b of interval j.
        """
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        for x in xs:
            config.require_admissible(float(x))
        r = config.r
        n = xs.size
        endpoints = np.empty((n, r, 2), dtype=np.float64)
        for j in range(r):
            t = config.shifts[j]
            centre = (1.0 + t * config.delta) * xs
            half = 0.5 * config.delta * xs
            endpoints[:, j, 0] = centre - half
            endpoints[:, j, 1] = centre + half
        psis = self.psi_many(endpoints.reshape(-1)).reshape(n, r, 2)
        counts = psis[:, :, 1] - psis[:, :, 0]
        return (counts - config.delta * xs[:, None]) / np.sqrt(xs)[:, None]

    def deviation_vector(self, x: float, config: RaceConfig) -> np.ndarray:
        return self.deviation_rows([x], config)[0]

    def deviation(self, x: float, config: RaceConfig, j: int) -> float:
        if not 0 <= j < config.r:
            raise IndexError(f"interval index {j} out of range")
        return float(self.deviation_vector(x, config)[j])


def psi_brute_force(limit: int) -> np.ndarray:
    """Oracle: psi(x) for integer x in [0, limit] by direct enumeration of
    prime powers, accumulated in extended precision."""
    lam = np.zeros(limit + 1, dtype=np.longdouble)
    primes = _simple_sieve(limit)
    for p in primes:
        p = int(p)
        q = p
        lp = math.log(p)
        while q <= limit:
            lam[q] = lp
            q *= p
    return np.cumsum(lam)
