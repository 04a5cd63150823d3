#!/usr/bin/env python3
"""Generate a table of nontrivial zeta zero ordinates (gamma_n, ascending).

Maintenance tool, not part of the installed package.  The shipped data files
(src/primerace/data/zeros_*.txt) were produced by this script and validated
against mpmath's arbitrary-precision zetazero at a random sample of indices.

Method
------
1. Scan Z(t) (Riemann-Siegel, leading correction term only, vectorized numpy)
   on a uniform grid fine enough to separate the closest known pairs in range
   (Lehmer pair near t=7005 has gap 0.0377; default step is 0.004).
2. Bisect each sign-change bracket a few rounds with the same cheap Z.
3. Polish each root with scipy.brentq on mpmath.fp.siegelz, which is accurate
   to ~1e-11 absolute over the heights involved.
4. Validate: fixed small indices, a random sample, and the last two indices
   against mpmath.mp.zetazero at 20 significant digits.

Usage:
    python3 scripts/generate_zeros.py --count 100000 \
        --out src/primerace/data/zeros_100k.txt --sample 60
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from multiprocessing import Pool

import numpy as np
from scipy.optimize import brentq
from scipy.special import loggamma

TWO_PI = 2.0 * math.pi


def theta(t: np.ndarray) -> np.ndarray:
    """Riemann-Siegel theta via the log-gamma function (exact to double)."""
    z = 0.25 + 0.5j * np.asarray(t, dtype=np.float64)
    return np.imag(loggamma(z)) - 0.5 * t * math.log(math.pi)


def rs_z(t: np.ndarray) -> np.ndarray:
    """Riemann-Siegel Z(t) with the C0 remainder term, vectorized.

    Absolute error ~ (t/2pi)^(-3/4); plenty for bracketing sign changes,
    not for final root values.
    """
    t = np.asarray(t, dtype=np.float64)
    a = np.sqrt(t / TWO_PI)
    m = np.floor(a).astype(np.int64)
    mmax = int(m.max())
    th = theta(t)
    z = np.zeros_like(t)
    for n in range(1, mmax + 1):
        mask = m >= n
        z[mask] += np.cos(th[mask] - t[mask] * math.log(n)) / math.sqrt(n)
    z *= 2.0
    # leading remainder term; Psi has removable singularities at p=1/4,3/4
    p = a - m
    num = np.cos(TWO_PI * (p * p - p - 0.0625))
    den = np.cos(TWO_PI * p)
    psi = np.where(np.abs(den) < 1e-8, 0.5, num / np.where(den == 0, 1.0, den))
    z += (-1.0) ** (m + 1) * a ** (-0.5) * psi
    return z


def scan_brackets(t_lo: float, t_hi: float, step: float) -> np.ndarray:
    """Return array of bracket left endpoints where Z changes sign."""
    brackets = []
    block = 2_000_000
    n_total = int(math.ceil((t_hi - t_lo) / step))
    done = 0
    prev_t = None
    prev_z = None
    while done < n_total:
        n = min(block, n_total - done + 1)
        ts = t_lo + (done + np.arange(n)) * step
        zs = rs_z(ts)
        if prev_t is not None:
            ts = np.concatenate(([prev_t], ts))
            zs = np.concatenate(([prev_z], zs))
        sign = np.signbit(zs)
        flips = np.nonzero(sign[1:] != sign[:-1])[0]
        brackets.append(ts[flips])
        prev_t, prev_z = float(ts[-1]), float(zs[-1])
        done += n
    return np.concatenate(brackets)


def bisect_cheap(lo: np.ndarray, step: float, rounds: int = 18) -> np.ndarray:
    """Vectorized bisection on the cheap Z; returns midpoints."""
    hi = lo + step
    zlo = rs_z(lo)
    for _ in range(rounds):
        mid = 0.5 * (lo + hi)
        zm = rs_z(mid)
        left = np.signbit(zlo) != np.signbit(zm)
        hi = np.where(left, mid, hi)
        keep = ~left
        lo = np.where(keep, mid, lo)
        zlo = np.where(keep, zm, zlo)
    return 0.5 * (lo + hi)


def _polish_chunk(centers):
    from mpmath import fp

    out = []
    for c in centers:
        w = 3e-4
        a, b = c - w, c + w
        fa, fb = fp.siegelz(a), fp.siegelz(b)
        while fa * fb > 0:
            w *= 4.0
            a, b = c - w, c + w
            fa, fb = fp.siegelz(a), fp.siegelz(b)
        out.append(brentq(fp.siegelz, a, b, xtol=1e-11, rtol=8.9e-16))
    return out


def polish(centers: np.ndarray, workers: int) -> np.ndarray:
    chunks = np.array_split(centers, workers * 8)
    with Pool(workers) as pool:
        parts = pool.map(_polish_chunk, [c.tolist() for c in chunks])
    return np.array([g for part in parts for g in part])


def validate(gammas: np.ndarray, sample: int, seed: int = 20240901) -> float:
    """Compare a sample of indices against mp.zetazero; return max |diff|."""
    from mpmath import mp

    mp.dps = 20
    n = len(gammas)
    idx = set(range(1, 11)) | {n - 1, n}
    rng = np.random.default_rng(seed)
    idx |= set(int(i) for i in rng.integers(11, n - 1, size=sample))
    worst = 0.0
    for i in sorted(idx):
        ref = float(mp.zetazero(i).imag)
        d = abs(gammas[i - 1] - ref)
        worst = max(worst, d)
        if d > 2e-9:
            print(f"  VALIDATION MISMATCH n={i}: table={gammas[i-1]!r} ref={ref!r}")
    return worst


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100000)
    ap.add_argument("--out", type=str, required=True)
    ap.add_argument("--step", type=float, default=0.004)
    ap.add_argument("--sample", type=int, default=60, help="validation sample size")
    ap.add_argument("--workers", type=int, default=8)
    args = ap.parse_args()

    # N(T) main term inversion to estimate the scan ceiling, plus margin
    target = args.count
    t_hi = 20.0
    while (t_hi / TWO_PI) * math.log(t_hi / TWO_PI) - t_hi / TWO_PI < target + 20:
        t_hi *= 1.01
    print(f"scanning Z(t) on [14, {t_hi:.1f}] at step {args.step}")

    t0 = time.time()
    lo = scan_brackets(14.0, t_hi, args.step)
    print(f"  {len(lo)} sign changes in {time.time()-t0:.1f}s")
    if len(lo) < target:
        print("FATAL: not enough sign changes; decrease --step", file=sys.stderr)
        return 1
    lo = lo[:target + 8]

    t0 = time.time()
    centers = bisect_cheap(lo, args.step)
    print(f"  cheap bisection done in {time.time()-t0:.1f}s")

    t0 = time.time()
    gammas = polish(centers, args.workers)
    print(f"  fp.siegelz polish done in {time.time()-t0:.1f}s")

    gammas = np.sort(gammas)[:target]
    assert np.all(np.diff(gammas) > 0), "non-monotone output"
    assert abs(gammas[0] - 14.134725141734694) < 1e-8, "first zero wrong"

    t0 = time.time()
    worst = validate(gammas, args.sample)
    print(f"  validation worst |diff| = {worst:.2e} over sample in {time.time()-t0:.1f}s")
    if worst > 2e-9:
        print("FATAL: validation failed", file=sys.stderr)
        return 1

    with open(args.out, "w") as f:
        for g in gammas:
            f.write(f"{g:.11f}\n")
    print(f"wrote {len(gammas)} ordinates to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
