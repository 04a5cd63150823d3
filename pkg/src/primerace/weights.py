"""Spectral interval weight w(s; delta, t) and the repulsion function Delta(t).

w(s; delta, t) = [ (1 + (t+1/2) delta)^s - (1 + (t-1/2) delta)^s ] / s

is evaluated in the cancellation-free form

    w = 2 sinh(s*dl/2) * exp(s*(lm + lp)/2) / s,

where lp/lm = log1p((t +- 1/2) delta) and dl = lp - lm is itself computed by a
single log1p of the endpoint ratio.  sinh is accurate for small arguments, so
w(1, delta, t) = delta holds to machine precision down to delta ~ 1e-8.
"""

from __future__ import annotations

import math

import numpy as np

#: Euler-Mascheroni constant, 20 digits.
GAMMA_E = 0.57721566490153286061


def _log_endpoints(delta: float, t: float) -> tuple[float, float]:
    lo = 1.0 + (t - 0.5) * delta
    if lo <= 0.0:
        raise ValueError(
            f"left interval endpoint factor 1+(t-1/2)delta = {lo} <= 0"
        )
    lm = math.log1p((t - 0.5) * delta)
    dl = math.log1p(delta / lo)
    return lm, dl


def weight(s, delta: float, t: float):
    """w(s; delta, t) for complex s (scalar or array); s = 0 is rejected."""
    s = np.asarray(s, dtype=np.complex128)
    if np.any(s == 0):
        raise ValueError("w(s) is not evaluated at s = 0")
    lm, dl = _log_endpoints(delta, t)
    mid = lm + 0.5 * dl
    out = 2.0 * np.sinh(0.5 * dl * s) * np.exp(mid * s) / s
    if out.ndim == 0:
        return complex(out)
    return out


def weights_at_zeros(gammas: np.ndarray, delta: float, t: float) -> np.ndarray:
    """w(1/2 + i gamma; delta, t) for an array of ordinates."""
    s = 0.5 + 1j * np.asarray(gammas, dtype=np.float64)
    return weight(s, delta, t)


def weight_bound_check(s, delta: float, t_max: float) -> bool:
    """Check |w(s)| <= 10 * min{(1+|t_max|) delta, 1/|s|}.

    Intended as a debug assertion in the regime |Re s| <= 1, |Im s| > 10,
    sweeping t over [-t_max, t_max].
    """
    s = np.asarray(s, dtype=np.complex128)
    if np.any(np.abs(s.real) > 1.0) or np.any(np.abs(s.imag) <= 10.0):
        raise ValueError("bound applies for |Re s| <= 1, |Im s| > 10")
    T = 1.0 + abs(t_max)
    cap = 10.0 * np.minimum(T * delta, 1.0 / np.abs(s))
    for t in np.linspace(-abs(t_max), abs(t_max), 7):
        if np.any(np.abs(weight(s, delta, float(t))) > cap):
            return False
    return True


def delta_repulsion(t):
    """Delta(t) = ((t+1)log(t+1) - 2t log t + (t-1)log(t-1)) / 2 for t >= 1.

    0*log 0 := 0 at t = 1, so Delta(1) = log 2.  For t >= 2 the algebraically
    equivalent form  (t*log1p(-1/t^2) + log1p(2/(t-1))) / 2  avoids the
    catastrophic cancellation of the direct second difference at large t
    (direct float64 loses ~14 digits by t = 1e6).  Delta is positive, strictly
    decreasing, and t*Delta(t) -> 1/2.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 1.0):
        raise ValueError("Delta(t) is only used for t >= 1")
    t_safe = np.where(t > 1.0, t, 2.0)
    direct = 0.5 * (
        (t_safe + 1.0) * np.log(t_safe + 1.0)
        - 2.0 * t_safe * np.log(t_safe)
        + (t_safe - 1.0) * np.log(t_safe - 1.0)
    )
    big = np.where(t >= 2.0, t, 2.0)
    stable = 0.5 * (big * np.log1p(-1.0 / (big * big)) + np.log1p(2.0 / (big - 1.0)))
    out = np.where(t == 1.0, math.log(2.0), np.where(t < 2.0, direct, stable))
    if out.ndim == 0:
        return float(out)
    return out
