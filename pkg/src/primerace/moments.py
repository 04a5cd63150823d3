"""Smooth-weighted moments of the truncated deviation, and the near-resonance
counting diagnostic for tuples of zero ordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .config import RaceConfig
from .weights import weights_at_zeros
from .zeros import ZeroTable, count_below

#: Gaussian moments: E[N(0,1)^k] for even k, 0 for odd
def gaussian_moment(k: int) -> float:
    if k % 2:
        return 0.0
    return math.factorial(k) / (2 ** (k // 2) * math.factorial(k // 2))


def _smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity step built from exp(-1/t): 0 for t<=0, 1 for t>=1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        g = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return f / (f + g)


@dataclass(frozen=True)
class SmoothWeight:
    """Nonnegative C-infinity weight supported in (1/2, 5/2), flat on the
    plateau (1+eps, 2-eps), normalized to unit mass."""

    epsilon: float = 0.1
    mass: float = 1.0  # raw mass; evaluate() divides by it

    def raw(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        width = 0.5 + self.epsilon
        rise = _smoothstep((s - 0.5) / width)
        fall = _smoothstep((2.5 - s) / width)
        out = np.where((s > 0.5) & (s < 2.5), np.minimum(rise, fall), 0.0)
        return out

    def __call__(self, s) -> np.ndarray:
        return self.raw(s) / self.mass


@lru_cache(maxsize=8)
def smooth_weight(epsilon: float = 0.1) -> SmoothWeight:
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 0.5)")
    w = SmoothWeight(epsilon=epsilon)
    mass, err = quad(w.raw, 0.5, 2.5, limit=200, epsabs=1e-13, epsrel=1e-13)
    if err > 1e-10:
        raise RuntimeError(f"weight mass quadrature error {err:.2e}")
    return SmoothWeight(epsilon=epsilon, mass=mass)


@dataclass(frozen=True)
class MomentResult:
    k: int
    value: float
    U: float
    truncation_height: float
    variance_T: float
    nodes: int


def nyquist_nodes(U: float, gamma_max: float) -> int:
    """Minimum node count so spacing <= pi/(4 gamma_max) over u in [U/2, 5U/2]."""
    return int(math.ceil(2.0 * U * 4.0 * gamma_max / math.pi)) + 1


def weighted_moments(ks, U: float, config: RaceConfig, zeros: ZeroTable,
                     height: float, weight: SmoothWeight | None = None,
                     quad_points: int | None = None) -> list[MomentResult]:
    """(1/U) int E~^(T)(e^u)^k W(u/U) du on a uniform grid over the support,
    for each k in ks (the grid evaluation, which dominates, is shared).

    E^(T) is the truncated zero sum (single interval, r = 1 enforced) and
    E~ = E^(T)/sqrt(V^(T)) with V^(T) summed over the same zeros.  The grid
    must resolve the fastest oscillation e^{i gamma_max u}: a spacing above
    pi/(4 gamma_max) is rejected with the required node count.
    """
    if config.r != 1:
        raise ValueError("moments use a single moving interval (r = 1)")
    ks = [int(k) for k in ks]
    if any(not 1 <= k <= 8 for k in ks):
        raise ValueError("k must be in 1..8")
    if config.delta * height < 20:
        raise ValueError(
            f"need delta*T >= 20 for the moment regime, got {config.delta * height:.3g}"
        )
    if weight is None:
        weight = smooth_weight()
    g = zeros.up_to(height)
    gamma_max = float(g[-1])
    n_min = nyquist_nodes(U, gamma_max)
    nodes = 2 * n_min if quad_points is None else int(quad_points)
    if nodes < n_min:
        raise ValueError(
            f"quadrature too coarse for gamma_max = {gamma_max:.1f}: "
            f"{nodes} nodes given, >= {n_min} required"
        )
    w = weights_at_zeros(g, config.delta, config.shifts[0])
    v_t = float(_kernels.kahan_sum(2.0 * (w.real ** 2 + w.imag ** 2)))
    u0 = 0.5 * U
    du = 2.0 * U / (nodes - 1)
    e_vals = _kernels.explicit_sum_grid(
        g, np.ascontiguousarray(w.real), np.ascontiguousarray(w.imag),
        u0, du, nodes,
    )
    e_vals /= math.sqrt(v_t)
    wt = weight(np.linspace(u0, u0 + 2.0 * U, nodes) / U)
    out = []
    for k in ks:
        integrand = (e_vals ** k) * wt
        # trapezoid: endpoints carry zero weight (support boundary)
        integrand[0] *= 0.5
        integrand[-1] *= 0.5
        value = float(_kernels.kahan_sum(integrand)) * du / U
        out.append(MomentResult(k=k, value=value, U=float(U),
                                truncation_height=float(height),
                                variance_T=v_t, nodes=nodes))
    return out


def weighted_moment(k: int, U: float, config: RaceConfig, zeros: ZeroTable,
                    height: float, weight: SmoothWeight | None = None,
                    quad_points: int | None = None) -> MomentResult:
    """Single-k convenience wrapper around weighted_moments."""
    return weighted_moments([k], U, config, zeros, height, weight,
                            quad_points)[0]


@dataclass(frozen=True)
class TruncationGap:
    gap: float
    bound: float


def truncation_gap(T: float, config: RaceConfig, zeros: ZeroTable) -> TruncationGap:
    """V(full table) - V^(T), alongside the 3 log T / T bound."""
    if config.r != 1:
        raise ValueError("variance gap is a single-interval quantity")
    w_all = weights_at_zeros(zeros.ordinates, config.delta, config.shifts[0])
    terms = 2.0 * (w_all.real ** 2 + w_all.imag ** 2)
    n = count_below(zeros, T, _warn=False)
    full = float(_kernels.kahan_sum(terms))
    head = float(_kernels.kahan_sum(terms[:n]))
    return TruncationGap(gap=full - head, bound=3.0 * math.log(T) / T)


# ---------------------------------------------------------------------------
# near-resonance counting

_MAX_GROUP_ENUM = 50_000_000


@dataclass(frozen=True)
class ResonanceCount:
    count: int  # tuples with 0 < |<eps, gamma>| <= threshold
    diagonal_count: int  # combinatorial count of exactly-paired tuples
    n_zeros: int


def _diagonal_count(plus: int, minus: int, n: int) -> int:
    """Ordered tuples whose +multiset equals the -multiset (exact cancellation
    under pairing).  Zero unless the sign pattern is balanced."""
    if plus != minus:
        return 0
    m = plus
    if m == 0:
        return 0
    if m == 1:
        return n
    if m == 2:
        return 2 * n * n - n
    raise ValueError("diagonal count implemented for k <= 4")


def qli_resonance_count(k: int, epsilon_signs, zeros: ZeroTable, T: float,
                        threshold: float) -> ResonanceCount:
    """Exact count of ordered tuples gamma in (0, T]^k from the table with
    0 < |<eps, gamma>| <= threshold, via meet-in-the-middle on the sign split.

    Also reports the diagonal (paired-off) count, computed combinatorially,
    never by floating-point equality.
    """
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3, or 4")
    eps = tuple(int(e) for e in epsilon_signs)
    if len(eps) != k or any(e not in (-1, 1) for e in eps):
        raise ValueError("epsilon_signs must be k entries of +-1")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    g = zeros.up_to(T)
    n = g.size
    plus = sum(1 for e in eps if e == 1)
    minus = k - plus

    # all-same-sign tuples have |<eps,gamma>| >= k*gamma_1
    if minus == 0 or plus == 0:
        if threshold < k * g[0]:
            return ResonanceCount(count=0, diagonal_count=0, n_zeros=n)

    def group_sums(m: int) -> np.ndarray:
        if n ** m > _MAX_GROUP_ENUM:
            raise ValueError(
                f"enumeration budget exceeded: {n}^{m} group sums"
            )
        s = g.copy()
        for _ in range(m - 1):
            s = (s[:, None] + g[None, :]).reshape(-1)
        return np.sort(s)

    sp = group_sums(plus) if plus else np.zeros(1)
    sm = group_sums(minus) if minus else np.zeros(1)
    within = int(_kernels.pair_count_within(sp, sm, threshold))
    diag = _diagonal_count(plus, minus, n)
    return ResonanceCount(count=within - diag, diagonal_count=diag, n_zeros=n)
