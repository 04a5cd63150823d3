"""The random phase model over zeta zeros.

X_{delta,t} = Re(2 sum_{gamma>0} w(rho) U_gamma) with independent phases
U_gamma uniform on the unit circle.  One phase per zero per draw is shared
across all r coordinates: that coupling is the entire correlation mechanism,
so the sampler never draws per-coordinate phases.

Draws are reproducible bitwise from (seed, config, truncation height, n)
regardless of thread count: the RNG is counter-based with stream = zero
index and counter = draw index, and each draw accumulates its zero sum
sequentially in ascending gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import j0

from . import _kernels
from .config import RaceConfig
from .covariance import covariance_numeric
from .events import EventPredicate, compile_event, ordering_event, top_s_event
from .weights import weights_at_zeros
from .zeros import ZeroTable


@dataclass(frozen=True)
class SampleBatch:
    config: RaceConfig
    n: int
    draws: np.ndarray  # n x r
    seed: int
    truncation_height: float


@dataclass(frozen=True)
class DensityEstimate:
    p_hat: float
    std_err: float
    n: int
    method: str  # monte-carlo | gaussian-formula | sieve-empirical


def bernoulli_estimate(hits: np.ndarray, method: str = "monte-carlo") -> DensityEstimate:
    n = int(hits.size)
    if n == 0:
        raise ValueError("empty sample")
    p = float(np.count_nonzero(hits)) / n
    return DensityEstimate(
        p_hat=p, std_err=math.sqrt(p * (1.0 - p) / n), n=n, method=method
    )


def _weight_coeffs(config: RaceConfig, zeros: ZeroTable, height: float):
    g = zeros.up_to(height)
    r = config.r
    a = np.empty((g.size, r), dtype=np.float64)
    b = np.empty((g.size, r), dtype=np.float64)
    W = np.empty((g.size, r), dtype=np.complex128)
    for j in range(r):
        w = weights_at_zeros(g, config.delta, config.shifts[j])
        W[:, j] = w
        a[:, j] = 2.0 * w.real
        b[:, j] = -2.0 * w.imag
    return g, W, a, b


def sample(config: RaceConfig, zeros: ZeroTable, height: float, n: int,
           seed: int) -> SampleBatch:
    """n draws of the truncated random vector (all zeros with gamma <= height)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g, _, a, b = _weight_coeffs(config, zeros, height)
    keys = _kernels.zero_stream_keys(np.uint64(seed), g.size)
    draws = _kernels.sample_draws(a, b, keys, n, 0)
    return SampleBatch(config=config, n=n, draws=draws, seed=int(seed),
                       truncation_height=float(height))


def estimate_event(batch: SampleBatch, event: EventPredicate | str) -> DensityEstimate:
    if isinstance(event, str):
        event = compile_event(event, batch.config.r)
    return bernoulli_estimate(event(batch.draws))


def _normalized_draws(config, zeros, height, n, seed):
    batch = sample(config, zeros, height, n, seed)
    V = np.diag(covariance_numeric(config, zeros, height))
    return batch, batch.draws / np.sqrt(V)[None, :]


def estimate_ordering(config: RaceConfig, zeros: ZeroTable, height: float,
                      n: int, seed: int) -> DensityEstimate:
    """MC estimate of the full-ordering density rho(delta; t), with coordinates
    normalized by sqrt(V_j) from covariance_numeric at the same height."""
    if config.r < 2:
        raise ValueError("ordering needs r >= 2")
    _, norm = _normalized_draws(config, zeros, height, n, seed)
    return bernoulli_estimate(ordering_event(config.r)(norm))


def estimate_top_s_ordering(config: RaceConfig, s: int, zeros: ZeroTable,
                            height: float, n: int, seed: int) -> DensityEstimate:
    """MC estimate of rho_s: first s in order, all above the rest."""
    _, norm = _normalized_draws(config, zeros, height, n, seed)
    return bernoulli_estimate(top_s_event(s, config.r)(norm))


def char_fn(config: RaceConfig, zeros: ZeroTable, height: float, xi) -> float:
    """Characteristic function of the truncated model:
    prod_{0<gamma<=height} J0(2 |sum_j w_j(rho) xi_j|).  Real-valued."""
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (config.r,):
        raise ValueError(f"xi must have shape ({config.r},)")
    _, W, _, _ = _weight_coeffs(config, zeros, height)
    z = 2.0 * np.abs(W @ xi.astype(np.complex128))
    return float(np.multiply.reduce(j0(z)))


@dataclass(frozen=True)
class TailBoundCheck:
    p_hat: float
    std_err: float
    bound: float
    ok: bool


def tail_bound(config: RaceConfig, R: float, r: int | None = None) -> float:
    """2r exp(-R^2 / (4 delta log(1/delta))), valid for R > sqrt(delta log 1/delta)."""
    v = config.delta * config.log_inv_delta
    if R <= math.sqrt(v):
        raise ValueError(f"bound needs R > sqrt(delta log 1/delta) = {math.sqrt(v):.4g}")
    rr = config.r if r is None else r
    return 2.0 * rr * math.exp(-R * R / (4.0 * v))


def tail_bound_check(config: RaceConfig, zeros: ZeroTable, height: float,
                     R: float, n: int, seed: int) -> TailBoundCheck:
    """MC P(||X||_inf > R) against the sub-Gaussian tail bound."""
    bound = tail_bound(config, R)
    batch = sample(config, zeros, height, n, seed)
    hits = np.max(np.abs(batch.draws), axis=1) > R
    est = bernoulli_estimate(hits)
    ok = est.p_hat - 3.0 * est.std_err <= bound
    return TailBoundCheck(p_hat=est.p_hat, std_err=est.std_err, bound=bound, ok=ok)
