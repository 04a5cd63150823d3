"""Logarithmic-density estimation about actual primes.

Sampling u uniformly on [log X_lo, log X_hi] and evaluating the normalized
deviations at x = e^u is the finite-X analogue of the logarithmic time
average; every estimate here is tagged sieve-empirical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .config import RaceConfig
from .covariance import covariance_numeric
from .events import EventPredicate, compile_event
from .model import DensityEstimate, bernoulli_estimate
from .sieve import PsiSieve
from .zeros import ZeroTable


@dataclass(frozen=True)
class EmpiricalDistribution:
    samples: np.ndarray  # n x r, normalized deviations
    x_lo: float
    x_hi: float
    n: int
    config: RaceConfig
    variances: np.ndarray  # the V_j used for normalization
    truncation_height: float
    seed: int


def collect(x_lo: float, x_hi: float, config: RaceConfig, n: int, seed: int,
            zeros: ZeroTable, height: float | None = None,
            sieve: PsiSieve | None = None) -> EmpiricalDistribution:
    """n rows of deviation_vector(e^u)/sqrt(V) at log-uniform u, single pass."""
    if n < 1:
        raise ValueError("empty distribution: n must be >= 1")
    if x_lo < 2 or x_hi <= x_lo:
        raise ValueError("need 2 <= x_lo < x_hi")
    if height is None:
        height = zeros.height
    rng = np.random.Generator(np.random.Philox(seed))
    xs = np.exp(rng.uniform(math.log(x_lo), math.log(x_hi), size=n))
    if sieve is None:
        top = x_hi * (1.0 + (config.t_span + 0.5) * config.delta) + 1
        sieve = PsiSieve(ceiling=int(top) + 1)
    rows = sieve.deviation_rows(xs, config)
    V = np.diag(covariance_numeric(config, zeros, height))
    return EmpiricalDistribution(
        samples=rows / np.sqrt(V)[None, :],
        x_lo=float(x_lo), x_hi=float(x_hi), n=n, config=config,
        variances=V, truncation_height=float(height), seed=int(seed),
    )


def ks_statistic(dist: EmpiricalDistribution, j: int) -> float:
    """One-sample Kolmogorov-Smirnov distance of coordinate j to N(0,1)."""
    if dist.n < 100:
        raise ValueError("KS check needs n >= 100")
    return float(stats.kstest(dist.samples[:, j], "norm").statistic)


def empirical_event_density(dist: EmpiricalDistribution,
                            event: EventPredicate | str) -> DensityEstimate:
    if dist.n < 100:
        raise ValueError("density estimate needs n >= 100")
    if isinstance(event, str):
        event = compile_event(event, dist.config.r)
    return bernoulli_estimate(event(dist.samples), method="sieve-empirical")


def neighbor_config(delta: float) -> RaceConfig:
    """The two adjacent intervals [x - delta x, x] and [x, x + delta x],
    i.e. shifts -1/2 and +1/2 (gap exactly 1, the boundary case)."""
    return RaceConfig(delta, (-0.5, 0.5))
