"""Truncated explicit formula for the interval deviations.

E(x; delta, t) = -sum_{|gamma| <= Z} w(rho) x^{i gamma} + O(sqrt(x) log^2(xZ)/Z
+ log(x)/sqrt(x)); with only gamma > 0 stored, the sum is -2 Re(...) over the
table.  The implied constant is unknown; survey checks use a fixed safety
factor of 10, calibrated once against the sieve and then frozen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import RaceConfig
from .sieve import PsiSieve
from .weights import weights_at_zeros
from .zeros import ZeroTable

ERROR_SAFETY_FACTOR = 10.0


@dataclass(frozen=True)
class ExplicitResult:
    x: float
    value: float
    truncation_height: float
    predicted_error: float


def predicted_error(x: float, Z: float) -> float:
    """Lemma-style error envelope sqrt(x) log^2(xZ)/Z + log(x)/sqrt(x)."""
    return math.sqrt(x) * math.log(x * Z) ** 2 / Z + math.log(x) / math.sqrt(x)


def deviation_explicit_many(xs, config: RaceConfig, j: int, zeros: ZeroTable,
                            Z: float) -> np.ndarray:
    """Explicit-formula deviations at each x: -2 sum_{gamma<=Z} Re(w_j(rho)
    e^{i gamma log x}), compensated and ascending in gamma."""
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(xs < 2):
        raise ValueError("explicit formula evaluated for x >= 2")
    if Z <= 0:
        return np.zeros_like(xs)
    g = zeros.up_to(Z)
    w = weights_at_zeros(g, config.delta, config.shifts[j])
    us = np.log(xs)
    return _kernels.explicit_sum(g, np.ascontiguousarray(w.real),
                                 np.ascontiguousarray(w.imag), us)


def deviation_explicit(x: float, config: RaceConfig, j: int, zeros: ZeroTable,
                       Z: float) -> ExplicitResult:
    value = float(deviation_explicit_many([x], config, j, zeros, Z)[0])
    return ExplicitResult(x=float(x), value=value, truncation_height=float(Z),
                          predicted_error=predicted_error(float(x), float(Z)))


@dataclass(frozen=True)
class SurveySummary:
    rms: float
    corr: float
    n: int
    Z: float
    envelope_rms: float  # RMS of the predicted error over the sample


def residual_survey(x_lo: float, x_hi: float, config: RaceConfig, j: int,
                    zeros: ZeroTable, Z: float, n: int, seed: int,
                    sieve: PsiSieve | None = None) -> SurveySummary:
    """Sample x log-uniformly, compare sieve-truth vs explicit deviations.

    Reports the RMS difference and the Pearson correlation across the sample.
    """
    if Z <= 0:
        raise ValueError("Z = 0 leaves an empty zero sum; survey undefined")
    if n < 2:
        raise ValueError("survey needs n >= 2")
    rng = np.random.Generator(np.random.Philox(seed))
    us = rng.uniform(math.log(x_lo), math.log(x_hi), size=n)
    xs = np.exp(us)
    if sieve is None:
        top = x_hi * (1.0 + (abs(config.shifts[j]) + 0.5) * config.delta) + 1
        sieve = PsiSieve(ceiling=int(top) + 1)
    sub = RaceConfig(config.delta, [config.shifts[j]])
    e_sieve = sieve.deviation_rows(xs, sub)[:, 0]
    e_expl = deviation_explicit_many(xs, config, j, zeros, Z)
    diff = e_sieve - e_expl
    rms = float(np.sqrt(np.mean(diff * diff)))
    corr = float(np.corrcoef(e_sieve, e_expl)[0, 1])
    env = np.array([predicted_error(float(x), float(Z)) for x in xs])
    return SurveySummary(rms=rms, corr=corr, n=n, Z=float(Z),
                         envelope_rms=float(np.sqrt(np.mean(env * env))))
