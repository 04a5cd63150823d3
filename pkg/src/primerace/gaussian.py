"""Gaussian limit predictions: N(0,C) probabilities, the 1/log(1/delta)
correction expansions, large-deviation tails, and density comparisons.

The race corollaries are asymptotic statements about N(0,C) with the weakly
negative correlation c_jk = -Delta(|t_j - t_k|)/log(1/delta); sampling under
that Gaussian is how the laboratory realizes the delta -> 0 regime, where a
zero-sum sampler would need astronomically many zeros (see the module notes
in model.py and the README).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, norm

from .config import RaceConfig
from .covariance import (CorrelationMatrix, correlation_matrix,
                         covariance_asymptotic, leading_correlation)
from .events import EventPredicate
from .model import DensityEstimate, bernoulli_estimate
from .weights import delta_repulsion

_SQRT3 = math.sqrt(3.0)

#: exact ordered-cone moments I_jk = int_{x1>...>xr} x_j x_k phi(x) dx for r <= 3
_CONE_CLOSED = {
    2: np.zeros((2, 2)),
    3: np.array([
        [0.0, _SQRT3 / (12.0 * math.pi), -_SQRT3 / (6.0 * math.pi)],
        [_SQRT3 / (12.0 * math.pi), 0.0, _SQRT3 / (12.0 * math.pi)],
        [-_SQRT3 / (6.0 * math.pi), _SQRT3 / (12.0 * math.pi), 0.0],
    ]),
}


@dataclass(frozen=True)
class GaussianPrediction:
    value: float
    correction: float
    remainder_order: str

    @property
    def leading(self) -> float:
        return self.value - self.correction


def model_correlation(config: RaceConfig, form: str = "leading") -> CorrelationMatrix:
    """Correlation matrix of the delta -> 0 Gaussian model.

    form="leading": c_jk = -Delta/log(1/delta) (the matrix the corollaries
    expand around); form="asymptotic": normalize the full asymptotic
    covariance, which keeps the secondary (1-gamma_E-log 2pi) diagonal term.
    """
    if form == "leading":
        return leading_correlation(config)
    if form == "asymptotic":
        return correlation_matrix(covariance_asymptotic(config))
    raise ValueError(f"unknown correlation form {form!r}")


def sample_gaussian(C: CorrelationMatrix | np.ndarray, n: int, seed: int,
                    chunk: int = 1 << 20):
    """Yield chunks of N(0,C) draws; Philox-seeded, deterministic."""
    entries = C.entries if isinstance(C, CorrelationMatrix) else np.asarray(C)
    L = np.linalg.cholesky(entries)
    rng = np.random.Generator(np.random.Philox(seed))
    left = n
    while left > 0:
        m = min(chunk, left)
        yield rng.standard_normal((m, entries.shape[0])) @ L.T
        left -= m


def gaussian_event_estimate(C: CorrelationMatrix | np.ndarray,
                            event: EventPredicate, n: int,
                            seed: int) -> DensityEstimate:
    """Plain MC probability of an event under N(0,C)."""
    hits = 0
    for block in sample_gaussian(C, n, seed):
        hits += int(np.count_nonzero(event(block)))
    p = hits / n
    return DensityEstimate(p_hat=p, std_err=math.sqrt(p * (1.0 - p) / n),
                           n=n, method="monte-carlo")


def box_probability(C: CorrelationMatrix | np.ndarray, box, n: int | None = None,
                    seed: int = 20240901, target_std_err: float = 1e-4,
                    n_max: int = 1 << 25) -> tuple[float, float]:
    """P(N(0,C) in box) by MC with antithetic variates.

    box is a sequence of (lo, hi] per coordinate (use +-inf freely).  When n
    is None the sample size doubles until the reported standard error falls
    below target_std_err (or n_max is reached).
    """
    entries = C.entries if isinstance(C, CorrelationMatrix) else np.asarray(C)
    r = entries.shape[0]
    lo = np.array([b[0] for b in box], dtype=np.float64)
    hi = np.array([b[1] for b in box], dtype=np.float64)
    if lo.size != r or np.any(lo > hi):
        raise ValueError("box must be r pairs (lo, hi) with lo <= hi")

    def run(m: int) -> tuple[float, float]:
        acc = []
        for block in sample_gaussian(entries, m, seed):
            inside = np.all((block > lo) & (block <= hi), axis=1)
            anti = np.all((-block > lo) & (-block <= hi), axis=1)
            acc.append(0.5 * (inside.astype(np.float64) + anti))
        h = np.concatenate(acc)
        return float(h.mean()), float(h.std(ddof=1) / math.sqrt(h.size))

    if n is not None:
        return run(n)
    m = 1 << 16
    while True:
        p, se = run(m)
        if se <= target_std_err or m >= n_max:
            return p, se
        m *= 2


def negcorr_expansion(config: RaceConfig, box) -> GaussianPrediction:
    """Box probability with the explicit first-order repulsion correction:

    Phi(box) - 1/(2 pi log(1/delta)) * sum_{j<k} Delta(|t_j-t_k|)
        * (e^{-a_j^2/2}-e^{-b_j^2/2}) (e^{-a_k^2/2}-e^{-b_k^2/2}) * Phi(rest).
    """
    r = config.r
    if r > 8:
        raise ValueError("expansion evaluated for r <= 8")
    lo = np.array([b[0] for b in box], dtype=np.float64)
    hi = np.array([b[1] for b in box], dtype=np.float64)
    if lo.size != r or np.any(lo > hi):
        raise ValueError("box must be r pairs (lo, hi) with lo <= hi")
    probs = norm.cdf(hi) - norm.cdf(lo)

    def gauss_drop(a: float) -> float:
        return math.exp(-0.5 * a * a) if math.isfinite(a) else 0.0

    g = np.array([gauss_drop(lo[i]) - gauss_drop(hi[i]) for i in range(r)])
    total = 0.0
    for j in range(r):
        for k in range(j + 1, r):
            rest = 1.0
            for i in range(r):
                if i != j and i != k:
                    rest *= probs[i]
            total += delta_repulsion(config.gap(j, k)) * g[j] * g[k] * rest
    leading = float(np.prod(probs))
    correction = -total / (2.0 * math.pi * config.log_inv_delta)
    return GaussianPrediction(value=leading + correction, correction=correction,
                              remainder_order="O(log^-2(1/delta))")


def ordering_cone_moments(r: int, n: int = 400_000, seed: int = 7) -> np.ndarray:
    """I_jk = int_{x_1 > ... > x_r} x_j x_k phi_r(x) dx.

    Closed forms for r <= 3; estimated over common N(0,I) draws for r in
    {4,5,6} (std err ~ sqrt(2/r!)/sqrt(n), comfortably below 1e-4).
    """
    if r in _CONE_CLOSED:
        return _CONE_CLOSED[r].copy()
    if r > 6:
        raise ValueError("ordered-region moments computed for r <= 6")
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.zeros((r, r))
    total = 0
    for _ in range(8):
        z = rng.standard_normal((n // 8, r))
        cone = np.all(z[:, :-1] > z[:, 1:], axis=1)
        zc = z[cone]
        total += z.shape[0]
        for j in range(r):
            for k in range(j + 1, r):
                out[j, k] += float(np.sum(zc[:, j] * zc[:, k]))
    out /= total
    return out + out.T


def ordering_prediction(config: RaceConfig, order: tuple[int, ...] | None = None,
                        ) -> GaussianPrediction:
    """rho = 1/r! - (1/log(1/delta)) sum_{j<k} Delta(|t_j - t_k|) I_jk + O(log^-2).

    order optionally permutes the intervals: the event is
    X_{order[0]} > X_{order[1]} > ... (default is the index order).
    """
    r = config.r
    if r < 2:
        raise ValueError("ordering needs r >= 2")
    if r > 6:
        raise ValueError("ordering prediction evaluated for r <= 6")
    if order is None:
        order = tuple(range(r))
    if sorted(order) != list(range(r)):
        raise ValueError(f"order must be a permutation of 0..{r - 1}")
    I = ordering_cone_moments(r)
    total = 0.0
    for a in range(r):
        for b in range(a + 1, r):
            gap = config.gap(order[a], order[b])
            total += delta_repulsion(gap) * I[a, b]
    correction = -total / config.log_inv_delta
    return GaussianPrediction(value=1.0 / math.factorial(r) + correction,
                              correction=correction,
                              remainder_order="O(log^-2(1/delta))")


def large_deviation_prediction(config: RaceConfig, V: float) -> GaussianPrediction:
    """P(||E~|| > V) -> chi_r tail; the first-order correction vanishes
    identically (the cross-moment integrals over the full shell are zero)."""
    if V < 0:
        raise ValueError("V must be >= 0")
    leading = float(chi2.sf(V * V, df=config.r))
    return GaussianPrediction(value=leading, correction=0.0,
                              remainder_order="O(log^-2(1/delta))")


@dataclass(frozen=True)
class DensityComparison:
    exact: float
    approx: float
    ratio: float  # approx / exact


def density_comparison(C: CorrelationMatrix, x) -> DensityComparison:
    """Exact N(0,C) density at x vs the almost-identity approximation
    (2pi)^{-r/2} exp(-||x||^2/2 + sum_{j<k} c_jk x_j x_k)."""
    x = np.asarray(x, dtype=np.float64)
    c = C.entries
    r = c.shape[0]
    sign, logdet = np.linalg.slogdet(c)
    if sign <= 0:
        raise ValueError("correlation matrix is singular or indefinite")
    q = float(x @ np.linalg.solve(c, x))
    exact = math.exp(-0.5 * q - 0.5 * logdet - 0.5 * r * math.log(2.0 * math.pi))
    cross = 0.0
    for j in range(r):
        for k in range(j + 1, r):
            cross += c[j, k] * x[j] * x[k]
    approx = math.exp(-0.5 * float(x @ x) + cross - 0.5 * r * math.log(2.0 * math.pi))
    return DensityComparison(exact=exact, approx=approx, ratio=approx / exact)
