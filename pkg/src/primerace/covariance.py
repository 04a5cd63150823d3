"""Covariances of the interval deviations: zero sums, asymptotic formulas,
correlation matrices, almost-identity utilities, and the Mellin cross-check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .config import RaceConfig
from .weights import GAMMA_E, delta_repulsion, weights_at_zeros
from .zeros import ZeroTable

#: measured constant in the truncation-tail estimate C*log(h)/h
TAIL_CONSTANT = 3.0

PSD_TOLERANCE = 1e-10


def covariance_numeric(config: RaceConfig, zeros: ZeroTable,
                       height: float | None = None) -> np.ndarray:
    """Cov_jk = 2 sum_{0 < gamma <= height} Re(w_j(rho) conj(w_k(rho))).

    Compensated summation in ascending gamma; the matrix is filled for j <= k
    and mirrored, so it is symmetric bitwise.
    """
    if height is None:
        height = zeros.height
    g = zeros.up_to(height)
    r = config.r
    W = np.empty((g.size, r), dtype=np.complex128)
    for j in range(r):
        W[:, j] = weights_at_zeros(g, config.delta, config.shifts[j])
    cov = np.empty((r, r), dtype=np.float64)
    for j in range(r):
        for k in range(j, r):
            terms = 2.0 * (W[:, j].real * W[:, k].real + W[:, j].imag * W[:, k].imag)
            cov[j, k] = cov[k, j] = _kernels.kahan_sum(terms)
    return cov


def tail_estimate(height: float) -> float:
    """Reported (never added) bound on the truncated tail: C log(h)/h."""
    return TAIL_CONSTANT * math.log(height) / height


def covariance_asymptotic(config: RaceConfig) -> np.ndarray:
    """Diagonal delta*log(1/delta) + (1 - gamma_E - log 2pi)*delta;
    off-diagonal -Delta(|t_j - t_k|)*delta."""
    d = config.delta
    if d > 0.1:
        raise ValueError("asymptotic covariance is used for delta <= 0.1")
    r = config.r
    v = d * math.log(1.0 / d) + (1.0 - GAMMA_E - math.log(2.0 * math.pi)) * d
    cov = np.empty((r, r), dtype=np.float64)
    for j in range(r):
        cov[j, j] = v
        for k in range(j + 1, r):
            cov[j, k] = cov[k, j] = -delta_repulsion(config.gap(j, k)) * d
    return cov


@dataclass(frozen=True)
class CorrelationMatrix:
    """c_jk = Cov_jk / sqrt(V_j V_k); unit diagonal, PSD within tolerance."""

    entries: np.ndarray
    psd_defect: float = 0.0  # max(0, -lambda_min), reported when nonzero

    @property
    def r(self) -> int:
        return int(self.entries.shape[0])


def correlation_matrix(cov: np.ndarray) -> CorrelationMatrix:
    cov = np.asarray(cov, dtype=np.float64)
    d = np.diag(cov)
    if np.any(d <= 0):
        raise ValueError("nonpositive variance on the diagonal")
    scale = 1.0 / np.sqrt(d)
    c = cov * scale[:, None] * scale[None, :]
    np.fill_diagonal(c, 1.0)
    c = 0.5 * (c + c.T)
    off = c[~np.eye(c.shape[0], dtype=bool)]
    if off.size and np.max(np.abs(off)) >= 1.0:
        raise ValueError("off-diagonal correlation reached |c| >= 1")
    lam_min = float(np.linalg.eigvalsh(c)[0])
    defect = max(0.0, -lam_min)
    if defect > PSD_TOLERANCE:
        warnings.warn(
            f"correlation matrix not PSD within tolerance "
            f"(lambda_min = {lam_min:.3e}); data or truncation issue",
            stacklevel=2,
        )
    return CorrelationMatrix(entries=c, psd_defect=defect)


def leading_correlation(config: RaceConfig) -> CorrelationMatrix:
    """Leading-order correlation of the limit law: unit diagonal and
    c_jk = -Delta(|t_j - t_k|) / log(1/delta).

    This is the matrix form in which the negative-correlation corollaries
    state their expansions; correlation_matrix(covariance_asymptotic(...))
    keeps the secondary diagonal term instead.
    """
    r = config.r
    L = config.log_inv_delta
    c = np.eye(r)
    for j in range(r):
        for k in range(j + 1, r):
            c[j, k] = c[k, j] = -delta_repulsion(config.gap(j, k)) / L
    return CorrelationMatrix(entries=c)


@dataclass(frozen=True)
class CovarianceReport:
    config: RaceConfig
    numeric: np.ndarray
    asymptotic: np.ndarray
    truncation_height: float
    tail_estimate: float

    @property
    def correlation(self) -> CorrelationMatrix:
        return correlation_matrix(self.numeric)


def covariance_report(config: RaceConfig, zeros: ZeroTable,
                      height: float | None = None) -> CovarianceReport:
    if height is None:
        height = zeros.height
    return CovarianceReport(
        config=config,
        numeric=covariance_numeric(config, zeros, height),
        asymptotic=covariance_asymptotic(config),
        truncation_height=float(height),
        tail_estimate=tail_estimate(float(height)),
    )


# ---------------------------------------------------------------------------
# almost-identity matrices


@dataclass(frozen=True)
class AlmostIdentityStats:
    det: float
    inv: np.ndarray
    bound_ok: bool


def almost_identity_stats(A: np.ndarray, epsilon: float) -> AlmostIdentityStats:
    """Determinant and inverse of a member of M_r(epsilon): symmetric, unit
    diagonal, off-diagonal entries bounded by epsilon <= 1/(2r).

    bound_ok checks det(A) >= 3/8 and |det(A) - 1| <= 4 * sum_{j != k} a_jk^2
    (the 4 is a measured constant, recorded, not a proved one).
    """
    A = np.asarray(A, dtype=np.float64)
    r = A.shape[0]
    if A.shape != (r, r):
        raise ValueError("square matrix required")
    if not np.allclose(A, A.T, atol=0.0):
        raise ValueError("matrix must be symmetric")
    if np.any(np.diag(A) != 1.0):
        raise ValueError("diagonal entries must equal 1")
    if epsilon > 1.0 / (2.0 * r):
        raise ValueError(f"epsilon {epsilon} exceeds 1/(2r) = {1.0/(2.0*r)}")
    off = A[~np.eye(r, dtype=bool)]
    if off.size and np.max(np.abs(off)) > epsilon:
        raise ValueError("off-diagonal entry exceeds epsilon")
    det = float(np.linalg.det(A))
    inv = np.linalg.inv(A)
    sq = float(np.sum(off * off))
    bound_ok = det >= 3.0 / 8.0 and abs(det - 1.0) <= 4.0 * sq
    return AlmostIdentityStats(det=det, inv=inv, bound_ok=bound_ok)


def random_almost_identity(r: int, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform member of M_r(epsilon): off-diagonals iid uniform on [-eps, eps]."""
    A = np.eye(r)
    iu = np.triu_indices(r, k=1)
    vals = rng.uniform(-epsilon, epsilon, size=len(iu[0]))
    A[iu] = vals
    A[(iu[1], iu[0])] = vals
    return A


# ---------------------------------------------------------------------------
# Mellin cross-check


@dataclass(frozen=True)
class MellinCheck:
    quadrature: float
    closed_form: float
    abs_err: float


def mellin_closed_form(kappa: float) -> float:
    """(pi/2) |kappa| (1 - gamma_E - log 2|kappa|)."""
    k = abs(kappa)
    return 0.5 * math.pi * k * (1.0 - GAMMA_E - math.log(2.0 * k))


def mellin_check(kappa: float) -> MellinCheck:
    """Quadrature of int_0^inf (sin(kappa x)/x)^2 log x dx vs the closed form.

    The integral is split at 1/|kappa|: an adaptive rule handles the
    (integrable) log singularity at 0; beyond the split, (sin k x)^2 is
    opened as (1 - cos 2kx)/2, the monotone part is integrated exactly and
    the oscillatory part goes to an infinite-range weighted rule.
    """
    if kappa == 0:
        raise ValueError("kappa = 0 is excluded (integral trivially 0)")
    k = abs(kappa)
    a = 1.0 / k

    def head(x: float) -> float:
        s = math.sin(k * x) / x
        return s * s * math.log(x)

    i_head, _ = quad(head, 0.0, a, limit=200, epsabs=1e-12, epsrel=1e-12)
    # int_a^inf log x / (2 x^2) dx = (log a + 1) / (2a)
    i_smooth = (math.log(a) + 1.0) / (2.0 * a)
    i_osc, _ = quad(
        lambda x: -math.log(x) / (2.0 * x * x),
        a,
        np.inf,
        weight="cos",
        wvar=2.0 * k,
        limlst=200,
        epsabs=1e-12,
    )
    total = i_head + i_smooth + i_osc
    closed = mellin_closed_form(kappa)
    return MellinCheck(quadrature=total, closed_form=closed,
                       abs_err=abs(total - closed))
