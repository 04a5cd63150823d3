import math

import numpy as np
import pytest

from primerace import (RaceConfig, collect, empirical_event_density,
                       ks_statistic, neighbor_config)
from primerace.logdensity import EmpiricalDistribution
from primerace.sieve import PsiSieve


@pytest.fixture(scope="module")
def dist(zeros_full):
    sieve = PsiSieve(ceiling=11_000_000)
    return collect(1e6, 1e7, neighbor_config(0.05), 500, seed=31,
                   zeros=zeros_full, sieve=sieve)


def test_collect_shape_finite(dist):
    assert dist.samples.shape == (500, 2)
    assert np.all(np.isfinite(dist.samples))
    assert dist.variances.shape == (2,)


def test_collect_empty_rejected(zeros_1k):
    with pytest.raises(ValueError, match="n must be"):
        collect(1e4, 1e5, neighbor_config(0.05), 0, seed=1, zeros=zeros_1k)


def test_collect_reproducible(zeros_full):
    sieve = PsiSieve(ceiling=1_200_000)
    cfg = neighbor_config(0.05)
    a = collect(1e5, 1e6, cfg, 50, seed=2, zeros=zeros_full, sieve=sieve)
    b = collect(1e5, 1e6, cfg, 50, seed=2, zeros=zeros_full, sieve=sieve)
    assert np.array_equal(a.samples, b.samples)


def test_variance_band(dist):
    v = dist.samples.var(axis=0, ddof=1)
    assert np.all(v > 0.5) and np.all(v < 1.5)


def test_neighbor_correlation_negative(dist):
    assert np.corrcoef(dist.samples.T)[0, 1] < 0


def test_ks_pipeline(dist):
    for j in range(2):
        assert ks_statistic(dist, j) <= 0.15


def test_ks_on_seeded_normals():
    rng = np.random.Generator(np.random.Philox(99))
    n = 4000
    fake = EmpiricalDistribution(
        samples=rng.standard_normal((n, 1)), x_lo=2.0, x_hi=4.0, n=n,
        config=RaceConfig(0.05, (0.0,)), variances=np.ones(1),
        truncation_height=100.0, seed=99)
    # classical 99% quantile of sqrt(n) * KS is 1.63
    assert ks_statistic(fake, 0) <= 1.63 / math.sqrt(n)


def test_ks_on_constant_samples():
    n = 200
    fake = EmpiricalDistribution(
        samples=np.zeros((n, 1)), x_lo=2.0, x_hi=4.0, n=n,
        config=RaceConfig(0.05, (0.0,)), variances=np.ones(1),
        truncation_height=100.0, seed=0)
    assert ks_statistic(fake, 0) >= 0.5


def test_ks_needs_samples(zeros_full):
    sieve = PsiSieve(ceiling=1_200_000)
    d = collect(1e5, 1e6, neighbor_config(0.05), 50, seed=2,
                zeros=zeros_full, sieve=sieve)
    with pytest.raises(ValueError, match="n >= 100"):
        ks_statistic(d, 0)


def test_event_complement(dist):
    a = empirical_event_density(dist, "x1>0")
    b = empirical_event_density(dist, "x1<=0")
    assert a.p_hat + b.p_hat == 1.0
    assert a.method == "sieve-empirical"


def test_neighbor_config_shifts():
    cfg = neighbor_config(0.04)
    assert cfg.shifts == (-0.5, 0.5)
    # intervals at x: [x - dx, x] and [x, x + dx]
    a, b = cfg.interval(1000.0, 0)
    c, d = cfg.interval(1000.0, 1)
    assert abs(a - (1000.0 - 0.04 * 1000.0)) < 1e-9
    assert abs(b - 1000.0) < 1e-9
    assert abs(c - 1000.0) < 1e-9
    assert abs(d - (1000.0 + 0.04 * 1000.0)) < 1e-9
