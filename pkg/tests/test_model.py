import math

import numpy as np
import pytest

from primerace import (RaceConfig, char_fn, covariance_numeric, estimate_event,
                       estimate_ordering, estimate_top_s_ordering, sample,
                       tail_bound_check)
from primerace.events import compile_event
from primerace.model import bernoulli_estimate, tail_bound

CONFIG = RaceConfig(0.01, (0.0, 1.0))


@pytest.fixture(scope="module")
def batch(zeros_10k):
    return sample(CONFIG, zeros_10k, zeros_10k.height, 30_000, seed=424242)


def test_mean_is_zero(batch, zeros_10k):
    cov = covariance_numeric(CONFIG, zeros_10k)
    band = 4.0 * np.sqrt(np.diag(cov) / batch.n)
    assert np.all(np.abs(batch.draws.mean(axis=0)) < band)


def test_variance_matches_numeric(batch, zeros_10k):
    cov = covariance_numeric(CONFIG, zeros_10k)
    emp = np.cov(batch.draws.T)
    n = batch.n
    for j in range(2):
        se = cov[j, j] * math.sqrt(2.0 / n)
        assert abs(emp[j, j] - cov[j, j]) < 5.0 * se
    se_off = math.sqrt((cov[0, 0] * cov[1, 1] + cov[0, 1] ** 2) / n)
    assert abs(emp[0, 1] - cov[0, 1]) < 5.0 * se_off
    assert emp[0, 1] < 0  # gap-1 repulsion


def test_negative_correlation_replications(zeros_10k):
    neg = 0
    for seed in range(20):
        b = sample(CONFIG, zeros_10k, zeros_10k.height, 20_000, seed=seed)
        if np.corrcoef(b.draws.T)[0, 1] < 0:
            neg += 1
    assert neg == 20


def test_reproducible_bitwise(zeros_10k):
    a = sample(CONFIG, zeros_10k, zeros_10k.height, 4000, seed=7)
    b = sample(CONFIG, zeros_10k, zeros_10k.height, 4000, seed=7)
    assert np.array_equal(a.draws, b.draws)
    c = sample(CONFIG, zeros_10k, zeros_10k.height, 4000, seed=8)
    assert not np.array_equal(a.draws, c.draws)


def test_thread_count_invariance(zeros_10k):
    import numba

    a = sample(CONFIG, zeros_10k, zeros_10k.height, 4000, seed=7).draws.copy()
    old = numba.get_num_threads()
    try:
        numba.set_num_threads(1)
        b = sample(CONFIG, zeros_10k, zeros_10k.height, 4000, seed=7).draws.copy()
    finally:
        numba.set_num_threads(old)
    assert np.array_equal(a, b)


def test_estimate_event_complement(batch):
    e1 = estimate_event(batch, "x1>0")
    e2 = estimate_event(batch, "x1<=0")
    assert e1.p_hat + e2.p_hat == 1.0


def test_estimate_event_half(batch):
    est = estimate_event(batch, "x1>0")
    assert abs(est.p_hat - 0.5) < 4.0 * est.std_err + 0.01
    assert est.method == "monte-carlo"
    assert est.std_err == math.sqrt(est.p_hat * (1 - est.p_hat) / est.n)


def test_ordering_two_way(zeros_10k):
    est = estimate_ordering(CONFIG, zeros_10k, zeros_10k.height, 30_000, seed=5)
    assert abs(est.p_hat - 0.5) < 5.0 * est.std_err


def test_top_s_equals_ordering_for_s_eq_r(zeros_10k):
    a = estimate_ordering(CONFIG, zeros_10k, zeros_10k.height, 10_000, seed=3)
    b = estimate_top_s_ordering(CONFIG, 2, zeros_10k, zeros_10k.height,
                                10_000, seed=3)
    assert a.p_hat == b.p_hat


def test_ordering_requires_r2(zeros_1k):
    with pytest.raises(ValueError, match="r >= 2"):
        estimate_ordering(RaceConfig(0.01, (0.0,)), zeros_1k, 100.0, 10, seed=0)


def test_char_fn_at_zero(zeros_1k):
    assert char_fn(CONFIG, zeros_1k, zeros_1k.height, [0.0, 0.0]) == 1.0


def test_char_fn_bounded(zeros_1k):
    rng = np.random.default_rng(1)
    for _ in range(20):
        xi = rng.uniform(-50, 50, size=2)
        assert abs(char_fn(CONFIG, zeros_1k, zeros_1k.height, xi)) <= 1.0


def test_char_fn_matches_mc(batch, zeros_10k):
    cov = covariance_numeric(CONFIG, zeros_10k)
    xi = np.array([3.0, -2.0]) / np.sqrt(np.diag(cov))
    cf = char_fn(CONFIG, zeros_10k, zeros_10k.height, xi)
    samples = np.cos(batch.draws @ xi)
    se = samples.std(ddof=1) / math.sqrt(batch.n)
    assert abs(samples.mean() - cf) < 5.0 * se


def test_tail_bound_monotone():
    config = RaceConfig(0.01, (0.0,))
    v = math.sqrt(config.delta * config.log_inv_delta)
    bounds = [tail_bound(config, m * v) for m in (2.0, 3.0, 4.0)]
    assert bounds[0] > bounds[1] > bounds[2]


def test_tail_bound_precondition():
    config = RaceConfig(0.01, (0.0,))
    with pytest.raises(ValueError, match="R >"):
        tail_bound(config, 0.01)


def test_tail_bound_check_huge_R(zeros_1k):
    config = RaceConfig(0.01, (0.0,))
    res = tail_bound_check(config, zeros_1k, zeros_1k.height, 5.0, 1000, seed=1)
    assert res.p_hat == 0.0 and res.ok


def test_tail_bound_check_moderate(zeros_10k):
    config = RaceConfig(0.01, (0.0, 1.0))
    v = math.sqrt(config.delta * config.log_inv_delta)
    res = tail_bound_check(config, zeros_10k, zeros_10k.height, 2.0 * v,
                           20_000, seed=2)
    assert res.ok


def test_bernoulli_estimate_empty():
    with pytest.raises(ValueError, match="empty"):
        bernoulli_estimate(np.array([], dtype=bool))


def test_j0_against_high_precision():
    # the Bessel evaluations inside char_fn: validated to 1e-12 at 1e3 points
    mpmath = pytest.importorskip("mpmath")
    from scipy.special import j0

    xs = np.linspace(0.0, 60.0, 1000)
    ref = np.array([float(mpmath.besselj(0, mpmath.mpf(float(x)))) for x in xs])
    assert np.max(np.abs(j0(xs) - ref)) < 1e-12
