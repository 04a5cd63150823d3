import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad

from primerace import (RaceConfig, qli_resonance_count, smooth_weight,
                       truncation_gap, weighted_moment)
from primerace.moments import nyquist_nodes, weighted_moments


def test_smooth_weight_properties():
    w = smooth_weight(0.1)
    s = np.linspace(0.0, 3.0, 2001)
    vals = w(s)
    assert np.all(vals >= 0)
    assert np.all(vals[(s <= 0.5) | (s >= 2.5)] == 0)
    mass, _ = quad(w, 0.5, 2.5, limit=200, epsabs=1e-12, epsrel=1e-12)
    assert abs(mass - 1.0) < 1e-10
    # plateau is flat
    plateau = w(np.linspace(1.1, 1.9, 100))
    assert np.max(plateau) - np.min(plateau) < 1e-14


def test_smooth_weight_epsilon_validation():
    with pytest.raises(ValueError, match="epsilon"):
        smooth_weight(0.7)


@pytest.fixture(scope="module")
def zeros_2k(zeros_10k):
    from primerace import ZeroTable

    return ZeroTable(ordinates=zeros_10k.ordinates[:2000],
                     source_id="zeros_2k", precision_digits=9)


def test_moment_k2_small_scale(zeros_2k):
    config = RaceConfig(0.02, (0.0,))
    res = weighted_moment(2, 20.0, config, zeros_2k, zeros_2k.height)
    assert abs(res.value - 1.0) < 0.1


def test_moment_node_doubling_invariance(zeros_2k):
    config = RaceConfig(0.02, (0.0,))
    n0 = 2 * nyquist_nodes(20.0, zeros_2k.height)
    a = weighted_moment(2, 20.0, config, zeros_2k, zeros_2k.height,
                        quad_points=n0)
    b = weighted_moment(2, 20.0, config, zeros_2k, zeros_2k.height,
                        quad_points=2 * n0)
    assert abs(a.value - b.value) < 1e-3


def test_moment_batch_matches_single(zeros_2k):
    config = RaceConfig(0.02, (0.0,))
    batch = weighted_moments([1, 2], 20.0, config, zeros_2k, zeros_2k.height)
    single = weighted_moment(2, 20.0, config, zeros_2k, zeros_2k.height)
    assert batch[1].value == single.value


def test_moment_nyquist_guard(zeros_2k):
    config = RaceConfig(0.02, (0.0,))
    need = nyquist_nodes(20.0, zeros_2k.height)
    with pytest.raises(ValueError, match=f">= {need} required"):
        weighted_moment(2, 20.0, config, zeros_2k, zeros_2k.height,
                        quad_points=need // 2)


def test_moment_preconditions(zeros_2k):
    with pytest.raises(ValueError, match="single moving interval"):
        weighted_moment(2, 20.0, RaceConfig(0.02, (0.0, 1.0)), zeros_2k,
                        zeros_2k.height)
    with pytest.raises(ValueError, match="delta\\*T"):
        weighted_moment(2, 20.0, RaceConfig(0.001, (0.0,)), zeros_2k, 1000.0)
    with pytest.raises(ValueError, match="k must be"):
        weighted_moment(9, 20.0, RaceConfig(0.02, (0.0,)), zeros_2k,
                        zeros_2k.height)


def test_truncation_gap(zeros_10k):
    config = RaceConfig(0.01, (0.0,))
    full = truncation_gap(zeros_10k.height, config, zeros_10k)
    assert full.gap == 0.0
    half = truncation_gap(zeros_10k.height / 2.0, config, zeros_10k)
    assert 0.0 < half.gap <= half.bound
    quarter = truncation_gap(zeros_10k.height / 4.0, config, zeros_10k)
    assert quarter.gap > half.gap


# ---------------------------------------------------------------------------
# near-resonance counting


def brute_force_count(g, eps, thr):
    """Oracle: excludes exact cancellations combinatorially (multiset pairing),
    not by floating-point residue, matching the mathematical definition."""
    count = 0
    for tup in itertools.product(g, repeat=len(eps)):
        plus = sorted(x for e, x in zip(eps, tup) if e == 1)
        minus = sorted(x for e, x in zip(eps, tup) if e == -1)
        if plus == minus:
            continue
        if abs(math.fsum(e * x for e, x in zip(eps, tup))) <= thr:
            count += 1
    return count


def test_k2_below_min_gap(zeros_1k):
    gaps = np.diff(zeros_1k.ordinates)
    thr = 0.5 * float(gaps.min())
    res = qli_resonance_count(2, (1, -1), zeros_1k, 500.0, thr)
    assert res.count == 0
    assert res.diagonal_count == res.n_zeros


def test_k2_same_sign(zeros_1k):
    res = qli_resonance_count(2, (1, 1), zeros_1k, 500.0, 20.0)
    assert res.count == 0 and res.diagonal_count == 0


def test_k3_brute_force_oracle(zeros_1k):
    g = zeros_1k.up_to(100.0)
    assert g.size == 29
    for thr in (1e-3, 0.05, 1.0):
        res = qli_resonance_count(3, (1, 1, -1), zeros_1k, 100.0, thr)
        assert res.count == brute_force_count(g, (1, 1, -1), thr)
        assert res.diagonal_count == 0


def test_k4_brute_force_oracle(zeros_1k):
    g = zeros_1k.up_to(60.0)  # 13 zeros -> ~29k tuples
    res = qli_resonance_count(4, (1, 1, -1, -1), zeros_1k, 60.0, 0.05)
    n = g.size
    assert res.diagonal_count == 2 * n * n - n
    assert res.count == brute_force_count(g, (1, 1, -1, -1), 0.05)


def test_sign_flip_symmetry(zeros_1k):
    a = qli_resonance_count(3, (1, 1, -1), zeros_1k, 200.0, 0.01)
    b = qli_resonance_count(3, (-1, -1, 1), zeros_1k, 200.0, 0.01)
    assert a.count == b.count


def test_budget_guard(zeros_full):
    with pytest.raises(ValueError, match="budget"):
        qli_resonance_count(4, (1, 1, 1, -1), zeros_full, 5000.0, 1e-4)


def test_qli_validation(zeros_1k):
    with pytest.raises(ValueError, match="k must be"):
        qli_resonance_count(5, (1,) * 5, zeros_1k, 100.0, 0.1)
    with pytest.raises(ValueError, match="entries of"):
        qli_resonance_count(2, (1, 0), zeros_1k, 100.0, 0.1)
    with pytest.raises(ValueError, match="threshold"):
        qli_resonance_count(2, (1, -1), zeros_1k, 100.0, 0.0)


def test_odd_moments_near_zero(zeros_2k):
    # pilot-calibrated zero bands at the k=2 settings (pilot: m1 ~ 0,
    # m3 ~ 0.018, m5 ~ 0.016)
    config = RaceConfig(0.02, (0.0,))
    res = weighted_moments([1, 3, 5], 20.0, config, zeros_2k, zeros_2k.height)
    m = {r.k: r.value for r in res}
    assert abs(m[1]) <= 0.02
    assert abs(m[3]) <= 0.2
    assert abs(m[5]) <= 0.5
