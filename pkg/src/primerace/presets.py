"""Versioned experiment presets encoding the race scenarios from the
negative-correlation corollaries, with pinned seeds and expected bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .config import RaceConfig
from .events import compile_event, top_s_event
from .gaussian import (gaussian_event_estimate, model_correlation,
                       negcorr_expansion, ordering_prediction)
from .weights import delta_repulsion

PRESET_VERSION = 1


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    description: str
    params: dict[str, Any]
    band: dict[str, float] | None
    runner: Callable[..., dict[str, Any]]

    def run(self) -> dict[str, Any]:
        out = self.runner(**self.params)
        out["preset"] = self.name
        out["preset_version"] = PRESET_VERSION
        out["params"] = {k: v for k, v in self.params.items()}
        if self.band is not None:
            out["band"] = dict(self.band)
        return out


def _run_three_way(delta: float, n: int, seed: int) -> dict[str, Any]:
    """Descending three-way race at consecutive shifts: MC under the leading
    Gaussian model vs the closed-form first-order prediction."""
    config = RaceConfig(delta, (-1.0, 0.0, 1.0))
    pred = ordering_prediction(config)
    corr = model_correlation(config, form="leading")
    est = gaussian_event_estimate(corr, compile_event("order", 3), n, seed)
    return {
        "prediction": pred.value,
        "correction": pred.correction,
        "mc": est.p_hat,
        "std_err": est.std_err,
        "n": n,
        "seed": seed,
        "abs_diff": abs(est.p_hat - pred.value),
        "pass": abs(est.p_hat - pred.value) <= 5.0 * est.std_err,
    }


def _run_neighbor_orthant(delta: float, n: int, seed: int) -> dict[str, Any]:
    """Both neighbouring intervals above average: orthant probability with
    the repulsion correction (gap exactly 1)."""
    config = RaceConfig(delta, (-0.5, 0.5))
    pred = negcorr_expansion(config, [(0.0, math.inf)] * 2)
    corr = model_correlation(config, form="leading")
    est = gaussian_event_estimate(corr, compile_event("x1>0 & x2>0", 2), n, seed)
    return {
        "prediction": pred.value,
        "correction": pred.correction,
        "mc": est.p_hat,
        "std_err": est.std_err,
        "n": n,
        "seed": seed,
        "abs_diff": abs(est.p_hat - pred.value),
        "pass": abs(est.p_hat - pred.value) <= 5.0 * est.std_err,
    }


def _run_extreme_bias(delta: float, r: int, s: int, n: int, seed: int) -> dict[str, Any]:
    """The biased-race configuration u = (1, ..., s, -L, -2L, ...) with
    L = log(1/delta): the top-s ordering density falls strictly below the
    unbiased value (r-s)!/r!."""
    L = math.log(1.0 / delta)
    shifts = tuple(float(i) for i in range(1, s + 1)) + tuple(
        -L * i for i in range(1, r - s + 1))
    config = RaceConfig(delta, shifts)
    corr = model_correlation(config, form="leading")
    est = gaussian_event_estimate(corr, top_s_event(s, r), n, seed)
    unbiased = math.factorial(r - s) / math.factorial(r)
    return {
        "unbiased": unbiased,
        "mc": est.p_hat,
        "std_err": est.std_err,
        "n": n,
        "seed": seed,
        "ci_upper": est.p_hat + 5.0 * est.std_err,
        "pass": est.p_hat + 5.0 * est.std_err < unbiased,
    }


def _run_coulomb(points: tuple[float, ...]) -> dict[str, Any]:
    worst = max(abs(2.0 * t * delta_repulsion(t) - 1.0) for t in points)
    return {
        "points": list(points),
        "worst_abs_dev": worst,
        "pass": worst <= 1e-3,
    }


PRESETS: dict[str, ExperimentPreset] = {}


def _register(p: ExperimentPreset) -> None:
    PRESETS[p.name] = p


_register(ExperimentPreset(
    name="corollary-3way",
    description="three consecutive intervals, descending order, delta=e^-10",
    params={"delta": math.exp(-10.0), "n": 10_000_000, "seed": 20240901},
    band={"std_errs": 5.0},
    runner=_run_three_way,
))

_register(ExperimentPreset(
    name="neighbor-orthant",
    description="two adjacent intervals both above average, delta=e^-10",
    params={"delta": math.exp(-10.0), "n": 1_000_000, "seed": 20240902},
    band={"std_errs": 5.0},
    runner=_run_neighbor_orthant,
))

_register(ExperimentPreset(
    name="extreme-bias",
    description="biased top-3 race among r=6 at delta=e^-15",
    params={"delta": math.exp(-15.0), "r": 6, "s": 3,
            "n": 10_000_000, "seed": 20240903},
    band={"std_errs": 5.0},
    runner=_run_extreme_bias,
))

_register(ExperimentPreset(
    name="coulomb",
    description="2t*Delta(t) -> 1 along t = 30, 100, 1000",
    params={"points": (30.0, 100.0, 1000.0)},
    band={"abs": 1e-3},
    runner=_run_coulomb,
))
