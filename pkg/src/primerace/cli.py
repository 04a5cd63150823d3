"""Command-line entry point.

JSON is the canonical output (CSV where tabular); every record embeds the
tool version, zero-table source id, seed, and truncation height.  Exit codes:
0 success, 2 validation error, 3 band failure under --check.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RaceConfig
from .covariance import covariance_report, mellin_check
from .events import compile_event
from .explicit import deviation_explicit_many, predicted_error, residual_survey
from .gaussian import (gaussian_event_estimate, large_deviation_prediction,
                       model_correlation, negcorr_expansion,
                       ordering_prediction)
from .logdensity import collect, empirical_event_density, ks_statistic
from .model import estimate_event, sample
from .moments import qli_resonance_count, weighted_moment
from .presets import PRESETS
from .sieve import DEFAULT_CEILING, PsiSieve
from .zeros import ZeroTable, default_zero_path, load_zeros

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BAND = 3

DEFAULT_SEED = 20240901


def _json_safe(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _json_safe(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _emit(record: dict, args) -> None:
    payload = json.dumps(_json_safe(record), indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n")
    print(payload)


def _provenance(args, zeros: ZeroTable | None, seed=None, height=None) -> dict:
    return {
        "tool_version": __version__,
        "zero_table": zeros.source_id if zeros is not None else None,
        "seed": seed,
        "truncation_height": height,
    }


def _load_table(args) -> ZeroTable:
    path = args.zeros if args.zeros else default_zero_path()
    return load_zeros(path, limit=args.zeros_limit)


def _parse_shifts(text: str) -> tuple[float, ...]:
    return tuple(float(s) for s in text.split(","))


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--zeros", type=str, default=None,
                   help="zero table path (default: $PRIMERACE_DATA or bundled)")
    p.add_argument("--zeros-limit", type=int, default=None,
                   help="use only the first N ordinates")
    p.add_argument("--out", type=str, default=None, help="write JSON here too")
    p.add_argument("--threads", type=int, default=0,
                   help="worker threads for kernels (0 = auto)")
    p.add_argument("--check", action="store_true",
                   help="exit 3 when a declared band fails")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="primerace",
        description="numerical laboratory for primes in multiple short intervals",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", help="Chebyshev psi(x) by segmented sieve")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    _common(p)

    p = sub.add_parser("deviations", help="normalized deviations E(x; delta, t)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    _common(p)

    p = sub.add_parser("covariance", help="numeric and asymptotic covariance")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--asymptotic", action="store_true",
                   help="emit the asymptotic matrix only (no zero sum)")
    _common(p)

    p = sub.add_parser("simulate", help="Monte Carlo event density")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--event", type=str, required=True,
                   help='e.g. "x1>0 & x2>0", "order", "top:3"')
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--law", choices=["zeros", "gaussian"], default="zeros",
                   help="zero-sum model (finite height) or the asymptotic "
                        "Gaussian model (delta -> 0 regime)")
    _common(p)

    p = sub.add_parser("predict", help="Gaussian-theory prediction")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--target", type=str, required=True,
                   help="orthant | order | top:S | tail:V")
    p.add_argument("--n", type=int, default=1_000_000,
                   help="MC budget for targets without closed forms")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _common(p)

    p = sub.add_parser("explicit-check", help="sieve vs explicit-formula survey")
    p.add_argument("--x-lo", type=float, required=True)
    p.add_argument("--x-hi", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--height", type=float, required=True, help="truncation Z")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--csv", type=str, default=None,
                   help="write per-x columns (x, E_sieve, E_explicit, diff)")
    _common(p)

    p = sub.add_parser("empirical", help="sieve-empirical logarithmic densities")
    p.add_argument("--x-lo", type=float, required=True)
    p.add_argument("--x-hi", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--event", type=str, default=None)
    p.add_argument("--dump", type=str, default=None,
                   help="CSV dump of the normalized rows")
    _common(p)

    p = sub.add_parser("moments", help="smooth-weighted moments of E~^(T)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--height", type=float, required=True)
    p.add_argument("--U", type=float, required=True)
    p.add_argument("--nodes", type=int, default=None)
    _common(p)

    p = sub.add_parser("qli-count", help="near-resonance tuple counting")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--signs", type=str, required=True, help="CSV of +-1")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--threshold", type=float, required=True)
    _common(p)

    p = sub.add_parser("preset", help="run a named experiment preset")
    p.add_argument("name", choices=sorted(PRESETS))
    _common(p)

    p = sub.add_parser("compare", help="MC vs Gaussian prediction vs sieve")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--shifts", type=str, required=True)
    p.add_argument("--n", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--height", type=float, default=None)
    p.add_argument("--x-lo", type=float, default=None)
    p.add_argument("--x-hi", type=float, default=None)
    p.add_argument("--empirical-n", type=int, default=2000)
    _common(p)

    return ap


def _cmd_psi(args) -> int:
    sieve = PsiSieve(ceiling=args.ceiling)
    record = {"x": args.x, "psi": sieve.psi(args.x)}
    record.update(_provenance(args, None))
    _emit(record, args)
    return EXIT_OK


def _cmd_deviations(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    sieve = PsiSieve(ceiling=args.ceiling)
    e = sieve.deviation_vector(args.x, config)
    record = {
        "x": args.x,
        "delta": config.delta,
        "shifts": list(config.shifts),
        "E": e.tolist(),
    }
    record.update(_provenance(args, None))
    _emit(record, args)
    return EXIT_OK


def _cmd_covariance(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    if args.asymptotic:
        from .covariance import correlation_matrix, covariance_asymptotic

        cov = covariance_asymptotic(config)
        record = {
            "asymptotic": cov.tolist(),
            "correlation": correlation_matrix(cov).entries.tolist(),
        }
        record.update(_provenance(args, None))
        _emit(record, args)
        return EXIT_OK
    zeros = _load_table(args)
    rep = covariance_report(config, zeros, args.height)
    record = {
        "numeric": rep.numeric.tolist(),
        "asymptotic": rep.asymptotic.tolist(),
        "correlation": rep.correlation.entries.tolist(),
        "tail_estimate": rep.tail_estimate,
    }
    record.update(_provenance(args, zeros, height=rep.truncation_height))
    _emit(record, args)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    event = compile_event(args.event, config.r)
    if args.law == "gaussian":
        corr = model_correlation(config, form="leading")
        est = gaussian_event_estimate(corr, event, args.n, args.seed)
        height = None
        zeros = None
    else:
        zeros = _load_table(args)
        height = args.height if args.height else zeros.height
        batch = sample(config, zeros, height, args.n, args.seed)
        est = estimate_event(batch, event)
    record = {
        "event": event.name,
        "law": args.law,
        "p_hat": est.p_hat,
        "std_err": est.std_err,
        "n": est.n,
        "method": est.method,
    }
    record.update(_provenance(args, zeros, seed=args.seed, height=height))
    _emit(record, args)
    return EXIT_OK


def _cmd_predict(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    target = args.target
    if target == "orthant":
        pred = negcorr_expansion(config, [(0.0, math.inf)] * config.r)
        record = {"target": target, "value": pred.value,
                  "correction": pred.correction,
                  "remainder_order": pred.remainder_order}
    elif target == "order":
        pred = ordering_prediction(config)
        record = {"target": target, "value": pred.value,
                  "correction": pred.correction,
                  "remainder_order": pred.remainder_order}
    elif target.startswith("top:"):
        s = int(target[4:])
        from .events import top_s_event

        corr = model_correlation(config, form="leading")
        est = gaussian_event_estimate(corr, top_s_event(s, config.r),
                                      args.n, args.seed)
        record = {"target": target, "value": est.p_hat,
                  "std_err": est.std_err, "n": est.n,
                  "method": "gaussian-mc"}
    elif target.startswith("tail:"):
        V = float(target[5:])
        pred = large_deviation_prediction(config, V)
        record = {"target": target, "value": pred.value,
                  "correction": pred.correction,
                  "remainder_order": pred.remainder_order}
    else:
        raise ValueError(f"unknown target {target!r}")
    record.update(_provenance(args, None, seed=args.seed))
    _emit(record, args)
    return EXIT_OK


def _cmd_explicit_check(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    zeros = _load_table(args)
    summary = residual_survey(args.x_lo, args.x_hi, config, 0, zeros,
                              args.height, args.n, args.seed)
    if args.csv:
        rng = np.random.Generator(np.random.Philox(args.seed))
        us = rng.uniform(math.log(args.x_lo), math.log(args.x_hi), size=args.n)
        xs = np.exp(us)
        sub = RaceConfig(config.delta, [config.shifts[0]])
        top = args.x_hi * (1 + (abs(config.shifts[0]) + 0.5) * config.delta) + 1
        sieve = PsiSieve(ceiling=int(top) + 1)
        e_sieve = sieve.deviation_rows(xs, sub)[:, 0]
        e_expl = deviation_explicit_many(xs, config, 0, zeros, args.height)
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["x", "E_sieve", "E_explicit", "diff"])
            for row in zip(xs, e_sieve, e_expl, e_sieve - e_expl):
                w.writerow([f"{v:.12g}" for v in row])
    record = {
        "rms": summary.rms,
        "corr": summary.corr,
        "n": summary.n,
        "envelope_rms": summary.envelope_rms,
        "envelope_budget": summary.envelope_rms * 10.0,
    }
    record.update(_provenance(args, zeros, seed=args.seed, height=args.height))
    _emit(record, args)
    if args.check and not (summary.corr >= 0.95
                           and summary.rms <= 10.0 * summary.envelope_rms):
        return EXIT_BAND
    return EXIT_OK


def _cmd_empirical(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    zeros = _load_table(args)
    dist = collect(args.x_lo, args.x_hi, config, args.n, args.seed, zeros)
    record = {
        "n": dist.n,
        "variances": dist.variances.tolist(),
        "sample_mean": dist.samples.mean(axis=0).tolist(),
        "sample_var": dist.samples.var(axis=0, ddof=1).tolist(),
        "ks": [ks_statistic(dist, j) for j in range(config.r)],
    }
    if config.r >= 2:
        record["corr12"] = float(np.corrcoef(dist.samples[:, 0],
                                             dist.samples[:, 1])[0, 1])
    if args.event:
        est = empirical_event_density(dist, args.event)
        record["event"] = args.event
        record["p_hat"] = est.p_hat
        record["std_err"] = est.std_err
    if args.dump:
        with open(args.dump, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow([f"E{j+1}" for j in range(config.r)])
            for row in dist.samples:
                w.writerow([f"{v:.12g}" for v in row])
    record.update(_provenance(args, zeros, seed=args.seed,
                              height=dist.truncation_height))
    _emit(record, args)
    return EXIT_OK


def _cmd_moments(args) -> int:
    zeros = _load_table(args)
    config = RaceConfig(args.delta, (0.0,))
    res = weighted_moment(args.k, args.U, config, zeros, args.height,
                          quad_points=args.nodes)
    record = {
        "k": res.k,
        "value": res.value,
        "U": res.U,
        "nodes": res.nodes,
        "variance_T": res.variance_T,
    }
    record.update(_provenance(args, zeros, height=res.truncation_height))
    _emit(record, args)
    return EXIT_OK


def _cmd_qli_count(args) -> int:
    zeros = _load_table(args)
    signs = tuple(int(s) for s in args.signs.split(","))
    res = qli_resonance_count(args.k, signs, zeros, args.T, args.threshold)
    n = res.n_zeros
    record = {
        "k": args.k,
        "signs": list(signs),
        "T": args.T,
        "threshold": args.threshold,
        "count": res.count,
        "diagonal_count": res.diagonal_count,
        "n_zeros": n,
        "normalized": res.count / n ** (args.k / 2.0) if n else None,
    }
    record.update(_provenance(args, zeros, height=args.T))
    _emit(record, args)
    return EXIT_OK


def _cmd_preset(args) -> int:
    preset = PRESETS[args.name]
    record = preset.run()
    record.update(_provenance(args, None,
                              seed=preset.params.get("seed")))
    _emit(record, args)
    if args.check and not record.get("pass", True):
        return EXIT_BAND
    return EXIT_OK


def _cmd_compare(args) -> int:
    config = RaceConfig(args.delta, _parse_shifts(args.shifts))
    zeros = _load_table(args)
    height = args.height if args.height else zeros.height
    rows = []
    pred = ordering_prediction(config)
    from .model import estimate_ordering

    mc = estimate_ordering(config, zeros, height, args.n, args.seed)
    rows.append({"source": "zero-model-mc", "value": mc.p_hat,
                 "std_err": mc.std_err})
    rows.append({"source": "gaussian-prediction", "value": pred.value,
                 "correction": pred.correction})
    if args.x_lo and args.x_hi:
        dist = collect(args.x_lo, args.x_hi, config, args.empirical_n,
                       args.seed, zeros, height)
        est = empirical_event_density(dist, "order")
        rows.append({"source": "sieve-empirical", "value": est.p_hat,
                     "std_err": est.std_err})
    record = {"event": "order", "rows": rows}
    record.update(_provenance(args, zeros, seed=args.seed, height=height))
    _emit(record, args)
    return EXIT_OK


_DISPATCH = {
    "psi": _cmd_psi,
    "deviations": _cmd_deviations,
    "covariance": _cmd_covariance,
    "simulate": _cmd_simulate,
    "predict": _cmd_predict,
    "explicit-check": _cmd_explicit_check,
    "empirical": _cmd_empirical,
    "moments": _cmd_moments,
    "qli-count": _cmd_qli_count,
    "preset": _cmd_preset,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "threads", 0):
        import numba

        numba.set_num_threads(args.threads)
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
