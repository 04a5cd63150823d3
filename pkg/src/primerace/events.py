"""Tiny event grammar over the coordinates of a draw matrix.

Forms accepted (whitespace ignored):
    "order"            strict descending ordering x1 > x2 > ... > xr
    "top:S"            x1 > ... > xS > max of the remaining coordinates
    comparisons joined by '&', each side a coordinate "xN" (1-based) or a
    numeric constant, with one of  >  <  >=  <=
    e.g. "x1>0 & x2>0", "x1>x2", "x2<=-0.5 & x1>x3"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

_CMP = re.compile(r"^(x(\d+)|[-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)(>=|<=|>|<)"
                  r"(x(\d+)|[-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)$")


@dataclass(frozen=True)
class EventPredicate:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, draws: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(draws, dtype=np.float64))


def ordering_event(r: int) -> EventPredicate:
    def fn(d: np.ndarray) -> np.ndarray:
        return np.all(d[:, :-1] > d[:, 1:], axis=1)

    return EventPredicate(name="order", fn=fn)


def top_s_event(s: int, r: int) -> EventPredicate:
    if not 1 <= s <= r:
        raise ValueError(f"top:{s} requires 1 <= s <= r = {r}")

    def fn(d: np.ndarray) -> np.ndarray:
        ok = np.ones(d.shape[0], dtype=bool)
        if s > 1:
            ok &= np.all(d[:, : s - 1] > d[:, 1:s], axis=1)
        if s < r:
            ok &= d[:, s - 1] > d[:, s:].max(axis=1)
        return ok

    return EventPredicate(name=f"top:{s}", fn=fn)


def _operand(tok: str, r: int):
    if tok.startswith("x") and tok[1:].isdigit():
        i = int(tok[1:])
        if not 1 <= i <= r:
            raise ValueError(f"coordinate {tok} out of range for r = {r}")
        return ("coord", i - 1)
    return ("const", float(tok))


def compile_event(expr: str, r: int) -> EventPredicate:
    expr = expr.strip()
    if expr == "order":
        return ordering_event(r)
    if expr.startswith("top:"):
        return top_s_event(int(expr[4:]), r)

    clauses = []
    for part in expr.split("&"):
        tok = part.replace(" ", "")
        m = _CMP.match(tok)
        if not m:
            raise ValueError(f"cannot parse event clause {part.strip()!r}")
        lhs = _operand(m.group(1), r)
        rhs = _operand(m.group(4), r)
        clauses.append((lhs, m.group(3), rhs))
    if not clauses:
        raise ValueError("empty event expression")

    def fn(d: np.ndarray) -> np.ndarray:
        ok = np.ones(d.shape[0], dtype=bool)
        for lhs, op, rhs in clauses:
            a = d[:, lhs[1]] if lhs[0] == "coord" else lhs[1]
            b = d[:, rhs[1]] if rhs[0] == "coord" else rhs[1]
            if op == ">":
                ok &= a > b
            elif op == "<":
                ok &= a < b
            elif op == ">=":
                ok &= a >= b
            else:
                ok &= a <= b
        return ok

    return EventPredicate(name=expr, fn=fn)
