"""Zero-ordinate tables: loading, validation, counting, and data-quality checks.

Only positive ordinates are stored.  Every downstream sum over all zeros is
taken as 2*Re(...) over gamma > 0, so conjugate zeros never need to appear in
a table.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DATA_ENV = "PRIMERACE_DATA"
_PACKAGED_DATA = Path(__file__).parent / "data"

FIRST_ZERO = 14.134725141734694
TWO_PI = 2.0 * math.pi


class ZeroTableError(ValueError):
    """Raised when a zero file fails validation."""


@dataclass(frozen=True)
class ZeroTable:
    """Validated ascending positive ordinates gamma_n of nontrivial zeros."""

    ordinates: np.ndarray
    source_id: str
    precision_digits: int = 9

    def __post_init__(self):
        g = np.asarray(self.ordinates, dtype=np.float64)
        object.__setattr__(self, "ordinates", g)
        if g.ndim != 1 or g.size == 0:
            raise ZeroTableError("empty zero table")
        if not np.all(g > 0):
            raise ZeroTableError("non-positive ordinate in table")
        d = np.diff(g)
        if np.any(d <= 0):
            i = int(np.argmax(d <= 0))
            if g[i + 1] == g[i]:
                raise ZeroTableError(f"duplicate ordinate at index {i + 1}")
            raise ZeroTableError(
                f"ordinates not strictly increasing at index {i + 1}: "
                f"{g[i]} then {g[i + 1]}"
            )
        if not (14.0 < g[0] < 14.2):
            raise ZeroTableError(
                f"first ordinate {g[0]} is not the first zeta zero (~14.1347)"
            )
        if self.precision_digits < 9:
            raise ZeroTableError("precision_digits must be >= 9")

    def __len__(self) -> int:
        return int(self.ordinates.size)

    @property
    def height(self) -> float:
        """Largest ordinate covered by the table."""
        return float(self.ordinates[-1])

    def up_to(self, height: float) -> np.ndarray:
        """Ordinates gamma <= height, with a coverage warning if short."""
        if height > self.height:
            warnings.warn(
                f"table {self.source_id!r} covers heights up to "
                f"{self.height:.3f} < requested {height:.3f}",
                stacklevel=2,
            )
        n = count_below(self, height, _warn=False)
        return self.ordinates[:n]


def load_zeros(path: str | os.PathLike, limit: int | None = None,
               precision_digits: int = 9) -> ZeroTable:
    """Load a plain-text table: one decimal ordinate per line, ascending.

    Parse failures report the offending line number.
    """
    path = Path(path)
    values: list[float] = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                values.append(float(s))
            except ValueError:
                raise ZeroTableError(
                    f"{path}:{lineno}: malformed ordinate {s!r}"
                ) from None
            if limit is not None and len(values) >= limit:
                break
    if not values:
        raise ZeroTableError(f"{path}: empty zero file")
    return ZeroTable(
        ordinates=np.array(values, dtype=np.float64),
        source_id=path.name,
        precision_digits=precision_digits,
    )


def default_zero_path() -> Path:
    """Resolve the zero file: $PRIMERACE_DATA/zeros.txt if set, else bundled."""
    env = os.environ.get(DATA_ENV)
    if env:
        p = Path(env)
        if p.is_file():
            return p
        candidate = p / "zeros.txt"
        if candidate.is_file():
            return candidate
        raise FileNotFoundError(f"{DATA_ENV}={env}: no zero file found there")
    return _PACKAGED_DATA / "zeros_100k.txt"


def bundled_table(name: str = "zeros_100k.txt", limit: int | None = None) -> ZeroTable:
    return load_zeros(_PACKAGED_DATA / name, limit=limit)


def count_below(table: ZeroTable, T: float, _warn: bool = True) -> int:
    """N(T) = #{n : gamma_n <= T} from the table."""
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    if _warn and T > table.height:
        warnings.warn(
            f"count_below({T}) beyond table coverage {table.height:.3f}; "
            "count is a lower bound",
            stacklevel=2,
        )
    return int(np.searchsorted(table.ordinates, T, side="right"))


def rvm_main_term(T) -> np.ndarray | float:
    """Riemann-von Mangoldt main term (T/2pi) log(T/2pi) - T/2pi.

    Evaluates to 0 at T = 0 (the 0*log 0 limit).
    """
    T = np.asarray(T, dtype=np.float64)
    x = T / TWO_PI
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)) - x, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def rvm_residuals(table: ZeroTable, grid) -> list[tuple[float, float]]:
    """(T, N(T) - main term) along a grid of heights, for data-quality reports."""
    out = []
    for T in grid:
        n = count_below(table, float(T))
        out.append((float(T), n - rvm_main_term(float(T))))
    return out


def check_rvm_band(table: ZeroTable, constant: float = 3.0) -> float:
    """Largest |residual| / log(T+2) over all table heights (quality gate).

    The loader's data-quality gate asserts this stays below ``constant``;
    it is a check on the data, not on any theorem.
    """
    n = np.arange(1, len(table) + 1, dtype=np.float64)
    resid = np.abs(n - rvm_main_term(table.ordinates))
    ratio = resid / np.log(table.ordinates + 2.0)
    return float(ratio.max())
