"""Race configuration: interval width delta and the shift vector t_1..t_r."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class RaceConfig:
    """A family of r short intervals of length delta*x centred at (1+t_j*delta)*x.

    Intervals must be pairwise disjoint, which is enforced as a minimum shift
    gap of 1: |t_j - t_k| >= 1 for j != k.
    """

    delta: float
    shifts: tuple[float, ...]

    def __init__(self, delta: float, shifts):
        if not (0.0 < delta <= 0.25):
            raise ValueError(f"delta must be in (0, 0.25], got {delta}")
        shifts = tuple(float(t) for t in shifts)
        if not shifts:
            raise ValueError("at least one shift is required")
        for j in range(len(shifts)):
            for k in range(j + 1, len(shifts)):
                gap = abs(shifts[j] - shifts[k])
                if gap < 1.0:
                    raise ValueError(
                        f"shifts {shifts[j]} and {shifts[k]} overlap: "
                        f"|t_j - t_k| = {gap} < 1"
                    )
        object.__setattr__(self, "delta", float(delta))
        object.__setattr__(self, "shifts", shifts)

    @property
    def r(self) -> int:
        return len(self.shifts)

    @property
    def t_span(self) -> float:
        """1 + max |t_j|, the height scale entering weight bounds."""
        return 1.0 + max(abs(t) for t in self.shifts)

    @property
    def log_inv_delta(self) -> float:
        return math.log(1.0 / self.delta)

    def interval(self, x: float, j: int) -> tuple[float, float]:
        """Real endpoints of interval j at location x."""
        t = self.shifts[j]
        centre = (1.0 + t * self.delta) * x
        half = 0.5 * self.delta * x
        return centre - half, centre + half

    def admissible_at(self, x: float) -> bool:
        """All intervals lie inside [2, 2x]."""
        for j in range(self.r):
            a, b = self.interval(x, j)
            if a < 2.0 or b > 2.0 * x:
                return False
        return True

    def require_admissible(self, x: float) -> None:
        if not self.admissible_at(x):
            raise ValueError(
                f"config (delta={self.delta}, shifts={self.shifts}) is not "
                f"admissible at x={x}: an interval leaves [2, 2x]"
            )

    def gap(self, j: int, k: int) -> float:
        return abs(self.shifts[j] - self.shifts[k])
