"""Support Z statistic and the critical-value hypothesis test.

A rule's fitness is the standardized excess of its support over the
minimum-support threshold: z = (s - minsup) / sqrt(minsup*(1-minsup)/n).
Rejecting the null hypothesis (support == minsup) marks the rule as
statistically interesting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO = "two"
RIGHT = "right"
LEFT = "left"

# standard-normal critical values by (tail, significance level)
_CRITICAL = {
    (TWO, 0.01): 2.58,
    (TWO, 0.05): 1.96,
    (TWO, 0.10): 1.645,
    (RIGHT, 0.01): 2.33,
    (RIGHT, 0.05): 1.645,
    (RIGHT, 0.10): 1.28,
    (LEFT, 0.01): -2.33,
    (LEFT, 0.05): -1.645,
    (LEFT, 0.10): -1.28,
}


def z_statistic(support: float, minsup: float, n: int) -> float:
    """Standardized excess of observed support over minsup on n instances."""
    if not 0 < minsup < 1:
        raise ValueError("minsup must be in (0, 1)")
    if n < 1:
        raise ValueError("n must be a positive instance count")
    return (support - minsup) / math.sqrt(minsup * (1.0 - minsup) / n)


def critical_value(alpha: float, tail: str) -> float:
    try:
        return _CRITICAL[(tail, alpha)]
    except KeyError:
        raise ValueError(
            f"no tabulated critical value for alpha={alpha}, tail={tail!r}; "
            "supply an explicit z_alpha instead"
        ) from None


@dataclass(frozen=True)
class ZTestConfig:
    minsup: float = 0.1
    alpha: float = 0.05
    tail: str = RIGHT
    z_alpha: float | None = None  # explicit critical value; overrides the table

    def __post_init__(self):
        if not 0 < self.minsup < 1:
            raise ValueError("minsup must be in (0, 1)")
        if self.tail not in (TWO, RIGHT, LEFT):
            raise ValueError(f"tail must be one of {TWO!r}, {RIGHT!r}, {LEFT!r}")
        if self.z_alpha is None:
            critical_value(self.alpha, self.tail)  # must resolve to a single entry
        elif self.z_alpha <= 0:
            raise ValueError("explicit z_alpha must be positive")

    @property
    def resolved_critical(self) -> float:
        if self.z_alpha is not None:
            return self.z_alpha
        return critical_value(self.alpha, self.tail)


@dataclass(frozen=True)
class ZResult:
    z: float
    z_alpha: float
    reject_null: bool


def hypothesis_test(z: float, cfg: ZTestConfig) -> ZResult:
    """Compare z against the configured critical value.

    Two-tailed rejects when |z| exceeds the critical value; right-tailed
    when z exceeds it; left-tailed when z falls below its negation.
    """
    z_alpha = cfg.resolved_critical
    if cfg.tail == TWO:
        reject = abs(z) > abs(z_alpha)
    elif cfg.tail == RIGHT:
        reject = z > abs(z_alpha)
    else:
        reject = z < -abs(z_alpha)
    return ZResult(z, z_alpha, reject)
