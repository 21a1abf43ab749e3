"""Small statistics helpers shared by the experiment drivers."""
from __future__ import annotations

import math
from dataclasses import dataclass


def wilson_ci(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (default 95%)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    p = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class Stats:
    """Success count over a fixed number of trials with a Wilson 95% CI."""

    successes: int
    trials: int

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_ci(self.successes, self.trials)

    def summary(self) -> str:
        lo, hi = self.ci
        return (f"{self.successes}/{self.trials} = {self.estimate:.4f} "
                f"(95% CI [{lo:.4f}, {hi:.4f}])")
