"""Logical error rates with binomial intervals, and threshold crossings."""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import pandas as pd
from scipy.stats import norm

from sweepdecoder.errors import ConfigError, CrossingNotFound

logger = logging.getLogger(__name__)

MIN_TRIALS = 100


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval of a Bernoulli rate. Returns (low, high)."""
    if trials <= 0:
        return 0.0, 1.0
    if not 0 <= failures <= trials:
        raise ConfigError(f"{failures} failures out of {trials} trials")
    z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
    phat = failures / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = phat + z2 / (2.0 * trials)
    radius = z * math.sqrt(max(0.0, phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)))
    low = 0.0 if failures == 0 else max(0.0, (center - radius) / denom)
    high = 1.0 if failures == trials else min(1.0, (center + radius) / denom)
    return low, high


@dataclass
class RateEstimate:
    trials: int
    failures: int
    p_L: float
    ci_low: float
    ci_high: float
    modes: dict = field(default_factory=dict)

    @classmethod
    def from_outcomes(cls, outcomes, confidence: float = 0.95) -> "RateEstimate":
        trials = len(outcomes)
        failed = [o.mode for o in outcomes if not o.success]
        low, high = wilson_interval(len(failed), trials, confidence)
        if trials < MIN_TRIALS:
            logger.warning("only %d trials, the binomial interval is unreliable", trials)
        return cls(trials, len(failed), len(failed) / trials if trials else float("nan"), low, high,
                   {m: failed.count(m) for m in sorted(set(failed))})


@dataclass
class CrossingEstimate:
    p_th: float
    spread: float
    pairs: List[Tuple[int, int, float]]

    def to_dict(self) -> dict:
        return {"p_th": self.p_th, "spread": self.spread,
                "pairs": [{"L_small": a, "L_large": b, "p": p} for a, b, p in self.pairs]}


def _first_crossing(p: np.ndarray, small: np.ndarray, large: np.ndarray):
    """First sign change of ``large - small``.

    Points where both rates sit at 0 or both at 1 carry no sign and are
    skipped. A touch without a sign change on either side is not a
    crossing; an exact zero between opposite signs is returned as is.
    """
    diff = large - small
    saturated = ((small == 0) & (large == 0)) | ((small == 1) & (large == 1))
    last = None
    zeros = []
    for j in np.flatnonzero(~saturated):
        if diff[j] == 0:
            if last is not None:
                zeros.append(j)
            continue
        if last is not None and diff[last] * diff[j] < 0:
            if zeros:
                return float(np.mean(p[zeros]))
            t = diff[last] / (diff[last] - diff[j])
            return float(p[last] + t * (p[j] - p[last]))
        last, zeros = j, []
    return None


def find_crossing(curves: pd.DataFrame, rate: str = "p_L") -> CrossingEstimate:
    """Where the p_L(p) curves of neighbouring sizes intersect.

    ``curves`` needs columns L, p and ``rate``. Each pair of adjacent sizes
    gives one linearly interpolated intersection; the estimate is their
    median and the spread their range.
    """
    for column in ("L", "p", rate):
        if column not in curves.columns:
            raise ConfigError(f"crossing data lacks column {column!r}")
    frame = curves.groupby(["L", "p"], as_index=False)[rate].mean()
    sizes = sorted(frame["L"].unique())
    if len(sizes) < 2:
        raise ConfigError(f"a crossing needs at least 2 lattice sizes, got {sizes}")

    pairs = []
    for small, large in zip(sizes, sizes[1:]):
        grid = pd.merge(frame[frame["L"] == small], frame[frame["L"] == large], on="p",
                        suffixes=("_small", "_large")).sort_values("p")
        if len(grid) < 4:
            raise ConfigError(f"L={small} and L={large} share only {len(grid)} p values, need 4")
        crossing = _first_crossing(grid["p"].to_numpy(), grid[f"{rate}_small"].to_numpy(),
                                   grid[f"{rate}_large"].to_numpy())
        if crossing is not None:
            pairs.append((int(small), int(large), crossing))
            logger.info("L=%d and L=%d cross at p=%.5g", small, large, crossing)
    if not pairs:
        raise CrossingNotFound(f"no crossing of sizes {sizes} inside p in "
                               f"[{frame['p'].min():g}, {frame['p'].max():g}]")
    values = np.array([p for _, _, p in pairs])
    return CrossingEstimate(float(np.median(values)), float(np.ptp(values)), pairs)
