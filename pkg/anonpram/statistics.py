"""
statistics.py

Wilson score intervals for error rates and least-squares scaling fits for the
asymptotic time, memory and random-bit claims.

statsmodels is optional: when installed, intervals come from
``proportion_confint(method="wilson")``; otherwise the closed form is used.
"""

import math
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist
from typing import Sequence, Tuple

import numpy as np

from .errors import DegenerateFit
from .logging_utils import get_logger
from .models import ProportionEstimate

logger = get_logger(__name__)

try:
    from statsmodels.stats.proportion import proportion_confint
    HAS_STATSMODELS = True
except ImportError:
    HAS_STATSMODELS = False


def _z_value(confidence: float) -> float:
    return NormalDist().inv_cdf(0.5 + confidence / 2.0)


def _wilson_closed_form(successes: int, trials: int, confidence: float) -> Tuple[float, float]:
    z = _z_value(confidence)
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    return center - half, center + half


def estimate_probability(
    successes: int,
    trials: int,
    confidence: float = 0.99,
) -> ProportionEstimate:
    """Point estimate and Wilson score interval for successes / trials.

    The interval is clamped to [0, 1] and pinned to 0 (resp. 1) at zero (resp.
    all) successes.

    Raises:
        ValueError: unless 0 <= successes <= trials and trials >= 1.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, {trials}], got {successes}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")

    if HAS_STATSMODELS:
        lower, upper = proportion_confint(
            successes, trials, alpha=1.0 - confidence, method="wilson",
        )
    else:
        lower, upper = _wilson_closed_form(successes, trials, confidence)

    lower = 0.0 if successes == 0 else float(np.clip(lower, 0.0, 1.0))
    upper = 1.0 if successes == trials else float(np.clip(upper, 0.0, 1.0))
    return ProportionEstimate(
        successes=successes,
        trials=trials,
        point=successes / trials,
        lower=lower,
        upper=upper,
    )


class ScalingModel(str, Enum):
    """Shape functions f(n) for fits of the form metric = a + b * f(n)."""

    LOG = "log"
    LINEAR = "linear"
    NLOG = "nlog"
    LOG2 = "log2"
    NLOG2 = "nlog2"

    def shape(self, n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        lg = np.log2(n)
        if self is ScalingModel.LOG:
            return lg
        if self is ScalingModel.LINEAR:
            return n
        if self is ScalingModel.NLOG:
            return n * lg
        if self is ScalingModel.LOG2:
            return lg * lg
        return n * lg * lg


@dataclass(frozen=True)
class ScalingFit:
    model: ScalingModel
    intercept: float
    slope: float
    r_squared: float
    points: int

    def predict(self, n: float) -> float:
        return self.intercept + self.slope * float(self.model.shape(np.array([n]))[0])

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "intercept": self.intercept,
            "slope": self.slope,
            "r_squared": self.r_squared,
            "points": self.points,
        }


def fit_scaling(points: Sequence[Tuple[float, float]], model: ScalingModel) -> ScalingFit:
    """Least-squares fit of metric = a + b * f(n) over (n, metric) pairs.

    Raises:
        ValueError: fewer than 3 points, or n not strictly increasing.
        DegenerateFit: every metric value is the same.
    """
    model = ScalingModel(model)
    if len(points) < 3:
        raise ValueError(f"need at least 3 points to fit, got {len(points)}")
    ns = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if np.any(np.diff(ns) <= 0):
        raise ValueError("n values must be strictly increasing")
    if np.any(ns < 1):
        raise ValueError("n values must be >= 1")

    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateFit("all metric values are equal; nothing to fit")

    design = np.column_stack([np.ones_like(ns), model.shape(ns)])
    coeffs, _, _, _ = np.linalg.lstsq(design, ys, rcond=None)
    residuals = ys - design @ coeffs
    ss_res = float(np.sum(residuals ** 2))
    r_squared = 1.0 - ss_res / ss_tot
    fit = ScalingFit(
        model=model,
        intercept=float(coeffs[0]),
        slope=float(coeffs[1]),
        r_squared=r_squared,
        points=len(points),
    )
    logger.debug("Fitted %s: a=%.4g b=%.4g R^2=%.4f", model.value, fit.intercept, fit.slope, r_squared)
    return fit
