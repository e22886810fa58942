# apps/harness/stats.py
# --------------------------------
# Goodness-of-fit tests used across the harness (scipy.stats).
# Each returns FitResult(statistic, pvalue).

from __future__ import annotations

from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy import stats

from apps.core.exceptions import InputError

MIN_SAMPLES = 30
MIN_EXPECTED = 5.0


class FitResult(NamedTuple):
    statistic: float
    pvalue: float


def _merge_cells(observed: np.ndarray, expected: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Fold cells with expected count < 5 into their smallest neighbour-in-order."""
    obs: List[float] = observed.tolist()
    exp: List[float] = expected.tolist()
    while len(exp) > 1 and min(exp) < MIN_EXPECTED:
        i = int(np.argmin(exp))
        if i == 0:
            j = 1
        elif i == len(exp) - 1:
            j = i - 1
        else:
            j = i - 1 if exp[i - 1] <= exp[i + 1] else i + 1
        exp[j] += exp[i]
        obs[j] += obs[i]
        del exp[i], obs[i]
    return np.asarray(obs), np.asarray(exp)


def chi_square(observed: Sequence[float], expected: Sequence[float]) -> FitResult:
    """Pearson chi-square of counts against expected proportions or counts.

    `expected` is rescaled to the observed total.
    """
    obs = np.asarray(observed, dtype=float)
    exp = np.asarray(expected, dtype=float)
    if obs.shape != exp.shape or obs.ndim != 1:
        raise InputError("observed and expected must be 1-D and equally long")
    if np.any(obs < 0) or np.any(exp < 0):
        raise InputError("counts must be nonnegative")
    total = obs.sum()
    if total < MIN_SAMPLES:
        raise InputError(f"need at least {MIN_SAMPLES} observations, got {total:g}")
    if exp.sum() <= 0:
        raise InputError("expected frequencies have zero mass")
    exp = exp * (total / exp.sum())
    obs, exp = _merge_cells(obs, exp)
    if obs.size < 2:
        return FitResult(0.0, 1.0)
    result = stats.chisquare(obs, exp)
    return FitResult(float(result.statistic), float(result.pvalue))


def _samples(samples: Sequence[float]) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size < MIN_SAMPLES:
        raise InputError(f"need at least {MIN_SAMPLES} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise InputError("samples must be finite")
    return x


def ks_exponential(samples: Sequence[float], mean: float) -> FitResult:
    """One-sample KS against Exponential with the given mean."""
    if not mean > 0:
        raise InputError(f"mean must be positive, got {mean}")
    result = stats.kstest(_samples(samples), "expon", args=(0.0, mean))
    return FitResult(float(result.statistic), float(result.pvalue))


def ks_frechet(samples: Sequence[float], alpha: float) -> FitResult:
    """One-sample KS against the CDF exp(-t^-alpha) (scipy's invweibull)."""
    if not alpha > 0:
        raise InputError(f"alpha must be positive, got {alpha}")
    result = stats.kstest(_samples(samples), stats.invweibull(alpha).cdf)
    return FitResult(float(result.statistic), float(result.pvalue))


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> FitResult:
    result = stats.ks_2samp(_samples(a), _samples(b))
    return FitResult(float(result.statistic), float(result.pvalue))
