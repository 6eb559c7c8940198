"""Trial sizing and distribution tests shared by the harness and the suite."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats as _scipy_stats


def chernoff_trials(lam: float, delta: float) -> int:
    """Smallest m with 2 exp(-2 lam^2 m) <= delta for [0,1]-valued outcomes,
    i.e. enough i.i.d. trials to pin a mean within lam at confidence
    1 - delta."""
    if not 0 < lam < 1:
        raise ValueError("precision must be in (0, 1)")
    if not 0 < delta <= 1:
        raise ValueError("failure probability must be in (0, 1]")
    return max(1, math.ceil(math.log(2 / delta) / (2 * lam * lam)))


def chernoff_halfwidth(m: int, delta: float) -> float:
    """Two-sided deviation lam such that m trials fail it with probability
    at most delta; the inverse of :func:`chernoff_trials`."""
    if m < 1:
        raise ValueError("need at least one trial")
    if not 0 < delta <= 1:
        raise ValueError("failure probability must be in (0, 1]")
    return math.sqrt(math.log(2 / delta) / (2 * m))


def chi_square_gof(observed: np.ndarray, weights: np.ndarray) -> tuple[float, float, int]:
    """Goodness of fit of observed counts against integer (or rational)
    weights; returns (statistic, p-value, degrees of freedom).

    Bins with zero weight must be empty: any observation there makes the
    null impossible and the p-value is exactly 0.
    """
    observed = np.asarray(observed, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if observed.shape != weights.shape:
        raise ValueError("observed and weights must align")
    support = weights > 0
    if np.any(observed[~support] > 0):
        return math.inf, 0.0, int(np.count_nonzero(support)) - 1
    obs = observed[support]
    if obs.size == 1:
        # Point mass: nothing to test once off-support bins are known empty.
        return 0.0, 1.0, 0
    probs = weights[support] / weights[support].sum()
    expected = probs * obs.sum()
    stat, pvalue = _scipy_stats.chisquare(obs, expected)
    return float(stat), float(pvalue), int(obs.size) - 1
