"""Two-sample Kolmogorov-Smirnov and Wilcoxon signed-rank tests.

Both tests take the exact route at desk-scale sample sizes (enumeration of
label assignments or sign patterns) and fall back to the usual asymptotic
approximations beyond that.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import EmptySample

# Enumeration ceilings for the exact branches.
KS_EXACT_MIN_N = 10
KS_EXACT_MAX_ARRANGEMENTS = 500_000
WILCOXON_EXACT_MAX_N = 20


def _ks_statistic(a: np.ndarray, b: np.ndarray) -> float:
    grid = np.unique(np.concatenate([a, b]))
    cdf_a = np.searchsorted(np.sort(a), grid, side="right") / len(a)
    cdf_b = np.searchsorted(np.sort(b), grid, side="right") / len(b)
    return float(np.max(np.abs(cdf_a - cdf_b)))


def _kolmogorov_sf(x: float) -> float:
    """Survival function of the Kolmogorov distribution."""
    if x <= 0:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = (-1) ** (k - 1) * math.exp(-2 * k * k * x * x)
        total += term
        if abs(term) < 1e-16:
            break
    return min(max(2 * total, 0.0), 1.0)


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """D = sup |ECDF_a - ECDF_b| plus a two-sided p value.

    Exact p by enumerating all label assignments over the pooled sample when
    the smaller sample has at most 10 points (and the arrangement count stays
    tractable); asymptotic Kolmogorov distribution otherwise.
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptySample("both samples must be non-empty")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = _ks_statistic(a, b)
    n, m = len(a), len(b)

    if min(n, m) <= KS_EXACT_MIN_N and math.comb(n + m, n) <= KS_EXACT_MAX_ARRANGEMENTS:
        pooled = np.sort(np.concatenate([a, b]))
        total = math.comb(n + m, n)
        hits = 0
        for picked in combinations(range(n + m), n):
            mask = np.zeros(n + m, dtype=bool)
            mask[list(picked)] = True
            if _ks_statistic(pooled[mask], pooled[~mask]) >= d - 1e-12:
                hits += 1
        return d, hits / total

    en = math.sqrt(n * m / (n + m))
    return d, _kolmogorov_sf((en + 0.12 + 0.11 / en) * d)


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Paired signed-rank test; returns (W, two-sided p).

    Zero differences are dropped and tied magnitudes mid-ranked. W is the
    smaller of the positive- and negative-rank sums. Exact p enumerates all
    2^n sign patterns for n <= 20; normal approximation with tie correction
    beyond that. Degenerate inputs (no nonzero differences) give p = 1.
    """
    if len(a) != len(b) or len(a) == 0:
        raise EmptySample("samples must be paired and non-empty")
    diffs = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    diffs = diffs[diffs != 0]
    n = len(diffs)
    if n == 0:
        return 0.0, 1.0

    ranks = _midranks(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    w = min(w_plus, w_minus)

    if n <= WILCOXON_EXACT_MAX_N:
        hi = max(w_plus, w_minus)
        hits = 0
        for pattern in range(1 << n):
            signs = np.array([(pattern >> i) & 1 for i in range(n)], dtype=bool)
            s = float(ranks[signs].sum())
            if s <= w + 1e-12 or s >= hi - 1e-12:
                hits += 1
        return w, min(hits / (1 << n), 1.0)

    mean = n * (n + 1) / 4
    _, counts = np.unique(ranks, return_counts=True)
    tie_correction = (counts**3 - counts).sum() / 48
    var = n * (n + 1) * (2 * n + 1) / 24 - tie_correction
    # W is the smaller rank sum, so the two-sided p doubles the lower tail
    # (continuity-corrected toward the mean).
    z = (w - mean + 0.5) / math.sqrt(var)
    return w, min(2 * _normal_sf(-z), 1.0)


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2))
