"""Certified summation of power-law series.

Every routine that touches an infinite sum returns a pair
``(value, certificate)`` where ``certificate`` bounds ``|value - exact|``.
Power-law tails sum_{n>T} n^{-s} are estimated with three Euler-Maclaurin
correction terms; for completely monotone integrands the remainder is
bounded by the first omitted term, which at the default cutoffs is far
below double precision noise.  The bare integral enclosure is kept as a
fallback for couplings where only a monotone bound is available.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "integral_tail_bound",
    "power_tail",
    "power_partial",
    "power_sum_range",
    "zeta_series",
    "power_tail_from",
]


def integral_tail_bound(s: float, T: int) -> float:
    """Crude certified bound on sum_{n>T} n^{-s}: the integral from T."""
    if s <= 1:
        raise ValueError("tail diverges for exponent <= 1")
    return T ** (1.0 - s) / (s - 1.0)


def power_tail(s: float, T: int) -> tuple[float, float]:
    """Estimate sum_{n>T} n^{-s} with a certified remainder.

    Euler-Maclaurin about N=T:
        tail = N^{1-s}/(s-1) - N^{-s}/2 + (s/12) N^{-s-1} - R,
        0 <= R <= s(s+1)(s+2)/720 * N^{-s-3}.
    """
    if s <= 1:
        raise ValueError("tail diverges for exponent <= 1")
    if T < 1:
        raise ValueError("cutoff must be >= 1")
    N = float(T)
    value = N ** (1.0 - s) / (s - 1.0) - 0.5 * N ** (-s) + (s / 12.0) * N ** (-s - 1.0)
    cert = s * (s + 1.0) * (s + 2.0) / 720.0 * N ** (-s - 3.0)
    return value, cert


def power_partial(s: float, T: int) -> float:
    """Exact finite sum_{n=1}^{T} n^{-s} (pairwise-summed)."""
    n = np.arange(1, T + 1, dtype=float)
    return float(np.sum(n ** (-s)))


def power_sum_range(s: float, lo: int, hi: int) -> float:
    """Finite sum_{n=lo}^{hi} n^{-s}; zero when the range is empty."""
    if hi < lo:
        return 0.0
    n = np.arange(lo, hi + 1, dtype=float)
    return float(np.sum(n ** (-s)))


def zeta_series(s: float, T: int = 100_000) -> tuple[float, float]:
    """zeta(s) = sum n^{-s} as (partial sum to T + certified EM tail, certificate)."""
    tail, cert = power_tail(s, T)
    return power_partial(s, T) + tail, cert


def power_tail_from(s: float, k: int, T: int = 100_000) -> tuple[float, float]:
    """sum_{n>=k} n^{-s} with certificate; k >= 1.

    Sums explicitly up to max(k, T) and closes with the EM tail, so small-k
    calls are as accurate as the full zeta evaluation.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    hi = max(T, k)
    tail, cert = power_tail(s, hi)
    return power_sum_range(s, k, hi) + tail, cert
