"""Sample-side statistics: periodogram, cumulative-periodogram test,
autocovariances, and moment-ratio shape measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDensity

KS_CRITICAL = {0.05: 1.36, 0.01: 1.63}


@dataclass(frozen=True)
class KsSpectralReport:
    y: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    k_alpha: float
    m: int
    reject: bool
    first_exit_index: int | None


def periodogram(series) -> np.ndarray:
    """I(w_k) = |sum_t (y_t - mean) e^{-i w_k t}|^2 / (2 pi n) at the Fourier
    frequencies w_k = 2 pi k / n, k = 1..floor((n-1)/2)."""
    y = np.asarray(series, dtype=float)
    n = len(y)
    if n < 4:
        raise ValueError("need at least 4 observations")
    m = (n - 1) // 2
    spec = np.fft.rfft(y - y.mean())
    return (spec.real ** 2 + spec.imag ** 2)[1: m + 1] / (2.0 * np.pi * n)


def ks_spectral_test(series, spectral_density, alpha: float = 0.05) -> KsSpectralReport:
    """Cumulative-periodogram goodness-of-fit test against a candidate
    spectral density.

    The normalized cumulative ratios Y_i form a step function C(x); the null
    is rejected when C exits the band (x-1)/(m-1) +- k_alpha (m-1)^{-1/2}
    anywhere on [1, m]. Because C is constant on [i, i+1), the exit condition
    reduces to Y_i above the band's left edge or below its right edge."""
    if alpha not in KS_CRITICAL:
        raise ValueError(f"alpha must be one of {sorted(KS_CRITICAL)}")
    y = np.asarray(series, dtype=float)
    n = len(y)
    pdg = periodogram(y)
    m = len(pdg)
    w = 2.0 * np.pi * np.arange(1, m + 1) / n
    f = np.asarray(spectral_density(w), dtype=float)
    if f.shape != w.shape or not np.all(np.isfinite(f)) or np.any(f <= 0.0):
        raise NonPositiveDensity("candidate density must be finite and positive "
                                 "at every Fourier frequency")
    ratios = pdg / f
    Y = np.cumsum(ratios) / np.sum(ratios)

    k_alpha = KS_CRITICAL[alpha]
    c = k_alpha / np.sqrt(m - 1)
    x = np.arange(1, m + 1)
    lower = (x - 1) / (m - 1) - c
    upper = (x - 1) / (m - 1) + c

    first_exit = None
    for i in range(1, m):
        above = Y[i - 1] > (i - 1) / (m - 1) + c
        below = Y[i - 1] < i / (m - 1) - c
        if above or below:
            first_exit = i
            break
    return KsSpectralReport(y=Y, lower=lower, upper=upper, alpha=alpha,
                            k_alpha=k_alpha, m=m, reject=first_exit is not None,
                            first_exit_index=first_exit)


def sample_acvf(series, maxlag: int) -> np.ndarray:
    """Biased-divisor autocovariances gamma_hat(0..maxlag)."""
    y = np.asarray(series, dtype=float)
    n = len(y)
    if maxlag >= n:
        raise ValueError("maxlag must be smaller than the series length")
    yc = y - y.mean()
    out = np.empty(maxlag + 1)
    for h in range(maxlag + 1):
        out[h] = np.dot(yc[: n - h], yc[h:]) / n
    return out


def sample_kurtosis(series) -> float:
    """Fourth moment ratio; NaN flags a degenerate (constant) series."""
    y = np.asarray(series, dtype=float)
    yc = y - y.mean()
    m2 = np.mean(yc ** 2)
    if m2 == 0.0:
        return np.nan
    return float(np.mean(yc ** 4) / m2 ** 2)


def sample_asymmetry(series) -> float:
    """Third moment ratio; NaN flags a degenerate (constant) series."""
    y = np.asarray(series, dtype=float)
    yc = y - y.mean()
    m2 = np.mean(yc ** 2)
    if m2 == 0.0:
        return np.nan
    return float(np.mean(yc ** 3) / m2 ** 1.5)
