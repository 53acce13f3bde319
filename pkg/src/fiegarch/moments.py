"""Population structure of the process: variance of the news impact, the
shock/log-noise covariance, autocovariances of ln(sigma^2) and ln(X^2),
spectral densities, the short-memory-filtered innovation autocovariance,
and the kurtosis and asymmetry shape measures."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coeffs import FiegarchSpec, lambda_coeffs, phi_coeffs, validate
from .errors import NonStationary, RootInsideDisk
from .innovations import InnovationDist, MomentFunctionals, log_mgf_g, moment_functionals

DEFAULT_M = 50_000

EARLY_STOP_TOL = 1e-14
EARLY_STOP_RUN = 100


@dataclass(frozen=True)
class ModelMoments:
    sigma_g_sq: float
    k_cov: float
    kurtosis: float
    asymmetry: float
    m: int


def sigma_g_sq(spec: FiegarchSpec, functionals: MomentFunctionals) -> float:
    """Variance of the news-impact transform g(Z0)."""
    th, ga = spec.theta, spec.gamma
    return (th * th + ga * ga - (ga * functionals.mu_abs) ** 2
            + 2.0 * th * ga * functionals.m_zabs)


def k_cov(spec: FiegarchSpec, functionals: MomentFunctionals) -> float:
    """Covariance of g(Z0) with ln(Z0^2)."""
    return (spec.theta * functionals.m_zlnz2
            + spec.gamma * (functionals.m_abslnz2
                            - functionals.mu_abs * functionals.e_lnz2))


def _require_stationary(spec: FiegarchSpec, two_sided: bool = False) -> None:
    if spec.d >= 0.5 or (two_sided and spec.d <= -0.5):
        raise NonStationary(f"d={spec.d} outside the stationary range")
    if not validate(spec).beta_stable:
        raise RootInsideDisk("beta polynomial unstable")


def acvf_ln_sigma2(spec: FiegarchSpec, dist: InnovationDist, maxlag: int,
                   m: int = DEFAULT_M) -> np.ndarray:
    """Autocovariances of ln(sigma_t^2) at lags 0..maxlag:
    gamma(h) = sigma_g^2 sum_k lambda_k lambda_{k+h}, truncated at m."""
    _require_stationary(spec)
    sg2 = sigma_g_sq(spec, moment_functionals(dist))
    lam = lambda_coeffs(spec, m).values
    out = np.empty(maxlag + 1)
    for h in range(maxlag + 1):
        out[h] = sg2 * np.dot(lam[: m + 1 - h], lam[h:])
    return out


def acvf_ln_x2(spec: FiegarchSpec, dist: InnovationDist, maxlag: int,
               m: int = DEFAULT_M) -> np.ndarray:
    """Autocovariances of ln(X_t^2) at lags 0..maxlag: the ln(sigma^2)
    autocovariance plus Var(ln Z^2) at lag 0 plus K lambda_{|h|-1} off it."""
    _require_stationary(spec)
    f = moment_functionals(dist)
    out = acvf_ln_sigma2(spec, dist, maxlag, m)
    out[0] += f.v_lnz2
    if maxlag >= 1:
        lam = lambda_coeffs(spec, maxlag - 1).values
        out[1:] += k_cov(spec, f) * lam[: maxlag]
    return out


def _freq_grid(freqs) -> np.ndarray:
    w = np.atleast_1d(np.asarray(freqs, dtype=float))
    if np.any(w <= 0.0) or np.any(w > np.pi):
        raise ValueError("frequencies must lie in (0, pi]")
    return w


def _poly_mod_sq(params, w: np.ndarray) -> np.ndarray:
    """|1 - sum params_j e^{-i w j}|^2"""
    val = np.ones_like(w, dtype=complex)
    for j, c in enumerate(params, start=1):
        val -= c * np.exp(-1j * w * j)
    return np.abs(val) ** 2


def spectral_density_ln_sigma2(spec: FiegarchSpec, dist: InnovationDist, freqs) -> np.ndarray:
    """Spectral density of ln(sigma_t^2) on frequencies in (0, pi]."""
    _require_stationary(spec)
    w = _freq_grid(freqs)
    sg2 = sigma_g_sq(spec, moment_functionals(dist))
    ratio = _poly_mod_sq(spec.alpha, w) / _poly_mod_sq(spec.beta, w)
    frac = (2.0 * np.sin(w / 2.0)) ** (-2.0 * spec.d)
    return sg2 / (2.0 * np.pi) * ratio * frac


def spectral_density_ln_x2(spec: FiegarchSpec, dist: InnovationDist, freqs,
                           m: int = DEFAULT_M) -> np.ndarray:
    """Spectral density of ln(X_t^2): the ln(sigma^2) density plus the
    cross term (K/pi) Re(e^{-iw} Lambda(e^{-iw})) plus Var(ln Z^2)/2pi.
    Lambda is the filter series truncated at m."""
    _require_stationary(spec)
    w = _freq_grid(freqs)
    f = moment_functionals(dist)
    base = spectral_density_ln_sigma2(spec, dist, w)
    lam = lambda_coeffs(spec, m).values
    cross = np.empty_like(w)
    ks = np.arange(m + 1)
    for start in range(0, len(w), 256):  # chunked outer product, m can be large
        wc = w[start:start + 256, None]
        cross[start:start + 256] = np.cos(wc * (ks[None, :] + 1.0)) @ lam
    return base + k_cov(spec, f) / np.pi * cross + f.v_lnz2 / (2.0 * np.pi)


def arfima_innovation_acvf(spec: FiegarchSpec, dist: InnovationDist, maxlag: int,
                           m: int = DEFAULT_M) -> np.ndarray:
    """Autocovariances of the innovation series left after filtering
    ln(X_t^2) by (1 - sum beta_j B^j)(1-B)^d.

    That series is alpha(B) g(Z_{t-1}) + phi(B) ln(Z_t^2) with alpha the
    polynomial with zero-lag coefficient -1 (series a_i, a_0 = -1) and
    phi the beta/difference convolution, so for h >= 0

        gamma(h) = sigma_g^2 sum_{i=h}^p a_i a_{i-h}
                 - K [ sum_{i=0}^p a_i phi_{i+h+1}
                     + sum_{i=max(h-1,0)}^p a_i phi_{i-h+1} ]
                 + v_lnz2 sum_{i=h}^m phi_i phi_{i-h}.
    """
    _require_stationary(spec, two_sided=True)
    f = moment_functionals(dist)
    sg2 = sigma_g_sq(spec, f)
    kc = k_cov(spec, f)
    p = spec.p
    a = np.concatenate(([-1.0], spec.alpha))
    phi = phi_coeffs(spec.beta, spec.d, max(m, p + maxlag + 2)).values
    out = np.empty(maxlag + 1)
    for h in range(maxlag + 1):
        gg = sg2 * np.dot(a[h:], a[: p + 1 - h]) if h <= p else 0.0
        cross = np.dot(a, phi[h + 1: h + p + 2])
        lo = max(h - 1, 0)
        if lo <= p:  # phi slice bounds stay non-negative here, no wraparound
            cross += np.dot(a[lo:], phi[lo - h + 1: p - h + 2])
        ll = f.v_lnz2 * np.dot(phi[h:], phi[: len(phi) - h])
        out[h] = gg - kc * cross + ll
    return out


def _log_product(lam: np.ndarray, c: float, theta: float, gamma: float,
                 dist: InnovationDist) -> float:
    """sum_k ln E(exp{c lambda_k g(Z0)}) with the consecutive-small-terms
    early stop."""
    total = 0.0
    run = 0
    block = 8192
    for start in range(0, len(lam), block):
        vals = log_mgf_g(c * lam[start:start + block], theta, gamma, dist)
        small = np.abs(vals) < EARLY_STOP_TOL
        for v, s in zip(vals, small):
            if run >= EARLY_STOP_RUN:
                return total
            total += v
            run = run + 1 if s else 0
    return total


def kurtosis(spec: FiegarchSpec, dist: InnovationDist, m: int = DEFAULT_M) -> float:
    """Kurtosis of X_t: E(Z^4) prod_k E(e^{2 lambda_k g}) / [prod_k E(e^{lambda_k g})]^2,
    products over k = 0..m in log space."""
    _require_stationary(spec)
    f = moment_functionals(dist)
    lam = lambda_coeffs(spec, m).values
    log_top = _log_product(lam, 2.0, spec.theta, spec.gamma, dist)
    log_bot = _log_product(lam, 1.0, spec.theta, spec.gamma, dist)
    return f.m_z4 * float(np.exp(log_top - 2.0 * log_bot))


def asymmetry(spec: FiegarchSpec, dist: InnovationDist, m: int = DEFAULT_M) -> float:
    """Asymmetry of X_t: E(Z^3) prod_k E(e^{1.5 lambda_k g}) / [prod_k E(e^{lambda_k g})]^{3/2}.
    Exactly zero for symmetric innovations."""
    _require_stationary(spec)
    f = moment_functionals(dist)
    if f.m_z3 == 0.0:
        return 0.0
    lam = lambda_coeffs(spec, m).values
    log_top = _log_product(lam, 1.5, spec.theta, spec.gamma, dist)
    log_bot = _log_product(lam, 1.0, spec.theta, spec.gamma, dist)
    return f.m_z3 * float(np.exp(log_top - 1.5 * log_bot))


@lru_cache(maxsize=64)
def model_moments(spec: FiegarchSpec, dist: InnovationDist, m: int = DEFAULT_M) -> ModelMoments:
    """Bundle of the scalar moments, cached per (spec, dist, m)."""
    f = moment_functionals(dist)
    return ModelMoments(
        sigma_g_sq=sigma_g_sq(spec, f),
        k_cov=k_cov(spec, f),
        kurtosis=kurtosis(spec, dist, m),
        asymmetry=asymmetry(spec, dist, m),
        m=m,
    )
