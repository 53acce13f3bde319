"""Multi-step volatility forecasting.

Given the fitted shock history g(z_1)..g(z_n), the h-step log-variance
forecast is the filter tail omega + sum_k lambda_{k+h-1} g(z_{n-k}). Two
variance predictors come out of it: the plain exponential (check) and the
second-order corrected one (tilde), which multiplies in half the accumulated
filter variance. Exact mean-square-error curves and the long-horizon limits
of both predictors are available in closed form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import FiegarchSpec, lambda_coeffs, validate
from .errors import NonStationary
from .innovations import InnovationDist, moment_functionals
from .moments import sigma_g_sq

DEFAULT_LIMIT_M = 50_000


@dataclass(frozen=True)
class ForecastResult:
    horizon: int
    ln_sigma2_hat: np.ndarray
    sigma2_check: np.ndarray
    sigma2_tilde: np.ndarray
    mse_ln_sigma2: np.ndarray
    mse_ln_x2: np.ndarray
    L1: float
    L2: float


def _check_stationary(spec: FiegarchSpec):
    report = validate(spec)
    if not report.weakly_stationary:
        raise NonStationary(f"forecasting requires d < 0.5, got d={spec.d}")


def g_history(z_residuals, theta: float, gamma: float, mu_abs: float | None = None):
    """Shock series g(z) from residuals, most recent last.

    mu_abs defaults to the sample mean of |z|, the plug-in used when the
    model was fitted to data; pass the exact functional for theory work."""
    z = np.asarray(z_residuals, dtype=float)
    mu = float(np.mean(np.abs(z))) if mu_abs is None else mu_abs
    return theta * z + gamma * (np.abs(z) - mu)


def forecast_ln_sigma2(spec: FiegarchSpec, g_hist, H: int):
    """h-step forecasts of ln sigma^2, h = 1..H, from a finite g history."""
    g = np.asarray(g_hist, dtype=float)
    if len(g) == 0:
        raise ValueError("history must be nonempty")
    if H < 1:
        raise ValueError("horizon must be >= 1")
    g_rev = g[::-1]
    n = len(g)
    lam = lambda_coeffs(spec, n + H - 1).values
    out = np.empty(H)
    for h in range(1, H + 1):
        out[h - 1] = spec.omega + np.dot(lam[h - 1: h - 1 + n], g_rev)
    return out


def forecast_sigma2(spec: FiegarchSpec, g_hist, H: int, sigma_g_sq: float) -> dict:
    """Both variance predictors: {check, tilde}.

    tilde multiplies check by 1 + sigma_g^2/2 * sum_{k<h-1} lambda_k^2,
    so the two coincide exactly at h = 1."""
    ln_hat = forecast_ln_sigma2(spec, g_hist, H)
    check = np.exp(ln_hat)
    lam = lambda_coeffs(spec, max(H - 2, 0)).values
    csum = np.concatenate(([0.0], np.cumsum(lam[: H - 1] ** 2)))[:H]
    tilde = check * (1.0 + 0.5 * sigma_g_sq * csum)
    return {"check": check, "tilde": tilde}


def forecast_mse(spec: FiegarchSpec, dist: InnovationDist, H: int,
                 n_history: int | None = None, m: int = DEFAULT_LIMIT_M) -> dict:
    """Exact forecast mean square errors {mse_ln_sigma2, mse_ln_x2}, h=1..H.

    Infinite history: the ln sigma^2 error is sigma_g^2 sum_{k<h-1} lambda_k^2
    (zero at h=1); the ln X^2 error adds the unforecastable E[(ln Z^2)^2].
    A finite history of length n adds the discarded tail sum_{k>=n+h-1}."""
    _check_stationary(spec)
    f = moment_functionals(dist)
    sg2 = sigma_g_sq(spec, f)
    e_lnz2_sq = f.v_lnz2 + f.e_lnz2 ** 2

    depth = max(H - 2, 0) if n_history is None else max(m, H - 2)
    lam2 = lambda_coeffs(spec, depth).values ** 2
    head = np.concatenate(([0.0], np.cumsum(lam2[: H - 1])))[:H]
    mse_ln = sg2 * head
    if n_history is not None:
        # tail beyond the observed window, truncated at m like the limit sums
        lam2m = lam2[: m + 1]
        suffix = np.concatenate((np.cumsum(lam2m[::-1])[::-1], [0.0]))
        for h in range(1, H + 1):
            lo = min(n_history + h - 1, m + 1)
            mse_ln[h - 1] += sg2 * suffix[lo]
    return {"mse_ln_sigma2": mse_ln, "mse_ln_x2": mse_ln + e_lnz2_sq}


def predictor_limits(spec: FiegarchSpec, dist: InnovationDist,
                     m: int = DEFAULT_LIMIT_M) -> dict:
    """Long-horizon limits {L1, L2} of the two variance predictors."""
    _check_stationary(spec)
    L1 = np.exp(spec.omega)
    lam = lambda_coeffs(spec, m).values
    sg2 = sigma_g_sq(spec, moment_functionals(dist))
    return {"L1": float(L1), "L2": float(L1 * (1.0 + 0.5 * sg2 * np.dot(lam, lam)))}


def forecast_x(spec: FiegarchSpec, g_hist, H: int, sigma_g_sq: float) -> dict:
    """Point forecasts of X and X^2: {x_hat, x2_hat}.

    X is a martingale difference, so x_hat is identically zero; the X^2
    forecast is the one-step check value followed by tilde beyond it."""
    both = forecast_sigma2(spec, g_hist, H, sigma_g_sq)
    x2 = both["tilde"].copy()
    x2[0] = both["check"][0]
    return {"x_hat": np.zeros(H), "x2_hat": x2}


def forecast_errors(actual, predicted) -> dict:
    """Holdout error summary {mae, mpe, max_ae, mpe_undefined}.

    e_h = predicted_h - actual_h. mpe averages |e|/actual over the entries
    with nonzero actuals; zero actuals are flagged per element in
    mpe_undefined rather than silently dropped."""
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape:
        raise ValueError("actual and predicted must have equal length")
    e = p - a
    undefined = a == 0.0
    if np.all(undefined):
        mpe = np.nan
    else:
        mpe = float(np.mean(np.abs(e[~undefined]) / a[~undefined]))
    return {"mae": float(np.mean(np.abs(e))),
            "mpe": mpe,
            "max_ae": float(np.max(np.abs(e))),
            "mpe_undefined": undefined}


def forecast_bundle(spec: FiegarchSpec, dist: InnovationDist, g_hist, H: int,
                    n_history: int | None = None,
                    m: int = DEFAULT_LIMIT_M) -> ForecastResult:
    """Everything the report writer needs, in one pass."""
    sg2 = sigma_g_sq(spec, moment_functionals(dist))
    ln_hat = forecast_ln_sigma2(spec, g_hist, H)
    both = forecast_sigma2(spec, g_hist, H, sg2)
    mse = forecast_mse(spec, dist, H, n_history=n_history, m=m)
    lim = predictor_limits(spec, dist, m=m)
    return ForecastResult(horizon=H, ln_sigma2_hat=ln_hat,
                          sigma2_check=both["check"], sigma2_tilde=both["tilde"],
                          mse_ln_sigma2=mse["mse_ln_sigma2"],
                          mse_ln_x2=mse["mse_ln_x2"],
                          L1=lim["L1"], L2=lim["L2"])
