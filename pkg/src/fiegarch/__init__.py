"""Long-memory exponential GARCH toolkit.

Submodules: coeffs (power-series engine), innovations (noise laws),
moments (population second-order structure), simulate (path generation),
estimate (quasi-maximum likelihood), forecast (h-step predictors),
diagnostics (sample statistics and spectral tests), cli (command line and
Monte Carlo harness).
"""

from .coeffs import (
    CoefficientTable,
    FiegarchSpec,
    ValidityReport,
    beta_inverse_coeffs,
    delta_coeffs,
    lambda_asymptote,
    lambda_coeffs,
    lambda_oracle,
    phi_coeffs,
    pi_coeffs,
    validate,
)
from .diagnostics import (
    KsSpectralReport,
    ks_spectral_test,
    periodogram,
    sample_acvf,
    sample_asymmetry,
    sample_kurtosis,
)
from .estimate import (
    FitOptions,
    FitResult,
    McStats,
    fit,
    loglik,
    mc_stats,
    reconstruct,
)
from .forecast import (
    ForecastResult,
    forecast_bundle,
    forecast_errors,
    forecast_ln_sigma2,
    forecast_mse,
    forecast_sigma2,
    forecast_x,
    g_history,
    predictor_limits,
)
from .innovations import (
    GAUSSIAN,
    GED,
    InnovationDist,
    MomentFunctionals,
    g_transform,
    mgf_g,
    moment_functionals,
    rng_for,
    sample,
)
from .moments import (
    ModelMoments,
    acvf_ln_sigma2,
    acvf_ln_x2,
    arfima_innovation_acvf,
    asymmetry,
    k_cov,
    kurtosis,
    model_moments,
    sigma_g_sq,
    spectral_density_ln_sigma2,
    spectral_density_ln_x2,
)
from .simulate import Path, simulate_path

__version__ = "0.1.0"

__all__ = [
    "CoefficientTable",
    "FiegarchSpec",
    "FitOptions",
    "FitResult",
    "ForecastResult",
    "GAUSSIAN",
    "GED",
    "InnovationDist",
    "KsSpectralReport",
    "McStats",
    "ModelMoments",
    "MomentFunctionals",
    "Path",
    "ValidityReport",
    "acvf_ln_sigma2",
    "acvf_ln_x2",
    "arfima_innovation_acvf",
    "asymmetry",
    "beta_inverse_coeffs",
    "delta_coeffs",
    "fit",
    "forecast_bundle",
    "forecast_errors",
    "forecast_ln_sigma2",
    "forecast_mse",
    "forecast_sigma2",
    "forecast_x",
    "g_history",
    "g_transform",
    "k_cov",
    "ks_spectral_test",
    "kurtosis",
    "lambda_asymptote",
    "lambda_coeffs",
    "lambda_oracle",
    "loglik",
    "mc_stats",
    "mgf_g",
    "model_moments",
    "moment_functionals",
    "periodogram",
    "phi_coeffs",
    "pi_coeffs",
    "predictor_limits",
    "reconstruct",
    "rng_for",
    "sample",
    "sample_acvf",
    "sample_asymmetry",
    "sample_kurtosis",
    "sigma_g_sq",
    "simulate_path",
    "spectral_density_ln_sigma2",
    "spectral_density_ln_x2",
    "validate",
]
