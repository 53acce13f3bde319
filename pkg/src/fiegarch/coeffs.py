"""Power-series engine for the log-volatility filter.

Everything downstream consumes truncated expansions computed here: the
fractional-difference weights delta and pi, the inverse moving-average
series f, the filter weights lambda, and the short-memory weights phi.
All series are returned as CoefficientTable values indexed 0..m.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.signal import lfilter
from scipy.special import gamma as _gamma_fn

from .errors import GammaPole, RootInsideDisk

TOL_ROOT = 1e-8
COMMON_ROOT_TOL = 1e-7


@dataclass(frozen=True)
class FiegarchSpec:
    """Model parameters (d, omega, theta, gamma, alpha_1..p, beta_1..q).

    alpha and beta hold the raw lag coefficients; the associated lag
    polynomials are 1 - sum(alpha_i z^i) and 1 - sum(beta_j z^j), so an
    empty tuple means the constant polynomial 1.
    """

    d: float
    omega: float
    theta: float
    gamma: float
    alpha: tuple[float, ...] = ()
    beta: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        vals = (self.d, self.omega, self.theta, self.gamma, *self.alpha, *self.beta)
        if not all(np.isfinite(vals)):
            raise ValueError("all parameters must be finite")

    @property
    def p(self) -> int:
        return len(self.alpha)

    @property
    def q(self) -> int:
        return len(self.beta)

    def spec_hash(self) -> str:
        """short stable identifier of the parameter values"""
        payload = repr((self.d, self.omega, self.theta, self.gamma,
                        self.alpha, self.beta)).encode()
        return hashlib.blake2s(payload, digest_size=8).hexdigest()


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """A truncated power series: values[k] is the coefficient of z^k."""

    kind: str  # one of: delta, pi, beta_inverse, lambda, phi
    d: float
    values: np.ndarray
    m: int
    spec_hash: str = ""

    def __post_init__(self):
        if self.values.shape != (self.m + 1,):
            raise ValueError("values must have length m+1")
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.m + 1

    def __getitem__(self, k):
        return self.values[k]


@dataclass(frozen=True)
class ValidityReport:
    """Flags from `validate`; strictly_valid gates simulation and moments."""

    weakly_stationary: bool
    strictly_valid: bool
    invertible: bool
    beta_stable: bool
    common_roots_flag: bool


def _poly_series(params) -> np.ndarray:
    """coefficients of 1 - sum(params[i-1] z^i), lowest power first"""
    return np.concatenate(([1.0], -np.asarray(params, dtype=float)))


def _poly_roots(params) -> np.ndarray:
    c = _poly_series(params)
    # strip trailing zero lags so np.roots sees the true degree
    nz = np.nonzero(c)[0]
    c = c[: nz[-1] + 1]
    if len(c) == 1:
        return np.empty(0, dtype=complex)
    return np.roots(c[::-1])


def delta_coeffs(d: float, m: int) -> CoefficientTable:
    """Fractional-difference weights: (1-z)^d = sum delta_k z^k.

    Computed by the running-product recurrence delta_k = delta_{k-1}(k-1-d)/k
    with delta_0 = 1; integer d terminates in exact zeros.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    k = np.arange(1, m + 1, dtype=float)
    vals = np.concatenate(([1.0], np.cumprod((k - 1.0 - d) / k)))
    return CoefficientTable("delta", float(d), vals, m)


def pi_coeffs(d: float, m: int) -> CoefficientTable:
    """Inverse-operator weights: (1-z)^(-d) = sum pi_k z^k = delta weights at -d."""
    t = delta_coeffs(-d, m)
    return CoefficientTable("pi", float(d), np.asarray(t.values), m)


def beta_inverse_coeffs(beta, m: int) -> CoefficientTable:
    """Series f with (1 - sum beta_j z^j) f(z) = 1, valid when all roots lie
    outside the closed unit disk."""
    beta = tuple(float(b) for b in beta)
    _require_stable(beta)
    b = _poly_series(beta)
    impulse = np.zeros(m + 1)
    impulse[0] = 1.0
    vals = lfilter([1.0], b, impulse)
    return CoefficientTable("beta_inverse", 0.0, vals, m)


def lambda_coeffs(spec: FiegarchSpec, m: int) -> CoefficientTable:
    """Log-volatility filter weights lambda_0..lambda_m.

    lambda(z) = [alpha(z)/beta(z)] (1-z)^(-d), expanded by driving the
    inverse-beta recursion with the convolution of the alpha series and the
    pi weights. Cost O(m(p+q)); agrees with the direct double-sum recurrence
    (see tests) and with lambda_oracle.
    """
    _require_stable(spec.beta)
    a = _poly_series(spec.alpha)
    pi = pi_coeffs(spec.d, m).values
    r = np.convolve(a, pi)[: m + 1]
    vals = lfilter([1.0], _poly_series(spec.beta), r)
    return CoefficientTable("lambda", spec.d, vals, m, spec.spec_hash())


def lambda_oracle(spec: FiegarchSpec, m: int) -> CoefficientTable:
    """Brute-force cross-check for lambda_coeffs: convolve the alpha series,
    the inverse-beta series, and the pi weights. Quadratic cost, test use only.

    The inverse-beta series is solved as a triangular linear system so the
    oracle shares no code path with the production filter.
    """
    _require_stable(spec.beta)
    b = _poly_series(spec.beta)
    band = np.zeros(m + 1)
    band[: len(b)] = b
    toeplitz = np.zeros((m + 1, m + 1))
    for i in range(m + 1):
        toeplitz[i:, i] = band[: m + 1 - i]
    e0 = np.zeros(m + 1)
    e0[0] = 1.0
    f = solve_triangular(toeplitz, e0, lower=True)

    a = _poly_series(spec.alpha)
    pi = pi_coeffs(spec.d, m).values
    vals = np.convolve(np.convolve(a, f), pi)[: m + 1]
    return CoefficientTable("lambda", spec.d, vals, m, spec.spec_hash())


@dataclass(frozen=True)
class AsymptoteReport:
    """Hyperbolic-decay approximation of lambda_k and its two quotients."""

    k: np.ndarray
    approx: np.ndarray  # alpha(1) / (beta(1) Gamma(d) k^(1-d))
    q1: np.ndarray      # lambda_k / k^d
    q2: np.ndarray      # lambda_k / approx


def lambda_asymptote(spec: FiegarchSpec, k, lam: CoefficientTable | None = None) -> AsymptoteReport:
    """Decay-rate check: lambda_k ~ alpha(1)/(beta(1) Gamma(d) k^(1-d)).

    k may be a scalar or array of indices >= 1. Pass a precomputed lambda
    table to avoid rebuilding it; otherwise one is built up to max(k).
    """
    k = np.atleast_1d(np.asarray(k, dtype=int))
    if np.any(k < 1):
        raise ValueError("asymptote defined for k >= 1")
    if spec.d <= 0 and float(spec.d).is_integer():
        raise GammaPole(f"Gamma pole at d={spec.d}")
    kmax = int(k.max())
    if lam is None:
        lam = lambda_coeffs(spec, kmax)
    elif lam.m < kmax:
        raise ValueError("lambda table shorter than requested k")
    lam_k = lam.values[k]
    a1 = 1.0 - sum(spec.alpha)
    b1 = 1.0 - sum(spec.beta)
    kf = k.astype(float)
    approx = a1 / (b1 * _gamma_fn(spec.d) * kf ** (1.0 - spec.d))
    return AsymptoteReport(k=k, approx=approx, q1=lam_k / kf ** spec.d, q2=lam_k / approx)


def phi_coeffs(beta, d: float, m: int) -> CoefficientTable:
    """Weights of (1 - sum beta_j z^j)(1-z)^d: convolution of the beta series
    with the delta weights."""
    b = _poly_series(tuple(float(x) for x in beta))
    delta = delta_coeffs(d, m).values
    vals = np.convolve(b, delta)[: m + 1]
    return CoefficientTable("phi", float(d), vals, m)


def validate(spec: FiegarchSpec) -> ValidityReport:
    """Model validity flags.

    beta_stable: every root of the beta polynomial has modulus > 1 + TOL_ROOT.
    weakly_stationary: d < 0.5 (square-summable filter weights).
    invertible: -1 < d < 0.5 and all alpha roots outside the closed disk.
    strictly_valid: beta_stable and weakly stationary, the precondition for
    simulation and population moments.
    common_roots_flag: some alpha root sits within COMMON_ROOT_TOL of a beta
    root, so the ratio alpha/beta is degenerate (warning, not an error).
    """
    alpha_roots = _poly_roots(spec.alpha)
    beta_roots = _poly_roots(spec.beta)
    beta_stable = bool(np.all(np.abs(beta_roots) > 1.0 + TOL_ROOT)) if len(beta_roots) else True
    alpha_outside = bool(np.all(np.abs(alpha_roots) > 1.0 + TOL_ROOT)) if len(alpha_roots) else True
    weakly = spec.d < 0.5
    common = False
    if len(alpha_roots) and len(beta_roots):
        dist = np.abs(alpha_roots[:, None] - beta_roots[None, :])
        common = bool(dist.min() < COMMON_ROOT_TOL)
    return ValidityReport(
        weakly_stationary=weakly,
        strictly_valid=bool(beta_stable and weakly),
        invertible=bool(-1.0 < spec.d < 0.5 and alpha_outside),
        beta_stable=beta_stable,
        common_roots_flag=common,
    )


def _require_stable(beta) -> None:
    roots = _poly_roots(beta)
    if len(roots) and not np.all(np.abs(roots) > 1.0 + TOL_ROOT):
        worst = float(np.min(np.abs(roots)))
        raise RootInsideDisk(
            f"beta polynomial root of modulus {worst:.6g} inside stability region"
        )
