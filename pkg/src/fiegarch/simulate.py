"""Path generation: draw the noise, roll the log-volatility filter over it,
return returns and conditional variances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import FiegarchSpec, lambda_coeffs
from .errors import NonStationary
from .innovations import InnovationDist, g_transform, moment_functionals, sample

DEFAULT_BURN = 50_000


@dataclass(frozen=True)
class Path:
    """One simulated trajectory.

    z holds the pre-sample noise too: z[m_burn + t - 1] is the innovation
    multiplying sigma_t for t = 1..N, everything before index m_burn is
    warm-up history for the filter.
    """
    x: np.ndarray
    sigma2: np.ndarray
    z: np.ndarray
    spec: FiegarchSpec
    dist: InnovationDist
    seed: int
    m_burn: int

    def __post_init__(self):
        for arr in (self.x, self.sigma2, self.z):
            arr.flags.writeable = False
        if len(self.z) != len(self.x) + self.m_burn:
            raise ValueError("noise vector must cover the sample plus warm-up")


def simulate_path(spec: FiegarchSpec, dist: InnovationDist, n: int,
                  m_burn: int = DEFAULT_BURN, seed: int = 0) -> Path:
    """Generate x_t = sigma_t z_t, t = 1..n, with

        ln(sigma_t^2) = omega + sum_{k=0}^{m_burn-1} lambda_k g(z_{t-1-k})

    g uses the exact E|Z| of dist. Deterministic in seed."""
    if m_burn < 1:
        raise ValueError("m_burn must be at least 1")
    if n < 1:
        raise ValueError("need a positive sample length")
    if spec.d >= 0.5:
        raise NonStationary(f"d={spec.d} not in the stationary range")
    lam_rev = lambda_coeffs(spec, m_burn - 1).values[::-1].copy()
    z = sample(dist, n + m_burn, seed)
    gz = g_transform(z, spec.theta, spec.gamma, moment_functionals(dist).mu_abs)
    ln_sig2 = np.empty(n)
    for t in range(n):
        # window ends at g(z_{t-1}) = gz[m_burn + t - 1]
        ln_sig2[t] = spec.omega + np.dot(lam_rev, gz[t: t + m_burn])
    sigma2 = np.exp(ln_sig2)
    x = np.sqrt(sigma2) * z[m_burn:]
    return Path(x=x, sigma2=sigma2, z=z, spec=spec, dist=dist,
                seed=seed, m_burn=m_burn)
