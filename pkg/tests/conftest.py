import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fiegarch._presets import PRESETS, STUDY_DIST
from fiegarch.coeffs import FiegarchSpec
from fiegarch.innovations import GAUSSIAN, GED, InnovationDist

settings.register_profile(
    "pkg",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pkg")


@pytest.fixture(scope="session")
def presets() -> dict[str, FiegarchSpec]:
    return dict(PRESETS)


@pytest.fixture(scope="session")
def m4(presets) -> FiegarchSpec:
    return presets["M4"]


@pytest.fixture(scope="session")
def gaussian() -> InnovationDist:
    return InnovationDist(GAUSSIAN)


@pytest.fixture(scope="session")
def ged15() -> InnovationDist:
    return STUDY_DIST


def random_valid_spec(rng: np.random.Generator, max_order: int = 4) -> FiegarchSpec:
    """Random spec with stable beta: coefficient mass under 0.95 keeps all
    beta roots outside the unit disk; alpha is unconstrained."""
    p = int(rng.integers(0, max_order + 1))
    q = int(rng.integers(0, max_order + 1))
    alpha = tuple(rng.uniform(-1.5, 1.5, p))
    beta = rng.uniform(-1.0, 1.0, q)
    total = np.sum(np.abs(beta))
    if total > 0.95:
        beta = beta * (rng.uniform(0.3, 0.95) / total)
    return FiegarchSpec(
        d=float(rng.uniform(-0.9, 0.49)),
        omega=float(rng.uniform(-8.0, -4.0)),
        theta=float(rng.uniform(-0.5, 0.5)),
        gamma=float(rng.uniform(-0.5, 0.5)),
        alpha=alpha,
        beta=tuple(beta),
    )
