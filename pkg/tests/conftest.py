import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_triangle(rng, J, scale=1.0):
    """Random coefficient triangle used across property tests."""
    from besov_empirica.dyadic import CoefficientTriangle

    return CoefficientTriangle(
        J=J,
        mu0=float(rng.normal() * scale),
        mu1=float(rng.normal() * scale),
        levels=tuple(rng.normal(size=1 << j) * scale for j in range(J + 1)),
    )
