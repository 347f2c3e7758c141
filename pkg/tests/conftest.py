import hypothesis
import numpy as np
import pytest

# gradual underflow of r^j damping factors is expected and harmless
np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile(
    "ci", deadline=None, max_examples=25,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.register_profile("thorough", deadline=None, max_examples=200)
hypothesis.settings.load_profile("ci")


@pytest.fixture(scope="session")
def seed_spec():
    from growthlab import SeedSpec
    return SeedSpec(20260808)
