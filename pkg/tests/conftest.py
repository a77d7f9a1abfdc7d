import numpy as np
import pytest

from mcmimo import (
    ChannelEstimateSet,
    ScenarioSpec,
    SystemConfig,
    build_scenario,
)


@pytest.fixture(scope="session")
def benchmark():
    """4-cell reference scenario: a=0.8, b=0.08, two alternating pilot pools."""
    config = SystemConfig(L=4, K=2, M=8, tau=4, p_f=100.0, p_r=10.0, gamma=1.0, seed=777)
    betas, pilots = build_scenario(ScenarioSpec.benchmark(0.8, 0.08, 4), config)
    return config, betas, pilots


@pytest.fixture(scope="session")
def twocell():
    """Two cells, one user each, one pilot shared by both (contaminated training)."""
    config = SystemConfig(L=2, K=1, M=8, tau=4, p_f=100.0, p_r=10.0, gamma=1.0, seed=33)
    betas, pilots = build_scenario(ScenarioSpec.shared_pilot(0.5, 0.0, 2), config)
    return config, betas, pilots


@pytest.fixture(scope="session")
def as_estimates():
    """Wrap true channels as an estimate set (perfect-CSI test hook)."""

    def wrap(channels):
        return ChannelEstimateSet(h_hat=np.array(channels.h))

    return wrap
