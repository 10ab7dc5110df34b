import numpy as np
import pytest

from slicesim.config import ScenarioConfig, SliceSpec, default_config
from slicesim.qos import SatisfactionParams

CONFIG_DIR = "configs"


@pytest.fixture
def params() -> SatisfactionParams:
    return SatisfactionParams.from_elasticity(rho=1.3, xi=5.0)


@pytest.fixture
def desk_config() -> ScenarioConfig:
    """Reference cell with desk-sized populations (4 / 14 / 42 users)."""
    cfg = default_config()
    return cfg.with_user_counts((4, 14, 42))


@pytest.fixture
def tiny_config() -> ScenarioConfig:
    """Two slices of two users with the channel frozen after reset."""
    return default_config(
        slice_specs=(
            SliceSpec("alpha", 2, 40e6, (0.05, 0.95)),
            SliceSpec("beta", 2, 40e6, (0.05, 0.95)),
        ),
        freeze_channel=True,
    )


def rel_err(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), 1e-12)
    return float(np.linalg.norm(a - b)) / scale
