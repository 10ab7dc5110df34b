"""Single-cell bandwidth slicing simulator with two-level learned allocation."""

__version__ = "0.1.0"

from .config import (
    ConfigError,
    ScenarioConfig,
    SliceSpec,
    default_config,
    load_scenario,
    scenario_from_dict,
)
from .env import PENALTY_REWARD, SlicingEnv, SlotOutcome, make_wic_env
from .orchestrator import (
    LearnedController,
    RssiController,
    SharedDb,
    SliceRecord,
    SystemAgents,
    run_episode,
    run_slot,
)

__all__ = [
    "ConfigError",
    "LearnedController",
    "PENALTY_REWARD",
    "RssiController",
    "ScenarioConfig",
    "SharedDb",
    "SliceRecord",
    "SliceSpec",
    "SlicingEnv",
    "SlotOutcome",
    "SystemAgents",
    "default_config",
    "load_scenario",
    "make_wic_env",
    "run_episode",
    "run_slot",
    "scenario_from_dict",
    "__version__",
]
