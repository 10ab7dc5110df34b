"""From-scratch deep RL: numpy networks, replay, and three learners."""

from .buffer import Batch, ReplayBuffer
from .checkpoint import load_checkpoint, read_manifest, save_checkpoint
from .hyper import AgentHyper
from .nn import Adam, Mlp, soft_update
from .noise import GaussianNoise, OUNoise
from .normalizer import IdentityScaler, LogStandardizer
from .offpolicy import DdpgAgent, Td3Agent
from .ppo import PpoAgent, gaussian_logp

ALGORITHMS = {"td3": Td3Agent, "ddpg": DdpgAgent, "ppo": PpoAgent}

__all__ = [
    "Adam",
    "AgentHyper",
    "ALGORITHMS",
    "Batch",
    "DdpgAgent",
    "GaussianNoise",
    "IdentityScaler",
    "LogStandardizer",
    "Mlp",
    "OUNoise",
    "PpoAgent",
    "ReplayBuffer",
    "Td3Agent",
    "gaussian_logp",
    "load_checkpoint",
    "read_manifest",
    "save_checkpoint",
    "soft_update",
]
