"""Hyperparameter bundle shared by the learned agents.

One flat record keeps config plumbing simple; each algorithm reads the
fields it cares about.  Defaults are the reference training settings;
experiment files override them (desk-scale runs use smaller nets and
snappier target updates).
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class AgentHyper:
    hidden: tuple[int, ...] = (64, 64)
    actor_lr: float = 1e-4
    critic_lr: float = 1e-3
    gamma: float = 0.99
    tau: float = 0.001
    target_update_freq: int = 10
    batch_size: int = 128
    buffer_capacity: int = 100_000
    warmup_steps: int = 1000
    explore_sigma: float = 0.1
    noise_kind: str = "gaussian"  # "gaussian" | "ou"
    ou_theta: float = 0.15
    policy_delay: int = 2
    smoothing_sigma: float = 0.2
    smoothing_clip: float = 0.5
    final_init_scale: float = 1e-3
    # on-policy knobs
    rollout_len: int = 500
    ppo_epochs: int = 10
    clip_ratio: float = 0.2
    gae_lambda: float = 0.95
    value_coef: float = 0.5
    init_std: float = 0.5

    def override(self, **kwargs) -> "AgentHyper":
        return replace(self, **kwargs)
