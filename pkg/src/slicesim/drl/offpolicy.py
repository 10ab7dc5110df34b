"""Deterministic-policy learners sharing a replay buffer and target nets.

Both agents emit squashed actions in [-1, 1]; callers map them affinely
onto the actual fraction bounds.  During warmup the policy is bypassed in
favour of uniform random actions, and no gradient steps happen until the
buffer holds a full warmup's worth of data.
"""

from __future__ import annotations

import numpy as np

from .buffer import ReplayBuffer
from .hyper import AgentHyper
from .nn import Adam, Mlp, soft_update
from .noise import GaussianNoise, OUNoise
from .normalizer import IdentityScaler


class _OffPolicyAgent:
    def __init__(self, obs_dim: int, act_dim: int, hyper: AgentHyper,
                 rng: np.random.Generator, scaler=None):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.hyper = hyper
        self.rng = rng
        self.scaler = scaler if scaler is not None else IdentityScaler(obs_dim)
        self.actor = Mlp([obs_dim, *hyper.hidden, act_dim], "tanh", rng=rng,
                         final_scale=hyper.final_init_scale)
        self.actor_target = self.actor.clone()
        self.buffer = ReplayBuffer(hyper.buffer_capacity, obs_dim, act_dim, rng.spawn(1)[0])
        if hyper.noise_kind == "ou":
            self.noise = OUNoise(hyper.explore_sigma, act_dim, rng.spawn(1)[0], theta=hyper.ou_theta)
        else:
            self.noise = GaussianNoise(hyper.explore_sigma, act_dim, rng.spawn(1)[0])
        self.opt_actor = Adam(self.actor.params, hyper.actor_lr)
        self._updates = 0
        self._seen = 0

    def act(self, obs, explore: bool) -> np.ndarray:
        if explore and self._seen < self.hyper.warmup_steps:
            return self.rng.uniform(-1.0, 1.0, size=self.act_dim)
        x = self.scaler.transform(obs)
        u = self.actor.forward(x)[0][0]
        if explore:
            u = np.clip(u + self.noise.sample(), -1.0, 1.0)
        return u

    def observe(self, obs, act, rew, next_obs, done) -> None:
        self.scaler.update(obs)
        self.buffer.push(obs, act, rew, next_obs, done)
        self._seen += 1

    def reset_noise(self) -> None:
        self.noise.reset()

    def _ready(self) -> bool:
        return len(self.buffer) >= max(self.hyper.batch_size, self.hyper.warmup_steps)

    def _named_nets(self) -> dict[str, Mlp]:
        raise NotImplementedError

    def state_arrays(self) -> dict[str, np.ndarray]:
        arrays: dict[str, np.ndarray] = {}
        for name, net in self._named_nets().items():
            for i, p in enumerate(net.params):
                arrays[f"{name}/{i}"] = p.copy()
        for key, val in self.scaler.state_arrays().items():
            arrays[f"scaler/{key}"] = val
        return arrays

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        for name, net in self._named_nets().items():
            for i, p in enumerate(net.params):
                p[...] = arrays[f"{name}/{i}"]
        scaler_state = {
            key.split("/", 1)[1]: val for key, val in arrays.items() if key.startswith("scaler/")
        }
        if scaler_state:
            self.scaler.load_state_arrays(scaler_state)


class Td3Agent(_OffPolicyAgent):
    """Twin critics, smoothed targets, delayed actor updates."""

    algorithm = "td3"

    def __init__(self, obs_dim, act_dim, hyper, rng, scaler=None):
        super().__init__(obs_dim, act_dim, hyper, rng, scaler)
        self.critic1 = Mlp([obs_dim + act_dim, *hyper.hidden, 1], "linear", rng=rng)
        self.critic2 = Mlp([obs_dim + act_dim, *hyper.hidden, 1], "linear", rng=rng)
        self.critic1_target = self.critic1.clone()
        self.critic2_target = self.critic2.clone()
        self.opt_critic1 = Adam(self.critic1.params, hyper.critic_lr)
        self.opt_critic2 = Adam(self.critic2.params, hyper.critic_lr)

    def _named_nets(self):
        return {
            "actor": self.actor,
            "actor_target": self.actor_target,
            "critic1": self.critic1,
            "critic2": self.critic2,
            "critic1_target": self.critic1_target,
            "critic2_target": self.critic2_target,
        }

    def target_action(self, next_obs_scaled: np.ndarray) -> np.ndarray:
        """Target policy with clipped smoothing noise, clipped to the range."""
        a2 = self.actor_target.forward(next_obs_scaled)[0]
        h = self.hyper
        if h.smoothing_sigma > 0:
            eps = np.clip(
                self.rng.normal(0.0, h.smoothing_sigma, size=a2.shape),
                -h.smoothing_clip,
                h.smoothing_clip,
            )
            a2 = np.clip(a2 + eps, -1.0, 1.0)
        return a2

    def compute_targets(self, rew, done, next_obs_scaled) -> np.ndarray:
        a2 = self.target_action(next_obs_scaled)
        x2 = np.concatenate([next_obs_scaled, a2], axis=1)
        q1 = self.critic1_target.forward(x2)[0]
        q2 = self.critic2_target.forward(x2)[0]
        q_min = np.minimum(q1, q2)
        return rew[:, None] + self.hyper.gamma * (1.0 - done[:, None]) * q_min

    def update(self) -> bool:
        if not self._ready():
            return False
        h = self.hyper
        b = self.buffer.sample(h.batch_size)
        s = self.scaler.transform(b.obs)
        s2 = self.scaler.transform(b.next_obs)
        y = self.compute_targets(b.rew, b.done, s2)
        x = np.concatenate([s, b.act], axis=1)
        for critic, opt in ((self.critic1, self.opt_critic1), (self.critic2, self.opt_critic2)):
            q, acts = critic.forward(x)
            grads, _ = critic.backward(acts, 2.0 * (q - y) / h.batch_size)
            opt.step(critic.params, grads)
        self._updates += 1
        if self._updates % h.policy_delay == 0:
            a_pi, acts_a = self.actor.forward(s)
            x_pi = np.concatenate([s, a_pi], axis=1)
            q, acts_c = self.critic1.forward(x_pi)
            _, gx = self.critic1.backward(acts_c, -np.ones_like(q) / h.batch_size)
            grads_a, _ = self.actor.backward(acts_a, gx[:, self.obs_dim:])
            self.opt_actor.step(self.actor.params, grads_a)
        if self._updates % h.target_update_freq == 0:
            soft_update(self.actor_target, self.actor, h.tau)
            soft_update(self.critic1_target, self.critic1, h.tau)
            soft_update(self.critic2_target, self.critic2, h.tau)
        return True


class DdpgAgent(_OffPolicyAgent):
    """Single critic, no smoothing, actor updated every step."""

    algorithm = "ddpg"

    def __init__(self, obs_dim, act_dim, hyper, rng, scaler=None):
        hyper = hyper.override(noise_kind="ou")
        super().__init__(obs_dim, act_dim, hyper, rng, scaler)
        self.critic = Mlp([obs_dim + act_dim, *hyper.hidden, 1], "linear", rng=rng)
        self.critic_target = self.critic.clone()
        self.opt_critic = Adam(self.critic.params, hyper.critic_lr)

    def _named_nets(self):
        return {
            "actor": self.actor,
            "actor_target": self.actor_target,
            "critic": self.critic,
            "critic_target": self.critic_target,
        }

    def update(self) -> bool:
        if not self._ready():
            return False
        h = self.hyper
        b = self.buffer.sample(h.batch_size)
        s = self.scaler.transform(b.obs)
        s2 = self.scaler.transform(b.next_obs)
        a2 = self.actor_target.forward(s2)[0]
        q_t = self.critic_target.forward(np.concatenate([s2, a2], axis=1))[0]
        y = b.rew[:, None] + h.gamma * (1.0 - b.done[:, None]) * q_t
        q, acts = self.critic.forward(np.concatenate([s, b.act], axis=1))
        grads, _ = self.critic.backward(acts, 2.0 * (q - y) / h.batch_size)
        self.opt_critic.step(self.critic.params, grads)
        a_pi, acts_a = self.actor.forward(s)
        q_pi, acts_c = self.critic.forward(np.concatenate([s, a_pi], axis=1))
        _, gx = self.critic.backward(acts_c, -np.ones_like(q_pi) / h.batch_size)
        grads_a, _ = self.actor.backward(acts_a, gx[:, self.obs_dim:])
        self.opt_actor.step(self.actor.params, grads_a)
        self._updates += 1
        if self._updates % h.target_update_freq == 0:
            soft_update(self.actor_target, self.actor, h.tau)
            soft_update(self.critic_target, self.critic, h.tau)
        return True
