"""Clipped-ratio policy optimization with GAE.

The policy is a Gaussian over pre-squash actions: the mean comes from a
linear-headed net, the log-std is a free learnable vector.  Sampled actions
pass through tanh before they leave the agent, so callers see the same
[-1, 1] surface as the deterministic learners.  Ratios are formed at the
sampled pre-squash points, where the squash Jacobian cancels.
"""

from __future__ import annotations

import math

import numpy as np

from .hyper import AgentHyper
from .nn import Adam, Mlp
from .normalizer import IdentityScaler

_LOG_2PI = math.log(2.0 * math.pi)


def gaussian_logp(u: np.ndarray, mean: np.ndarray, log_std: np.ndarray) -> np.ndarray:
    """Row-wise log density of ``u`` under a diagonal Gaussian."""
    std = np.exp(log_std)
    z = (u - mean) / std
    return -0.5 * np.sum(z * z, axis=-1) - np.sum(log_std) - 0.5 * _LOG_2PI * u.shape[-1]


class PpoAgent:
    algorithm = "ppo"

    def __init__(self, obs_dim: int, act_dim: int, hyper: AgentHyper,
                 rng: np.random.Generator, scaler=None):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.hyper = hyper
        self.rng = rng
        self.scaler = scaler if scaler is not None else IdentityScaler(obs_dim)
        self.mean_net = Mlp([obs_dim, *hyper.hidden, act_dim], "linear", rng=rng,
                            final_scale=hyper.final_init_scale)
        self.log_std = np.full(act_dim, math.log(hyper.init_std))
        self.value_net = Mlp([obs_dim, *hyper.hidden, 1], "linear", rng=rng)
        self.opt_policy = Adam(self.mean_net.params + [self.log_std], hyper.actor_lr)
        self.opt_value = Adam(self.value_net.params, hyper.critic_lr)
        self._pending = None
        self._reset_rollout()

    def _reset_rollout(self):
        self._obs: list[np.ndarray] = []
        self._u: list[np.ndarray] = []
        self._logp: list[float] = []
        self._val: list[float] = []
        self._rew: list[float] = []
        self._done: list[float] = []
        self._last_next_obs: np.ndarray | None = None

    def act(self, obs, explore: bool) -> np.ndarray:
        x = self.scaler.transform(obs)
        mean = self.mean_net.forward(x)[0][0]
        if not explore:
            return np.tanh(mean)
        u = mean + np.exp(self.log_std) * self.rng.normal(size=self.act_dim)
        self._pending = (
            np.asarray(x, dtype=float).reshape(-1),
            u,
            float(gaussian_logp(u[None, :], mean[None, :], self.log_std)[0]),
            float(self.value_net.forward(x)[0][0, 0]),
        )
        return np.tanh(u)

    def observe(self, obs, act, rew, next_obs, done) -> None:
        if self._pending is None:
            raise RuntimeError("observe without a preceding exploratory act")
        x, u, logp, val = self._pending
        self._pending = None
        self.scaler.update(obs)
        self._obs.append(x)
        self._u.append(u)
        self._logp.append(logp)
        self._val.append(val)
        self._rew.append(float(rew))
        self._done.append(float(done))
        self._last_next_obs = np.asarray(self.scaler.transform(next_obs), dtype=float).reshape(-1)

    def reset_noise(self) -> None:
        pass

    def _advantages(self):
        h = self.hyper
        rew = np.array(self._rew)
        done = np.array(self._done)
        val = np.array(self._val)
        n = len(rew)
        if done[-1]:
            tail = 0.0
        else:
            tail = float(self.value_net.forward(self._last_next_obs)[0][0, 0])
        next_val = np.append(val[1:], tail)
        delta = rew + h.gamma * (1.0 - done) * next_val - val
        adv = np.zeros(n)
        acc = 0.0
        for t in reversed(range(n)):
            acc = delta[t] + h.gamma * h.gae_lambda * (1.0 - done[t]) * acc
            adv[t] = acc
        returns = adv + val
        std = adv.std()
        if std > 1e-8:
            adv = (adv - adv.mean()) / std
        return adv, returns

    def update(self) -> bool:
        h = self.hyper
        if len(self._rew) < h.rollout_len:
            return False
        obs = np.array(self._obs)
        u = np.array(self._u)
        logp_old = np.array(self._logp)
        adv, returns = self._advantages()
        n = len(adv)
        for _ in range(h.ppo_epochs):
            mean, acts = self.mean_net.forward(obs)
            std = np.exp(self.log_std)
            logp = gaussian_logp(u, mean, self.log_std)
            ratio = np.exp(logp - logp_old)
            surr_raw = ratio * adv
            surr_clip = np.clip(ratio, 1.0 - h.clip_ratio, 1.0 + h.clip_ratio) * adv
            # gradient flows only where the unclipped branch is active
            active = surr_raw <= surr_clip
            dlogp = -(adv * ratio * active) / n
            z = (u - mean) / std
            grads_mean, _ = self.mean_net.backward(acts, dlogp[:, None] * (z / std))
            dlogstd = (dlogp[:, None] * (z * z - 1.0)).sum(axis=0)
            self.opt_policy.step(self.mean_net.params + [self.log_std], grads_mean + [dlogstd])
            v, acts_v = self.value_net.forward(obs)
            gv = h.value_coef * 2.0 * (v - returns[:, None]) / n
            grads_v, _ = self.value_net.backward(acts_v, gv)
            self.opt_value.step(self.value_net.params, grads_v)
        self._reset_rollout()
        return True

    def _named_nets(self):
        return {"mean_net": self.mean_net, "value_net": self.value_net}

    def state_arrays(self) -> dict[str, np.ndarray]:
        arrays: dict[str, np.ndarray] = {}
        for name, net in self._named_nets().items():
            for i, p in enumerate(net.params):
                arrays[f"{name}/{i}"] = p.copy()
        arrays["log_std"] = self.log_std.copy()
        for key, val in self.scaler.state_arrays().items():
            arrays[f"scaler/{key}"] = val
        return arrays

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        for name, net in self._named_nets().items():
            for i, p in enumerate(net.params):
                p[...] = arrays[f"{name}/{i}"]
        self.log_std[...] = arrays["log_std"]
        scaler_state = {
            key.split("/", 1)[1]: val for key, val in arrays.items() if key.startswith("scaler/")
        }
        if scaler_state:
            self.scaler.load_state_arrays(scaler_state)
