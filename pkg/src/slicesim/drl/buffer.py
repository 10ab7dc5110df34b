"""Uniform-sampling ring replay buffer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Batch:
    obs: np.ndarray
    act: np.ndarray
    rew: np.ndarray
    next_obs: np.ndarray
    done: np.ndarray


class ReplayBuffer:
    """Fixed-capacity storage, oldest entries overwritten first."""

    def __init__(self, capacity: int, obs_dim: int, act_dim: int, rng: np.random.Generator):
        self.capacity = int(capacity)
        self.rng = rng
        self._obs = np.zeros((self.capacity, obs_dim), dtype=np.float32)
        self._act = np.zeros((self.capacity, act_dim), dtype=np.float32)
        self._rew = np.zeros(self.capacity, dtype=np.float32)
        self._next = np.zeros((self.capacity, obs_dim), dtype=np.float32)
        self._done = np.zeros(self.capacity, dtype=np.float32)
        self._idx = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, obs, act, rew, next_obs, done) -> None:
        i = self._idx
        self._obs[i] = obs
        self._act[i] = act
        self._rew[i] = rew
        self._next[i] = next_obs
        self._done[i] = float(done)
        self._idx = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int) -> Batch:
        """I.i.d. uniform draw (with replacement) over the stored entries."""
        idx = self.rng.integers(0, self._size, size=batch_size)
        return Batch(
            obs=self._obs[idx].astype(float),
            act=self._act[idx].astype(float),
            rew=self._rew[idx].astype(float),
            next_obs=self._next[idx].astype(float),
            done=self._done[idx].astype(float),
        )
