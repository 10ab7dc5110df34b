"""Exploration noise processes."""

from __future__ import annotations

import math

import numpy as np


class GaussianNoise:
    """I.i.d. zero-mean Gaussian noise per component."""

    def __init__(self, sigma: float, dim: int, rng: np.random.Generator):
        self.sigma = sigma
        self.dim = dim
        self.rng = rng

    def sample(self) -> np.ndarray:
        return self.rng.normal(0.0, self.sigma, size=self.dim)

    def reset(self) -> None:
        pass


class OUNoise:
    """Ornstein-Uhlenbeck process: temporally correlated, mean-reverting to 0."""

    def __init__(self, sigma: float, dim: int, rng: np.random.Generator,
                 theta: float = 0.15, dt: float = 1.0):
        self.sigma = sigma
        self.dim = dim
        self.rng = rng
        self.theta = theta
        self.dt = dt
        self.state = np.zeros(dim)

    def sample(self) -> np.ndarray:
        self.state = (
            self.state
            + self.theta * (0.0 - self.state) * self.dt
            + self.sigma * math.sqrt(self.dt) * self.rng.normal(size=self.dim)
        )
        return self.state.copy()

    def reset(self) -> None:
        self.state = np.zeros(self.dim)
