"""Observation scaling for agent inputs.

Channel gains span ten-plus orders of magnitude, so slice agents feed their
networks ``log10(gain)`` standardized by a running mean/std (Welford).  The
global observation is already bounded in [0, 1] and passes through
unchanged.
"""

from __future__ import annotations

import numpy as np

_EPS = 1e-8
_GAIN_FLOOR = 1e-300


class IdentityScaler:
    def __init__(self, dim: int):
        self.dim = dim

    def update(self, obs) -> None:
        pass

    def transform(self, obs):
        return np.asarray(obs, dtype=float)

    def transform_prefix(self, obs, n: int):
        return np.asarray(obs, dtype=float)[:n]

    def state_arrays(self) -> dict[str, np.ndarray]:
        return {}

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        pass


class LogStandardizer:
    """Per-component running standardization of log10-scaled inputs."""

    def __init__(self, dim: int):
        self.dim = dim
        self.count = 0.0
        self.mean = np.zeros(dim)
        self.m2 = np.zeros(dim)

    def _log(self, obs) -> np.ndarray:
        return np.log10(np.maximum(np.asarray(obs, dtype=float), _GAIN_FLOOR))

    def update(self, obs) -> None:
        x = np.atleast_2d(self._log(obs))
        for row in x:
            self.count += 1.0
            delta = row - self.mean
            self.mean += delta / self.count
            self.m2 += delta * (row - self.mean)

    def transform(self, obs):
        x = self._log(obs)
        var = self.m2 / self.count if self.count > 1 else np.ones(self.dim)
        return (x - self.mean) / np.sqrt(var + _EPS)

    def transform_prefix(self, obs, n: int):
        """Scale the first ``n`` components with their own running statistics."""
        x = self._log(np.asarray(obs, dtype=float)[:n])
        var = self.m2[:n] / self.count if self.count > 1 else np.ones(n)
        return (x - self.mean[:n]) / np.sqrt(var + _EPS)

    def state_arrays(self) -> dict[str, np.ndarray]:
        return {
            "count": np.array([self.count]),
            "mean": self.mean.copy(),
            "m2": self.m2.copy(),
        }

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        self.count = float(arrays["count"][0])
        self.mean = arrays["mean"].copy()
        self.m2 = arrays["m2"].copy()
