"""Dense networks with hand-written backprop plus the Adam update rule.

Everything is plain numpy: a network is a list of parameter arrays, a
forward pass returns the activations needed for the backward pass, and the
backward pass returns gradients in the same order as the parameters along
with the gradient w.r.t. the input (needed to push value gradients through
a critic into an actor).
"""

from __future__ import annotations

import math

import numpy as np


class Mlp:
    """Fully-connected net; relu hidden layers, linear or tanh output head.

    Weights start at the usual uniform fan-in scale.  ``final_scale``
    shrinks the last layer so a freshly built actor emits near-zero
    (mid-range after squashing) actions.
    """

    def __init__(self, sizes, out_activation: str = "linear", *, rng: np.random.Generator,
                 final_scale: float | None = None):
        if out_activation not in ("linear", "tanh"):
            raise ValueError(f"unknown output activation {out_activation!r}")
        self.sizes = tuple(int(s) for s in sizes)
        self.out_activation = out_activation
        self.params: list[np.ndarray] = []
        for n_in, n_out in zip(self.sizes[:-1], self.sizes[1:]):
            bound = 1.0 / math.sqrt(n_in)
            self.params.append(rng.uniform(-bound, bound, size=(n_in, n_out)))
            self.params.append(rng.uniform(-bound, bound, size=n_out))
        if final_scale is not None:
            self.params[-2] *= final_scale
            self.params[-1] *= final_scale

    @property
    def n_layers(self) -> int:
        return len(self.sizes) - 1

    def forward(self, x):
        """Returns (output, activations); input may be a single row or a batch."""
        h = np.atleast_2d(np.asarray(x, dtype=float))
        acts = [h]
        for i in range(self.n_layers):
            z = h @ self.params[2 * i] + self.params[2 * i + 1]
            if i < self.n_layers - 1:
                h = np.maximum(z, 0.0)
            elif self.out_activation == "tanh":
                h = np.tanh(z)
            else:
                h = z
            acts.append(h)
        return h, acts

    def backward(self, acts, grad_out):
        """Backprop ``grad_out`` (dL/doutput) through cached activations.

        Returns (param gradients, dL/dinput).
        """
        g = np.atleast_2d(np.asarray(grad_out, dtype=float))
        if self.out_activation == "tanh":
            y = acts[-1]
            g = g * (1.0 - y * y)
        grads: list[np.ndarray | None] = [None] * len(self.params)
        for i in reversed(range(self.n_layers)):
            grads[2 * i] = acts[i].T @ g
            grads[2 * i + 1] = g.sum(axis=0)
            g = g @ self.params[2 * i].T
            if i > 0:
                g = g * (acts[i] > 0)
        return grads, g

    def copy_from(self, other: "Mlp") -> None:
        for p, q in zip(self.params, other.params):
            p[...] = q

    def clone(self) -> "Mlp":
        twin = object.__new__(Mlp)
        twin.sizes = self.sizes
        twin.out_activation = self.out_activation
        twin.params = [p.copy() for p in self.params]
        return twin


class Adam:
    """Standard Adam with bias correction, updating parameters in place."""

    def __init__(self, params, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params, grads) -> None:
        self.t += 1
        b1c = 1.0 - self.beta1**self.t
        b2c = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


def soft_update(target: Mlp, online: Mlp, tau: float) -> None:
    """Polyak averaging: target <- tau * online + (1 - tau) * target."""
    for t, o in zip(target.params, online.params):
        t *= 1.0 - tau
        t += tau * o
