"""Named parameter sets and the Adam optimizer."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor, Gradients

ROLES = ("encoder", "classifier", "discriminator")


class ParamSet:
    """Ordered map of unique parameter ids to tensors, tagged with a role."""

    def __init__(self, role: str, params: dict[str, Tensor]):
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {role!r}")
        if len(set(params)) != len(params):
            raise ValueError("parameter ids must be unique")
        self._role = role
        self.params = dict(params)

    @property
    def role(self) -> str:
        return self._role

    def __getitem__(self, name: str) -> Tensor:
        return self.params[name]

    def __iter__(self):
        return iter(self.params)

    def items(self):
        return self.params.items()

    def tensors(self):
        return list(self.params.values())

    def n_values(self) -> int:
        return sum(t.size for t in self.params.values())

    def copy_values(self) -> dict[str, np.ndarray]:
        return {k: t.data.copy() for k, t in self.params.items()}

    def load_values(self, values: dict[str, np.ndarray]) -> None:
        if set(values) != set(self.params):
            raise ValueError("parameter ids do not match")
        for k, t in self.params.items():
            if values[k].shape != t.data.shape:
                raise ValueError(f"shape mismatch for {k!r}")
            t.data = values[k].astype(np.float64, copy=True)

    def gradients_from(self, grads: Gradients) -> dict[str, np.ndarray]:
        """Per-parameter gradients; zeros for parameters off the loss path."""
        return {k: grads.get(t) for k, t in self.params.items()}


class AdamState:
    """First/second moment estimates plus the shared step counter."""

    def __init__(self, params: ParamSet, lr: float = 1e-4, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.t = 0
        self.m = {k: np.zeros_like(p.data) for k, p in params.items()}
        self.v = {k: np.zeros_like(p.data) for k, p in params.items()}


def adam_step(params: ParamSet, grads: dict[str, np.ndarray],
              state: AdamState):
    """One bias-corrected Adam update, in place. Returns (params, state)."""
    if set(grads) != set(params.params):
        missing = set(params.params) ^ set(grads)
        raise ValueError(f"gradient keys do not match parameters: {missing}")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1 ** state.t
    bc2 = 1.0 - b2 ** state.t
    step = state.lr / bc1
    for k, p in params.items():
        g = grads[k]
        m = state.m[k]
        v = state.v[k]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * np.square(g)
        p.data -= step * m / (np.sqrt(v / bc2) + state.eps)
    return params, state
