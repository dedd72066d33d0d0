"""Reverse-mode automatic differentiation on numpy arrays.

A ``Tape`` records every differentiable operation executed while it is
active. ``backward`` replays the tape in exact reverse execution order,
accumulating vector-Jacobian products into per-tensor gradients.
"""

from __future__ import annotations

import numpy as np


class Tensor:
    """A float64 array plus identity; gradients live on the tape, not here."""

    __slots__ = ("data",)

    def __init__(self, data):
        self.data = np.asarray(data, dtype=np.float64)

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self) -> float:
        return float(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape})"


def tensor(data) -> Tensor:
    """Build a leaf tensor, validating that all values are finite."""
    t = Tensor(data)
    if not np.all(np.isfinite(t.data)):
        raise ValueError("tensor values must be finite")
    return t


class Tape:
    """Ordered record of executed operations, used as a context manager.

    Each node is (inputs, output, vjp) where vjp(grad_out) returns one
    gradient array (or None) per input. Nodes are appended in execution
    order; backward walks them strictly in reverse.
    """

    _active = None

    def __init__(self):
        self._nodes = []

    def __enter__(self):
        self._prev = Tape._active
        Tape._active = self
        return self

    def __exit__(self, exc_type, exc, tb):
        Tape._active = self._prev
        return False

    @staticmethod
    def active():
        return Tape._active

    @staticmethod
    def record(inputs, output, vjp):
        t = Tape._active
        if t is not None:
            t._nodes.append((inputs, output, vjp))

    def __len__(self):
        return len(self._nodes)


class Gradients:
    """Gradients keyed by tensor identity."""

    def __init__(self):
        self._by_id = {}

    def get(self, t: Tensor):
        """Gradient of the loss w.r.t. ``t``; zeros if t was off the path."""
        g = self._by_id.get(id(t))
        if g is None:
            return np.zeros_like(t.data)
        return g

    def has(self, t: Tensor) -> bool:
        return id(t) in self._by_id

    def _accumulate(self, t: Tensor, g):
        key = id(t)
        cur = self._by_id.get(key)
        if cur is None:
            self._by_id[key] = g
        else:
            cur += g


def backward(tape: Tape, loss: Tensor) -> Gradients:
    """Accumulate d(loss)/d(tensor) for every tensor reachable on the tape.

    ``loss`` must be a scalar produced by operations recorded on ``tape``.
    """
    if loss.size != 1:
        raise ValueError(f"loss must be scalar, got shape {loss.shape}")
    grads = Gradients()
    grads._by_id[id(loss)] = np.ones_like(loss.data)
    for inputs, output, vjp in reversed(tape._nodes):
        gout = grads._by_id.get(id(output))
        if gout is None:
            continue
        gins = vjp(gout)
        for t, g in zip(inputs, gins):
            if g is None:
                continue
            grads._accumulate(t, g)
    return grads
