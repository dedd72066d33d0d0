"""Finite-difference gradient checking."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor, Tape, backward


def numerical_gradient(fn, tensors, wrt: Tensor, h: float = 1e-6) -> np.ndarray:
    """Central-difference d fn / d wrt, evaluated elementwise."""
    base = wrt.data
    grad = np.zeros_like(base)
    flat = base.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = float(fn(*tensors).data)
        flat[i] = orig - h
        fm = float(fn(*tensors).data)
        flat[i] = orig
        gflat[i] = (fp - fm) / (2.0 * h)
    return grad


def grad_check(fn, tensors, h: float = 1e-6) -> float:
    """Compare tape gradients of scalar ``fn(*tensors)`` to central differences.

    Returns the worst relative error over all elements of all inputs, where
    the error of a pair (a, n) is |a - n| / max(|a|, |n|, 1). Inputs are
    never mutated beyond the +/-h probing, which is undone.
    """
    with Tape() as tape:
        out = fn(*tensors)
    if out.size != 1:
        raise ValueError("grad_check needs a scalar-valued function")
    grads = backward(tape, out)
    worst = 0.0
    for t in tensors:
        analytic = grads.get(t)
        numeric = numerical_gradient(fn, tensors, t, h=h)
        denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1.0)
        err = np.abs(analytic - numeric) / denom
        worst = max(worst, float(err.max()))
    return worst
