"""Differentiable layer operations on (N, C, L) / (N, D) tensors.

Every op works with or without an active Tape: when a tape is active the
op records a vector-Jacobian closure, otherwise it is a plain forward
computation. All vjp closures return freshly allocated arrays.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensor import Tensor, Tape


# ---------------------------------------------------------------------------
# elementwise / reduction helpers (mostly for toy graphs and loss assembly)

def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ValueError(f"add shape mismatch: {a.shape} vs {b.shape}")
    out = Tensor(a.data + b.data)
    Tape.record((a, b), out, lambda g: (g.copy(), g.copy()))
    return out


def sub(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ValueError(f"sub shape mismatch: {a.shape} vs {b.shape}")
    out = Tensor(a.data - b.data)
    Tape.record((a, b), out, lambda g: (g.copy(), -g))
    return out


def mul(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise product."""
    if a.shape != b.shape:
        raise ValueError(f"mul shape mismatch: {a.shape} vs {b.shape}")
    out = Tensor(a.data * b.data)
    ad, bd = a.data, b.data
    Tape.record((a, b), out, lambda g: (g * bd, g * ad))
    return out


def scale(a: Tensor, c: float) -> Tensor:
    """Multiply by a python scalar constant."""
    c = float(c)
    out = Tensor(a.data * c)
    Tape.record((a,), out, lambda g: (g * c,))
    return out


def tsum(a: Tensor) -> Tensor:
    """Sum of all elements, as a scalar tensor."""
    out = Tensor(a.data.sum())
    shape = a.shape
    Tape.record((a,), out, lambda g: (np.full(shape, float(g)),))
    return out


# ---------------------------------------------------------------------------
# layers

def conv1d(x: Tensor, kernels: Tensor, bias: Tensor, padding: int = 0) -> Tensor:
    """1-D cross-correlation, stride 1, zero padding.

    x: (N, C_in, L); kernels: (C_out, C_in, k); bias: (C_out,).
    Output length is L + 2*padding - k + 1.
    """
    if x.ndim != 3 or kernels.ndim != 3:
        raise ValueError(
            f"conv1d expects x (N,C,L) and kernels (C_out,C_in,k); "
            f"got {x.shape} and {kernels.shape}")
    n, c_in, length = x.shape
    c_out, kc_in, k = kernels.shape
    if kc_in != c_in:
        raise ValueError(
            f"conv1d channel mismatch: input has {c_in} channels, "
            f"kernels expect {kc_in}")
    if bias.shape != (c_out,):
        raise ValueError(f"conv1d bias shape {bias.shape} != ({c_out},)")
    if padding < 0:
        raise ValueError("padding must be >= 0")
    if k > length + 2 * padding:
        raise ValueError(
            f"kernel size {k} exceeds padded length {length + 2 * padding}")

    xp = np.pad(x.data, ((0, 0), (0, 0), (padding, padding))) if padding else x.data
    windows = sliding_window_view(xp, k, axis=2)          # (N, C_in, L_out, k)
    y = np.tensordot(windows, kernels.data, axes=([1, 3], [1, 2]))
    y = np.ascontiguousarray(y.transpose(0, 2, 1))        # (N, C_out, L_out)
    y += bias.data[None, :, None]
    out = Tensor(y)

    wdata = kernels.data

    def vjp(g):
        # weight grad: correlate padded input with the output grad
        gw = np.tensordot(g, windows, axes=([0, 2], [0, 2]))   # (C_out, C_in, k)
        gb = g.sum(axis=(0, 2))
        # input grad: full correlation of g with the flipped kernel
        gp = np.pad(g, ((0, 0), (0, 0), (k - 1, k - 1)))
        gwin = sliding_window_view(gp, k, axis=2)              # (N, C_out, Lp, k)
        gx_p = np.tensordot(gwin, wdata[:, :, ::-1], axes=([1, 3], [0, 2]))
        gx_p = gx_p.transpose(0, 2, 1)                         # (N, C_in, L+2p)
        if padding:
            gx = np.ascontiguousarray(gx_p[:, :, padding:padding + length])
        else:
            gx = np.ascontiguousarray(gx_p)
        return gx, gw, gb

    Tape.record((x, kernels, bias), out, vjp)
    return out


def maxpool1d(x: Tensor, window: int = 2) -> Tensor:
    """Non-overlapping max pooling; trailing remainder is dropped.

    Backward routes each window's gradient to its argmax; the first index
    wins ties.
    """
    if x.ndim != 3:
        raise ValueError(f"maxpool1d expects (N,C,L), got {x.shape}")
    n, c, length = x.shape
    if window < 1:
        raise ValueError("window must be >= 1")
    if length < window:
        raise ValueError(f"input length {length} shorter than window {window}")
    l_out = length // window
    blocks = x.data[:, :, :l_out * window].reshape(n, c, l_out, window)
    idx = blocks.argmax(axis=3)
    y = np.take_along_axis(blocks, idx[..., None], axis=3)[..., 0]
    out = Tensor(y)

    def vjp(g):
        gx = np.zeros((n, c, length))
        gblocks = gx[:, :, :l_out * window].reshape(n, c, l_out, window)
        np.put_along_axis(gblocks, idx[..., None], g[..., None], axis=3)
        return (gx,)

    Tape.record((x,), out, vjp)
    return out


def dense(x: Tensor, weights: Tensor, bias: Tensor) -> Tensor:
    """Affine map per row: x (N, d_in) @ weights.T (d_in, d_out) + bias."""
    if x.ndim != 2 or weights.ndim != 2:
        raise ValueError(
            f"dense expects x (N,d_in) and weights (d_out,d_in); "
            f"got {x.shape} and {weights.shape}")
    d_out, d_in = weights.shape
    if x.shape[1] != d_in:
        raise ValueError(
            f"dense width mismatch: input width {x.shape[1]}, "
            f"weights expect {d_in}")
    if bias.shape != (d_out,):
        raise ValueError(f"dense bias shape {bias.shape} != ({d_out},)")
    out = Tensor(x.data @ weights.data.T + bias.data)
    xd, wd = x.data, weights.data

    def vjp(g):
        return g @ wd, g.T @ xd, g.sum(axis=0)

    Tape.record((x, weights, bias), out, vjp)
    return out


def relu(x: Tensor) -> Tensor:
    """max(0, x); gradient is 0 at x <= 0."""
    y = np.maximum(x.data, 0.0)
    out = Tensor(y)
    Tape.record((x,), out, lambda g: (g * (y > 0),))
    return out


def dropout(x: Tensor, rate: float = 0.5, mode: str = "train",
            rng: np.random.Generator | None = None) -> Tensor:
    """Inverted dropout: train mode zeroes with probability ``rate`` and
    scales survivors by 1/(1-rate); eval mode is the exact identity."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if mode not in ("train", "eval"):
        raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
    if mode == "eval" or rate == 0.0:
        out = Tensor(x.data)
        Tape.record((x,), out, lambda g: (g.copy(),))
        return out
    if rng is None:
        raise ValueError("train-mode dropout needs a seeded generator")
    keep = rng.random(x.shape) >= rate
    scale_ = 1.0 / (1.0 - rate)
    mask = keep * scale_
    out = Tensor(x.data * mask)
    Tape.record((x,), out, lambda g: (g * mask,))
    return out


def softmax_cross_entropy(logits: Tensor, targets: Tensor):
    """Mean cross-entropy of softmax(logits) against one-hot targets.

    Returns (loss, probabilities); probabilities are a plain array and each
    row sums to 1. Computed with max-subtraction so huge logits are safe.
    """
    if logits.ndim != 2:
        raise ValueError(f"logits must be (N, M), got {logits.shape}")
    n, m = logits.shape
    if m < 2:
        raise ValueError("need at least 2 classes")
    t = targets.data
    if t.shape != (n, m):
        raise ValueError(f"targets shape {t.shape} != logits shape {(n, m)}")
    if not (np.all((t == 0.0) | (t == 1.0)) and np.all(t.sum(axis=1) == 1.0)):
        raise ValueError("each target row must be one-hot")

    z = logits.data - logits.data.max(axis=1, keepdims=True)
    ez = np.exp(z)
    denom = ez.sum(axis=1, keepdims=True)
    probs = ez / denom
    # log-softmax form avoids log(p) underflow for extreme logits
    logp = z - np.log(denom)
    loss_val = -(t * logp).sum() / n
    loss = Tensor(loss_val)

    def vjp(g):
        return ((probs - t) * (float(g) / n), None)

    Tape.record((logits, targets), loss, vjp)
    return loss, probs
