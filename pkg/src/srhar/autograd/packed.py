"""Fast time-major kernels for the convolutional encoder.

Layout: a packed activation is a contiguous (T, C) array with
T = n_samples * slot. Each sample occupies ``slot`` consecutive rows; its
``length`` real rows sit at [pad, pad+length) inside the slot and the
remaining gap rows are zero. The gap rows emulate zero padding, so a
stride-1 convolution over the whole array is k shifted contiguous slices
feeding one BLAS matmul, with no per-sample bookkeeping.

Weights for the packed conv are stored pre-reshaped as (k*C_in, C_out):
row j*C_in + ci corresponds to kernel tap j, input channel ci.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensor import Tensor, Tape


def pack_batch(x: Tensor, pad: int) -> Tensor:
    """(N, C, L) batch -> packed (N*(L+2*pad), C) with zero gap rows."""
    n, c, length = x.shape
    slot = length + 2 * pad
    out = np.zeros((n * slot, c))
    out.reshape(n, slot, c)[:, pad:pad + length] = x.data.transpose(0, 2, 1)
    res = Tensor(out)

    def vjp(g):
        gc = g.reshape(n, slot, c)[:, pad:pad + length]
        return (np.ascontiguousarray(gc.transpose(0, 2, 1)),)

    Tape.record((x,), res, vjp)
    return res


def conv1d_packed(x: Tensor, w2: Tensor, bias: Tensor, slot: int, length: int,
                  k: int, input_grad: bool = True) -> Tensor:
    """Stride-1 conv with pad k//2 on a packed activation; keeps the slot."""
    t, c_in = x.shape
    kc, c_out = w2.shape
    if kc != k * c_in:
        raise ValueError(
            f"packed conv weight rows {kc} != k*C_in = {k}*{c_in}")
    pad = k // 2
    if slot != length + 2 * pad:
        raise ValueError(f"slot {slot} != length {length} + 2*{pad}")
    m = t - 2 * pad
    flat = x.data.reshape(t * c_in)
    xcat = np.ascontiguousarray(
        sliding_window_view(flat, k * c_in)[::c_in][:m])     # (M, k*C_in)
    y = np.empty((t, c_out))
    np.dot(xcat, w2.data, out=y[pad:t - pad])
    y[pad:t - pad] += bias.data
    yv = y.reshape(-1, slot, c_out)
    yv[:, :pad] = 0.0
    yv[:, pad + length:] = 0.0
    out = Tensor(y)

    wdata = w2.data

    def vjp(g):
        gc = g[pad:t - pad]
        gw2 = xcat.T @ gc
        gb = gc.sum(axis=0)
        if not input_grad:
            return None, gw2, gb
        dxcat = gc @ wdata.T
        gx = np.zeros((t, c_in))
        for j in range(k):
            gx[j:j + m] += dxcat[:, j * c_in:(j + 1) * c_in]
        gv = gx.reshape(-1, slot, c_in)
        gv[:, :pad] = 0.0
        gv[:, pad + length:] = 0.0
        return gx, gw2, gb

    Tape.record((x, w2, bias), out, vjp)
    return out


def maxpool1d_packed(x: Tensor, slot: int, length: int, pad: int) -> Tensor:
    """Window-2 max pool over the real rows; output slot = length//2 + 2*pad.

    Ties go to the earlier position, matching the public maxpool1d.
    """
    t, c = x.shape
    n = t // slot
    l_out = length // 2
    center = x.data.reshape(n, slot, c)[:, pad:pad + 2 * l_out]
    lo = center[:, 0::2]
    hi = center[:, 1::2]
    right = hi > lo
    slot_out = l_out + 2 * pad
    y = np.zeros((n * slot_out, c))
    np.copyto(y.reshape(n, slot_out, c)[:, pad:pad + l_out],
              np.where(right, hi, lo))
    out = Tensor(y)

    def vjp(g):
        gc = g.reshape(n, slot_out, c)[:, pad:pad + l_out]
        gx = np.zeros((t, c))
        gv = gx.reshape(n, slot, c)[:, pad:pad + 2 * l_out]
        np.multiply(gc, ~right, out=gv[:, 0::2])
        np.multiply(gc, right, out=gv[:, 1::2])
        return (gx,)

    Tape.record((x,), out, vjp)
    return out


def unpack_flatten(x: Tensor, slot: int, length: int, pad: int) -> Tensor:
    """Packed (N*slot, C) -> flat features (N, length*C), dropping gaps.

    Feature order is position-major: row n is [x(l=0, all C), x(l=1, ...), ...].
    """
    t, c = x.shape
    n = t // slot
    center = x.data.reshape(n, slot, c)[:, pad:pad + length]
    z = np.ascontiguousarray(center).reshape(n, length * c)
    out = Tensor(z)

    def vjp(g):
        gx = np.zeros((t, c))
        gx.reshape(n, slot, c)[:, pad:pad + length] = g.reshape(n, length, c)
        return (gx,)

    Tape.record((x,), out, vjp)
    return out
