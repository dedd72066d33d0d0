"""The packed time-major encoder path must match the public (N,C,L) ops."""

import numpy as np
import pytest

from srhar.autograd import (Tape, backward, tensor, tsum, conv1d, maxpool1d,
                            relu, pack_batch, conv1d_packed, maxpool1d_packed,
                            unpack_flatten, grad_check)


def to_packed_weights(w):
    # (C_out, C_in, k) -> (k*C_in, C_out), tap-major rows
    c_out, c_in, k = w.shape
    return np.ascontiguousarray(w.transpose(2, 1, 0)).reshape(k * c_in, c_out)


@pytest.mark.parametrize("n,c_in,c_out,length,k", [
    (1, 1, 1, 8, 3), (3, 3, 16, 32, 3), (2, 4, 6, 17, 5),
])
def test_packed_conv_matches_public(n, c_in, c_out, length, k):
    rng = np.random.default_rng(20)
    pad = k // 2
    x = rng.standard_normal((n, c_in, length))
    w = rng.standard_normal((c_out, c_in, k))
    b = rng.standard_normal(c_out)

    ref = conv1d(tensor(x), tensor(w), tensor(b), padding=pad)

    xp = pack_batch(tensor(x), pad)
    yp = conv1d_packed(xp, tensor(to_packed_weights(w)), tensor(b),
                       slot=length + 2 * pad, length=length, k=k)
    got = unpack_flatten(yp, slot=length + 2 * pad, length=length, pad=pad)
    got3 = got.data.reshape(n, length, c_out).transpose(0, 2, 1)
    np.testing.assert_allclose(got3, ref.data, atol=1e-12)


def test_packed_pool_matches_public():
    rng = np.random.default_rng(21)
    n, c, length, pad = 3, 5, 12, 1
    x = rng.standard_normal((n, c, length))
    ref = maxpool1d(tensor(x), window=2)
    xp = pack_batch(tensor(x), pad)
    yp = maxpool1d_packed(xp, slot=length + 2 * pad, length=length, pad=pad)
    out = unpack_flatten(yp, slot=length // 2 + 2 * pad, length=length // 2,
                         pad=pad)
    got = out.data.reshape(n, length // 2, c).transpose(0, 2, 1)
    np.testing.assert_allclose(got, ref.data)


def test_packed_pool_tie_goes_left():
    x = np.zeros((1, 1, 4))
    x[0, 0] = [7.0, 7.0, 1.0, 2.0]
    xp = pack_batch(tensor(x), 1)
    with Tape() as tape:
        yp = maxpool1d_packed(xp, slot=6, length=4, pad=1)
        loss = tsum(yp)
    g = backward(tape, loss).get(xp)
    center = g.reshape(1, 6, 1)[0, 1:5, 0]
    np.testing.assert_array_equal(center, [1.0, 0.0, 0.0, 1.0])


def test_packed_gap_rows_stay_zero():
    rng = np.random.default_rng(22)
    x = rng.standard_normal((2, 3, 10))
    xp = pack_batch(tensor(x), 1)
    w = tensor(rng.standard_normal((9, 4)))
    y = conv1d_packed(xp, w, tensor(rng.standard_normal(4)),
                      slot=12, length=10, k=3)
    gaps = y.data.reshape(2, 12, 4)[:, [0, 11]]
    np.testing.assert_array_equal(gaps, np.zeros_like(gaps))
    p = maxpool1d_packed(y, slot=12, length=10, pad=1)
    gaps = p.data.reshape(2, 7, 4)[:, [0, 6]]
    np.testing.assert_array_equal(gaps, np.zeros_like(gaps))


def test_packed_composite_gradients():
    """conv -> relu -> pool -> flatten chain against central differences."""
    rng = np.random.default_rng(23)
    n, c_in, c_out, length = 2, 2, 3, 8
    x = tensor(rng.standard_normal((n, c_in, length)))
    w = tensor(rng.standard_normal((3 * c_in, c_out)) * 0.7)
    b = tensor(rng.standard_normal(c_out))

    def f(xt, wt, bt):
        xp = pack_batch(xt, 1)
        y = relu(conv1d_packed(xp, wt, bt, slot=length + 2, length=length, k=3))
        p = maxpool1d_packed(y, slot=length + 2, length=length, pad=1)
        z = unpack_flatten(p, slot=length // 2 + 2, length=length // 2, pad=1)
        return tsum(z)

    assert grad_check(f, [x, w, b]) < 1e-6


def test_packed_conv_input_grad_skippable():
    rng = np.random.default_rng(24)
    x = tensor(rng.standard_normal((1, 2, 6)))
    xp = pack_batch(x, 1)
    w = tensor(rng.standard_normal((6, 3)))
    b = tensor(np.zeros(3))
    with Tape() as tape:
        y = conv1d_packed(xp, w, b, slot=8, length=6, k=3, input_grad=False)
        loss = tsum(y)
    grads = backward(tape, loss)
    assert not grads.has(xp)
    assert grads.has(w)
