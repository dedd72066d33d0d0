"""Minimal reverse-mode autodiff: tensors, a tape, layers, and Adam."""

from .tensor import Tensor, Tape, Gradients, backward, tensor
from .ops import (add, sub, mul, scale, tsum, conv1d, maxpool1d, dense, relu,
                  dropout, softmax_cross_entropy)
from .packed import pack_batch, conv1d_packed, maxpool1d_packed, unpack_flatten
from .optim import ParamSet, AdamState, adam_step
from .gradcheck import grad_check, numerical_gradient

__all__ = [
    "Tensor", "Tape", "Gradients", "backward", "tensor",
    "add", "sub", "mul", "scale", "tsum",
    "conv1d", "maxpool1d", "dense", "relu", "dropout", "softmax_cross_entropy",
    "pack_batch", "conv1d_packed", "maxpool1d_packed", "unpack_flatten",
    "ParamSet", "AdamState", "adam_step",
    "grad_check", "numerical_gradient",
]
