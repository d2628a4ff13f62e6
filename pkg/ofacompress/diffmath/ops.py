# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
Differentiable operations on :class:`Matrix`.

Every operation computes its value eagerly and, when a tape is active and an
operand is tracked, records a backward function returning one gradient per
operand. Binary operations accept two equal shapes, or a 1 x cols row vector as
the second operand broadcast down the rows of the first.
"""

from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy import special

from ..errors import OfaCompressError, OfaShapeError
from .counting import record_macs
from .matrix import Matrix
from .tape import BackwardFn, current_tape


def apply(value: np.ndarray, parents: Sequence[Matrix], backward_fn: BackwardFn) -> Matrix:
    """
    Wrap ``value`` as an operation output and record it on the active tape.

    This is the extension point for operations defined outside this module.
    """
    out = Matrix.wrap(value)
    tape = current_tape()
    if tape is not None and any(tape.tracks(p) for p in parents):
        tape.record(out, parents, backward_fn)
    return out


def detach(a: Matrix) -> Matrix:
    """Same values, no gradient path."""
    return Matrix.wrap(a.data.copy())


def _broadcast(a: Matrix, b: Matrix, op: str) -> bool:
    if a.shape == b.shape:
        return False
    if b.rows == 1 and b.cols == a.cols:
        return True
    raise OfaShapeError(f"{op}: shapes {a.shape} and {b.shape} are not compatible")


def _reduce(g: np.ndarray, broadcast: bool) -> np.ndarray:
    return g.sum(axis=0, keepdims=True) if broadcast else g


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise OfaShapeError(f"matmul: {a.shape} x {b.shape}")
    record_macs(a.rows * a.cols * b.cols)
    A, B = a.data, b.data

    def backward_fn(g):
        return g @ B.T, A.T @ g

    return apply(A @ B, (a, b), backward_fn)


def add(a: Matrix, b: Matrix) -> Matrix:
    bc = _broadcast(a, b, "add")

    def backward_fn(g):
        return g, _reduce(g, bc)

    return apply(a.data + b.data, (a, b), backward_fn)


def sub(a: Matrix, b: Matrix) -> Matrix:
    bc = _broadcast(a, b, "sub")

    def backward_fn(g):
        return g, -_reduce(g, bc)

    return apply(a.data - b.data, (a, b), backward_fn)


def mul(a: Matrix, b: Matrix) -> Matrix:
    bc = _broadcast(a, b, "mul")
    A, B = a.data, b.data

    def backward_fn(g):
        return g * B, _reduce(g * A, bc)

    return apply(A * B, (a, b), backward_fn)


def div(a: Matrix, b: Matrix) -> Matrix:
    bc = _broadcast(a, b, "div")
    A, B = a.data, b.data
    out = A / B

    def backward_fn(g):
        return g / B, _reduce(-g * out / B, bc)

    return apply(out, (a, b), backward_fn)


def scale(a: Matrix, k: float) -> Matrix:
    return apply(a.data * k, (a,), lambda g: (g * k,))


def shift(a: Matrix, k: float) -> Matrix:
    return apply(a.data + k, (a,), lambda g: (g,))


def sigmoid(a: Matrix) -> Matrix:
    y = special.expit(a.data)
    return apply(y, (a,), lambda g: (g * y * (1.0 - y),))


def log_sigmoid(a: Matrix) -> Matrix:
    x = a.data
    return apply(special.log_expit(x), (a,), lambda g: (g * special.expit(-x),))


def tanh(a: Matrix) -> Matrix:
    y = np.tanh(a.data)
    return apply(y, (a,), lambda g: (g * (1.0 - y * y),))


def relu(a: Matrix) -> Matrix:
    mask = (a.data > 0).astype(np.float64)
    return apply(a.data * mask, (a,), lambda g: (g * mask,))


def exp(a: Matrix) -> Matrix:
    y = np.exp(a.data)
    return apply(y, (a,), lambda g: (g * y,))


def log(a: Matrix) -> Matrix:
    x = a.data
    return apply(np.log(x), (a,), lambda g: (g / x,))


def abs_(a: Matrix) -> Matrix:
    sign = np.sign(a.data)
    return apply(np.abs(a.data), (a,), lambda g: (g * sign,))


def clip(a: Matrix, lo: float, hi: float) -> Matrix:
    """Clamp into [lo, hi]; the gradient is zero outside the interval."""
    x = a.data
    inside = ((x >= lo) & (x <= hi)).astype(np.float64)
    return apply(np.clip(x, lo, hi), (a,), lambda g: (g * inside,))


def clamp_max(a: Matrix, hi: float) -> Matrix:
    x = a.data
    inside = (x <= hi).astype(np.float64)
    return apply(np.minimum(x, hi), (a,), lambda g: (g * inside,))


def transpose(a: Matrix) -> Matrix:
    return apply(a.data.T.copy(), (a,), lambda g: (g.T,))


def sum_(a: Matrix) -> Matrix:
    shape = a.shape
    return apply(np.array([[a.data.sum()]]), (a,), lambda g: (np.full(shape, g[0, 0]),))


def mean(a: Matrix) -> Matrix:
    shape = a.shape
    n = a.data.size
    return apply(
        np.array([[a.data.mean()]]), (a,), lambda g: (np.full(shape, g[0, 0] / n),)
    )


def mean_rows(a: Matrix) -> Matrix:
    """Average over rows: rows x cols -> 1 x cols."""
    rows = a.rows

    def backward_fn(g):
        return (np.repeat(g / rows, rows, axis=0),)

    return apply(a.data.mean(axis=0, keepdims=True), (a,), backward_fn)


def softmax_rows(a: Matrix) -> Matrix:
    y = special.softmax(a.data, axis=1)

    def backward_fn(g):
        return (y * (g - (g * y).sum(axis=1, keepdims=True)),)

    return apply(y, (a,), backward_fn)


def log_softmax_rows(a: Matrix) -> Matrix:
    y = special.log_softmax(a.data, axis=1)
    p = np.exp(y)

    def backward_fn(g):
        return (g - p * g.sum(axis=1, keepdims=True),)

    return apply(y, (a,), backward_fn)


def l1(a: Matrix, b: Matrix) -> Matrix:
    """Mean absolute difference, a scalar."""
    if a.shape != b.shape:
        raise OfaShapeError(f"l1: shapes {a.shape} and {b.shape} differ")
    return mean(abs_(sub(a, b)))


def cosine_similarity(a: Matrix, b: Matrix, eps: float = 1e-12) -> Matrix:
    """Row-wise cosine similarity: two rows x cols inputs -> rows x 1."""
    if a.shape != b.shape:
        raise OfaShapeError(f"cosine_similarity: shapes {a.shape} and {b.shape} differ")
    A, B = a.data, b.data
    na = np.maximum(np.linalg.norm(A, axis=1, keepdims=True), eps)
    nb = np.maximum(np.linalg.norm(B, axis=1, keepdims=True), eps)
    dot = (A * B).sum(axis=1, keepdims=True)
    cos = dot / (na * nb)

    def backward_fn(g):
        ga = g * (B / (na * nb) - cos * A / (na * na))
        gb = g * (A / (na * nb) - cos * B / (nb * nb))
        return ga, gb

    return apply(cos, (a, b), backward_fn)


ELEMENTWISE: Dict[str, Callable[..., Matrix]] = {
    "add": add,
    "mul": mul,
    "sigmoid": sigmoid,
    "tanh": tanh,
    "relu": relu,
    "l1": l1,
    "cosine_similarity": cosine_similarity,
}


def elementwise(op: str, *operands: Matrix) -> Matrix:
    """Dispatch one of the named elementwise operations."""
    fn: Optional[Callable[..., Matrix]] = ELEMENTWISE.get(op)
    if fn is None:
        raise OfaCompressError(f"unknown elementwise op {op!r}; expected one of {sorted(ELEMENTWISE)}")
    return fn(*operands)
