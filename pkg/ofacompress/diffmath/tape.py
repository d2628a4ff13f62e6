# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import numpy as np
from typing_extensions import Self

from ..errors import OfaShapeError, OfaUnrecordedNodeError
from .matrix import Matrix

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_state = threading.local()


def _stack() -> List["Tape"]:
    if not hasattr(_state, "tapes"):
        _state.tapes = []
    return _state.tapes


def current_tape() -> Optional["Tape"]:
    """The innermost tape active on this thread, if any."""
    stack = _stack()
    return stack[-1] if stack else None


@dataclass
class _Record:
    out: Matrix
    parents: Sequence[Matrix]
    backward_fn: BackwardFn


class Gradients:
    """
    Result of one backward pass: gradient arrays keyed by the matrices they belong to.

    Looking up a matrix that did not participate in the loss returns zeros.
    """

    def __init__(self, grads: Dict[int, np.ndarray], leaves: Dict[int, Matrix]):
        self._grads = grads
        self._leaves = leaves

    def __getitem__(self, m: Matrix) -> np.ndarray:
        g = self._grads.get(id(m))
        if g is None:
            return np.zeros_like(m.data)
        return g

    def __contains__(self, m: Matrix) -> bool:
        return id(m) in self._grads

    def leaves(self) -> Iterator[Matrix]:
        """Every trainable leaf reached by the pass."""
        return iter(self._leaves.values())


class Tape:
    """
    Reverse-mode gradient context.

    Operations executed while the tape is active (``with Tape() as tape:``) and
    touching a trainable leaf or an earlier recorded output are appended in
    execution order, which is a topological order; :meth:`backward` walks it in
    reverse. A tape belongs to the thread that entered it.
    """

    def __init__(self):
        self._records: List[_Record] = []

    def __enter__(self) -> Self:
        _stack().append(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        stack = _stack()
        if stack and stack[-1] is self:
            stack.pop()

    def __len__(self) -> int:
        return len(self._records)

    def tracks(self, m: Matrix) -> bool:
        """True if gradients must flow into ``m``."""
        return m.requires_grad or m._tape is self  # pylint: disable=protected-access

    def record(self, out: Matrix, parents: Sequence[Matrix], backward_fn: BackwardFn) -> None:
        out._tape = self  # pylint: disable=protected-access
        self._records.append(_Record(out, tuple(parents), backward_fn))

    def backward(self, loss: Matrix) -> Gradients:
        """
        Propagate d(loss)/d(node) from a scalar loss to every trainable leaf.

        Raises:
            OfaUnrecordedNodeError: ``loss`` was not produced on this tape.
        """
        if loss._tape is not self:  # pylint: disable=protected-access
            raise OfaUnrecordedNodeError("backward needs a loss recorded on this tape")
        if loss.shape != (1, 1):
            raise OfaShapeError(f"backward needs a scalar loss, got {loss.shape}")

        grads: Dict[int, np.ndarray] = {id(loss): np.ones((1, 1))}
        leaves: Dict[int, Matrix] = {}
        for rec in reversed(self._records):
            g = grads.get(id(rec.out))
            if g is None:
                continue
            for parent, pg in zip(rec.parents, rec.backward_fn(g)):
                if pg is None or not self.tracks(parent):
                    continue
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + pg
                else:
                    grads[key] = pg
                if parent.requires_grad:
                    leaves[key] = parent
        return Gradients(grads, leaves)


def backward(loss: Matrix) -> Gradients:
    """Run the backward pass on the tape that recorded ``loss``."""
    tape = loss._tape  # pylint: disable=protected-access
    if tape is None:
        raise OfaUnrecordedNodeError("loss was not recorded by any tape")
    return tape.backward(loss)
