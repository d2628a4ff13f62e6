# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

from typing import TYPE_CHECKING, Iterable, List, Optional, Tuple, Union

import numpy as np

from ..errors import OfaNonFiniteError, OfaShapeError

if TYPE_CHECKING:
    from .tape import Tape

ArrayLike = Union[float, int, Iterable, np.ndarray]


class Matrix:
    """
    Dense row-major float64 matrix, the only tensor type in ofacompress.

    A matrix is either a leaf (``requires_grad=True`` marks a trainable
    parameter), a constant, or the recorded output of an operation on a
    :class:`~ofacompress.diffmath.tape.Tape`. Scalars are 1x1 matrices.
    """

    __slots__ = ("data", "requires_grad", "name", "_tape")

    data: np.ndarray
    requires_grad: bool
    name: Optional[str]
    _tape: Optional["Tape"]

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
    ):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        self._init(arr, requires_grad, name)

    def _init(self, arr: np.ndarray, requires_grad: bool, name: Optional[str]) -> None:
        if arr.ndim != 2:
            raise OfaShapeError(f"Matrix needs 2 dimensions, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise OfaShapeError(f"Matrix rows and cols must be positive, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise OfaNonFiniteError(f"non-finite entries in {name or 'matrix'} {arr.shape}")
        self.data = arr
        self.requires_grad = requires_grad
        self.name = name
        self._tape = None

    @classmethod
    def wrap(cls, arr: np.ndarray, name: Optional[str] = None) -> "Matrix":
        """Wrap an existing float64 array without copying."""
        out = cls.__new__(cls)
        out._init(np.asarray(arr, dtype=np.float64), False, name)
        return out

    @classmethod
    def column(cls, values: ArrayLike, **kw) -> "Matrix":
        return cls(np.asarray(values, dtype=np.float64).reshape(-1, 1), **kw)

    @classmethod
    def row(cls, values: ArrayLike, **kw) -> "Matrix":
        return cls(np.asarray(values, dtype=np.float64).reshape(1, -1), **kw)

    @classmethod
    def scalar(cls, value: float, **kw) -> "Matrix":
        return cls(np.full((1, 1), float(value)), **kw)

    @classmethod
    def zeros(cls, rows: int, cols: int, **kw) -> "Matrix":
        return cls(np.zeros((rows, cols)), **kw)

    @classmethod
    def identity(cls, n: int, **kw) -> "Matrix":
        return cls(np.eye(n), **kw)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    @property
    def is_recorded(self) -> bool:
        return self._tape is not None

    def item(self) -> float:
        """The value of a 1x1 matrix as a Python float."""
        if self.data.shape != (1, 1):
            raise OfaShapeError(f"item() needs a 1x1 matrix, got {self.shape}")
        return float(self.data[0, 0])

    def numpy(self) -> np.ndarray:
        """A copy of the values."""
        return self.data.copy()

    def tolist(self) -> List[List[float]]:
        return self.data.tolist()

    def copy(self, requires_grad: Optional[bool] = None) -> "Matrix":
        """An unrecorded copy; keeps ``requires_grad`` unless overridden."""
        keep = self.requires_grad if requires_grad is None else requires_grad
        return Matrix(self.data.copy(), requires_grad=keep, name=self.name)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        from .ops import matmul  # pylint: disable=import-outside-toplevel

        return matmul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        from .ops import add  # pylint: disable=import-outside-toplevel

        return add(self, other)

    def __sub__(self, other: "Matrix") -> "Matrix":
        from .ops import sub  # pylint: disable=import-outside-toplevel

        return sub(self, other)

    def __mul__(self, other: "Matrix") -> "Matrix":
        from .ops import mul  # pylint: disable=import-outside-toplevel

        return mul(self, other)

    def __neg__(self) -> "Matrix":
        from .ops import scale  # pylint: disable=import-outside-toplevel

        return scale(self, -1.0)

    def __repr__(self) -> str:
        tag = "param" if self.requires_grad else ("node" if self._tape else "const")
        label = f" {self.name}" if self.name else ""
        return f"Matrix({self.rows}x{self.cols} {tag}{label})"
