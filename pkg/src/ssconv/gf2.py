"""Dense linear algebra over GF(2).

Matrices are wrapped in :class:`BitMatrix`; vectors are plain read-only
``uint8`` numpy arrays (see :func:`bitvec`).  Every operation is pure.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DimensionError

BitsLike = Union[str, Sequence[int], np.ndarray]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.uint8)
    arr.setflags(write=False)
    return arr


def _check_bits(arr: np.ndarray) -> None:
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("entries must be 0 or 1")


def bitvec(bits: BitsLike) -> np.ndarray:
    """Coerce ``"101"``, ``[1, 0, 1]`` or an array into a frozen bit vector."""
    if isinstance(bits, str):
        s = bits.replace(" ", "")
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a bit string: {bits!r}")
        arr = np.array([int(ch) for ch in s], dtype=np.int64)
    else:
        arr = np.asarray(bits, dtype=np.int64).reshape(-1)
    _check_bits(arr)
    return _frozen(arr)


def bitstr(v: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in v)


def to_int(v: Iterable[int]) -> int:
    """Read a bit vector as a binary number, first entry most significant."""
    out = 0
    for b in v:
        out = (out << 1) | int(b)
    return out


def from_int(value: int, width: int) -> np.ndarray:
    if value < 0 or value >= (1 << width):
        raise ValueError(f"{value} does not fit in {width} bits")
    return _frozen(np.array([(value >> (width - 1 - i)) & 1 for i in range(width)]))


def xor(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape != y.shape:
        raise DimensionError(f"cannot add vectors of length {x.shape} and {y.shape}")
    return _frozen(np.bitwise_xor(x, y))


class BitMatrix:
    """Immutable dense matrix with 0/1 entries."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-d grid, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"matrix must be at least 1x1, got {arr.shape}")
        _check_bits(arr)
        self._a = _frozen(arr)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def column(cls, v: BitsLike) -> "BitMatrix":
        return cls(bitvec(v).reshape(-1, 1))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def __getitem__(self, idx):
        return self._a[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self.shape, self._a.tobytes()))

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return BitMatrix(self._a ^ other._a)

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            return matmul(self, other)
        return matvec(self, other)

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __repr__(self) -> str:
        return f"BitMatrix({self.tolist()})"

    def __str__(self) -> str:
        return "\n".join(" ".join(str(b) for b in row) for row in self._a)


def hstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    return BitMatrix(np.hstack([b.array for b in blocks]))


def vstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    return BitMatrix(np.vstack([b.array for b in blocks]))


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return BitMatrix((a.array.astype(np.int64) @ b.array.astype(np.int64)) & 1)


def matvec(a: BitMatrix, x) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or a.cols != x.shape[0]:
        raise DimensionError(f"cannot apply {a.shape} matrix to vector of shape {x.shape}")
    return _frozen((a.array.astype(np.int64) @ x.astype(np.int64)) & 1)


def matpow(a: BitMatrix, t: int) -> BitMatrix:
    """``a`` raised to the ``t``-th power by repeated squaring."""
    if a.rows != a.cols:
        raise DimensionError(f"matpow needs a square matrix, got {a.shape}")
    if t < 0:
        raise ValueError("exponent must be non-negative")
    result = BitMatrix.identity(a.rows)
    base = a
    while t:
        if t & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        t >>= 1
    return result


def _rref(aug: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    # Reduced row echelon form; pivots are searched in the first ncols columns only.
    r = aug.astype(np.uint8).copy()
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == r.shape[0]:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        p = row + hits[0]
        if p != row:
            r[[row, p]] = r[[p, row]]
        mask = r[:, col].astype(bool)
        mask[row] = False
        r[mask] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: BitMatrix) -> int:
    return len(_rref(a.array, a.cols)[1])


def det(a: BitMatrix) -> int:
    """Determinant over GF(2): 1 exactly when ``a`` is nonsingular."""
    if a.rows != a.cols:
        raise DimensionError(f"determinant needs a square matrix, got {a.shape}")
    return int(rank(a) == a.rows)


def solve(a: BitMatrix, b) -> Optional[np.ndarray]:
    """Return some ``x`` with ``a @ x == b``, or ``None`` if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] != a.rows:
        raise DimensionError(f"right-hand side of shape {b.shape} does not fit {a.shape}")
    aug = np.hstack([a.array, b.reshape(-1, 1).astype(np.uint8)])
    r, pivots = _rref(aug, a.cols)
    # A zero row with a nonzero right-hand side means no solution.
    if np.any(r[len(pivots):, -1]):
        return None
    x = np.zeros(a.cols, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = r[i, -1]
    return _frozen(x)
