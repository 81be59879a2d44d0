"""Convolutional encoders written as linear state-space systems over GF(2).

An encoder with ``m`` memory cells, ``k`` input bits and ``n`` output bits
per stage evolves as::

    x[t+1] = A x[t] + B u[t]
    y[t]   = C x[t] + D u[t]        (all arithmetic mod 2)

State vectors are written most-significant-first, so the state ``"10"``
has ``x(0) = 1`` and ``x(1) = 0``.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from . import gf2
from .errors import CapExceeded, CodeFileError, DimensionError, TerminationInfeasible
from .gf2 import BitMatrix, bitvec

DEFAULT_TABLE_CAP = 1 << 20


@dataclass(frozen=True)
class StateSpaceEncoder:
    a: BitMatrix
    b: BitMatrix
    c: BitMatrix
    d: BitMatrix

    def __post_init__(self):
        m, k, n = self.a.rows, self.b.cols, self.c.rows
        expected = {"A": (m, m), "B": (m, k), "C": (n, m), "D": (n, k)}
        actual = {"A": self.a.shape, "B": self.b.shape, "C": self.c.shape, "D": self.d.shape}
        for name, shape in expected.items():
            if actual[name] != shape:
                raise DimensionError(f"{name} is {actual[name]}, expected {shape}")
        if k > n:
            raise DimensionError(f"rate k/n = {k}/{n} exceeds 1")

    @classmethod
    def from_lists(cls, a, b, c, d) -> "StateSpaceEncoder":
        return cls(BitMatrix(a), BitMatrix(b), BitMatrix(c), BitMatrix(d))

    @property
    def m(self) -> int:
        return self.a.rows

    @property
    def k(self) -> int:
        return self.b.cols

    @property
    def n(self) -> int:
        return self.c.rows

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def num_states(self) -> int:
        return 1 << self.m

    def zero_state(self) -> np.ndarray:
        return bitvec([0] * self.m)


def rsc_example() -> StateSpaceEncoder:
    """Rate-1/2, 4-state recursive systematic encoder.

    The feedback taps give ``y(0) = u`` and ``y(1) = x(0) + u``.
    """
    return StateSpaceEncoder.from_lists(
        a=[[1, 1], [1, 0]],
        b=[[1], [0]],
        c=[[0, 0], [1, 0]],
        d=[[1], [1]],
    )


class EncoderState(NamedTuple):
    x: np.ndarray
    stage: int


class TransitionRow(NamedTuple):
    u: np.ndarray
    current_state: np.ndarray
    next_state: np.ndarray
    output: np.ndarray


class EncodeResult(NamedTuple):
    codeword: list[np.ndarray]
    final_state: np.ndarray
    tail: list[np.ndarray]


def step(enc: StateSpaceEncoder, x, u) -> tuple[np.ndarray, np.ndarray]:
    """One clock of the encoder: returns ``(next_state, output_block)``."""
    x, u = np.asarray(x), np.asarray(u)
    if x.shape != (enc.m,):
        raise DimensionError(f"state has shape {x.shape}, expected ({enc.m},)")
    if u.shape != (enc.k,):
        raise DimensionError(f"input has shape {u.shape}, expected ({enc.k},)")
    nxt = gf2.xor(gf2.matvec(enc.a, x), gf2.matvec(enc.b, u))
    y = gf2.xor(gf2.matvec(enc.c, x), gf2.matvec(enc.d, u))
    return nxt, y


def trajectory(enc: StateSpaceEncoder, inputs: Sequence, x0=None) -> Iterator[EncoderState]:
    """Yield the state before every stage and the final state."""
    x = enc.zero_state() if x0 is None else bitvec(x0)
    yield EncoderState(x, 0)
    for t, u in enumerate(inputs):
        x, _ = step(enc, x, bitvec(u))
        yield EncoderState(x, t + 1)


class Trellis(NamedTuple):
    """The encoder tabulated over integer state and input indices."""

    next_state: np.ndarray  # (S, U) int
    outputs: np.ndarray  # (S, U, n) bits
    state_bits: np.ndarray  # (S, m) bits of each state index


@functools.lru_cache(maxsize=64)
def trellis(enc: StateSpaceEncoder) -> Trellis:
    S, U = enc.num_states, 1 << enc.k
    nxt = np.zeros((S, U), dtype=np.int64)
    out = np.zeros((S, U, enc.n), dtype=np.uint8)
    for s in range(S):
        x = gf2.from_int(s, enc.m)
        for v in range(U):
            x1, y = step(enc, x, gf2.from_int(v, enc.k))
            nxt[s, v] = gf2.to_int(x1)
            out[s, v] = y
    bits = np.array([gf2.from_int(s, enc.m) for s in range(S)], dtype=np.uint8).reshape(S, enc.m)
    for arr in (nxt, out, bits):
        arr.setflags(write=False)
    return Trellis(nxt, out, bits)


def input_indices(enc: StateSpaceEncoder, inputs: Sequence) -> np.ndarray:
    """Convert a sequence of length-k input blocks to their binary values."""
    if isinstance(inputs, np.ndarray):
        arr = inputs.astype(np.int64)
        if arr.ndim == 1 and arr.size % enc.k == 0:
            arr = arr.reshape(-1, enc.k)
    else:
        arr = np.array([np.asarray(bitvec(u), dtype=np.int64) for u in inputs], dtype=np.int64)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != enc.k:
        raise DimensionError(f"input blocks must have length {enc.k}")
    if np.any((arr != 0) & (arr != 1)):
        raise ValueError("input entries must be 0 or 1")
    return arr @ (1 << np.arange(enc.k - 1, -1, -1))


def state_path(enc: StateSpaceEncoder, s0: int, inputs: np.ndarray) -> np.ndarray:
    """State indices visited from ``s0`` under input indices ``inputs`` (length T+1)."""
    nxt = trellis(enc).next_state.tolist()
    path = [s0]
    s = s0
    for v in inputs.tolist():
        s = nxt[s][v]
        path.append(s)
    return np.array(path, dtype=np.int64)


def encode(enc: StateSpaceEncoder, inputs: Sequence, x0=None, termination: str = "free") -> EncodeResult:
    """Encode ``inputs`` (a sequence of length-k blocks) starting from ``x0``.

    With ``termination="zero"`` a shortest tail steering the encoder back
    to the all-zero state is appended; its output blocks are part of the
    returned codeword and ``final_state`` is the state after the tail.
    """
    if termination not in ("free", "zero"):
        raise ValueError(f"unknown termination mode {termination!r}")
    x = enc.zero_state() if x0 is None else bitvec(x0)
    if x.shape != (enc.m,):
        raise DimensionError(f"initial state has length {x.shape[0]}, expected {enc.m}")
    v = input_indices(enc, inputs)
    states = state_path(enc, gf2.to_int(x), v)
    tr = trellis(enc)
    tail: list[np.ndarray] = []
    end = int(states[-1])
    if termination == "zero" and end != 0:
        from .analysis import steer

        tail = steer(enc, tr.state_bits[end], enc.zero_state(), max_horizon=enc.m)
        if tail is None:
            raise TerminationInfeasible(
                f"state {gf2.bitstr(tr.state_bits[end])} cannot reach zero within {enc.m} steps"
            )
        v_tail = input_indices(enc, tail)
        states = np.concatenate([states, state_path(enc, end, v_tail)[1:]])
        v = np.concatenate([v, v_tail])
    codeword = list(tr.outputs[states[:-1], v]) if v.size else []
    return EncodeResult(codeword, tr.state_bits[int(states[-1])], tail)


def transition_table(enc: StateSpaceEncoder, cap: int = DEFAULT_TABLE_CAP) -> list[TransitionRow]:
    """Every (state, input) pair in binary order of state, then input."""
    rows = 1 << (enc.m + enc.k)
    if rows > cap:
        raise CapExceeded(f"{rows} rows exceeds cap {cap}")
    table = []
    for s, v in itertools.product(range(enc.num_states), range(1 << enc.k)):
        x, u = gf2.from_int(s, enc.m), gf2.from_int(v, enc.k)
        nxt, y = step(enc, x, u)
        table.append(TransitionRow(u, x, nxt, y))
    return table


_DIMS_RE = re.compile(r"^dims:\s*(\d+)\s+(\d+)\s+(\d+)$")


def parse_code_file(text: str) -> StateSpaceEncoder:
    """Parse a ``.ssc`` code definition.

    Format: a ``dims: m k n`` header, then the rows of A (m×m), B (m×k),
    C (n×m) and D (n×k) in that order, one row of space-separated bits per
    line.  ``#`` starts a comment; blank lines are ignored.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body))
    if not lines:
        raise CodeFileError("empty code file")

    lineno, header = lines[0]
    match = _DIMS_RE.match(header)
    if not match:
        raise CodeFileError(f"expected 'dims: m k n', got {header!r}", lineno)
    m, k, n = (int(g) for g in match.groups())
    if min(m, k, n) < 1:
        raise CodeFileError("dimensions must be at least 1", lineno)
    if k > n:
        raise CodeFileError(f"k={k} exceeds n={n}", lineno)

    layout = [("A", m, m), ("B", m, k), ("C", n, m), ("D", n, k)]
    body = lines[1:]
    need = sum(r for _, r, _ in layout)
    if len(body) != need:
        # Point at the first surplus row, or at the last line read when short.
        if len(body) > need:
            where = body[need][0]
        else:
            where = body[-1][0] if body else lineno
        raise CodeFileError(f"expected {need} matrix rows after header, found {len(body)}", where)

    mats = {}
    pos = 0
    for name, nrows, ncols in layout:
        grid = []
        for lineno, row in body[pos:pos + nrows]:
            tokens = row.split()
            if len(tokens) != ncols:
                raise CodeFileError(f"{name} row has {len(tokens)} entries, expected {ncols}", lineno)
            bad = [t for t in tokens if t not in ("0", "1")]
            if bad:
                raise CodeFileError(f"non-binary entry {bad[0]!r} in {name}", lineno)
            grid.append([int(t) for t in tokens])
        mats[name] = BitMatrix(grid)
        pos += nrows
    return StateSpaceEncoder(mats["A"], mats["B"], mats["C"], mats["D"])


def format_code_file(enc: StateSpaceEncoder) -> str:
    out = [f"dims: {enc.m} {enc.k} {enc.n}"]
    for name, mat in (("A", enc.a), ("B", enc.b), ("C", enc.c), ("D", enc.d)):
        out.append(f"# {name}")
        out.extend(" ".join(str(b) for b in row) for row in mat.tolist())
    return "\n".join(out) + "\n"


def read_bits(text: str, block: int) -> list[np.ndarray]:
    """Split whitespace-separated 0/1 tokens into blocks of ``block`` bits."""
    tokens = text.split()
    bad = [t for t in tokens if t not in ("0", "1")]
    if bad:
        raise ValueError(f"non-binary token {bad[0]!r}")
    if len(tokens) % block:
        raise ValueError(f"{len(tokens)} bits is not a multiple of the block size {block}")
    bits = [int(t) for t in tokens]
    return [bitvec(bits[i:i + block]) for i in range(0, len(bits), block)]


def flatten(blocks: Sequence[np.ndarray]) -> np.ndarray:
    if not len(blocks):
        return np.zeros(0, dtype=np.uint8)
    return np.concatenate([np.asarray(b, dtype=np.uint8) for b in blocks])


def initial_state(enc: StateSpaceEncoder, bits: Optional[str]) -> np.ndarray:
    if bits is None:
        return enc.zero_state()
    x = bitvec(bits)
    if x.shape != (enc.m,):
        raise DimensionError(f"initial state {bits!r} has {x.shape[0]} bits, expected {enc.m}")
    return x
