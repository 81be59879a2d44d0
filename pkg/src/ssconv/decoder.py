"""Sequence decoders for state-space convolutional encoders.

Three decoders share one cost model, the squared Euclidean distance between
each hypothesised output block (bits mapped to real levels) and the received
block:

* :func:`decode` runs dynamic programming backwards over stages, tabulating
  the cost-to-go and the optimal input for every (stage, state), then rolls
  the policy forward from the initial state.
* :func:`viterbi_forward` is the classical add-compare-select recursion with
  survivor traceback.
* :func:`brute_force_ml` enumerates every input sequence.

All three break ties the same way: among optimal input sequences, the one
that is smallest when read as a binary number (first stage most significant)
wins.  That makes their answers comparable bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import gf2
from .encoder import StateSpaceEncoder, initial_state, input_indices, state_path, step, trellis
from .errors import CapExceeded, DimensionError, NoValidCodeword
from .gf2 import bitvec

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class SymbolMap:
    """Channel-domain amplitude of a 0 bit and a 1 bit."""

    zero_level: float = 0.0
    one_level: float = 1.0

    def __post_init__(self):
        if self.zero_level == self.one_level:
            raise ValueError("zero_level and one_level must differ")

    def levels(self, bits) -> np.ndarray:
        return np.where(np.asarray(bits) == 1, self.one_level, self.zero_level)


IDENTITY = SymbolMap(0.0, 1.0)
BPSK = SymbolMap(1.0, -1.0)
SYMBOL_MAPS = {"identity": IDENTITY, "bpsk": BPSK}


@dataclass(frozen=True)
class DecodeProblem:
    received: np.ndarray  # shape (N, n)
    map: SymbolMap = IDENTITY
    x0: Optional[np.ndarray] = None
    termination: str = "free"

    def __post_init__(self):
        r = np.asarray(self.received, dtype=float)
        if r.ndim != 2 or r.shape[0] < 1:
            raise DimensionError(f"received must be N x n with N >= 1, got shape {r.shape}")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "received", r)
        if self.x0 is not None:
            object.__setattr__(self, "x0", bitvec(self.x0))
        if self.termination not in ("free", "zero"):
            raise ValueError(f"unknown termination mode {self.termination!r}")

    @property
    def stages(self) -> int:
        return self.received.shape[0]


def make_problem(enc: StateSpaceEncoder, received, map: SymbolMap = IDENTITY, x0=None,
                 termination: str = "free") -> DecodeProblem:
    """Split a flat stream of received reals into stages of ``n`` symbols."""
    flat = np.asarray(received, dtype=float).reshape(-1)
    if flat.size == 0 or flat.size % enc.n:
        raise DimensionError(f"{flat.size} received symbols is not a positive multiple of n={enc.n}")
    x0 = initial_state(enc, None) if x0 is None else bitvec(x0)
    return DecodeProblem(flat.reshape(-1, enc.n), map, x0, termination)


def read_received(text: str) -> np.ndarray:
    """Parse whitespace-separated decimal reals."""
    try:
        return np.array([float(tok) for tok in text.split()], dtype=float)
    except ValueError as exc:
        raise ValueError(f"malformed received value: {exc}") from None


@dataclass(frozen=True)
class ValueTable:
    """Cost-to-go ``J[k, s]`` for k = 0..N and optimal input index ``policy[k, s]``.

    States and inputs are indexed by their value as binary numbers.
    """

    cost_to_go: np.ndarray  # (N + 1, 2^m)
    policy: np.ndarray  # (N, 2^m)
    k: int

    def action(self, stage: int, state) -> np.ndarray:
        return gf2.from_int(int(self.policy[stage, gf2.to_int(state)]), self.k)

    def value(self, stage: int, state) -> float:
        return float(self.cost_to_go[stage, gf2.to_int(state)])


class DecodeResult(NamedTuple):
    inputs: list[np.ndarray]
    states: list[np.ndarray]
    codeword: list[np.ndarray]
    total_cost: float

    @property
    def input_bits(self) -> np.ndarray:
        if not self.inputs:
            return np.zeros(0, dtype=np.uint8)
        return np.concatenate(self.inputs)

    @property
    def input_index(self) -> tuple[int, ...]:
        return tuple(gf2.to_int(u) for u in self.inputs)


def stage_cost(enc: StateSpaceEncoder, x, u, r, map: SymbolMap = IDENTITY) -> float:
    r = np.asarray(r, dtype=float)
    if r.shape != (enc.n,):
        raise DimensionError(f"received block has shape {r.shape}, expected ({enc.n},)")
    _, y = step(enc, np.asarray(x), np.asarray(u))
    return float(np.sum((map.levels(y) - r) ** 2))


def branch_costs(enc: StateSpaceEncoder, p: DecodeProblem) -> np.ndarray:
    """Stage costs for every (stage, state, input), shape (N, S, U)."""
    if p.received.shape[1] != enc.n:
        raise DimensionError(f"received blocks have {p.received.shape[1]} symbols, expected {enc.n}")
    levels = p.map.levels(trellis(enc).outputs)
    diff = levels[None, :, :, :] - p.received[:, None, None, :]
    return np.sum(diff * diff, axis=-1)


def _terminal(enc: StateSpaceEncoder, termination: str) -> np.ndarray:
    if termination == "free":
        return np.zeros(enc.num_states)
    j = np.full(enc.num_states, np.inf)
    j[0] = 0.0
    return j


def _start(enc: StateSpaceEncoder, p: DecodeProblem) -> np.ndarray:
    x0 = enc.zero_state() if p.x0 is None else p.x0
    if x0.shape != (enc.m,):
        raise DimensionError(f"initial state has length {x0.shape[0]}, expected {enc.m}")
    return x0


def backward_pass(enc: StateSpaceEncoder, p: DecodeProblem) -> ValueTable:
    costs = branch_costs(enc, p)
    nxt = trellis(enc).next_state
    N = p.stages
    J = np.empty((N + 1, enc.num_states))
    policy = np.empty((N, enc.num_states), dtype=np.int64)
    J[N] = _terminal(enc, p.termination)
    for k in range(N - 1, -1, -1):
        q = costs[k] + J[k + 1][nxt]
        # argmin keeps the first minimum, i.e. the smallest input index.
        best = np.argmin(q, axis=1)
        policy[k] = best
        J[k] = q[np.arange(enc.num_states), best]
    J.setflags(write=False)
    policy.setflags(write=False)
    return ValueTable(J, policy, enc.k)


def _result(enc: StateSpaceEncoder, x0: np.ndarray, inputs: np.ndarray, cost: float) -> DecodeResult:
    # inputs are input indices; states and outputs come from the trellis.
    tr = trellis(enc)
    states = state_path(enc, gf2.to_int(x0), inputs)
    in_bits = (inputs[:, None] >> np.arange(enc.k - 1, -1, -1)) & 1
    in_bits = in_bits.astype(np.uint8)
    in_bits.setflags(write=False)
    return DecodeResult(
        inputs=list(in_bits),
        states=list(tr.state_bits[states]),
        codeword=list(tr.outputs[states[:-1], inputs]) if inputs.size else [],
        total_cost=float(cost),
    )


def decode(enc: StateSpaceEncoder, p: DecodeProblem) -> DecodeResult:
    """Backward dynamic-programming decode, then a forward policy rollout."""
    x0 = _start(enc, p)
    table = backward_pass(enc, p)
    s = gf2.to_int(x0)
    total = table.cost_to_go[0, s]
    if not np.isfinite(total):
        raise NoValidCodeword(f"no admissible path from state {gf2.bitstr(x0)}")
    nxt = trellis(enc).next_state.tolist()
    policy = table.policy.tolist()
    inputs = []
    for k in range(p.stages):
        v = policy[k][s]
        inputs.append(v)
        s = nxt[s][v]
    return _result(enc, x0, np.array(inputs, dtype=np.int64), total)


def viterbi_forward(enc: StateSpaceEncoder, p: DecodeProblem) -> DecodeResult:
    x0 = _start(enc, p)
    costs = branch_costs(enc, p)
    nxt = trellis(enc).next_state
    S, U, N = enc.num_states, 1 << enc.k, p.stages

    metric = np.full(S, np.inf)
    metric[gf2.to_int(x0)] = 0.0
    # rank[s]: position of s's survivor path in binary order among all
    # survivors of the current stage.  Two paths merging into one state share
    # their future, so comparing (rank of predecessor, input) reproduces the
    # global smallest-sequence tie rule with local information only.
    rank = np.zeros(S, dtype=np.int64)
    pred = np.zeros((N, S), dtype=np.int64)
    choice = np.zeros((N, S), dtype=np.int64)

    src = np.repeat(np.arange(S), U)
    inp = np.tile(np.arange(U), S)
    dst = nxt.reshape(-1)
    for k in range(N):
        cand = (metric[:, None] + costs[k]).reshape(-1)
        order = np.lexsort((inp, rank[src], cand))
        targets, first = np.unique(dst[order], return_index=True)
        win = order[first]
        new_metric = np.full(S, np.inf)
        new_metric[targets] = cand[win]
        pred[k, targets] = src[win]
        choice[k, targets] = inp[win]
        key = np.full(S, np.iinfo(np.int64).max)
        reached = targets[np.isfinite(cand[win])]
        key[reached] = rank[pred[k, reached]] * U + choice[k, reached]
        rank = np.argsort(np.argsort(key, kind="stable"), kind="stable")
        metric = new_metric

    if p.termination == "zero":
        end = 0
    else:
        best = metric.min()
        tied = np.flatnonzero(metric == best)
        end = int(tied[np.argmin(rank[tied])])
    total = metric[end]
    if not np.isfinite(total):
        raise NoValidCodeword(f"no admissible path from state {gf2.bitstr(x0)}")

    path = []
    s = end
    for k in range(N - 1, -1, -1):
        path.append(int(choice[k, s]))
        s = int(pred[k, s])
    return _result(enc, x0, np.array(path[::-1], dtype=np.int64), total)


def _enumerate(enc: StateSpaceEncoder, p: DecodeProblem, limit: int) -> tuple[np.ndarray, np.ndarray]:
    # Simulates every candidate straight from A, B, C, D, without the
    # tabulated trellis the other decoders share.
    x0 = _start(enc, p)
    N, k = p.stages, enc.k
    total_bits = N * k
    if total_bits > limit:
        raise CapExceeded(f"2^{total_bits} candidate sequences exceeds 2^{limit}")

    # Row q holds q in binary, first stage most significant.
    q = np.arange(1 << total_bits, dtype=np.int64)
    shifts = np.arange(total_bits - 1, -1, -1)
    bits = ((q[:, None] >> shifts) & 1).reshape(-1, N, k)

    A, B, C, D = (mat.array.astype(np.int64) for mat in (enc.a, enc.b, enc.c, enc.d))
    x = np.broadcast_to(x0.astype(np.int64), (q.size, enc.m))
    cost = np.zeros(q.size)
    for t in range(N):
        u = bits[:, t, :]
        y = (x @ C.T + u @ D.T) & 1
        diff = p.map.levels(y) - p.received[t]
        cost = cost + np.sum(diff * diff, axis=1)
        x = (x @ A.T + u @ B.T) & 1
    if p.termination == "zero":
        cost = np.where(x.any(axis=1), np.inf, cost)
    return bits, cost


def brute_force_ml(enc: StateSpaceEncoder, p: DecodeProblem, limit: int = BRUTE_FORCE_LIMIT) -> DecodeResult:
    """Exhaustive search over all 2^(N k) input sequences."""
    bits, cost = _enumerate(enc, p, limit)
    best = int(np.argmin(cost))
    if not np.isfinite(cost[best]):
        raise NoValidCodeword("no input sequence ends in the zero state")
    return _result(enc, _start(enc, p), input_indices(enc, bits[best]), cost[best])


def top_two_costs(enc: StateSpaceEncoder, p: DecodeProblem, limit: int = BRUTE_FORCE_LIMIT) -> tuple[float, float]:
    """Best and runner-up total cost over all admissible input sequences."""
    _, cost = _enumerate(enc, p, limit)
    two = np.sort(cost)[:2]
    if two.size < 2:
        return float(two[0]), float("inf")
    return float(two[0]), float(two[1])


DECODERS = {"bowyer": decode, "viterbi": viterbi_forward, "brute": brute_force_ml}
