"""Controllability, observability, zero-input orbits and state steering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import gf2
from .encoder import StateSpaceEncoder
from .errors import CapExceeded, DimensionError
from .gf2 import BitMatrix, bitvec

DEFAULT_ORBIT_CAP = 1 << 20


@dataclass(frozen=True)
class ControllabilityReport:
    matrix: BitMatrix
    rank: int

    @property
    def controllable(self) -> bool:
        return self.rank == self.matrix.rows


@dataclass(frozen=True)
class ObservabilityReport:
    matrix: BitMatrix
    rank: int

    @property
    def observable(self) -> bool:
        return self.rank == self.matrix.cols


@dataclass(frozen=True)
class Orbit:
    """Zero-input trajectory from ``start``: a transient prefix, then a cycle."""

    start: np.ndarray
    transient: tuple
    cycle: tuple


@dataclass(frozen=True)
class Basin:
    """One cycle of ``x -> A x`` together with every state that drains into it."""

    cycle: tuple
    transients: tuple

    @property
    def states(self) -> tuple:
        return self.cycle + self.transients


def controllability_matrix(enc: StateSpaceEncoder) -> BitMatrix:
    blocks = [enc.b]
    for _ in range(enc.m - 1):
        blocks.append(gf2.matmul(enc.a, blocks[-1]))
    return gf2.hstack(blocks)


def observability_matrix(enc: StateSpaceEncoder) -> BitMatrix:
    blocks = [enc.c]
    for _ in range(enc.m - 1):
        blocks.append(gf2.matmul(blocks[-1], enc.a))
    return gf2.vstack(blocks)


def controllability_report(enc: StateSpaceEncoder) -> ControllabilityReport:
    mat = controllability_matrix(enc)
    return ControllabilityReport(mat, gf2.rank(mat))


def observability_report(enc: StateSpaceEncoder) -> ObservabilityReport:
    mat = observability_matrix(enc)
    return ObservabilityReport(mat, gf2.rank(mat))


def orbit(enc: StateSpaceEncoder, x0, max_steps: Optional[int] = None) -> Orbit:
    x = bitvec(x0)
    if x.shape != (enc.m,):
        raise DimensionError(f"state has length {x.shape[0]}, expected {enc.m}")
    # A repeat is guaranteed within 2^m steps, so max_steps is advisory.
    seen: dict[bytes, int] = {}
    path = []
    while x.tobytes() not in seen:
        seen[x.tobytes()] = len(path)
        path.append(x)
        x = gf2.matvec(enc.a, x)
    first = seen[x.tobytes()]
    return Orbit(bitvec(x0), tuple(path[:first]), tuple(path[first:]))


def all_orbits(enc: StateSpaceEncoder, cap: int = DEFAULT_ORBIT_CAP) -> list[Basin]:
    """Partition the state space into basins of the zero-input dynamics.

    Basins are ordered by their smallest cycle state; each cycle starts at
    its smallest state (states compared as binary numbers).
    """
    size = enc.num_states
    if size > cap:
        raise CapExceeded(f"{size} states exceeds cap {cap}")
    succ = [gf2.to_int(gf2.matvec(enc.a, gf2.from_int(s, enc.m))) for s in range(size)]

    # Walk from each unvisited state; colour 1 = on the current walk, 2 = done.
    colour = [0] * size
    cycle_of = [-1] * size
    cycles: list[list[int]] = []
    for s in range(size):
        walk = []
        v = s
        while colour[v] == 0:
            colour[v] = 1
            walk.append(v)
            v = succ[v]
        if colour[v] == 1:
            cyc = walk[walk.index(v):]
            turn = cyc.index(min(cyc))
            cycles.append(cyc[turn:] + cyc[:turn])
            label = len(cycles) - 1
        else:
            label = cycle_of[v]
        for w in walk:
            colour[w] = 2
            cycle_of[w] = label

    order = sorted(range(len(cycles)), key=lambda i: cycles[i][0])
    basins = []
    for i in order:
        on_cycle = set(cycles[i])
        rest = [s for s in range(size) if cycle_of[s] == i and s not in on_cycle]
        basins.append(Basin(
            cycle=tuple(gf2.from_int(s, enc.m) for s in cycles[i]),
            transients=tuple(gf2.from_int(s, enc.m) for s in rest),
        ))
    return basins


def steer(enc: StateSpaceEncoder, x_start, x_end, max_horizon: Optional[int] = None) -> Optional[list[np.ndarray]]:
    """Shortest input sequence taking ``x_start`` to ``x_end``.

    For each horizon T = 1, 2, ... the inputs solve::

        [A^(T-1) B | ... | A B | B] [u_0; ...; u_(T-1)] = x_end + A^T x_start

    Returns ``None`` if no horizon up to ``max_horizon`` (default m) works.
    """
    xs, xe = bitvec(x_start), bitvec(x_end)
    if xs.shape != (enc.m,) or xe.shape != (enc.m,):
        raise DimensionError(f"states must have length {enc.m}")
    if max_horizon is None:
        max_horizon = enc.m
    if max_horizon < 1:
        raise ValueError("max_horizon must be at least 1")

    blocks: list[BitMatrix] = []
    a_power = BitMatrix.identity(enc.m)
    for horizon in range(1, max_horizon + 1):
        # u_0 sees the highest power, so the new column block goes in front.
        blocks.insert(0, gf2.matmul(a_power, enc.b))
        a_power = gf2.matmul(a_power, enc.a)
        rhs = gf2.xor(xe, gf2.matvec(a_power, xs))
        sol = gf2.solve(gf2.hstack(blocks), rhs)
        if sol is not None:
            return [bitvec(sol[t * enc.k:(t + 1) * enc.k]) for t in range(horizon)]
    return None
