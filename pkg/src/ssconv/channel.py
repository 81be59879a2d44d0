"""Seeded binary symmetric and AWGN/BPSK channels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decoder import IDENTITY, SymbolMap


@dataclass(frozen=True)
class RngStream:
    """A reproducible random substream: one per (seed, stream_index) pair."""

    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    p: float = 0.0
    ebn0_db: float = 0.0
    rate: float = 1.0

    def __post_init__(self):
        if self.kind == "bsc":
            _check_p(self.p)
        elif self.kind == "awgn":
            _check_rate(self.rate)
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")

    def transmit(self, bits, rng) -> np.ndarray:
        if self.kind == "bsc":
            return transmit_bsc(bits, self.p, rng)
        return transmit_awgn(bits, self.ebn0_db, self.rate, rng)


def _check_p(p: float) -> None:
    if not 0.0 <= p < 0.5:
        raise ValueError(f"crossover probability must be in [0, 0.5), got {p}")


def _check_rate(rate: float) -> None:
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"code rate must be in (0, 1], got {rate}")


def _gen(rng) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def transmit_bsc(bits, p: float, rng) -> np.ndarray:
    _check_p(p)
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    flips = _gen(rng).random(bits.size) < p
    return (bits ^ flips).astype(float)


def noise_variance(ebn0_db: float, rate: float) -> float:
    """Per-dimension noise variance for unit-energy BPSK at the given Eb/N0."""
    _check_rate(rate)
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def transmit_awgn(bits, ebn0_db: float, rate: float, rng) -> np.ndarray:
    sigma = np.sqrt(noise_variance(ebn0_db, rate))
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    symbols = 1.0 - 2.0 * bits
    return symbols + sigma * _gen(rng).standard_normal(bits.size)


def harden(received, map: SymbolMap = IDENTITY) -> np.ndarray:
    """Snap each value to the nearer symbol level; exact midpoints go to the zero level."""
    r = np.asarray(received, dtype=float)
    closer_to_one = np.abs(r - map.one_level) < np.abs(r - map.zero_level)
    return np.where(closer_to_one, map.one_level, map.zero_level)
