"""Monte-Carlo bit-error-rate sweeps."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .channel import ChannelSpec, RngStream, harden
from .decoder import BPSK, DECODERS, IDENTITY, make_problem
from .encoder import StateSpaceEncoder, encode, flatten

CSV_HEADER = ("param", "trials", "info_bits", "bit_errors", "ber", "decoder", "decision")


@dataclass(frozen=True)
class SweepRow:
    param: float
    trials: int
    info_bits: int
    bit_errors: int
    ber: float
    decoder: str
    decision: str


def _channel(kind: str, value: float, rate: float) -> ChannelSpec:
    if kind == "bsc":
        return ChannelSpec("bsc", p=value)
    return ChannelSpec("awgn", ebn0_db=value, rate=rate)


def _coded_errors(enc, spec, info, gen, decision, decoder, termination) -> int:
    cw = flatten(encode(enc, info, termination=termination).codeword)
    symbol_map = BPSK if spec.kind == "awgn" else IDENTITY
    received = spec.transmit(cw, gen)
    if decision == "hard":
        received = harden(received, symbol_map)
    problem = make_problem(enc, received, symbol_map, termination=termination)
    decoded = DECODERS[decoder](enc, problem).input_bits[:info.size]
    return int(np.count_nonzero(decoded != info))


def _uncoded_errors(spec, info, gen) -> int:
    symbol_map = BPSK if spec.kind == "awgn" else IDENTITY
    sliced = harden(spec.transmit(info, gen), symbol_map)
    return int(np.count_nonzero((sliced == symbol_map.one_level) != info.astype(bool)))


def ber_sweep(
    enc: StateSpaceEncoder,
    kind: str,
    grid: Sequence[float],
    trials: int,
    frame_bits: int,
    seed: int,
    decision: str = "soft",
    decoder: str = "bowyer",
    termination: str = "zero",
) -> list[SweepRow]:
    """Estimate information-bit error rate at each channel parameter in ``grid``.

    Trial ``t`` draws its info bits and noise from substream ``(seed, t)`` at
    every grid point, so rows that differ only in ``decision`` or ``decoder``
    see the same channel realisations.  ``decoder="none"`` sends the info
    bits uncoded and slices them.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if frame_bits < 1 or frame_bits % enc.k:
        raise ValueError(f"frame length {frame_bits} must be a positive multiple of k={enc.k}")
    if decision not in ("hard", "soft"):
        raise ValueError(f"unknown decision mode {decision!r}")
    if decoder != "none" and decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")

    rows = []
    for value in grid:
        spec = _channel(kind, float(value), 1.0 if decoder == "none" else enc.rate)
        errors = 0
        for t in range(trials):
            gen = RngStream(seed, t).generator()
            info = gen.integers(0, 2, frame_bits, dtype=np.uint8)
            if decoder == "none":
                errors += _uncoded_errors(spec, info, gen)
            else:
                errors += _coded_errors(enc, spec, info, gen, decision, decoder, termination)
        total = trials * frame_bits
        rows.append(SweepRow(
            float(value), trials, total, errors, errors / total, decoder,
            "hard" if decoder == "none" else decision,
        ))
    return rows


def to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(f"{v:g}" if f.name == "param" else v
                        for f, v in zip(fields(SweepRow), astuple(row)))
    return buf.getvalue()
