"""Command-line front end.

Exit status: 0 on success, 1 for usage or input errors, 2 for domain errors
such as an infeasible termination.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, gf2
from .decoder import DECODERS, SYMBOL_MAPS, make_problem, read_received
from .encoder import encode, flatten, initial_state, parse_code_file, read_bits, transition_table
from .errors import CodeFileError, DimensionError, SSCError
from .sweep import ber_sweep, to_csv


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_code(path: str):
    return parse_code_file(_read(path))


def _bits(v) -> str:
    return " ".join(str(int(b)) for b in v)


def cmd_table(args, out) -> None:
    enc = _load_code(args.code)
    print("u current next output", file=out)
    for row in transition_table(enc):
        print(" ".join(gf2.bitstr(v) for v in row), file=out)


def cmd_encode(args, out) -> None:
    enc = _load_code(args.code)
    inputs = read_bits(_read(args.input), enc.k)
    x0 = initial_state(enc, args.initial_state)
    result = encode(enc, inputs, x0, termination=args.terminate)
    print(_bits(flatten(result.codeword)), file=out)


def cmd_decode(args, out) -> None:
    enc = _load_code(args.code)
    received = read_received(_read(args.received))
    problem = make_problem(enc, received, SYMBOL_MAPS[args.map],
                           initial_state(enc, args.initial_state), args.terminate)
    result = DECODERS[args.algo](enc, problem)
    print(f"inputs: {_bits(result.input_bits)}", file=out)
    print(f"codeword: {_bits(flatten(result.codeword))}", file=out)
    print(f"cost: {result.total_cost:.12g}", file=out)


def _matrix_lines(mat) -> list[str]:
    return ["  " + " ".join(str(b) for b in row) for row in mat.tolist()]


def cmd_analyze(args, out) -> None:
    enc = _load_code(args.code)
    ctrb = analysis.controllability_report(enc)
    obsv = analysis.observability_report(enc)
    lines = [f"dims: m={enc.m} k={enc.k} n={enc.n}", "controllability matrix:"]
    lines += _matrix_lines(ctrb.matrix)
    lines += [f"controllability rank: {ctrb.rank}",
              f"controllable: {'yes' if ctrb.controllable else 'no'}",
              "observability matrix:"]
    lines += _matrix_lines(obsv.matrix)
    lines += [f"observability rank: {obsv.rank}",
              f"observable: {'yes' if obsv.observable else 'no'}",
              "zero-input cycles:"]
    basins = analysis.all_orbits(enc)
    for basin in basins:
        lines.append("  " + " -> ".join(gf2.bitstr(x) for x in basin.cycle))
    if args.orbits:
        lines.append("zero-input orbits:")
        for s in range(enc.num_states):
            orb = analysis.orbit(enc, gf2.from_int(s, enc.m))
            transient = " ".join(gf2.bitstr(x) for x in orb.transient) or "-"
            cycle = " ".join(gf2.bitstr(x) for x in orb.cycle)
            lines.append(f"  {gf2.bitstr(orb.start)}: transient {transient}; cycle {cycle}")
    if args.steer:
        start, end = (initial_state(enc, b) for b in args.steer)
        inputs = analysis.steer(enc, start, end)
        head = f"steer {gf2.bitstr(start)} -> {gf2.bitstr(end)}:"
        if inputs is None:
            lines.append(f"{head} unreachable within {enc.m} steps")
        else:
            lines.append(f"{head} {' '.join(gf2.bitstr(u) for u in inputs)} (T={len(inputs)})")
    print("\n".join(lines), file=out)


def _parse_channel(text: str) -> tuple[str, Optional[float]]:
    kind, _, value = text.partition(":")
    if kind not in ("bsc", "awgn"):
        raise UsageError(f"unknown channel {kind!r}; expected bsc or awgn")
    try:
        return kind, float(value) if value else None
    except ValueError:
        raise UsageError(f"bad channel parameter {value!r}") from None


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def cmd_simulate(args, out) -> None:
    enc = _load_code(args.code)
    kind, value = _parse_channel(args.channel)
    if args.grid is not None:
        grid = _parse_grid(args.grid)
    elif value is not None:
        grid = [value]
    else:
        raise UsageError("no channel parameter: give --grid or --channel KIND:VALUE")
    if not grid:
        raise UsageError("empty grid")
    rows = ber_sweep(enc, kind, grid, args.trials, args.frame_bits, args.seed,
                     decision=args.decision, decoder=args.algo, termination=args.terminate)
    if args.uncoded:
        rows += ber_sweep(enc, kind, grid, args.trials, args.frame_bits, args.seed, decoder="none")
    out.write(to_csv(rows))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ssconv", description="State-space convolutional code workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("table", help="print the state transition table")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("encode", help="encode a bit file")
    p.add_argument("--code", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--initial-state")
    p.add_argument("--terminate", choices=("free", "zero"), default="free")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a received-value file")
    p.add_argument("--code", required=True)
    p.add_argument("--received", required=True)
    p.add_argument("--map", choices=sorted(SYMBOL_MAPS), default="identity")
    p.add_argument("--initial-state")
    p.add_argument("--terminate", choices=("free", "zero"), default="free")
    p.add_argument("--algo", choices=sorted(DECODERS), default="bowyer")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("analyze", help="controllability, observability, orbits, steering")
    p.add_argument("--code", required=True)
    p.add_argument("--steer", nargs=2, metavar=("FROM", "TO"))
    p.add_argument("--orbits", action="store_true", help="list the orbit of every state")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte-Carlo BER sweep, CSV on stdout")
    p.add_argument("--code", required=True)
    p.add_argument("--channel", required=True, help="bsc[:P] or awgn[:EBN0_DB]")
    p.add_argument("--grid", help="comma-separated channel parameters")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--frame-bits", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--decision", choices=("hard", "soft"), required=True)
    p.add_argument("--terminate", choices=("free", "zero"), default="zero")
    p.add_argument("--algo", choices=("bowyer", "viterbi"), default="bowyer")
    p.add_argument("--uncoded", action="store_true", help="append uncoded baseline rows")
    p.set_defaults(func=cmd_simulate)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except (UsageError, CodeFileError, DimensionError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except SSCError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
