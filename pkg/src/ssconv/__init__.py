"""Convolutional codes as linear state-space systems over GF(2)."""

from .analysis import (
    all_orbits,
    controllability_report,
    observability_report,
    orbit,
    steer,
)
from .decoder import (
    BPSK,
    IDENTITY,
    DecodeProblem,
    DecodeResult,
    SymbolMap,
    ValueTable,
    backward_pass,
    brute_force_ml,
    decode,
    make_problem,
    stage_cost,
    viterbi_forward,
)
from .encoder import (
    StateSpaceEncoder,
    encode,
    parse_code_file,
    rsc_example,
    step,
    transition_table,
)
from .gf2 import BitMatrix, bitvec

__version__ = "0.1.0"

__all__ = [
    "BPSK", "IDENTITY", "BitMatrix", "DecodeProblem", "DecodeResult", "StateSpaceEncoder",
    "SymbolMap", "ValueTable", "all_orbits", "backward_pass", "bitvec", "brute_force_ml",
    "controllability_report", "decode", "encode", "make_problem", "observability_report",
    "orbit", "parse_code_file", "rsc_example", "stage_cost", "steer", "step",
    "transition_table", "viterbi_forward",
]
