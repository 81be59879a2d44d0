import io
import subprocess
import sys

import pytest

from reference import TABLE_1
from ssconv.cli import run
from ssconv.decoder import BPSK, make_problem, viterbi_forward
from ssconv.encoder import flatten
from ssconv.sweep import ber_sweep, to_csv


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write


def test_table(code_file):
    code, out, _ = call("table", "--code", code_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "u current next output"
    rows = {tuple(line.split()) for line in lines[1:]}
    assert rows == set(TABLE_1)


def test_encode(code_file, write):
    bits = write("bits.txt", "1 0 1\n")
    code, out, _ = call("encode", "--code", code_file, "--in", bits)
    assert (code, out.strip()) == (0, "1 1 0 1 1 0")


def test_encode_zero_and_initial_state(code_file, write):
    bits = write("bits.txt", "1")
    assert call("encode", "--code", code_file, "--in", bits, "--terminate", "zero")[1].strip() == "1 1 1 0 1 1"
    assert call("encode", "--code", code_file, "--in", bits, "--initial-state", "10")[1].strip() == "1 0"


@pytest.mark.parametrize("algo", ["bowyer", "viterbi", "brute"])
def test_decode(code_file, write, algo):
    received = write("r.txt", "0.9 0.8\n0.1 0.6\n0.7 0.2\n")
    code, out, _ = call("decode", "--code", code_file, "--received", received, "--algo", algo)
    assert code == 0
    assert out.splitlines() == ["inputs: 1 0 1", "codeword: 1 1 0 1 1 0", "cost: 0.35"]


def test_decode_is_thin_veneer(code_file, write, rsc):
    values = [-0.2, 1.1, 0.4, 0.3, 0.9, -0.4, 0.2, 0.6]
    received = write("r.txt", " ".join(map(str, values)))
    _, out, _ = call("decode", "--code", code_file, "--received", received, "--map", "bpsk",
                     "--initial-state", "11", "--algo", "viterbi")
    lib = viterbi_forward(rsc, make_problem(rsc, values, map=BPSK, x0="11"))
    assert out.splitlines()[0] == "inputs: " + " ".join(str(b) for b in lib.input_bits)
    assert out.splitlines()[1] == "codeword: " + " ".join(str(b) for b in flatten(lib.codeword))
    assert out.splitlines()[2] == f"cost: {lib.total_cost:.12g}"


def test_analyze(code_file):
    code, out, _ = call("analyze", "--code", code_file)
    assert code == 0
    text = out.splitlines()
    i = text.index("controllability matrix:")
    assert text[i + 1:i + 3] == ["  1 1", "  0 1"]
    assert "controllability rank: 2" in text and "controllable: yes" in text
    j = text.index("zero-input cycles:")
    assert text[j + 1:j + 3] == ["  00", "  01 -> 10 -> 11"]


def test_analyze_steer_and_orbits(code_file):
    code, out, _ = call("analyze", "--code", code_file, "--steer", "00", "11", "--orbits")
    assert code == 0
    assert "steer 00 -> 11: 1 0 (T=2)" in out
    assert "  11: transient -; cycle 11 01 10" in out


def test_simulate_matches_library(code_file, rsc):
    code, out, _ = call("simulate", "--code", code_file, "--channel", "awgn", "--grid", "1,3",
                        "--trials", 3, "--frame-bits", 40, "--seed", 5, "--decision", "soft", "--uncoded")
    assert code == 0
    expected = ber_sweep(rsc, "awgn", [1.0, 3.0], 3, 40, 5, decision="soft")
    expected += ber_sweep(rsc, "awgn", [1.0, 3.0], 3, 40, 5, decoder="none")
    assert out == to_csv(expected)
    again = call("simulate", "--code", code_file, "--channel", "awgn", "--grid", "1,3",
                 "--trials", 3, "--frame-bits", 40, "--seed", 5, "--decision", "soft", "--uncoded")[1]
    assert again == out


def test_simulate_channel_value(code_file):
    code, out, _ = call("simulate", "--code", code_file, "--channel", "bsc:0", "--trials", 2,
                        "--frame-bits", 20, "--seed", 1, "--decision", "hard")
    assert code == 0
    assert out.splitlines()[1] == "0,2,40,0,0.0,bowyer,hard"


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["table"],
    ["table", "--code", "/nonexistent/file.ssc"],
    ["simulate", "--code", "CODE", "--channel", "rayleigh", "--grid", "1", "--trials", "1",
     "--frame-bits", "2", "--seed", "0", "--decision", "hard"],
    ["simulate", "--code", "CODE", "--channel", "bsc", "--grid", "0.7", "--trials", "1",
     "--frame-bits", "2", "--seed", "0", "--decision", "hard"],
    ["simulate", "--code", "CODE", "--channel", "bsc", "--trials", "1",
     "--frame-bits", "2", "--seed", "0", "--decision", "hard"],
    ["encode", "--code", "CODE", "--in", "CODE"],
    ["decode", "--code", "CODE", "--received", "CODE"],
])
def test_usage_errors(code_file, argv):
    argv = [str(code_file) if a == "CODE" else a for a in argv]
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err.startswith("error:")


def test_malformed_code_file(write):
    bad = write("bad.ssc", "dims: 1 1 1\n2\n0\n0\n0\n")
    code, _, err = call("table", "--code", bad)
    assert code == 1 and "line 2" in err


def test_domain_error(write):
    stuck = write("stuck.ssc", "dims: 1 1 1\n1\n0\n1\n1\n")
    bits = write("bits.txt", "0")
    code, _, err = call("encode", "--code", stuck, "--in", bits, "--initial-state", "1", "--terminate", "zero")
    assert code == 2 and "cannot reach zero" in err
    received = write("r.txt", "1 1")
    code, _, _ = call("decode", "--code", stuck, "--received", received, "--initial-state", "1",
                      "--terminate", "zero")
    assert code == 2


def test_module_entry_point(code_file):
    proc = subprocess.run([sys.executable, "-m", "ssconv", "table", "--code", str(code_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 9
