import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from reference import matmul as ref_matmul
from ssconv import gf2
from ssconv.errors import DimensionError
from ssconv.gf2 import BitMatrix, bitvec

A = BitMatrix([[1, 1], [1, 0]])


def bit_matrices(rows=st.integers(1, 6), cols=st.integers(1, 6)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: arrays(np.uint8, rc, elements=st.integers(0, 1)).map(BitMatrix))


def square(n):
    return arrays(np.uint8, (n, n), elements=st.integers(0, 1)).map(BitMatrix)


class TestMatmul:
    def test_square_of_example_a(self):
        assert gf2.matmul(A, A) == BitMatrix([[0, 1], [1, 1]])

    def test_identity(self):
        m = BitMatrix([[1, 0, 1], [0, 1, 1]])
        assert gf2.matmul(BitMatrix.identity(2), m) == m
        assert gf2.matmul(m, BitMatrix.identity(3)) == m

    def test_second_controllability_column(self):
        assert gf2.matmul(A, BitMatrix([[1], [0]])) == BitMatrix([[1], [1]])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            gf2.matmul(A, BitMatrix([[1, 0, 1]]))

    @given(bit_matrices())
    def test_against_reference(self, m):
        other = BitMatrix(m.array.T)
        assert gf2.matmul(m, other).tolist() == ref_matmul(m.tolist(), other.tolist())


class TestMatvec:
    @pytest.mark.parametrize("x, expected", [("11", "01"), ("00", "00"), ("01", "10"), ("10", "11")])
    def test_zero_input_orbit_steps(self, x, expected):
        assert gf2.bitstr(gf2.matvec(A, bitvec(x))) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            gf2.matvec(A, bitvec("101"))

    @given(square(4), arrays(np.uint8, 4, elements=st.integers(0, 1)),
           arrays(np.uint8, 4, elements=st.integers(0, 1)))
    def test_distributes_over_xor(self, m, x, y):
        lhs = gf2.matvec(m, x ^ y)
        rhs = gf2.matvec(m, x) ^ gf2.matvec(m, y)
        assert np.array_equal(lhs, rhs)


class TestMatpow:
    def test_zero_exponent(self):
        assert gf2.matpow(A, 0) == BitMatrix.identity(2)

    def test_square(self):
        assert gf2.matpow(A, 2) == BitMatrix([[0, 1], [1, 1]])

    def test_period_three(self):
        assert gf2.matpow(A, 3) == BitMatrix.identity(2)

    def test_non_square(self):
        with pytest.raises(DimensionError):
            gf2.matpow(BitMatrix([[1, 0]]), 2)

    @given(square(3), st.integers(0, 9), st.integers(0, 9))
    def test_composition(self, m, s, t):
        assert gf2.matpow(m, s + t) == gf2.matmul(gf2.matpow(m, s), gf2.matpow(m, t))


class TestRank:
    @pytest.mark.parametrize("rows, expected", [
        ([[1, 1], [0, 1]], 2),
        ([[0, 0], [0, 0]], 0),
        ([[1, 1], [1, 1]], 1),
        ([[1, 0, 1], [0, 1, 1], [1, 1, 0]], 2),
    ])
    def test_examples(self, rows, expected):
        assert gf2.rank(BitMatrix(rows)) == expected

    def test_det(self):
        assert gf2.det(BitMatrix([[1, 1], [0, 1]])) == 1
        assert gf2.det(BitMatrix([[1, 1], [1, 1]])) == 0
        with pytest.raises(DimensionError):
            gf2.det(BitMatrix([[1, 1]]))

    @given(bit_matrices(), st.data())
    def test_bounded_and_row_swap_invariant(self, m, data):
        r = gf2.rank(m)
        assert 0 <= r <= min(m.shape)
        perm = data.draw(st.permutations(range(m.rows)))
        assert gf2.rank(BitMatrix(m.array[list(perm)])) == r

    @given(bit_matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)))
    def test_rank_is_dimension_of_row_space(self, m):
        # Enumerate every combination of rows; the span has 2^rank elements.
        combos = {tuple((np.array(c) @ m.array) % 2)
                  for c in np.ndindex(*([2] * m.rows))}
        assert len(combos) == 2 ** gf2.rank(m)


class TestSolve:
    def test_unique(self):
        assert gf2.bitstr(gf2.solve(BitMatrix([[1, 1], [0, 1]]), bitvec("11"))) == "01"

    def test_identity(self):
        b = bitvec("1011")
        assert np.array_equal(gf2.solve(BitMatrix.identity(4), b), b)

    def test_inconsistent(self):
        assert gf2.solve(BitMatrix([[1, 1], [1, 1]]), bitvec("10")) is None

    def test_free_variables_are_zero(self):
        # x0 + x2 = 1, x1 = 0: x2 is free, so x = (1, 0, 0).
        assert gf2.bitstr(gf2.solve(BitMatrix([[1, 0, 1], [0, 1, 0]]), bitvec("10"))) == "100"

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            gf2.solve(A, bitvec("101"))

    @given(bit_matrices(), st.data())
    def test_substitution(self, m, data):
        b = data.draw(arrays(np.uint8, m.rows, elements=st.integers(0, 1)))
        x = gf2.solve(m, b)
        consistent = any(
            np.array_equal((m.array @ np.array(c)) % 2, b) for c in np.ndindex(*([2] * m.cols)))
        if x is None:
            assert not consistent
        else:
            assert np.array_equal(gf2.matvec(m, x), b)


class TestBitMatrix:
    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            BitMatrix([[0, 2]])

    def test_rejects_empty(self):
        with pytest.raises(DimensionError):
            BitMatrix(np.zeros((0, 2)))

    def test_immutable(self):
        with pytest.raises(ValueError):
            A.array[0, 0] = 0

    @given(bit_matrices())
    def test_self_inverse_addition(self, m):
        assert m + m == BitMatrix.zeros(*m.shape)

    def test_bit_helpers(self):
        assert gf2.to_int(bitvec("110")) == 6
        assert gf2.bitstr(gf2.from_int(6, 3)) == "110"
        with pytest.raises(ValueError):
            bitvec("12")


@settings(max_examples=200)
@given(square(3), square(3), square(3))
def test_associativity(p, q, r):
    assert gf2.matmul(gf2.matmul(p, q), r) == gf2.matmul(p, gf2.matmul(q, r))
