import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prym_census.linalg import (
    IntegerMatrix,
    cokernel_invariants,
    determinant,
    f2_rank,
    kernel_basis,
    left_inverse,
    lift_f2_invertible,
    random_unimodular,
    smith_normal_form,
    unimodular_inverse,
)

from conftest import int_matrices


def determinantal_invariants(M):
    """Invariant factors from gcds of k x k minors (independent of any SNF)."""
    rows, cols = M.rows, M.cols
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                sub = IntegerMatrix.from_rows(
                    [[M[i, j] for j in ci] for i in ri], cols=k)
                g = math.gcd(g, determinant(sub))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


def M(rows):
    return IntegerMatrix.from_rows(rows)


def test_snf_zero():
    assert smith_normal_form(M([[0]])).D == M([[0]])


def test_snf_two_three():
    # oracle: gcd of 1x1 minors is 1, the 2x2 minor is 6 -> (1, 6)
    assert determinantal_invariants(M([[2, 0], [0, 3]])) == [1, 6]
    snf = smith_normal_form(M([[2, 0], [0, 3]]))
    assert snf.D == M([[1, 0], [0, 6]])


@pytest.mark.parametrize("n", [1, 3, 7])
def test_snf_identity(n):
    E = IntegerMatrix.identity(n)
    assert smith_normal_form(E).D == E


def test_snf_is_deterministic():
    A = M([[4, 6, 2], [8, -3, 7], [0, 5, 5]])
    assert smith_normal_form(A) == smith_normal_form(A)


def test_snf_handles_big_integers():
    big = 10 ** 40
    A = M([[big, big + 1], [3 * big, 2]])
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert snf.diagonal[0] * snf.diagonal[1] == abs(determinant(A))


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_snf_invariants(A):
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    for i in range(snf.D.rows):
        for j in range(snf.D.cols):
            if i != j:
                assert snf.D[i, j] == 0
    d = snf.diagonal
    nonzero = [x for x in d if x]
    assert d[:len(nonzero)] == nonzero and all(x > 0 for x in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@settings(max_examples=80, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4, bound=4))
def test_snf_matches_minor_oracle(A):
    assert [x for x in smith_normal_form(A).diagonal if x] == \
        determinantal_invariants(A)


def test_kernel_of_row():
    K = kernel_basis(M([[1, 1]]))
    assert K.cols == 1
    v = K.column(0)
    assert v in ((1, -1), (-1, 1))
    # exhaustive small search: every integer solution is a multiple of v
    for x, y in itertools.product(range(-4, 5), repeat=2):
        if x + y == 0:
            assert x % v[0] == 0 and x // v[0] * v[1] == y


def test_kernel_of_identity_is_empty():
    assert kernel_basis(IntegerMatrix.identity(3)).cols == 0


def test_kernel_of_zero_is_everything():
    assert kernel_basis(IntegerMatrix.zeros(2, 2)).cols == 2


def test_kernel_is_saturated_example():
    # ker [[2, 4]] is spanned by (2, -1), not by (4, -2)
    K = kernel_basis(M([[2, 4]]))
    assert set(smith_normal_form(K).diagonal) == {1}


@settings(max_examples=100, deadline=None)
@given(int_matrices())
def test_kernel_properties(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - smith_normal_form(A).rank
    if K.cols:
        assert set(smith_normal_form(K).diagonal) == {1}


def test_cokernel_examples():
    assert cokernel_invariants(M([[2]])) == ([2], 0)
    assert cokernel_invariants(IntegerMatrix.identity(2)) == ([], 0)
    assert cokernel_invariants(M([[2, 0], [0, 2]])) == ([2, 2], 0)
    # Z^2 / 2Z^2 has four elements
    cosets = {(x % 2, y % 2) for x in range(4) for y in range(4)}
    assert len(cosets) == 2 * 2
    assert cokernel_invariants(M([[3], [0]])) == ([3], 1)


@settings(max_examples=60, deadline=None)
@given(int_matrices(), st.integers(0, 2 ** 32))
def test_cokernel_unimodular_invariance(A, seed):
    rng = random.Random(seed)
    P = random_unimodular(A.rows, rng)
    Q = random_unimodular(A.cols, rng)
    assert cokernel_invariants(P @ A @ Q) == cokernel_invariants(A)


def test_unimodular_inverse_and_left_inverse(rng):
    U = random_unimodular(6, rng)
    assert U @ unimodular_inverse(U) == IntegerMatrix.identity(6)
    K = U.select_columns([0, 2, 3])
    assert left_inverse(K) @ K == IntegerMatrix.identity(3)
    with pytest.raises(ValueError):
        left_inverse(M([[2], [0]]))


def test_f2_rank():
    assert f2_rank(M([[1, 1], [1, 1]])) == 1
    assert f2_rank(M([[2, 0], [0, 2]])) == 0
    assert f2_rank(M([[1, 0], [1, 1]])) == 2


def test_lift_f2_invertible(rng):
    for _ in range(20):
        n = rng.randint(1, 6)
        U = random_unimodular(n, rng)
        A = U.mod2()
        B = lift_f2_invertible(A)
        assert abs(determinant(B)) == 1
        assert B.mod2() == A


def test_rejects_non_integers():
    with pytest.raises(TypeError):
        IntegerMatrix.from_rows([[1.0]])
    with pytest.raises(TypeError):
        IntegerMatrix.from_rows([[True]])
