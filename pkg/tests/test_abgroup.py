import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from steinhom.abgroup import (AbGroupMap, AbPresentation, FgAbelianGroup, IntMatrix, block, cokernel,
                              invariant_factors, kernel_basis, kron, parse_group, rank, smith_normal_form,
                              solve_integer)

small = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return IntMatrix.from_rows(rows, c)


def sympy_factors(M):
    S = sympy_snf(sympy.Matrix(M.to_rows()), domain=sympy.ZZ)
    return sorted(abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_transforms_and_diagonal(M):
    S, U, V = smith_normal_form(M)
    assert U @ M @ V == S
    diag = [S[i, i] for i in range(min(S.rows, S.cols))]
    assert all(S[i, j] == 0 for i in range(S.rows) for j in range(S.cols) if i != j)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_invariant_factors_match_sympy(M):
    assert sorted(abs(d) for d in invariant_factors(M)) == sympy_factors(M)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_matches_sympy(M):
    assert rank(M) == sympy.Matrix(M.to_rows()).rank()


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_basis_is_kernel(M):
    K = kernel_basis(M)
    assert (M @ K).is_zero()
    assert K.cols == M.cols - rank(M)


def test_sparse_elimination_on_large_random_sparse_matrix():
    rng = random.Random(3)
    ents = [(rng.randrange(40), rng.randrange(30), rng.choice([-2, -1, 1, 1, 3])) for _ in range(90)]
    M = IntMatrix.from_entries(40, 30, ents)
    assert sorted(abs(d) for d in invariant_factors(M)) == sympy_factors(M)


def test_group_formatting_and_parsing():
    A = FgAbelianGroup.from_orders(2, [4, 6, 1, 0])
    assert str(A) == "Z^3 + Z/2 + Z/12"
    assert parse_group(str(A)) == A
    assert str(FgAbelianGroup()) == "0"
    assert A.format("Q") == "Q^3"
    assert FgAbelianGroup.from_json(A.to_json()) == A


def test_group_invariants_are_validated():
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (4, 6))
    with pytest.raises(ValueError):
        FgAbelianGroup(-1)


def test_direct_sum_normalizes_torsion():
    assert FgAbelianGroup.from_orders(0, [2]) + FgAbelianGroup.from_orders(0, [3]) == FgAbelianGroup(0, (6,))
    assert FgAbelianGroup(1).mod(4) == FgAbelianGroup(0, (4,))


def test_cokernel_examples():
    assert cokernel(IntMatrix.from_rows([[-2]])) == FgAbelianGroup(0, (2,))
    assert cokernel(IntMatrix(2, 0)) == FgAbelianGroup(2)
    assert cokernel(IntMatrix.from_rows([[1, 0], [0, 0]])) == FgAbelianGroup(1)


def test_block_and_kron_shapes():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = block([[a, None], [None, a]])
    assert b.shape == (4, 4) and b[(3, 3)] == 4 and b[(0, 3)] == 0
    k = kron(a, IntMatrix.identity(2))
    assert k.shape == (4, 4) and k[(2, 0)] == 3 and k[(3, 1)] == 3


def test_solve_integer():
    A = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve_integer(A, IntMatrix.from_rows([[4], [9]])) == IntMatrix.from_rows([[2], [3]])
    assert solve_integer(A, IntMatrix.from_rows([[1], [0]])) is None


def test_group_map_checks_relations():
    Z2 = AbPresentation(("a",), IntMatrix.from_rows([[2]]))
    Z = AbPresentation.free(("b",))
    with pytest.raises(ValueError):
        AbGroupMap(Z2, Z, IntMatrix.from_rows([[1]]))  # Z/2 -> Z sending a to b is not well defined
    f = AbGroupMap(Z, Z2, IntMatrix.from_rows([[1]]))
    coker, ker = f.coker_ker()
    assert coker.is_trivial() and ker == FgAbelianGroup(1)


def test_group_map_multiplication_by_two_on_z4():
    Z4 = AbPresentation(("a",), IntMatrix.from_rows([[4]]))
    coker, ker = AbGroupMap(Z4, Z4, IntMatrix.from_rows([[2]])).coker_ker()
    assert coker == FgAbelianGroup(0, (2,)) and ker == FgAbelianGroup(0, (2,))
