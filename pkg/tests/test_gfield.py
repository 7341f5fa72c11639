import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linecode.errors import (
    FieldDivisionError,
    FieldMismatchError,
    ParameterError,
    ShapeError,
    SingularMatrixError,
)
from linecode.gfield import FieldSpec, Matrix, add, det, inverse, is_prime, mul, mul_inv, rank, solve

F5, F7, F101 = FieldSpec(5), FieldSpec(7), FieldSpec(101)


def test_primality():
    assert [p for p in range(60) if is_prime(p)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    for bad in (0, 1, 4, 6, 9, 1001):
        with pytest.raises(ParameterError):
            FieldSpec(bad)


@pytest.mark.parametrize("spec, x, y, expected", [
    (F7, 3, 5, 1),
    (F7, 0, 4, 4),
    (F5, 4, 4, 3),
])
def test_add(spec, x, y, expected):
    assert add(spec(x), spec(y)) == spec(expected)


@pytest.mark.parametrize("spec, x, expected", [(F7, 3, 5), (F7, 1, 1), (F101, 2, 51)])
def test_mul_inv(spec, x, expected):
    assert mul_inv(spec(x)) == spec(expected)


def test_inverse_of_zero():
    with pytest.raises(FieldDivisionError):
        mul_inv(F7(0))
    with pytest.raises(ZeroDivisionError):
        F7(3) / F7(0)


def test_mismatched_fields():
    with pytest.raises(FieldMismatchError):
        add(F5(1), F7(1))
    with pytest.raises(FieldMismatchError):
        Matrix.identity(F5, 2) @ Matrix.identity(F7, 2)


def test_non_canonical_residue_rejected():
    with pytest.raises(ParameterError):
        F5(5)
    with pytest.raises(ParameterError):
        F5(-1)
    with pytest.raises(ParameterError):
        F5.check(-3)


def test_element_operators():
    assert F7(3) - F7(5) == F7(5)
    assert -F7(2) == F7(5)
    assert F7(3) * 4 == F7(5)
    assert 1 / F7(3) == F7(5)
    assert F7(3) ** 6 == F7(1)
    assert F7(3) ** -1 == F7(5)


@pytest.mark.parametrize("q", [2, 3, 5, 101, 1009])
def test_inverse_exhaustive(q):
    spec = FieldSpec(q)
    for v in range(1, q):
        assert mul(spec(v), mul_inv(spec(v))) == spec.one


def test_solve_examples():
    assert solve(Matrix.identity(F5, 3), [2, 3, 4]) == (2, 3, 4)
    assert solve(Matrix.from_rows(F5, [[1, 1], [1, 2]]), [0, 1]) == (4, 1)


def test_solve_singular_carries_rank():
    A = Matrix.from_rows(F5, [[1, 0, 1], [0, 1, 1], [1, 1, 2]])  # row 3 = row 1 + row 2
    with pytest.raises(SingularMatrixError) as info:
        solve(A, [1, 1, 1])
    assert info.value.rank == 2


def test_solve_shape_errors():
    with pytest.raises(ShapeError):
        solve(Matrix.from_rows(F5, [[1, 2]]), [1])
    with pytest.raises(ShapeError):
        solve(Matrix.identity(F5, 2), [1, 2, 3])


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0, 0], [0, 1, 0], [1, 1, 1]], 1),
    ([[1, 0, 0], [0, 1, 0], [1, 1, 0]], 0),
])
def test_det_examples(rows, expected):
    assert det(Matrix.from_rows(F7, rows)) == F7(expected)


def test_det_identity_and_shape():
    assert det(Matrix.identity(F5, 4)) == F5(1)
    with pytest.raises(ShapeError):
        det(Matrix.from_rows(F5, [[1, 2, 3], [4, 0, 1]]))


def test_det_matches_permutation_expansion():
    from itertools import permutations

    rng = np.random.default_rng(0)
    for _ in range(50):
        rows = rng.integers(0, 7, size=(4, 4)).tolist()
        leibniz = 0
        for perm in permutations(range(4)):
            inversions = sum(perm[i] > perm[j] for i in range(4) for j in range(i + 1, 4))
            term = (-1) ** inversions
            for i, j in enumerate(perm):
                term *= rows[i][j]
            leibniz += term
        assert det(Matrix.from_rows(F7, rows)).value == leibniz % 7


@pytest.mark.parametrize("rows, expected", [
    ([[0, 0, 0]] * 3, 0),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
    ([[1, 2], [2, 4]], 1),
])
def test_rank_examples(rows, expected):
    assert rank(Matrix.from_rows(F5, rows)) == expected


@pytest.mark.parametrize("spec", [F5, F101])
def test_solve_random_regular_systems(spec):
    rng = np.random.default_rng(spec.q)
    done = 0
    while done < 1000:
        size = int(rng.integers(1, 6))
        A = Matrix.from_rows(spec, rng.integers(0, spec.q, size=(size, size)).tolist())
        if not det(A):
            continue
        x = tuple(int(v) for v in rng.integers(0, spec.q, size=size))
        assert solve(A, A.apply(x)) == x
        done += 1


def test_det_multiplicative():
    rng = np.random.default_rng(1)
    for _ in range(100):
        A = Matrix.from_rows(F7, rng.integers(0, 7, size=(4, 4)).tolist())
        B = Matrix.from_rows(F7, rng.integers(0, 7, size=(4, 4)).tolist())
        assert det(A @ B) == det(A) * det(B)


matrices = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200)
@given(matrices)
def test_rank_transpose_invariant(rows):
    A = Matrix.from_rows(F7, rows)
    assert rank(A) == rank(A.transpose())
    assert rank(A) <= min(A.rows, A.cols)


def test_inverse_roundtrip():
    A = Matrix.from_rows(F101, [[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    assert inverse(A) @ A == Matrix.identity(F101, 3)
