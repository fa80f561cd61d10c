import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdpairs.linalg import (
    DimensionError,
    LinearAlgebraError,
    Matrix,
    Subspace,
    apply,
    charpoly,
    closure_under,
    contains,
    image,
    intersect,
    is_diagonalizable,
    kernel,
    lagrange_idempotents,
    largest_invariant_in,
    quotient_action,
    rank,
    span,
    subspace_ops,
    subspace_sum,
)
from tdpairs.scalars import QQ, PrecisionConfig, complex_field

from conftest import S

A1 = Matrix.from_rows([["13/2", 0], ["5/2", "7/2"]])
As1 = Matrix.from_rows([["9/2", "-45/4"], [0, 3]])


def test_subspace_examples():
    assert kernel(Matrix.identity(2)).dim == 0
    assert subspace_ops("rank", Matrix.from_rows([[1, 2], [2, 4]])) == 1
    x, y = span([[1, 0]]), span([[0, 1]])
    assert intersect(x, y).dim == 0
    assert subspace_sum(x, y) == Subspace.full(2)
    assert subspace_ops("membership", subspace_sum(x, y), [3, 4])


def test_rref_is_canonical():
    a = span([[1, 2, 3], [0, 1, 1]])
    b = span([[1, 3, 4], [2, 5, 7]])
    assert a == b
    assert np.array_equal(a.basis.a, b.basis.a)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Matrix.identity(2) @ Matrix.identity(3)


def test_lagrange_examples():
    E = lagrange_idempotents(Matrix.diag([S("13/2"), S("7/2")]), [S("13/2"), S("7/2")])
    assert E[0] == Matrix.diag([1, 0]) and E[1] == Matrix.diag([0, 1])
    E = lagrange_idempotents(A1, [S("13/2"), S("7/2")])
    assert E[0] == Matrix.from_rows([[1, 0], ["5/6", 0]])
    assert E[1] == (A1 - Matrix.identity(2) * S("13/2")) * S("-1/3")
    single = lagrange_idempotents(Matrix.identity(3) * S(5), [S(5)])
    assert single[0] == Matrix.identity(3)


def test_lagrange_errors():
    with pytest.raises(LinearAlgebraError):
        lagrange_idempotents(A1, [S(1), S(1)])
    with pytest.raises(LinearAlgebraError):
        lagrange_idempotents(Matrix.from_rows([[0, 1], [0, 0]]), [S(0)])


def test_diagonalizable_examples():
    assert not is_diagonalizable(Matrix.from_rows([[0, 1], [0, 0]]), [S(0)])
    assert is_diagonalizable(Matrix.diag([1, 2]), [S(1), S(2)])
    assert is_diagonalizable(A1, [S("13/2"), S("7/2")])


def test_closure_examples():
    S0 = span([[1, 0, 0], [0, 1, 1]])
    assert closure_under([Matrix.identity(3)], S0) == S0
    assert closure_under([A1, As1], span([[1, 0]])).dim == 2
    assert closure_under([Matrix.diag([1, 2])], span([[1, 0]])) == span([[1, 0]])


def test_largest_invariant_examples():
    assert largest_invariant_in([A1], Subspace.zero(2)).dim == 0
    S0 = span([[1, 1, 0]])
    assert largest_invariant_in([Matrix.identity(3)], S0) == S0
    E = lagrange_idempotents(As1, [S("9/2"), S(3)])
    assert largest_invariant_in([A1, As1], kernel(E[0])).dim == 0


def test_quotient_examples():
    M = Matrix.from_rows([[1, 0], [1, 2]])
    full = Subspace.full(2)
    assert quotient_action(M, Subspace.zero(2), full) == M
    assert quotient_action(M, full, full).shape == (0, 0)
    assert quotient_action(M, span([[0, 1]]), full) == Matrix.from_rows([[1]])
    with pytest.raises(LinearAlgebraError):
        quotient_action(M, span([[1, 0]]), full)


def test_charpoly():
    assert charpoly(Matrix.from_rows([[1, 2], [3, 4]])).scalars() == [S(-2), S(-5), S(1)]


small = st.fractions(-4, 4, max_denominator=3)


def matrices(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix.from_rows)


@given(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=1, max_size=4, unique=True), st.data())
def test_idempotent_family_properties(vals, data):
    n = len(vals)
    P = data.draw(matrices(n).filter(lambda m: rank(m) == n))
    from tdpairs.linalg import inverse

    M = P @ Matrix.diag([S(v) for v in vals]) @ inverse(P)
    E = lagrange_idempotents(M, [S(v) for v in vals])
    total = Matrix.zeros(n, n)
    for i, Ei in enumerate(E):
        total = total + Ei
        for j, Ej in enumerate(E):
            assert Ei @ Ej == (Ei if i == j else Matrix.zeros(n, n))
    assert total == Matrix.identity(n)
    recon = Matrix.zeros(n, n)
    for v, Ei in zip(vals, E):
        recon = recon + Ei * S(v)
    assert recon == M


@given(matrices(4), matrices(4), st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=2))
def test_closure_and_invariant_properties(X, Y, seed_rows):
    seed = span(seed_rows, 4)
    C = closure_under([X, Y], seed)
    assert contains(C, seed)
    assert contains(C, apply(X, C)) and contains(C, apply(Y, C))
    bound = kernel(X)
    I = largest_invariant_in([X, Y], bound)
    assert contains(bound, I)
    assert contains(I, apply(X, I)) and contains(I, apply(Y, I))
    # anything invariant inside the bound lies in I
    inv_seed = closure_under([X, Y], seed)
    if contains(bound, inv_seed):
        assert contains(I, inv_seed)


@given(matrices(3), matrices(3))
def test_quotient_respects_composition(X, Y):
    sub = closure_under([X, Y], span([[1, 0, 0]]))
    total = Subspace.full(3)
    assert quotient_action(X @ Y, sub, total) == quotient_action(X, sub, total) @ quotient_action(Y, sub, total)


def test_complex_rank_with_tolerance():
    F = complex_field(PrecisionConfig())
    eps = F.ctx.ldexp(1, -100)
    near = Matrix(F, np.array([[F(1), F(2)], [F(2), F(4) + eps]], dtype=object))
    assert rank(near) == 1
    far = Matrix(F, np.array([[F(1), F(2)], [F(2), F(4) + F.ctx.ldexp(1, -20)]], dtype=object))
    assert rank(far) == 2
    E = lagrange_idempotents(A1.lift(F), [S("13/2").lift(F), S("7/2").lift(F)])
    assert E[0].equals(Matrix.from_rows([[1, 0], ["5/6", 0]]).lift(F))
