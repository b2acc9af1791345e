from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomcalc.linalg import Field, Matrix, ShapeError, Subspace, kernel, rank_kernel, solve

F2 = Field(2)
F5 = Field(5)
QQ = Field(None)


def brute_kernel_size(m: Matrix) -> int:
    p = m.field.p
    count = 0
    for x in product(range(p), repeat=m.rows):
        if (Matrix(m.field, [list(x)]) @ m).is_zero():
            count += 1
    return count


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(4)


def test_entries_are_canonical():
    assert Matrix(F5, [[7, -1]]).tolist() == [[2, 4]]
    assert Matrix(QQ, [[Fraction(2, 4)]]).tolist() == [[Fraction(1, 2)]]


def test_rank_kernel_identity():
    r, k = rank_kernel(Matrix.identity(F2, 2))
    assert (r, k.dim) == (2, 0)


def test_rank_kernel_zero_over_q():
    r, k = rank_kernel(Matrix.zeros(QQ, 1, 1))
    assert (r, k.dim) == (0, 1)


def test_rank_kernel_all_ones():
    r, k = rank_kernel(Matrix(F2, [[1, 1], [1, 1]]))
    assert r == 1
    assert k.basis.tolist() == [[1, 1]]


def test_solve_identity():
    b = Matrix(F5, [[1, 2, 3]])
    assert solve(Matrix.identity(F5, 3), b) == b


def test_solve_inconsistent():
    assert solve(Matrix.zeros(F2, 2, 2), Matrix(F2, [[1, 0]])) is None


def test_solve_canonical_free_coordinate_zero():
    # x a = b with a a 2x1 column: x1 + x2 = 1, two solutions
    a = Matrix(F2, [[1], [1]])
    x = solve(a, Matrix(F2, [[1]]))
    assert x.tolist() == [[1, 0]]


def test_solve_shape_mismatch():
    with pytest.raises(ShapeError):
        solve(Matrix.identity(F2, 2), Matrix(F2, [[1, 0, 0]]))


def test_intersect_equal():
    u = Subspace.span(F2, 2, [[1, 1]])
    assert (u & u) == u and (u + u) == u


def test_complementary_lines():
    u = Subspace.span(F2, 2, [[1, 0]])
    v = Subspace.span(F2, 2, [[0, 1]])
    assert (u & v).dim == 0 and (u + v).dim == 2


def test_three_lines_of_the_plane():
    lines = [Subspace.span(F2, 2, [v]) for v in ([1, 0], [0, 1], [1, 1])]
    assert len(set(lines)) == 3
    for i in range(3):
        for j in range(i + 1, 3):
            assert (lines[i] + lines[j]) == Subspace.full(F2, 2)


def test_ambient_mismatch():
    with pytest.raises(ValueError):
        Subspace.full(F2, 2) & Subspace.full(F2, 3)


def test_vectors_enumerates_subspace():
    u = Subspace.span(F2, 3, [[1, 1, 0], [0, 0, 1]])
    vs = {tuple(v.tolist()[0]) for v in u.vectors()}
    assert vs == {(0, 0, 0), (1, 1, 0), (0, 0, 1), (1, 1, 1)}


# -- properties ----------------------------------------------------------------


def matrices(field, max_rows=5, max_cols=5):
    if field.p:
        entry = st.integers(0, field.p - 1)
    else:
        entry = st.fractions(min_value=-3, max_value=3, max_denominator=3)

    @st.composite
    def build(draw):
        r = draw(st.integers(1, max_rows))
        c = draw(st.integers(1, max_cols))
        return Matrix(field, [[draw(entry) for _ in range(c)] for _ in range(r)])

    return build()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F2, F5, QQ]).flatmap(matrices))
def test_kernel_rows_annihilate(m):
    r, k = rank_kernel(m)
    assert r + k.dim == m.rows
    assert (k.basis @ m).is_zero()


@settings(max_examples=40, deadline=None)
@given(matrices(F2, max_rows=6))
def test_kernel_size_matches_brute_force(m):
    assert 2 ** kernel(m).dim == brute_kernel_size(m)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F2, F5, QQ]).flatmap(lambda f: st.tuples(matrices(f, 4, 4), matrices(f, 4, 4))))
def test_modular_law(pair):
    a, b = pair
    if a.cols != b.cols:
        return
    u = Subspace.span(a.field, a.cols, a)
    v = Subspace.span(b.field, b.cols, b)
    assert (u & v).dim + (u + v).dim == u.dim + v.dim
    assert (u & v) <= u and u <= (u + v)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F5, QQ]).flatmap(lambda f: st.tuples(matrices(f, 4, 5), matrices(f, 4, 4))))
def test_echelon_basis_is_canonical(pair):
    gens, mix = pair
    u = Subspace.span(gens.field, gens.cols, gens)
    if mix.rows != mix.cols or mix.rows != gens.rows or mix.det() == 0:
        return
    v = Subspace.span(gens.field, gens.cols, mix @ gens)
    assert u == v
    assert u.basis.tolist() == v.basis.tolist()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F2, F5, QQ]).flatmap(lambda f: st.tuples(matrices(f, 4, 4), matrices(f, 1, 4))))
def test_solve_round_trip(pair):
    a, b = pair
    if a.cols != b.cols:
        return
    x = solve(a, b)
    if x is None:
        assert not Subspace.span(a.field, a.cols, a).contains(b)
    else:
        assert x @ a == b
