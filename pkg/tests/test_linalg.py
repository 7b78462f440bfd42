from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ospdecomp.linalg import (
    Echelon,
    ExactMatrix,
    SpanSolver,
    Subspace,
    hstack,
    nullspace,
    rref,
    solve_membership,
    vstack,
)
from ospdecomp.scalars import GaussianRational, gr

small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)
small_scalars = st.builds(GaussianRational, small_rationals, small_rationals)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(small_scalars, min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            ).map(ExactMatrix)
        )
    )


def test_matmul_and_transpose():
    a = ExactMatrix([[1, 2], [0, 1]])
    b = ExactMatrix([[gr(0, 1), 0], [1, 1]])
    assert a @ b == ExactMatrix([[gr(2, 1), 2], [1, 1]])
    assert a.transpose() == ExactMatrix([[1, 0], [2, 1]])
    assert (a @ b).trace() == gr(3, 1)


def test_kron_shape_and_values():
    a = ExactMatrix([[1, 2]])
    b = ExactMatrix([[0, 1], [1, 0]])
    k = a.kron(b)
    assert (k.rows, k.cols) == (2, 4)
    assert k == ExactMatrix([[0, 1, 0, 2], [1, 0, 2, 0]])


def test_rref_known_case():
    m = ExactMatrix([[2, 4, 2], [1, 2, 3], [1, 2, 1]])
    r = rref(m)
    assert r.rank == 2
    assert r.pivots == (0, 2)
    assert r.matrix == ExactMatrix([[1, 2, 0], [0, 0, 1], [0, 0, 0]])


def test_rref_gaussian_entries():
    m = ExactMatrix([[gr(0, 1), 1], [1, gr(0, 1)]])
    r = rref(m)
    assert r.rank == 2
    assert r.matrix == ExactMatrix.identity(2)


def test_rref_rational_entries_exact():
    m = ExactMatrix([[Fraction(1, 3), Fraction(1, 6)], [Fraction(2, 3), Fraction(1, 3)]])
    r = rref(m)
    assert r.rank == 1
    assert r.matrix.row(0) == (gr(1), gr(Fraction(1, 2)))


@settings(max_examples=60)
@given(matrices())
def test_rref_idempotent(m):
    r = rref(m).matrix
    assert rref(r).matrix == r


@settings(max_examples=60)
@given(matrices())
def test_rank_equals_rank_of_transpose(m):
    assert rref(m).rank == rref(m.transpose()).rank


@settings(max_examples=60)
@given(matrices())
def test_sparse_engine_matches_dense_rref(m):
    """The incremental echelon and the fraction-free rref agree."""
    dense = rref(m)
    sub = Subspace.from_vectors(m.cols, [m.row(i) for i in range(m.rows)])
    assert sub.dim == dense.rank
    assert sub.vectors() == dense.matrix.entries[: dense.rank]
    assert sub.pivots() == dense.pivots


def spaces(ambient=6):
    vec = st.lists(small_scalars, min_size=ambient, max_size=ambient)
    return st.lists(vec, min_size=0, max_size=4).map(
        lambda vs: Subspace.from_vectors(ambient, vs)
    )


@settings(max_examples=60)
@given(spaces(), spaces())
def test_modular_law(a, b):
    s = a.sum(b)
    i = a.intersect(b)
    assert s.dim + i.dim == a.dim + b.dim
    assert a.contains_subspace(i)
    assert b.contains_subspace(i)
    assert s.contains_subspace(a)
    assert s.contains_subspace(b)


def test_intersection_hand_case():
    a = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace.from_vectors(3, [[0, 1, 0], [0, 0, 1]])
    i = a.intersect(b)
    assert i.dim == 1
    assert i.contains([0, 5, 0])
    assert not i.contains([1, 0, 0])


def test_membership_coordinates():
    a = Subspace.from_vectors(4, [[1, 0, 1, 0], [0, 1, 0, 2]])
    coords = solve_membership([2, -1, 2, -2], a)
    assert coords == (gr(2), gr(-1))
    assert solve_membership([1, 0, 0, 0], a) is None


def test_span_solver_reports_original_coordinates():
    vs = [[1, 1, 0], [0, 1, 1], [1, 2, 1]]  # third = first + second
    solver = SpanSolver(vs)
    assert solver.rank == 2
    coords = solver.coordinates([1, 0, -1])
    assert coords is not None
    total = {}
    for idx, c in coords.items():
        for j, v in enumerate(vs[idx]):
            total[j] = total.get(j, gr(0)) + c * v
    assert [total.get(j, gr(0)) for j in range(3)] == [gr(1), gr(0), gr(-1)]
    assert solver.coordinates([0, 0, 5]) is None


def test_nullspace_known_kernel():
    m = ExactMatrix([[1, 2, 0, 1], [0, 0, 1, -1]])
    ns = nullspace(m)
    assert ns.dim == 2
    for v in ns.vectors():
        img = m @ ExactMatrix([[x] for x in v])
        assert img.is_zero()


@settings(max_examples=40)
@given(matrices(4, 5))
def test_nullspace_dimension_formula(m):
    assert nullspace(m).dim == m.cols - rref(m).rank


def test_stack_helpers():
    a = ExactMatrix([[1]])
    b = ExactMatrix([[2]])
    assert hstack(a, b) == ExactMatrix([[1, 2]])
    assert vstack(a, b) == ExactMatrix([[1], [2]])


def test_echelon_tracks_dependence():
    ech = Echelon(track=True)
    assert ech.insert({0: gr(1)}) == 0
    assert ech.insert({0: gr(2)}) is None
    assert ech.insert({1: gr(1), 0: gr(1)}) == 1
    assert ech.dim == 2


def test_subspace_equality_is_basis_independent():
    a = Subspace.from_vectors(3, [[1, 1, 0], [0, 0, 1]])
    b = Subspace.from_vectors(3, [[1, 1, 1], [2, 2, 1]])
    assert a == b
    assert hash(a) == hash(b)


def test_vector_exceeding_ambient_rejected():
    with pytest.raises(ValueError):
        Subspace.from_vectors(2, [{5: gr(1)}])
