"""Sum decompositions and the feasibility screen.

The middle algebras of the classical decompositions are checked against
an independent oracle: the stabilizer of the non-isotropic vector
e_0 + e_h, computed as a nullspace over the coefficients of the ambient
algebra.  The first-row-and-column subalgebra is likewise compared with
the full solution set of its defining linear conditions.
"""

from fractions import Fraction

import pytest

from ospdecomp.decomp import (
    CandidatePair,
    DecompositionReport,
    build_example_decomposition,
    conjugate_to_identity,
    enumerate_candidates,
    family_graded_dims,
    feasibility_screen,
    first_line_solution_set,
    mixing_matrix,
    onishchik_sl,
    onishchik_sp,
    screen_survivors,
    verify_sum,
)
from ospdecomp.linalg import Echelon, ExactMatrix, Subspace, invert, nullspace_sparse
from ospdecomp.repmod import (
    classify_type,
    decompose_module,
    highest_weight,
    restrict_natural_action,
)
from ospdecomp.scalars import gr
from ospdecomp.structure import (
    _ideal_positions,
    expected_sl_fingerprint,
    fingerprint,
)
from ospdecomp.superalg import (
    EVEN,
    GradedMatrix,
    Superalgebra,
    build_gl,
    build_osp,
    is_closed_subalgebra,
    superbracket,
)

I = gr(0, 1)


def stabilizer_dim(algebra, w_items):
    """dim {Z in span(algebra) : Z w = 0}, solved over the coefficients."""
    w = {c: gr(v) for c, v in w_items}
    rows = {}
    for idx, g in enumerate(algebra.basis):
        for r, c, v in g.matrix.nonzero_items():
            if c in w:
                row = rows.setdefault(r, {})
                row[idx] = row.get(idx, gr(0)) + v * w[c]
    rows = {r: {i: v for i, v in row.items() if v} for r, row in rows.items()}
    rows = [row for row in rows.values() if row]
    return nullspace_sparse(rows, algebra.dim).dim


def span_of(algebra):
    total = sum(algebra.block_sizes)
    return Subspace.from_vectors(total * total,
                                 [g.vectorize() for g in algebra.basis])


def annihilates(g, w_items):
    w = {c: gr(v) for c, v in w_items}
    acc = {}
    for r, c, v in g.matrix.nonzero_items():
        if c in w:
            acc[r] = acc.get(r, gr(0)) + v * w[c]
    return all(not v for v in acc.values())


# ---------------------------------------------------------------------------
# classical even decompositions


@pytest.mark.parametrize("k,dims,inter", [
    (2, (6, 3, 3), 0),
    (3, (15, 10, 8), 3),
])
def test_onishchik_sl_sums(k, dims, inter):
    s, n, m = onishchik_sl(k)
    assert (s.dim, n.dim, m.dim) == dims
    report = verify_sum(s, n, m)
    assert report.verdict == "exact-sum"
    assert report.intersection_dim == inter
    assert report.closure_k and report.closure_l
    assert report.notes == ""


@pytest.mark.parametrize("k", [2, 3])
def test_onishchik_sl_stabilizer_oracle(k):
    s, n, _ = onishchik_sl(k)
    w = [(0, 1), (k, 1)]
    # every element annihilates e_0 + e_k, and nothing else in S does
    for g in n.basis:
        assert annihilates(g, w)
    assert stabilizer_dim(s, w) == n.dim == (k - 1) * (2 * k - 1)
    solver = s.span_solver()
    for g in n.basis:
        assert solver.coordinates(g.vectorize()) is not None


def test_onishchik_sl_rank_at_k5():
    s, n, m = onishchik_sl(5)
    assert (s.dim, n.dim, m.dim) == (45, 36, 24)
    ech = Echelon()
    for g in list(n.basis) + list(m.basis):
        ech.insert(g.vectorize())
    assert ech.dim == 45
    assert stabilizer_dim(s, [(0, 1), (5, 1)]) == 36


@pytest.mark.parametrize("k,dims,inter", [
    (1, (6, 3, 3), 0),
    (2, (28, 21, 10), 3),
])
def test_onishchik_sp_sums(k, dims, inter):
    s, n, m = onishchik_sp(k)
    assert (s.dim, n.dim, m.dim) == dims
    report = verify_sum(s, n, m)
    assert report.verdict == "exact-sum"
    assert report.intersection_dim == inter


@pytest.mark.parametrize("k", [1, 2])
def test_onishchik_sp_stabilizer_oracle(k):
    s, n, _ = onishchik_sp(k)
    w = [(0, 1), (2 * k, 1)]
    for g in n.basis:
        assert annihilates(g, w)
    assert stabilizer_dim(s, w) == n.dim == (2 * k - 1) * (4 * k - 1)


def test_onishchik_sp_middle_is_symplectic():
    _, _, m = onishchik_sp(2)
    g_form = ExactMatrix.from_sparse(4, 4, [
        (0, 2, 1), (1, 3, 1), (2, 0, -1), (3, 1, -1)])
    for g in m.basis:
        y = g.matrix.block(0, 4, 0, 4)
        assert (y.transpose() @ g_form + g_form @ y).is_zero()
        # and the doubled lower block is tied to the upper one
        low = g.matrix.block(4, 8, 4, 8)
        assert low == y.transpose().scale(gr(-1))


# ---------------------------------------------------------------------------
# the change of basis


def test_mixing_matrix_rotation_example():
    q = mixing_matrix(1, 0)
    x = ExactMatrix.from_sparse(2, 2, [(0, 1, 1), (1, 0, -1)])
    image = q @ x @ invert(q)
    assert image == ExactMatrix.from_sparse(2, 2, [(0, 1, I), (1, 0, I)])


def test_mixing_matrix_maps_split_quadric_to_scaled_identity():
    k = 3
    q = mixing_matrix(k, 0)
    phi = ExactMatrix.from_sparse(2 * k, 2 * k, [
        (i, k + i, 1) for i in range(k)] + [(k + i, i, 1) for i in range(k)])
    half = gr(Fraction(1, 2))
    qinv = invert(q)
    assert qinv.transpose() @ phi @ qinv == ExactMatrix.identity(2 * k).scale(half)


@pytest.mark.parametrize("k,n", [(1, 1), (2, 1)])
def test_conjugation_preserves_brackets_on_gl(k, n):
    gl = build_gl(2 * k, 2 * n)
    conj = conjugate_to_identity(gl)
    q = mixing_matrix(k, 2 * n)
    qinv = invert(q)
    basis = gl.basis
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            br = superbracket(basis[i], basis[j])
            expected = q @ br.matrix @ qinv
            got = superbracket(conj.basis[i], conj.basis[j])
            assert got.matrix == expected


def test_conjugation_preserves_parities():
    alg = build_osp(4, 1, form="split")
    conj = conjugate_to_identity(alg)
    assert conj.even_indices == alg.even_indices
    assert conj.odd_indices == alg.odd_indices
    for g in conj.basis:
        GradedMatrix(g.matrix, g.block_sizes, g.parity)  # parity recheck
    assert conj.conjugation is not None


def test_conjugated_stabilizer_has_first_line_zero():
    # the stabilizer of e_0 + e_k becomes the stabilizer of a multiple of
    # e_0, i.e. skew matrices with vanishing first row and column
    for k in (2, 3):
        _, n, _ = onishchik_sl(k)
        conj = conjugate_to_identity(n)
        total = 2 * k
        for g in conj.basis:
            mat = g.matrix
            assert mat.transpose() == mat.scale(gr(-1))
            for c in range(total):
                assert not mat[0, c]
                assert not mat[c, 0]


def test_conjugation_requires_even_ortho_block():
    _, n, _ = onishchik_sl(2)
    odd_sized = Superalgebra(
        label="bad", block_sizes=(3, 0),
        basis=(GradedMatrix.from_sparse((3, 0), EVEN, [(0, 1, 1), (1, 0, -1)]),),
        even_indices=(0,), odd_indices=())
    with pytest.raises(ValueError):
        conjugate_to_identity(odd_sized)
    assert conjugate_to_identity(n) is not n


# ---------------------------------------------------------------------------
# the orthosymplectic decomposition


@pytest.mark.parametrize("k,n,dim_s,dim_k,dim_l,inter", [
    (2, 1, 17, 12, 8, 3),
    (3, 1, 30, 23, 15, 8),
    (3, 2, 49, 40, 24, 15),
])
def test_standard_decomposition_dims(k, n, dim_s, dim_k, dim_l, inter):
    s, kk, ll = build_example_decomposition(k, n)
    assert (s.dim, kk.dim, ll.dim) == (dim_s, dim_k, dim_l)
    report = verify_sum(s, kk, ll)
    assert report.verdict == "exact-sum"
    assert report.intersection_dim == inter
    assert report.notes == ""
    assert report.dims["S"] == s.graded_dims


def test_rank_nullity_against_real_intersection():
    s, kk, ll = build_example_decomposition(2, 1)
    inter = span_of(kk).intersect(span_of(ll))
    assert inter.dim == verify_sum(s, kk, ll).intersection_dim == 3


def test_first_line_subalgebra_is_the_full_solution_set():
    for k, n in ((2, 1), (3, 2)):
        s, kk, _ = build_example_decomposition(k, n)
        total = 2 * k + 2 * n
        for g in kk.basis:
            for c in range(total):
                assert not g.matrix[0, c]
                assert not g.matrix[c, 0]
        solutions = first_line_solution_set(s)
        kspan = span_of(kk)
        assert solutions.dim == kk.dim
        assert solutions.contains_subspace(kspan)
        assert kspan.contains_subspace(solutions)


def test_summands_are_closed_and_inside_s():
    s, kk, ll = build_example_decomposition(2, 1)
    solver = s.span_solver()
    for sub in (kk, ll):
        assert is_closed_subalgebra(list(sub.basis)).closed
        for g in sub.basis:
            assert solver.coordinates(g.vectorize()) is not None


def test_sl_copy_even_block_pattern():
    # orthogonal block [[E, -F], [F, E]] with E skew and F symmetric,
    # symplectic block diag(D, -D^t), traces coupled by tr D + i tr F = 0
    k, n = 3, 2
    _, _, ll = build_example_decomposition(k, n)
    for idx in ll.even_indices:
        mat = ll.basis[idx].matrix
        e = mat.block(0, k, 0, k)
        f = mat.block(k, 2 * k, 0, k)
        assert mat.block(k, 2 * k, k, 2 * k) == e
        assert mat.block(0, k, k, 2 * k) == f.scale(gr(-1))
        assert e.transpose() == e.scale(gr(-1))
        assert f.transpose() == f
        d = mat.block(2 * k, 2 * k + n, 2 * k, 2 * k + n)
        dual = mat.block(2 * k + n, 2 * k + 2 * n, 2 * k + n, 2 * k + 2 * n)
        assert dual == d.transpose().scale(gr(-1))
        assert mat.block(2 * k, 2 * k + n, 2 * k + n, 2 * k + 2 * n).is_zero()
        assert not (d.trace() + I * f.trace())


def test_sl_copy_odd_block_pattern():
    # odd blocks [[P, Q^t], [iP, -iQ^t]] with the lower rows forced by the
    # identity-form coupling
    k, n = 2, 1
    s, _, ll = build_example_decomposition(k, n)
    g_form = ExactMatrix.from_sparse(2 * n, 2 * n, [
        (r, n + r, 1) for r in range(n)] + [(n + r, r, -1) for r in range(n)])
    for idx in ll.odd_indices:
        mat = ll.basis[idx].matrix
        b = mat.block(0, 2 * k, 2 * k, 2 * k + 2 * n)
        c = mat.block(2 * k, 2 * k + 2 * n, 0, 2 * k)
        assert b.block(k, 2 * k, 0, n) == b.block(0, k, 0, n).scale(I)
        assert b.block(k, 2 * k, n, 2 * n) == b.block(0, k, n, 2 * n).scale(-I)
        assert c == g_form @ b.transpose()


def test_sl_copy_parameter_counts():
    _, _, ll = build_example_decomposition(2, 1)
    assert ll.dim == 8
    assert len(ll.ideals["I1"]) == 3
    assert len(ll.ideals["I2"]) == 0
    assert len(ll.ideals["center"]) == 1
    assert len(ll.odd_indices) == 4


@pytest.mark.parametrize("k,n", [(2, 1), (3, 2)])
def test_sl_copy_fingerprint(k, n):
    _, _, ll = build_example_decomposition(k, n)
    assert fingerprint(ll) == expected_sl_fingerprint(k, n)


def test_natural_module_splits_into_standard_and_dual():
    k, n = 3, 2
    _, _, ll = build_example_decomposition(k, n)
    act = restrict_natural_action(ll, "V", use_reference=True)
    comps = decompose_module(act)
    assert sorted(c.dim for c in comps) == [k, k]
    i1 = list(range(len(ll.ideals["I1"])))
    i2 = [len(ll.ideals["I1"]) + i for i in range(len(ll.ideals["I2"]))]
    assert all(classify_type(c, act, i1, i2) == 2 for c in comps)
    cartan = ll.cartans["I1"]
    cart_actions = [e.block(0, 2 * k, 0, 2 * k) for e in cartan.elements]
    weights = sorted(highest_weight(c, cartan, cart_actions) for c in comps)
    assert weights == [(0, 1), (1, 0)]


def test_symplectic_module_types():
    k, n = 3, 2
    _, _, ll = build_example_decomposition(k, n)
    act = restrict_natural_action(ll, "W", use_reference=True)
    comps = decompose_module(act)
    assert sorted(c.dim for c in comps) == [n, n]
    i1 = list(range(len(ll.ideals["I1"])))
    i2 = [len(ll.ideals["I1"]) + i for i in range(len(ll.ideals["I2"]))]
    assert all(classify_type(c, act, i1, i2) == 3 for c in comps)


def test_symplectic_module_collapses_to_trivial_type_at_rank_one():
    # with n = 1 the second ideal is zero; only the center moves W
    _, _, ll = build_example_decomposition(2, 1)
    act = restrict_natural_action(ll, "W", use_reference=True)
    comps = decompose_module(act)
    assert sorted(c.dim for c in comps) == [1, 1]
    i1 = list(range(len(ll.ideals["I1"])))
    assert all(classify_type(c, act, i1, []) == 1 for c in comps)


def test_ambient_natural_module_is_irreducible():
    s, _, _ = build_example_decomposition(2, 1)
    act = restrict_natural_action(s, "V")
    comps = decompose_module(act)
    assert [c.dim for c in comps] == [4]
    i1 = _ideal_positions(s, "I1")
    i2 = _ideal_positions(s, "I2")
    assert classify_type(comps[0], act, i1, i2) == 2


def test_standard_decomposition_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_example_decomposition(1, 1)
    with pytest.raises(ValueError):
        build_example_decomposition(2, 0)
    with pytest.raises(ValueError):
        build_example_decomposition(3, 3)


def test_standard_decomposition_is_deterministic():
    a = build_example_decomposition(2, 1)
    b = build_example_decomposition(2, 1)
    for x, y in zip(a, b):
        assert x.basis == y.basis
    assert verify_sum(*a) == verify_sum(*b)


# ---------------------------------------------------------------------------
# verify_sum edge cases


def _even_part_algebra(s):
    basis = tuple(s.basis[i] for i in s.even_indices)
    return Superalgebra(
        label=s.label + "-even", block_sizes=s.block_sizes, basis=basis,
        even_indices=tuple(range(len(basis))), odd_indices=())


def test_verify_sum_rejects_even_only_cover():
    s, _, _ = build_example_decomposition(2, 1)
    e = _even_part_algebra(s)
    report = verify_sum(s, e, e)
    assert report.verdict.startswith("failed(")
    assert "sum rank 9" in report.verdict
    assert report.closure_k and report.closure_l
    assert report.intersection_dim == 9


def test_verify_sum_flags_improper_summand():
    s, _, ll = build_example_decomposition(2, 1)
    report = verify_sum(s, s, ll)
    assert report.verdict == "exact-sum"
    assert "K is not proper" in report.notes


def test_verify_sum_rejects_foreign_elements():
    s, kk, ll = build_example_decomposition(2, 1)
    split = build_osp(4, 1, form="split")
    with pytest.raises(ValueError):
        verify_sum(s, split, ll)
    other = build_example_decomposition(3, 1)[0]
    with pytest.raises(ValueError):
        verify_sum(s, other, ll)


def test_verify_sum_report_shape():
    s, kk, ll = build_example_decomposition(2, 1)
    report = verify_sum(s, kk, ll)
    assert isinstance(report, DecompositionReport)
    assert report.exact
    assert report.dims == {"S": (9, 8), "K": (6, 6), "L": (4, 4)}
    assert report.sum_rank == 17
    assert report.fingerprint_l == expected_sl_fingerprint(2, 1)


# ---------------------------------------------------------------------------
# feasibility screen


def _screen(m, n, fam_k, fam_l):
    return feasibility_screen(m, n, CandidatePair(fam_k, fam_l, (m, n)))


def test_screen_survivor():
    v = _screen(6, 2, ("osp", 5, 2), ("sl", 3, 2))
    assert v.survives
    assert v.rule == ""


def test_screen_rules_fire_in_order():
    assert _screen(6, 2, ("sl", 4, 2), ("sl", 3, 2)).rule == "no-sl-sl-sum"
    assert _screen(6, 2, ("osp", 5, 2), ("osp", 3, 1)).rule == "no-osp-osp-sum"
    assert _screen(5, 2, ("osp", 4, 2), ("sl", 2, 1)).rule == "ortho-dimension-odd"
    assert _screen(6, 2, ("osp", 4, 2), ("sl", 3, 2)).rule == "ortho-part-mismatch"
    assert _screen(6, 2, ("osp", 5, 1), ("sl", 3, 2)).rule == "symplectic-part-mismatch"
    assert _screen(6, 2, ("osp", 5, 2), ("sl", 4, 2)).rule == "sl-params-mismatch"
    assert _screen(4, 2, ("osp", 3, 2), ("sl", 2, 2)).rule == "sl-equal-params-not-basic"


def test_screen_not_proper_guard():
    v = _screen(4, 1, ("osp", 4, 1), ("sl", 2, 1))
    assert v.rule == "not-proper"
    v2 = _screen(4, 1, ("osp", 3, 1), ("sl", 5, 4))
    assert v2.rule == "not-proper"


def test_screen_rejects_malformed_candidates():
    with pytest.raises(ValueError):
        _screen(6, 2, ("so", 5, 2), ("sl", 3, 2))
    with pytest.raises(ValueError):
        _screen(6, 2, ("osp", 0, 2), ("sl", 3, 2))


def test_family_dim_arithmetic():
    assert family_graded_dims(("osp", 5, 2)) == (20, 20)
    assert family_graded_dims(("sl", 3, 2)) == (12, 12)
    assert family_graded_dims(("sl", 2, 2)) == (7, 8)
    with pytest.raises(ValueError):
        family_graded_dims(("spin", 3, 2))


def test_screen_survivors_across_desk_grid():
    for m in range(2, 9):
        for n in range(1, 4):
            survivors = screen_survivors(m, n)
            if m % 2 == 0 and m // 2 != n:
                a, b = sorted((m // 2, n), reverse=True)
                assert [(p.family_k, p.family_l) for p in survivors] == [
                    (("osp", m - 1, n), ("sl", a, b))]
            else:
                assert survivors == []


def test_enumerate_candidates_covers_the_realized_pair():
    pairs = enumerate_candidates(6, 2)
    assert CandidatePair(("osp", 5, 2), ("sl", 3, 2), (6, 2)) in pairs
    assert all(p.target == (6, 2) for p in pairs)
