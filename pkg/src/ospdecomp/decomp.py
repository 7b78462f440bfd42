"""Sum decompositions S = K + L and the feasibility screen.

Three constructions are provided exactly:

* the two classical even decompositions of split orthogonal algebras
  (``onishchik_sl``, ``onishchik_sp``), with the middle algebra realized
  as the stabilizer of the non-isotropic vector e_0 + e_h;
* the orthosymplectic decomposition ``build_example_decomposition``:
  S is the identity-form osp(2k,2n), K the subalgebra with first row
  and column zero, and L a copy of sl(k,n) whose orthogonal block mixes
  the doubled standard realization through the hyperbolic-to-identity
  change of basis (block entries pick up factors of i; all scalars stay
  Gaussian rational).

``verify_sum`` certifies a sum claim: ranks, intersection dimension,
closure of both summands, and structure fingerprints.  The screen
applies the necessary conditions for a candidate pair of families and
either eliminates it with a citing rule id or lets it survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Echelon, ExactMatrix, Subspace, invert, nullspace_sparse
from .scalars import gr
from .structure import StructureFingerprint, fingerprint
from .superalg import (
    EVEN,
    ODD,
    BilinearFormSpec,
    CartanBasis,
    GradedMatrix,
    Superalgebra,
    build_orthogonal,
    build_osp,
    build_symplectic,
    cartan_sl,
    is_closed_subalgebra,
)

HALF = gr(Fraction(1, 2))
I_UNIT = gr(0, 1)


@dataclass(frozen=True)
class DecompositionReport:
    dims: dict
    sum_rank: int
    intersection_dim: int
    closure_k: bool
    closure_l: bool
    fingerprint_k: StructureFingerprint
    fingerprint_l: StructureFingerprint
    verdict: str
    notes: str = ""

    @property
    def exact(self) -> bool:
        return self.verdict == "exact-sum"


@dataclass(frozen=True)
class CandidatePair:
    """Two candidate subalgebra families against a target osp(m,2n).

    Families are tagged tuples: ("osp", p, q) for osp(p,2q) and
    ("sl", s, l) for sl(s,l).
    """

    family_k: tuple
    family_l: tuple
    target: tuple


@dataclass(frozen=True)
class ScreenVerdict:
    status: str  # "survives" | "eliminated"
    rule: str
    detail: str

    @property
    def survives(self) -> bool:
        return self.status == "survives"


# ---------------------------------------------------------------------------
# classical even decompositions


def _stabilizer_form_basis(h: int, sizes) -> list:
    """Elements of the split o(2h) vanishing on e_0 + e_h: rows x, y of
    length h-1 threaded through the first columns, a free (h-1)-block,
    and two skew blocks."""
    out = []
    u = lambda i: 1 + i
    v = lambda i: h + 1 + i
    for i in range(h - 1):
        out.append(GradedMatrix.from_sparse(sizes, EVEN, [
            (u(i), 0, 1), (u(i), h, -1), (0, v(i), 1), (h, v(i), -1)]))
    for i in range(h - 1):
        out.append(GradedMatrix.from_sparse(sizes, EVEN, [
            (0, u(i), 1), (h, u(i), -1), (v(i), 0, 1), (v(i), h, -1)]))
    for r in range(h - 1):
        for c in range(h - 1):
            out.append(GradedMatrix.from_sparse(sizes, EVEN, [
                (u(r), u(c), 1), (v(c), v(r), -1)]))
    for r in range(h - 1):
        for c in range(r + 1, h - 1):
            out.append(GradedMatrix.from_sparse(sizes, EVEN, [
                (u(r), v(c), 1), (u(c), v(r), -1)]))
    for r in range(h - 1):
        for c in range(r + 1, h - 1):
            out.append(GradedMatrix.from_sparse(sizes, EVEN, [
                (v(r), u(c), 1), (v(c), u(r), -1)]))
    return out


def _doubled_matrix(y: ExactMatrix, sizes, half: int) -> GradedMatrix:
    items = list(y.nonzero_items())
    for r, c, val in y.nonzero_items():
        items.append((half + c, half + r, -val))
    return GradedMatrix.from_sparse(sizes, EVEN, items)


def onishchik_sl(k: int):
    """Split o(2k) as the sum of the e_0+e_k stabilizer (an o(2k-1)) and
    the doubled special-linear algebra {diag(Y, -Y^t) : tr Y = 0}."""
    if k < 2:
        raise ValueError("need k >= 2")
    s = build_orthogonal(2 * k, form="split")
    sizes = (2 * k, 0)
    n_basis = _stabilizer_form_basis(k, sizes)
    n = Superalgebra(
        label=f"o({2 * k - 1})",
        block_sizes=sizes,
        basis=tuple(n_basis),
        even_indices=tuple(range(len(n_basis))),
        odd_indices=(),
        ideals={"I1": tuple(range(len(n_basis)))},
    )
    m_basis = []
    for r in range(k):
        for c in range(k):
            if r != c:
                m_basis.append(_doubled_matrix(
                    ExactMatrix.from_sparse(k, k, [(r, c, 1)]), sizes, k))
    for i in range(k - 1):
        m_basis.append(_doubled_matrix(
            ExactMatrix.from_sparse(k, k, [(i, i, 1), (i + 1, i + 1, -1)]),
            sizes, k))
    m = Superalgebra(
        label=f"sl({k})",
        block_sizes=sizes,
        basis=tuple(m_basis),
        even_indices=tuple(range(len(m_basis))),
        odd_indices=(),
        ideals={"I1": tuple(range(len(m_basis)))},
        cartans={"I1": cartan_sl(k, 0, 2 * k)},
    )
    return s, n, m


def onishchik_sp(k: int):
    """Split o(4k) as the sum of an o(4k-1) stabilizer and the doubled
    symplectic algebra {diag(Y, -Y^t) : Y symplectic of rank k}."""
    if k < 1:
        raise ValueError("need k >= 1")
    s = build_orthogonal(4 * k, form="split")
    sizes = (4 * k, 0)
    n_basis = _stabilizer_form_basis(2 * k, sizes)
    n = Superalgebra(
        label=f"o({4 * k - 1})",
        block_sizes=sizes,
        basis=tuple(n_basis),
        even_indices=tuple(range(len(n_basis))),
        odd_indices=(),
        ideals={"I1": tuple(range(len(n_basis)))},
    )
    sp = build_symplectic(k)
    m_basis = [_doubled_matrix(g.matrix, sizes, 2 * k) for g in sp.basis]
    m = Superalgebra(
        label=f"sp({2 * k})",
        block_sizes=sizes,
        basis=tuple(m_basis),
        even_indices=tuple(range(len(m_basis))),
        odd_indices=(),
        ideals={"I1": tuple(range(len(m_basis)))},
    )
    return s, n, m


# ---------------------------------------------------------------------------
# the hyperbolic-to-identity change of basis


def mixing_matrix(k: int, two_n: int) -> ExactMatrix:
    """Block diagonal (unnormalized) change of basis: [[I, I], [iI, -iI]]
    on the 2k orthogonal coordinates, identity on the rest."""
    items = []
    for i in range(k):
        items.extend([
            (i, i, gr(1)), (i, k + i, gr(1)),
            (k + i, i, I_UNIT), (k + i, k + i, -I_UNIT)])
    for j in range(two_n):
        items.append((2 * k + j, 2 * k + j, gr(1)))
    return ExactMatrix.from_sparse(2 * k + two_n, 2 * k + two_n, items)


def conjugate_to_identity(algebra: Superalgebra) -> Superalgebra:
    """Conjugate every basis element by the mixing matrix.

    A graded automorphism of the ambient gl: brackets and parities are
    preserved exactly.  It maps the split orthogonal block onto the
    identity-form one (the preserved symmetric form becomes a scalar
    multiple of the identity), so stabilizer shapes like "first row and
    column zero" appear in the image.
    """
    m, t = algebra.block_sizes
    if m % 2:
        raise ValueError("orthogonal block must have even size")
    q = mixing_matrix(m // 2, t)
    qinv = invert(q)
    new_basis = tuple(
        GradedMatrix(q @ g.matrix @ qinv, algebra.block_sizes, g.parity)
        for g in algebra.basis)
    conj = q if algebra.conjugation is None else q @ algebra.conjugation
    return Superalgebra(
        label=algebra.label,
        block_sizes=algebra.block_sizes,
        basis=new_basis,
        even_indices=algebra.even_indices,
        odd_indices=algebra.odd_indices,
        form=None,
        ideals=dict(algebra.ideals),
        cartans=dict(algebra.cartans),
        conjugation=conj,
    )


# ---------------------------------------------------------------------------
# the orthosymplectic decomposition


def _mixed_ortho_items(x: ExactMatrix, k: int) -> list:
    """2k x 2k orthogonal block of the image of a special-linear x:
    (1/2) [[x - x^t, -i(x + x^t)], [i(x + x^t), x - x^t]]."""
    skew = (x - x.transpose()).scale(HALF)
    sym = (x + x.transpose()).scale(HALF * I_UNIT)
    items = []
    for r, c, v in skew.nonzero_items():
        items.extend([(r, c, v), (k + r, k + c, v)])
    for r, c, v in sym.nonzero_items():
        items.extend([(r, k + c, -v), (k + r, c, v)])
    return items


def _sl_copy_basis(k: int, n: int) -> tuple:
    """Basis of the form-realized sl(k,n) inside identity-form osp(2k,2n),
    grouped as (first ideal, second ideal, center, odd part)."""
    sizes = (2 * k, 2 * n)
    offset = 2 * k

    def even(items):
        return GradedMatrix.from_sparse(sizes, EVEN, items)

    i1 = []
    for r in range(k):
        for c in range(k):
            if r != c:
                i1.append(even(_mixed_ortho_items(
                    ExactMatrix.from_sparse(k, k, [(r, c, 1)]), k)))
    for i in range(k - 1):
        i1.append(even(_mixed_ortho_items(
            ExactMatrix.from_sparse(k, k, [(i, i, 1), (i + 1, i + 1, -1)]), k)))

    def doubled_symp(y: ExactMatrix):
        items = [(offset + r, offset + c, v) for r, c, v in y.nonzero_items()]
        items += [(offset + n + c, offset + n + r, -v)
                  for r, c, v in y.nonzero_items()]
        return items

    i2 = []
    for r in range(n):
        for c in range(n):
            if r != c:
                i2.append(even(doubled_symp(
                    ExactMatrix.from_sparse(n, n, [(r, c, 1)]))))
    for i in range(n - 1):
        i2.append(even(doubled_symp(
            ExactMatrix.from_sparse(n, n, [(i, i, 1), (i + 1, i + 1, -1)]))))

    center_items = _mixed_ortho_items(
        ExactMatrix.identity(k).scale(gr(n)), k)
    center_items += doubled_symp(ExactMatrix.identity(n).scale(gr(k)))
    center = [even(center_items)]

    odd = []
    for r in range(k):
        for c in range(n):
            odd.append(GradedMatrix.from_sparse(sizes, ODD, [
                (r, offset + c, gr(1)),
                (k + r, offset + c, I_UNIT),
                (offset + n + c, r, gr(-1)),
                (offset + n + c, k + r, -I_UNIT)]))
    for r in range(n):
        for c in range(k):
            odd.append(GradedMatrix.from_sparse(sizes, ODD, [
                (c, offset + n + r, gr(1)),
                (k + c, offset + n + r, -I_UNIT),
                (offset + r, c, gr(1)),
                (offset + r, k + c, -I_UNIT)]))
    return i1, i2, center, odd


def _doubled_cartan(rank: int, offsets, total: int, template: CartanBasis) -> CartanBasis:
    """Cartan family acting as h on one block and -h^t on its partner."""
    els = []
    for i in range(rank - 1):
        a, b = offsets
        els.append(ExactMatrix.from_sparse(total, total, [
            (a + i, a + i, 1), (a + i + 1, a + i + 1, -1),
            (b + i, b + i, -1), (b + i + 1, b + i + 1, 1)]))
    return CartanBasis(family=template.family, elements=tuple(els),
                       to_labels=template.to_labels, order_key=template.order_key)


def build_example_decomposition(k: int, n: int):
    """(S, K, L) with S the identity-form osp(2k,2n), K the first-row-and-
    column-zero subalgebra, and L the sl(k,n) copy whose odd block pairs
    each parameter with i times itself.

    The sl(n,n) exclusion applies: k = n is rejected.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    if k == n:
        raise ValueError("k = n gives sl(n,n), which is not basic simple")
    s = build_osp(2 * k, n, form="identity")
    total = 2 * k + 2 * n

    small = build_osp(2 * k - 1, n, form="identity")
    k_basis = tuple(
        GradedMatrix.from_sparse(
            (2 * k, 2 * n), g.parity,
            [(r + 1, c + 1, v) for r, c, v in g.matrix.nonzero_items()])
        for g in small.basis)
    k_alg = Superalgebra(
        label=f"osp({2 * k - 1}|{2 * n})",
        block_sizes=(2 * k, 2 * n),
        basis=k_basis,
        even_indices=small.even_indices,
        odd_indices=small.odd_indices,
        form=BilinearFormSpec("identity", 2 * k, n),
        ideals=dict(small.ideals),
    )

    i1, i2, center, odd = _sl_copy_basis(k, n)
    l_basis = tuple(i1 + i2 + center + odd)
    n_i1, n_i2 = len(i1), len(i2)
    even_count = n_i1 + n_i2 + 1
    cartans = {}
    if k >= 2:
        cartans["I1"] = _doubled_cartan(k, (0, k), total, cartan_sl(k, 0, total))
    if n >= 2:
        cartans["I2"] = _doubled_cartan(n, (2 * k, 2 * k + n), total,
                                        cartan_sl(n, 2 * k, total))
    l_alg = Superalgebra(
        label=f"sl({k}|{n})",
        block_sizes=(2 * k, 2 * n),
        basis=l_basis,
        even_indices=tuple(range(even_count)),
        odd_indices=tuple(range(even_count, len(l_basis))),
        form=BilinearFormSpec("identity", 2 * k, n),
        ideals={
            "I1": tuple(range(n_i1)),
            "I2": tuple(range(n_i1, n_i1 + n_i2)),
            "center": (n_i1 + n_i2,),
        },
        cartans=cartans,
        conjugation=mixing_matrix(k, 2 * n),
    )
    return s, k_alg, l_alg


def first_line_solution_set(s: Superalgebra):
    """Span of {Z in span(S) : first row and first column zero}, as a
    subspace of vectorized ambient matrices.  Solved as a nullspace of
    linear constraints on the basis coefficients."""
    total = sum(s.block_sizes)
    rows = []
    for coord in range(total):
        row_r = {}
        row_c = {}
        for idx, g in enumerate(s.basis):
            v1 = g.matrix[0, coord]
            if v1:
                row_r[idx] = v1
            v2 = g.matrix[coord, 0]
            if v2:
                row_c[idx] = v2
        if row_r:
            rows.append(row_r)
        if row_c:
            rows.append(row_c)
    coeffs = nullspace_sparse(rows, s.dim)
    solutions = []
    for combo in coeffs.sparse_rows():
        mat = ExactMatrix.zeros(total, total)
        for idx, c in combo.items():
            mat = mat + s.basis[idx].matrix.scale(c)
        solutions.append(mat.vectorize())
    return Subspace.from_vectors(total * total, solutions)


# ---------------------------------------------------------------------------
# sum verification


def verify_sum(s: Superalgebra, k: Superalgebra, l: Superalgebra,
               seed: int = 0) -> DecompositionReport:
    """Certify S = K + L as vector spaces with closed summands.

    The verdict is "exact-sum" iff the stacked bases of K and L span all
    of S and both closure checks pass; properness of the summands is
    reported in the notes, not in the verdict.
    """
    if k.block_sizes != s.block_sizes or l.block_sizes != s.block_sizes:
        raise ValueError("ambient block sizes differ")
    solver = s.span_solver()
    for name, sub in (("K", k), ("L", l)):
        for g in sub.basis:
            if solver.coordinates(g.vectorize()) is None:
                raise ValueError(f"{name} basis leaves the span of S")
    ech = Echelon()
    for g in k.basis:
        ech.insert(g.vectorize())
    for g in l.basis:
        ech.insert(g.vectorize())
    sum_rank = ech.dim
    intersection_dim = k.dim + l.dim - sum_rank
    closure_k = is_closed_subalgebra(list(k.basis)).closed
    closure_l = is_closed_subalgebra(list(l.basis)).closed
    fp_k = fingerprint(k, seed=seed)
    fp_l = fingerprint(l, seed=seed)
    reasons = []
    if sum_rank != s.dim:
        reasons.append(f"sum rank {sum_rank} < dim S = {s.dim}")
    if not closure_k:
        reasons.append("K is not closed")
    if not closure_l:
        reasons.append("L is not closed")
    verdict = "exact-sum" if not reasons else "failed(" + "; ".join(reasons) + ")"
    notes = []
    if k.dim >= s.dim:
        notes.append("K is not proper")
    if l.dim >= s.dim:
        notes.append("L is not proper")
    return DecompositionReport(
        dims={"S": s.graded_dims, "K": k.graded_dims, "L": l.graded_dims},
        sum_rank=sum_rank,
        intersection_dim=intersection_dim,
        closure_k=closure_k,
        closure_l=closure_l,
        fingerprint_k=fp_k,
        fingerprint_l=fp_l,
        verdict=verdict,
        notes="; ".join(notes),
    )


# ---------------------------------------------------------------------------
# the feasibility screen


def family_graded_dims(family: tuple) -> tuple:
    """(even, odd) dimensions of a candidate family."""
    tag = family[0]
    if tag == "osp":
        _, p, q = family
        return (p * (p - 1) // 2 + q * (2 * q + 1), 2 * p * q)
    if tag == "sl":
        _, a, b = family
        even = a * a + b * b - 1 if a != b else 2 * a * a - 1
        return (even, 2 * a * b)
    raise ValueError(f"unknown family tag {family[0]!r}")


def _family_total(family: tuple) -> int:
    e, o = family_graded_dims(family)
    return e + o


def _validate_family(family: tuple) -> None:
    if len(family) != 3 or family[0] not in ("osp", "sl"):
        raise ValueError(f"malformed candidate family {family!r}")
    if family[0] == "osp" and (family[1] < 1 or family[2] < 1):
        raise ValueError(f"non-positive parameters in {family!r}")
    if family[0] == "sl" and (family[1] < 1 or family[2] < 1):
        raise ValueError(f"non-positive parameters in {family!r}")


def feasibility_screen(m: int, n: int, pair: CandidatePair) -> ScreenVerdict:
    """Necessary conditions, applied in a fixed order; each elimination
    cites a rule id.  Surviving pairs at desk scale are exactly the
    realized family (orthosymplectic in one dimension less, special
    linear on half the orthogonal size)."""
    _validate_family(pair.family_k)
    _validate_family(pair.family_l)
    s_even = m * (m - 1) // 2 + n * (2 * n + 1)
    s_odd = 2 * m * n
    s_dim = s_even + s_odd

    for fam in (pair.family_k, pair.family_l):
        if _family_total(fam) >= s_dim:
            return ScreenVerdict(
                "eliminated", "not-proper",
                f"dim {fam} = {_family_total(fam)} >= dim target = {s_dim}")

    tags = (pair.family_k[0], pair.family_l[0])
    if tags == ("sl", "sl"):
        return ScreenVerdict("eliminated", "no-sl-sl-sum",
                             "two special-linear summands cannot cover")
    if tags == ("osp", "osp"):
        return ScreenVerdict("eliminated", "no-osp-osp-sum",
                             "two orthosymplectic summands cannot cover")
    if m % 2:
        return ScreenVerdict("eliminated", "ortho-dimension-odd",
                             f"orthogonal dimension m = {m} is odd")

    osp_fam = pair.family_k if pair.family_k[0] == "osp" else pair.family_l
    sl_fam = pair.family_l if osp_fam is pair.family_k else pair.family_k
    _, p, q = osp_fam
    _, s_par, l_par = sl_fam
    if p != m - 1:
        return ScreenVerdict("eliminated", "ortho-part-mismatch",
                             f"p = {p} != m - 1 = {m - 1}")
    if q != n:
        return ScreenVerdict("eliminated", "symplectic-part-mismatch",
                             f"q = {q} != n = {n}")
    if {s_par, l_par} != {m // 2, n}:
        return ScreenVerdict(
            "eliminated", "sl-params-mismatch",
            f"{{{s_par},{l_par}}} != {{{m // 2},{n}}}")
    if s_par == l_par:
        return ScreenVerdict("eliminated", "sl-equal-params-not-basic",
                             f"sl({s_par},{l_par}) has a one-dimensional center")

    k_even, k_odd = family_graded_dims(osp_fam)
    l_even, l_odd = family_graded_dims(sl_fam)
    if k_even + l_even < s_even or k_odd + l_odd < s_odd:
        return ScreenVerdict(
            "eliminated", "graded-dimension-deficit",
            f"even {k_even}+{l_even} vs {s_even}, odd {k_odd}+{l_odd} vs {s_odd}")
    return ScreenVerdict(
        "survives", "",
        f"candidate pair matches the realized family at (m,n)=({m},{n})")


def enumerate_candidates(m: int, n: int) -> list:
    """All unordered family pairs with parameters bounded by the target."""
    families = []
    for p in range(1, m + 1):
        for q in range(1, n + 1):
            families.append(("osp", p, q))
    for a in range(1, m + n + 1):
        for b in range(1, a + 1):
            families.append(("sl", a, b))
    out = []
    for i, fam_k in enumerate(families):
        for fam_l in families[i:]:
            out.append(CandidatePair(family_k=fam_k, family_l=fam_l,
                                     target=(m, n)))
    return out


def screen_survivors(m: int, n: int) -> list:
    return [pair for pair in enumerate_candidates(m, n)
            if feasibility_screen(m, n, pair).survives]
