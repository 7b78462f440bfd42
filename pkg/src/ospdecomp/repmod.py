"""Finite-dimensional module machinery over the even parts.

A ``ModuleAction`` is a list of acting matrices (one per basis element of
the acting Lie algebra) on a coordinate space F^d over the Gaussian
rationals.  ``decompose_module`` splits such a module into irreducible
invariant subspaces without polynomial factorization:

1. greedy cover: generate invariant subspaces by spinning candidate
   vectors (coordinate vectors, then small {1,-1,i,-i} combinations,
   then seeded random ones) and keep the independent ones;
2. when a piece admits no proper spin, compute the commutant through the
   generator of a full spin: a one-dimensional commutant certifies
   irreducibility, otherwise some commutant element has a rational
   eigenvalue whose stable kernel/image pair (Fitting) splits the piece;
3. complements fall back to the invariant-form orthogonal complement
   when the action preserves a form, then to an equivariant-projection
   solve on small spaces.

The certification in step 2 assumes a completely reducible input, which
holds for every action produced in this package; genuinely
non-semisimple inputs surface as ``SplittingError`` from step 3.

Weights are read through a ``CartanBasis``: its ``order_key`` compares
raw simultaneous-eigenvalue tuples in epsilon coordinates (plain
lexicographic order on Dynkin labels picks a non-maximal vector already
for the wedge square of the natural sl(4) module), and ``to_labels``
converts the chosen tuple to fundamental-weight coordinates.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import (
    Echelon,
    ExactMatrix,
    SparseVec,
    SpanSolver,
    Subspace,
    invert,
    nullspace,
    nullspace_sparse,
    rref,
    subspace_intersect,
)
from .scalars import GaussianRational, gr
from .superalg import CartanBasis, GradedMatrix, Superalgebra


class SplittingError(Exception):
    """No invariant complement found: the input is not completely reducible
    (or needs scalars beyond Q(i))."""


@dataclass(frozen=True)
class ModuleAction:
    """Matrices of a Lie-algebra action on F^d.

    ``acting`` holds the acting basis elements as plain matrices in their
    own ambient space; it is only consulted to validate that the action is
    a homomorphism and to restrict to sub-families by index.
    """

    acting: tuple
    actions: tuple
    dim: int
    invariant_form: Optional[ExactMatrix] = None

    def __post_init__(self):
        if len(self.acting) != len(self.actions):
            raise ValueError("acting basis and action matrices differ in length")
        for a in self.actions:
            if a.rows != self.dim or a.cols != self.dim:
                raise ValueError("action matrix size differs from module dimension")

    def validate(self) -> None:
        """Check the homomorphism property on all basis pairs."""
        if not self.acting:
            return
        solver = SpanSolver([a.vectorize() for a in self.acting])
        for i, x in enumerate(self.acting):
            for j, y in enumerate(self.acting):
                if j < i:
                    continue
                br = x @ y - y @ x
                coords = solver.coordinates(br.vectorize())
                if coords is None:
                    raise ValueError("acting family is not closed under brackets")
                expect = ExactMatrix.zeros(self.dim, self.dim)
                for t, c in coords.items():
                    expect = expect + self.actions[t].scale(c)
                got = self.actions[i] @ self.actions[j] - self.actions[j] @ self.actions[i]
                if got != expect:
                    raise ValueError(
                        f"action is not a homomorphism on basis pair ({i},{j})")

    def restricted_family(self, indices: Sequence[int]) -> "ModuleAction":
        """Sub-action of a subset of the acting basis (e.g. one ideal)."""
        return ModuleAction(
            acting=tuple(self.acting[i] for i in indices),
            actions=tuple(self.actions[i] for i in indices),
            dim=self.dim,
            invariant_form=self.invariant_form,
        )


@dataclass(frozen=True)
class ModuleComponent:
    subspace: Subspace
    type_tag: Optional[int] = None
    highest_weight: Optional[tuple] = None

    @property
    def dim(self) -> int:
        return self.subspace.dim


@dataclass(frozen=True)
class ProjectionView:
    """Blocks of odd elements mapping a V-component into a W-component,
    one matrix per supplied odd element, in the components' bases."""

    source: int
    target: int
    matrices: tuple

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.matrices)


# ---------------------------------------------------------------------------
# spinning and the greedy cover


def spin(actions: Sequence[ExactMatrix], v: SparseVec, dim: int) -> Subspace:
    """Smallest invariant subspace containing v."""
    ech = Echelon()
    queue = [dict(v)]
    while queue and ech.dim < dim:
        w = queue.pop()
        if ech.insert(w) is None:
            continue
        for a in actions:
            queue.append(a.apply_sparse(w))
    return Subspace._from_echelon(dim, ech)


def _spin_with_words(actions, v, dim):
    """Spin that also records, for each basis vector it keeps, the product
    of action matrices mapping the generator to it."""
    ech = Echelon()
    kept: list[tuple[SparseVec, ExactMatrix]] = []
    queue = deque([(dict(v), None, None)])
    while queue and ech.dim < dim:
        w, parent, ai = queue.popleft()
        if ech.insert(dict(w)) is None:
            continue
        word = ExactMatrix.identity(dim) if parent is None else actions[ai] @ kept[parent][1]
        kept.append((w, word))
        me = len(kept) - 1
        for k, a in enumerate(actions):
            queue.append((a.apply_sparse(w), me, k))
    return kept, Subspace._from_echelon(dim, ech)


def _candidate_vectors(dim: int, seed: int):
    """Deterministic stream of spin candidates."""
    for i in range(dim):
        yield {i: gr(1)}
    iu = gr(0, 1)
    cap = min(dim, 12)
    for r in range(cap):
        for s in range(r + 1, cap):
            yield {r: gr(1), s: iu}
            yield {r: gr(1), s: -iu}
            yield {r: gr(1), s: gr(1)}
            yield {r: gr(1), s: gr(-1)}
    rng = random.Random(seed)
    coeffs = (gr(1), gr(-1), iu, -iu)
    for _ in range(60 + 4 * dim):
        support = rng.sample(range(dim), k=min(dim, rng.randint(2, 4)))
        yield {p: coeffs[rng.randrange(4)] for p in sorted(support)}


def _restrict_matrix(a: ExactMatrix, space: Subspace) -> ExactMatrix:
    """Matrix of a on an invariant subspace, in the subspace's RREF basis."""
    cols = []
    for row in space.sparse_rows():
        img = a.apply_sparse(row)
        coords = space.coordinates_of(img)
        if coords is None:
            raise ValueError("subspace is not invariant")
        cols.append(coords)
    d = space.dim
    items = [(r, c, cols[c][r]) for c in range(d) for r in range(d) if cols[c][r]]
    return ExactMatrix.from_sparse(d, d, items)


def _restrict_form(form: ExactMatrix, space: Subspace) -> Optional[ExactMatrix]:
    b = space.basis_matrix()
    restricted = b @ form @ b.transpose()
    # only useful if it stays nondegenerate
    if rref(restricted).rank < space.dim:
        return None
    return restricted


def _lift(sub: Subspace, space: Subspace) -> Subspace:
    """Map a subspace given in ``space``-basis coordinates back to the
    ambient coordinates of ``space``."""
    parent_rows = space.sparse_rows()
    out = []
    for row in sub.sparse_rows():
        acc: SparseVec = {}
        for j, c in row.items():
            for p, v in parent_rows[j].items():
                acc[p] = acc.get(p, gr(0)) + c * v
        out.append({k: v for k, v in acc.items() if v})
    return Subspace.from_vectors(space.ambient_dim, out)


# ---------------------------------------------------------------------------
# commutant through a generator


def _generator_commutant(actions, kept, dim):
    """Commutant dimension and elements of a module spun to full by a
    generator.

    kept = [(basis vector, word matrix)] from _spin_with_words, spanning
    F^dim.  A commutant element T is determined by u = T(generator); u must
    satisfy, for every spin basis vector b_t = M_t(gen) and every acting a:
    rho_a M_t u = sum_s lambda_s M_s u where lambda are the coordinates of
    rho_a b_t in the spin basis.  A full constraint pass makes the converse
    exact, and an early nullity of 1 already certifies a scalar commutant.
    """
    solver = SpanSolver([w for w, _ in kept])
    ech = Echelon()
    nullity = dim

    def insert_rows(mat):
        nonlocal nullity
        for r in range(mat.rows):
            row = {c: mat[r, c] for c in range(mat.cols) if mat[r, c]}
            if row and ech.insert(row) is not None:
                nullity = dim - ech.dim

    for t, (b, word) in enumerate(kept):
        for k, a in enumerate(actions):
            img = a.apply_sparse(b)
            coords = solver.coordinates(img)
            assert coords is not None
            constraint = a @ word
            for s, lam in coords.items():
                constraint = constraint - kept[s][1].scale(lam)
            insert_rows(constraint)
            if nullity == 1:
                return 1, []
    # nullspace of the constraint system = admissible u vectors
    rows = [dict(r) for _, r in ech.sorted_rows()]
    uspace = nullspace_sparse(rows, dim)
    basis_mat = ExactMatrix.from_sparse(
        dim, dim, [(t, c, v) for t, (b, _) in enumerate(kept) for c, v in b.items()])
    binv = invert(basis_mat.transpose())
    out = []
    for u in uspace.sparse_rows():
        cols = []
        for _, word in kept:
            cols.append(word.apply_sparse(u))
        timage = ExactMatrix.from_sparse(
            dim, dim, [(r, t, col.get(r, gr(0))) for t, col in enumerate(cols)
                       for r in list(col)])
        t_mat = timage @ binv
        out.append(t_mat)
    return uspace.dim, out


def _rational_eigen_candidates(t_mat: ExactMatrix):
    """Deterministic candidate eigenvalues: numpy suggestions rounded to
    small Gaussian rationals, plus a small integer grid.  Every candidate
    is verified exactly by the caller."""
    seen = []

    def push(x: GaussianRational):
        if x not in seen:
            seen.append(x)

    try:
        import numpy as np

        arr = np.array([[complex(t_mat[r, c]) for c in range(t_mat.cols)]
                        for r in range(t_mat.rows)], dtype=complex)
        for z in np.linalg.eigvals(arr):
            for den in (1, 2, 3, 4, 6):
                re = Fraction(round(z.real * den), den)
                im = Fraction(round(z.imag * den), den)
                push(GaussianRational(re, im))
    except Exception:
        pass
    for v in range(-4, 5):
        push(gr(v))
        push(gr(0, v))
    return sorted(seen, key=lambda x: x.sort_key())


def _fitting_split(t_mat: ExactMatrix, lam: GaussianRational, dim: int):
    """Stable kernel / stable image of t_mat - lam; both invariant under
    anything commuting with t_mat."""
    w = t_mat - ExactMatrix.identity(dim).scale(lam)
    power = w
    prev_rank = -1
    for _ in range(dim):
        rank = dim - nullspace(power).dim
        if rank == prev_rank:
            break
        prev_rank = rank
        power = power @ w
    ker = nullspace(power)
    img = Subspace.from_vectors(dim, [power.column(c) for c in range(dim)])
    if ker.dim == 0 or ker.dim == dim:
        return None
    assert ker.dim + img.dim == dim
    return ker, img


def _projection_complement_dense(actions, space: Subspace, dim: int) -> Optional[Subspace]:
    """Equivariant projection onto ``space``: solve for Y (r x dim) with
    pi = B^T Y, pi B^T = B^T, pi a = a pi.  Dense; small spaces only."""
    r = space.dim
    if r * dim > 400:
        return None
    bt = space.basis_matrix().transpose()  # dim x r
    ncols = r * dim

    def yvar(i, j):
        return i * dim + j

    rows: list[SparseVec] = []
    rhs: list[GaussianRational] = []
    # pi b = b for each basis column b of bt: (B^T Y) bt = bt
    for c in range(r):
        for p in range(dim):
            row: SparseVec = {}
            for i in range(r):
                for j in range(dim):
                    coef = bt[p, i] * bt[j, c]
                    if coef:
                        row[yvar(i, j)] = row.get(yvar(i, j), gr(0)) + coef
            rows.append({k: v for k, v in row.items() if v})
            rhs.append(bt[p, c])
    # equivariance: B^T (Y a) - (a B^T) Y = 0 entrywise
    for a in actions:
        abt = a @ bt
        for p in range(dim):
            for q in range(dim):
                row = {}
                for i in range(r):
                    if bt[p, i]:
                        for j in range(dim):
                            if a[j, q]:
                                key = yvar(i, j)
                                row[key] = row.get(key, gr(0)) + bt[p, i] * a[j, q]
                    if abt[p, i]:
                        key = yvar(i, q)
                        row[key] = row.get(key, gr(0)) - abt[p, i]
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
                    rhs.append(gr(0))
    sol = _solve_affine(rows, rhs, ncols)
    if sol is None:
        return None
    y = ExactMatrix.from_sparse(r, dim, [(k // dim, k % dim, v) for k, v in sol.items()])
    pi = bt @ y
    comp = nullspace(pi)
    if comp.dim != dim - r:
        return None
    return comp


def _solve_affine(rows, rhs, ncols) -> Optional[SparseVec]:
    """One solution of a sparse affine system, or None."""
    ech = Echelon()
    aug = ncols  # slot for the right-hand side
    for row, b in zip(rows, rhs):
        v = dict(row)
        if b:
            v[aug] = -b
        ech.insert(v)
    # inconsistent iff a pivot sits on the augmented column
    if aug in ech.rows:
        return None
    sol: SparseVec = {}
    for piv, row in sorted(ech.rows.items(), reverse=True):
        acc = -row.get(aug, gr(0))
        for c, v in row.items():
            if c in (piv, aug):
                continue
            if c in sol and sol[c]:
                acc = acc - v * sol[c]
        if acc:
            sol[piv] = acc
    # free variables default to zero; verify
    for row, b in zip(rows, rhs):
        s = gr(0)
        for c, v in row.items():
            if c in sol:
                s = s + v * sol[c]
        if s != (b if isinstance(b, GaussianRational) else gr(b)):
            return None
    return sol


def _split_space(actions, form, dim, seed) -> list[Subspace]:
    """Decompose F^dim (local coordinates) into irreducible invariant
    subspaces.  Returns subspaces in the same coordinates."""
    if dim == 0:
        return []
    if dim == 1:
        return [Subspace.full(1)]
    pieces: list[Subspace] = []
    covered = Subspace.zero(dim)
    misses = 0
    for v in _candidate_vectors(dim, seed):
        if covered.dim == dim:
            break
        if covered.contains(v):
            continue
        u = spin(actions, v, dim)
        if covered.dim + u.dim == covered.sum(u).dim:
            pieces.append(u)
            covered = covered.sum(u)
            misses = 0
        else:
            misses += 1
            if misses > 15:
                break
    if covered.dim < dim:
        rest = _complement_of(actions, form, covered, dim)
        if rest is None:
            raise SplittingError(
                f"no invariant complement for a {covered.dim}-dim invariant "
                f"subspace of a {dim}-dim module")
        pieces.append(rest)
    out: list[Subspace] = []
    for u in pieces:
        if u.dim == dim:
            out.extend(_split_full(actions, form, dim, seed))
        else:
            sub_actions = [_restrict_matrix(a, u) for a in actions]
            sub_form = _restrict_form(form, u) if form is not None else None
            for piece in _split_space(sub_actions, sub_form, u.dim, seed):
                out.append(_lift(piece, u))
    return out


def _complement_of(actions, form, space: Subspace, dim: int) -> Optional[Subspace]:
    if form is not None:
        # orthogonal complement w.r.t. the invariant form
        rows = [form.apply_sparse(r) for r in space.sparse_rows()]
        perp = _nullspace_of_rows(rows, dim)
        if perp.dim == dim - space.dim and space.intersect(perp).dim == 0:
            return perp
    return _projection_complement_dense(actions, space, dim)


def _nullspace_of_rows(rows, ncols) -> Subspace:
    return nullspace_sparse(rows, ncols)


def _split_full(actions, form, dim, seed) -> list[Subspace]:
    """No candidate vector spins to a proper subspace: certify or split
    through the commutant."""
    gen = {0: gr(1)}
    kept, space = _spin_with_words(actions, gen, dim)
    if space.dim < dim:
        # the caller's cover used a later candidate; spin that one instead
        for v in _candidate_vectors(dim, seed):
            kept, space = _spin_with_words(actions, v, dim)
            if space.dim == dim:
                break
        else:
            raise SplittingError("no generator spins to the full module")
    cdim, elements = _generator_commutant(actions, kept, dim)
    if cdim == 1:
        return [Subspace.full(dim)]
    ident = ExactMatrix.identity(dim)
    for t_mat in elements:
        if t_mat.is_zero():
            continue
        # skip scalar multiples of the identity
        pivot = next(iter(t_mat.nonzero_items()), None)
        if pivot is not None:
            r, c, v = pivot
            if r == c and t_mat == ident.scale(v):
                continue
        for lam in _rational_eigen_candidates(t_mat):
            split = _fitting_split(t_mat, lam, dim)
            if split is None:
                continue
            ker, img = split
            out = []
            for half in (ker, img):
                sub_actions = [_restrict_matrix(a, half) for a in actions]
                sub_form = _restrict_form(form, half) if form is not None else None
                for piece in _split_space(sub_actions, sub_form, half.dim, seed):
                    out.append(_lift(piece, half))
            return out
    raise SplittingError(
        f"commutant has dimension {cdim} but no rational eigenvalue splits "
        "the module over Q(i)")


def decompose_module(action: ModuleAction, seed: int = 0) -> list[ModuleComponent]:
    """Split a completely reducible module into irreducible components.

    Components are sorted by decreasing dimension, then by pivot columns,
    so output order is deterministic.
    """
    subs = _split_space(list(action.actions), action.invariant_form, action.dim, seed)
    subs.sort(key=lambda s: (-s.dim, s.pivots()))
    total = sum(s.dim for s in subs)
    if total != action.dim:
        raise SplittingError(f"components cover {total} of {action.dim} dimensions")
    return [ModuleComponent(subspace=s) for s in subs]


# ---------------------------------------------------------------------------
# natural actions, classification, weights


def restrict_natural_action(algebra: Superalgebra, which: str,
                            use_reference: bool = False,
                            validate: bool = True) -> ModuleAction:
    """Action of the even part on the orthogonal block (V) or the
    symplectic block (W).

    With ``use_reference`` the basis is first conjugated back through the
    algebra's recorded conjugation, landing in the realization whose
    Cartan elements act diagonally.
    """
    if which not in ("V", "W"):
        raise ValueError("which must be 'V' or 'W'")
    m, t = algebra.block_sizes
    mats = [algebra.basis[i].matrix for i in algebra.even_indices]
    conj = algebra.conjugation if use_reference else None
    if conj is not None:
        pinv = invert(conj)
        mats = [pinv @ g @ conj for g in mats]
    if which == "V":
        actions = [g.block(0, m, 0, m) for g in mats]
        d = m
    else:
        actions = [g.block(m, m + t, m, m + t) for g in mats]
        d = t
    form = None
    if algebra.form is not None:
        form = algebra.form.ortho_matrix() if which == "V" else (
            algebra.form.symp_matrix())
        if form.rows != d:
            form = None
        elif conj is not None:
            # pull the invariant form back to reference coordinates; only
            # valid when the conjugation does not mix the two blocks
            mixes = not (conj.block(0, m, m, m + t).is_zero()
                         and conj.block(m, m + t, 0, m).is_zero())
            if mixes:
                form = None
            else:
                pb = (conj.block(0, m, 0, m) if which == "V"
                      else conj.block(m, m + t, m, m + t))
                form = pb.transpose() @ form @ pb
    out = ModuleAction(acting=tuple(mats), actions=tuple(actions), dim=d,
                       invariant_form=form)
    if validate:
        out.validate()
    return out


def classify_type(component: ModuleComponent, action: ModuleAction,
                  i1_indices: Sequence[int], i2_indices: Sequence[int]) -> int:
    """Four-way tag by which of the two ideals act nontrivially:
    1 = neither, 2 = only the first, 3 = only the second, 4 = both."""

    def acts(indices) -> bool:
        for i in indices:
            a = action.actions[i]
            for row in component.subspace.sparse_rows():
                if a.apply_sparse(row):
                    return True
        return False

    first = acts(i1_indices)
    second = acts(i2_indices)
    if first and second:
        return 4
    if first:
        return 2
    if second:
        return 3
    return 1


def _diag_values(mat: ExactMatrix) -> Optional[list]:
    vals = []
    for r, c, v in mat.nonzero_items():
        if r != c:
            return None
    return [mat[i, i] for i in range(mat.rows)]


def _eigen_refine(block: Subspace, h: ExactMatrix, ambient: int):
    """Split an invariant block into eigenspaces of h; error when h is not
    diagonalizable on it."""
    diag = _diag_values(h)
    pieces = []
    if diag is not None:
        for lam in sorted(set(diag), key=lambda x: x.sort_key()):
            coords = [i for i, v in enumerate(diag) if v == lam]
            eig = Subspace.from_vectors(ambient, [{i: gr(1)} for i in coords])
            part = subspace_intersect(block, eig)
            if part.dim:
                pieces.append((lam, part))
    else:
        restricted = _restrict_matrix(h, block)
        d = block.dim
        found = 0
        for lam in _rational_eigen_candidates(restricted):
            ker = nullspace(restricted - ExactMatrix.identity(d).scale(lam))
            if ker.dim:
                pieces.append((lam, _lift(ker, block)))
                found += ker.dim
                if found == d:
                    break
    if sum(p.dim for _, p in pieces) != block.dim:
        raise ValueError(
            "Cartan elements are not simultaneously diagonalizable on the "
            "component; analyze the reference realization instead")
    return pieces


def highest_weight(component: ModuleComponent, cartan: CartanBasis,
                   cartan_actions: Sequence[ExactMatrix]) -> tuple:
    """Weight of the Borel-maximal weight vector, in fundamental-weight
    coordinates.  ``cartan_actions`` are the module-space matrices of
    ``cartan.elements``."""
    if len(cartan_actions) != cartan.rank:
        raise ValueError("one action matrix per Cartan element required")
    ambient = component.subspace.ambient_dim
    blocks: list[tuple[tuple, Subspace]] = [((), component.subspace)]
    for h in cartan_actions:
        refined = []
        for prefix, blk in blocks:
            for lam, piece in _eigen_refine(blk, h, ambient):
                refined.append((prefix + (lam,), piece))
        blocks = refined
    best = max(blocks, key=lambda pb: cartan.order_key(pb[0]))
    return cartan.to_labels(best[0])


# ---------------------------------------------------------------------------
# tensor constructions


def outer_tensor(u1: ModuleAction, u2: ModuleAction) -> ModuleAction:
    """Action of the direct sum of the two acting algebras on the tensor
    product: X(v) tensor w + v tensor Y(w).  Basis vector e_i tensor e_j
    maps to index i * dim(u2) + j."""
    d1, d2 = u1.dim, u2.dim
    s1 = u1.acting[0].rows if u1.acting else 0
    s2 = u2.acting[0].rows if u2.acting else 0
    i1, i2 = ExactMatrix.identity(d1), ExactMatrix.identity(d2)

    def embed(a, first):
        items = []
        for r, c, v in a.nonzero_items():
            if first:
                items.append((r, c, v))
            else:
                items.append((s1 + r, s1 + c, v))
        return ExactMatrix.from_sparse(s1 + s2, s1 + s2, items)

    acting = [embed(a, True) for a in u1.acting] + [embed(b, False) for b in u2.acting]
    actions = [a.kron(i2) for a in u1.actions] + [i1.kron(b) for b in u2.actions]
    form = None
    if u1.invariant_form is not None and u2.invariant_form is not None:
        form = u1.invariant_form.kron(u2.invariant_form)
    return ModuleAction(acting=tuple(acting), actions=tuple(actions), dim=d1 * d2,
                        invariant_form=form)


def tensor_square(u: ModuleAction) -> ModuleAction:
    """Restriction of the outer square to the diagonal copy of the acting
    algebra: a acts by a tensor 1 + 1 tensor a."""
    d = u.dim
    ident = ExactMatrix.identity(d)
    actions = [a.kron(ident) + ident.kron(a) for a in u.actions]
    form = None
    if u.invariant_form is not None:
        form = u.invariant_form.kron(u.invariant_form)
    return ModuleAction(acting=u.acting, actions=tuple(actions), dim=d * d,
                        invariant_form=form)


def burnside_irreducible(action: ModuleAction) -> bool:
    """Absolute irreducibility: the associative envelope of the action
    matrices reaches the full matrix algebra."""
    d = action.dim
    if d < 1:
        raise ValueError("empty module")
    target = d * d
    ech = Echelon()
    basis: list[ExactMatrix] = []

    def push(mat) -> bool:
        if ech.insert(mat.vectorize()) is not None:
            basis.append(mat)
            return True
        return False

    push(ExactMatrix.identity(d))
    for a in action.actions:
        push(a)
    frontier = list(basis)
    while frontier and ech.dim < target:
        new = []
        for e in frontier:
            for a in action.actions:
                prod = a @ e
                if push(prod):
                    new.append(prod)
                if ech.dim == target:
                    return True
        frontier = new
    return ech.dim == target


def tensor_square_decompose(family: str, k: int, seed: int = 0):
    """Components of the tensor square of the natural module, with highest
    weights, sorted by decreasing dimension.

    family 'sp' uses sp(2k) on F^{2k}; family 'o' uses the split-form o(k)
    on F^k (so the Cartan family acts diagonally).
    """
    from .superalg import build_orthogonal, build_symplectic

    if k < 2:
        raise ValueError("need k >= 2")
    if family == "sp":
        alg = build_symplectic(k)
        nat = restrict_natural_action(alg, "W", validate=False)
    elif family == "o":
        alg = build_orthogonal(k, form="split")
        nat = restrict_natural_action(alg, "V", validate=False)
    else:
        raise ValueError(f"unknown family {family!r}")
    cartan = alg.cartans["I1"]
    square = tensor_square(nat)
    d = nat.dim
    ident = ExactMatrix.identity(d)
    cart_actions = [h.kron(ident) + ident.kron(h) for h in cartan.elements]
    out = []
    for comp in decompose_module(square, seed=seed):
        w = highest_weight(comp, cartan, cart_actions)
        out.append((comp.dim, w))
    return out


# ---------------------------------------------------------------------------
# projections of the odd part


def projection_view(odd_elements: Sequence[GradedMatrix],
                    v_components: Sequence[ModuleComponent],
                    w_components: Sequence[ModuleComponent],
                    i: int, j: int) -> ProjectionView:
    """Blocks of the odd elements' lower-left rectangles mapping V-component
    i into W-component j, in the components' bases."""
    if not odd_elements:
        raise ValueError("need at least one odd element")
    if not (0 <= i < len(v_components)) or not (0 <= j < len(w_components)):
        raise IndexError("component index out of range")
    m, t = odd_elements[0].block_sizes
    w_rows = []
    w_owner = []
    for cj, comp in enumerate(w_components):
        for r in comp.subspace.sparse_rows():
            w_rows.append(r)
            w_owner.append(cj)
    solver = SpanSolver(w_rows)
    if solver.rank != t:
        raise ValueError("W components do not span the symplectic block")
    vi = v_components[i].subspace.sparse_rows()
    rows_j = [idx for idx, owner in enumerate(w_owner) if owner == j]
    mats = []
    for x in odd_elements:
        c_block = x.block_c()
        items = []
        for col, vrow in enumerate(vi):
            img = c_block.apply_sparse(vrow)
            coords = solver.coordinates(img)
            if coords is None:
                raise ValueError("odd image leaves the span of the W components")
            for rr, idx in enumerate(rows_j):
                val = coords.get(idx)
                if val:
                    items.append((rr, col, val))
        mats.append(ExactMatrix.from_sparse(len(rows_j), len(vi), items))
    return ProjectionView(source=i, target=j, matrices=tuple(mats))


def views_proportional(a: ProjectionView, b: ProjectionView) -> bool:
    """Entrywise proportionality of two stacked views over the same odd
    elements: exists a scalar c with a = c * b or b = c * a."""
    if len(a.matrices) != len(b.matrices):
        raise ValueError("views over different odd families")
    if a.is_zero() or b.is_zero():
        return True
    pairs = []
    for ma, mb in zip(a.matrices, b.matrices):
        if ma.rows != mb.rows or ma.cols != mb.cols:
            # different component dimensions: compare via flattening only
            # when shapes match; otherwise not proportional
            return False
        pairs.append((ma, mb))
    ratio = None
    for ma, mb in pairs:
        for r in range(ma.rows):
            for c in range(ma.cols):
                va, vb = ma[r, c], mb[r, c]
                if not va and not vb:
                    continue
                if not vb:
                    return False
                if ratio is None:
                    ratio = va / vb
                elif va != ratio * vb:
                    return False
    return True
