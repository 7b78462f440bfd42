"""Dense and sparse exact linear algebra over Q(i).

Two cooperating engines live here.  The public ``rref`` is a dense
fraction-free elimination (Bareiss-style, adapted to Q(i) by clearing row
denominators first) with a final pivot-normalization pass, so intermediate
entries stay Gaussian integers and coefficient growth is controlled.
``Subspace`` and the solvers run on a sparse incremental reduced-echelon
structure instead, because the spans met in practice (vectorized basis
matrices) are extremely sparse.  A property test pins both engines to the
same reduced row echelon form.

Vectorization convention: a p x q matrix flattens row-major, index
``r*q + c``.  Everything downstream (subspace membership of algebra
elements, report serialization) uses this fixed order.
"""

from __future__ import annotations

from math import lcm
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .scalars import ONE, ZERO, GaussianRational, RationalLike

Scalar = Union[GaussianRational, RationalLike]
SparseVec = dict  # index -> GaussianRational, zeros never stored
VectorLike = Union[Sequence[Scalar], Mapping[int, Scalar]]


def _as_scalar(x: Scalar) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


def to_sparse(v: VectorLike) -> SparseVec:
    """Copy ``v`` into sparse form, dropping zeros."""
    out: SparseVec = {}
    if isinstance(v, Mapping):
        items = v.items()
    else:
        items = enumerate(v)
    for k, x in items:
        s = _as_scalar(x)
        if s:
            out[k] = s
    return out


def to_dense(v: SparseVec, n: int) -> tuple:
    return tuple(v.get(j, ZERO) for j in range(n))


def axpy(target: SparseVec, c: GaussianRational, src: SparseVec) -> None:
    """target += c*src in place, keeping the no-stored-zeros invariant."""
    if not c:
        return
    for k, w in src.items():
        nv = target.get(k, ZERO) + c * w
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class ExactMatrix:
    """Immutable dense matrix over Q(i)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[Scalar]]):
        rows = tuple(tuple(_as_scalar(x) for x in row) for row in entries)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", len(rows[0]) if rows else 0)
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_sparse(cls, rows: int, cols: int,
                    items: Iterable[tuple[int, int, Scalar]]) -> "ExactMatrix":
        grid = [[ZERO] * cols for _ in range(rows)]
        for r, c, x in items:
            grid[r][c] = grid[r][c] + _as_scalar(x)
        return cls(grid)

    # -- access ------------------------------------------------------------

    def __getitem__(self, rc: tuple[int, int]) -> GaussianRational:
        r, c = rc
        return self.entries[r][c]

    def row(self, r: int) -> tuple:
        return self.entries[r]

    def column(self, c: int) -> tuple:
        return tuple(row[c] for row in self.entries)

    def nonzero_items(self):
        for r, row in enumerate(self.entries):
            for c, v in enumerate(row):
                if v:
                    yield r, c, v

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        return ExactMatrix([row[c0:c1] for row in self.entries[r0:r1]])

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_shape(other)
        return ExactMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_shape(other)
        return ExactMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in row] for row in self.entries])

    def scale(self, c: Scalar) -> "ExactMatrix":
        s = _as_scalar(c)
        return ExactMatrix([[s * a for a in row] for row in self.entries])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = [[ZERO] * other.cols for _ in range(self.rows)]
        be = other.entries
        for i, arow in enumerate(self.entries):
            orow = out[i]
            for j, a in enumerate(arow):
                if not a:
                    continue
                brow = be[j]
                for k, b in enumerate(brow):
                    if b:
                        orow[k] = orow[k] + a * b
        return ExactMatrix(out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.entries))) if self.rows else ExactMatrix([])

    def trace(self) -> GaussianRational:
        if self.rows != self.cols:
            raise ValueError("trace of non-square matrix")
        t = ZERO
        for i in range(self.rows):
            t = t + self.entries[i][i]
        return t

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        out = []
        for arow in self.entries:
            for brow in other.entries:
                out.append([a * b for a in arow for b in brow])
        return ExactMatrix(out)

    def apply_sparse(self, v: SparseVec) -> SparseVec:
        """Matrix times sparse column vector, column-access pattern."""
        out: SparseVec = {}
        for j, c in v.items():
            for i, row in enumerate(self.entries):
                a = row[j]
                if a:
                    nv = out.get(i, ZERO) + a * c
                    if nv:
                        out[i] = nv
                    else:
                        out.pop(i, None)
        return out

    def is_zero(self) -> bool:
        return all(not v for row in self.entries for v in row)

    def vectorize(self) -> SparseVec:
        """Row-major sparse flattening (index r*cols + c)."""
        out: SparseVec = {}
        q = self.cols
        for r, c, v in self.nonzero_items():
            out[r * q + c] = v
        return out

    # -- plumbing ----------------------------------------------------------

    def _check_shape(self, other: "ExactMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(repr(v) for v in row) for row in self.entries)
        return f"ExactMatrix[{self.rows}x{self.cols}: {body}]"


def hstack(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.rows != b.rows:
        raise ValueError("row mismatch")
    return ExactMatrix([ra + rb for ra, rb in zip(a.entries, b.entries)])


def vstack(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.cols:
        raise ValueError("column mismatch")
    return ExactMatrix(list(a.entries) + list(b.entries))


def block_matrix(blocks: Sequence[Sequence[ExactMatrix]]) -> ExactMatrix:
    rows = None
    for brow in blocks:
        stacked = brow[0]
        for b in brow[1:]:
            stacked = hstack(stacked, b)
        rows = stacked if rows is None else vstack(rows, stacked)
    assert rows is not None
    return rows


class RrefResult(NamedTuple):
    matrix: ExactMatrix
    rank: int
    pivots: tuple


def rref(m: ExactMatrix) -> RrefResult:
    """Reduced row echelon form, rank and pivot columns.

    Forward elimination is fraction-free: each row is scaled to Gaussian
    integers, then the Bareiss two-term update with exact division by the
    previous pivot keeps intermediates integral.  The result matrix has
    unit pivots, zero entries above and below every pivot, and zero rows
    collected at the bottom; it keeps the input shape.
    """
    nr, nc = m.rows, m.cols
    rows = [list(r) for r in m.entries]
    for row in rows:
        denom = 1
        for v in row:
            denom = lcm(denom, v.re.denominator, v.im.denominator)
        if denom != 1:
            for j in range(nc):
                row[j] = row[j] * denom
    prev = ONE
    pivots: list[int] = []
    rank = 0
    for c in range(nc):
        pr = None
        for i in range(rank, nr):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        piv = rows[rank][c]
        for i in range(rank + 1, nr):
            ric = rows[i][c]
            ri = rows[i]
            rp = rows[rank]
            for j in range(c, nc):
                ri[j] = (piv * ri[j] - ric * rp[j]) / prev
            for j in range(c):
                ri[j] = (piv * ri[j]) / prev
        prev = piv
        pivots.append(c)
        rank += 1
        if rank == nr:
            break
    for r in range(rank):
        piv = rows[r][pivots[r]]
        inv = ONE / piv
        rows[r] = [v * inv for v in rows[r]]
    for r in range(rank - 1, -1, -1):
        pc = pivots[r]
        for s in range(r):
            f = rows[s][pc]
            if f:
                rs, rr = rows[s], rows[r]
                for j in range(nc):
                    rs[j] = rs[j] - f * rr[j]
    for r in range(rank, nr):
        rows[r] = [ZERO] * nc
    return RrefResult(ExactMatrix(rows), rank, tuple(pivots))


def invert(m: ExactMatrix) -> ExactMatrix:
    """Inverse via rref of the augmented matrix; raises on singular input."""
    if m.rows != m.cols:
        raise ValueError("only square matrices invert")
    n = m.rows
    reduced, _, pivots = rref(hstack(m, ExactMatrix.identity(n)))
    if pivots[:n] != tuple(range(n)):
        raise ValueError("matrix is singular")
    return reduced.block(0, n, n, 2 * n)


class Echelon:
    """Incremental reduced row echelon over sparse vectors.

    Rows are kept fully reduced: the stored row with pivot ``j`` has a unit
    entry at ``j`` and no other pivot index in its support.  ``track=True``
    additionally records each stored row as an exact combination of the
    inserted vectors, which is what coordinate solving uses.
    """

    __slots__ = ("rows", "coeffs", "track", "n_inserted")

    def __init__(self, track: bool = False):
        self.rows: dict[int, SparseVec] = {}
        self.coeffs: dict[int, SparseVec] = {}
        self.track = track
        self.n_inserted = 0

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: VectorLike) -> tuple[SparseVec, SparseVec]:
        """Remainder of ``v`` modulo the row space, plus (if tracking) the
        combination of inserted vectors that was subtracted."""
        w = to_sparse(v)
        combo: SparseVec = {}
        # Stored rows contain no pivot indices besides their own, so
        # reduction never introduces new pivot hits: one pass suffices.
        for j in sorted(self.rows.keys() & w.keys()):
            c = w.get(j)
            if not c:
                continue
            axpy(w, -c, self.rows[j])
            if self.track:
                axpy(combo, c, self.coeffs[j])
        return w, combo

    def insert(self, v: VectorLike) -> Optional[int]:
        """Add ``v`` to the span.  Returns its pivot, or None if dependent."""
        w, combo = self.reduce(v)
        idx = self.n_inserted
        self.n_inserted += 1
        if not w:
            return None
        j = min(w)
        inv = ONE / w[j]
        row = {k: val * inv for k, val in w.items()}
        coeff: SparseVec = {}
        if self.track:
            coeff = {idx: inv}
            axpy(coeff, -inv, combo)
        for p, existing in self.rows.items():
            c = existing.get(j)
            if c:
                axpy(existing, -c, row)
                if self.track:
                    axpy(self.coeffs[p], -c, coeff)
        self.rows[j] = row
        if self.track:
            self.coeffs[j] = coeff
        return j

    def contains(self, v: VectorLike) -> bool:
        w, _ = self.reduce(v)
        return not w

    def coordinates(self, v: VectorLike) -> Optional[SparseVec]:
        """Combination of the *inserted* vectors equal to ``v``, or None."""
        if not self.track:
            raise ValueError("Echelon built without tracking")
        w, combo = self.reduce(v)
        if w:
            return None
        return combo

    def sorted_rows(self) -> list[tuple[int, SparseVec]]:
        return sorted(self.rows.items())


class SpanSolver:
    """Coordinates of vectors with respect to a fixed spanning list.

    The spanning list is inserted once; ``coordinates`` then answers
    membership queries as exact coefficient dicts over list positions.
    Non-membership is the value ``None``, never an exception.
    """

    def __init__(self, vectors: Iterable[VectorLike]):
        self.ech = Echelon(track=True)
        self.count = 0
        for v in vectors:
            self.ech.insert(v)
            self.count += 1

    @property
    def rank(self) -> int:
        return self.ech.dim

    def contains(self, v: VectorLike) -> bool:
        return self.ech.contains(v)

    def coordinates(self, v: VectorLike) -> Optional[SparseVec]:
        return self.ech.coordinates(v)


class Subspace:
    """A subspace of F^n stored as a reduced-row-echelon basis.

    Instances are immutable value objects: equal subspaces compare and hash
    equal regardless of the spanning vectors they were built from.
    """

    __slots__ = ("ambient_dim", "_rows")

    def __init__(self, ambient_dim: int, rows: tuple):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "_rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[VectorLike]) -> "Subspace":
        ech = Echelon()
        for v in vectors:
            sv = to_sparse(v)
            if sv and max(sv) >= ambient_dim:
                raise ValueError("vector exceeds ambient dimension")
            ech.insert(sv)
        return cls._from_echelon(ambient_dim, ech)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.from_vectors(ambient_dim, ({j: ONE} for j in range(ambient_dim)))

    @classmethod
    def _from_echelon(cls, ambient_dim: int, ech: Echelon) -> "Subspace":
        rows = tuple(
            tuple(sorted(row.items())) for _, row in ech.sorted_rows()
        )
        return cls(ambient_dim, rows)

    # -- views -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._rows)

    def pivots(self) -> tuple:
        return tuple(row[0][0] for row in self._rows)

    def sparse_rows(self) -> list[SparseVec]:
        return [dict(row) for row in self._rows]

    def vectors(self) -> tuple:
        """Dense RREF basis rows."""
        return tuple(to_dense(dict(row), self.ambient_dim) for row in self._rows)

    def basis_matrix(self) -> ExactMatrix:
        if not self._rows:
            return ExactMatrix.zeros(0, self.ambient_dim)
        return ExactMatrix(self.vectors())

    def _echelon(self) -> Echelon:
        ech = Echelon()
        for row in self._rows:
            ech.rows[row[0][0]] = dict(row)
        return ech

    # -- lattice operations --------------------------------------------------

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        ech = self._echelon()
        for row in other.sparse_rows():
            ech.insert(row)
        return Subspace._from_echelon(self.ambient_dim, ech)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize (a|a) and (b|0); rows supported purely in
        the right half span the intersection."""
        self._check_ambient(other)
        n = self.ambient_dim
        ech = Echelon()
        for row in self.sparse_rows():
            doubled = dict(row)
            for k, v in row.items():
                doubled[k + n] = v
            ech.insert(doubled)
        for row in other.sparse_rows():
            ech.insert(row)
        out = Echelon()
        for piv, row in ech.sorted_rows():
            if piv >= n:
                out.insert({k - n: v for k, v in row.items()})
        return Subspace._from_echelon(n, out)

    def contains(self, v: VectorLike) -> bool:
        return self._echelon().contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        ech = self._echelon()
        return all(ech.contains(row) for row in other.sparse_rows())

    def coordinates_of(self, v: VectorLike) -> Optional[tuple]:
        """Coefficients of ``v`` over the RREF basis rows, or None.

        Because the basis is reduced, the candidate coefficients are just
        the entries of ``v`` at the pivot columns; one subtraction checks
        membership.
        """
        w = to_sparse(v)
        coords = []
        for row in self._rows:
            piv = row[0][0]
            c = w.get(piv, ZERO)
            coords.append(c)
            if c:
                axpy(w, -c, dict(row))
        if w:
            return None
        return tuple(coords)

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self._rows))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def solve_membership(v: VectorLike, a: Subspace) -> Optional[tuple]:
    """Coordinates of ``v`` in ``a``'s stored basis; None when not a member."""
    return a.coordinates_of(v)


def nullspace(m: ExactMatrix) -> Subspace:
    """Solution space of m x = 0, from the reduced echelon of the rows."""
    return nullspace_sparse((to_sparse(row) for row in m.entries), m.cols)


def nullspace_sparse(rows: Iterable[VectorLike], ncols: int) -> Subspace:
    ech = Echelon()
    for row in rows:
        ech.insert(row)
    pivset = set(ech.rows.keys())
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for f in free:
        vec: SparseVec = {f: ONE}
        for piv, row in ech.rows.items():
            c = row.get(f)
            if c:
                vec[piv] = -c
        basis.append(vec)
    return Subspace.from_vectors(ncols, basis)
