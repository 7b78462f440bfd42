"""Matrix realizations of the classical Lie superalgebras.

A ``GradedMatrix`` is a square matrix over Q(i) split into blocks by the
``(m, t)`` block sizes: the first ``m`` coordinates are the orthogonal
("even") part of the underlying space, the last ``t`` the symplectic part.
Homogeneous elements are enforced structurally: an even element vanishes on
the off-diagonal blocks, an odd one on the diagonal blocks.

Constructors produce a fixed, documented basis order so serialized output
is stable across runs.  The orthosymplectic constructor supports two
realizations of the orthogonal constraint: ``identity`` (A^t = -A) and
``split`` (the hyperbolic form; requires an even orthogonal dimension).
The symplectic form is always G = [[0, I], [-I, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .linalg import ExactMatrix, SparseVec, SpanSolver
from .scalars import GaussianRational, ONE, gr

EVEN = "even"
ODD = "odd"


def _unit_items(r: int, c: int, v=1):
    return [(r, c, v)]


class GradedMatrix:
    """A homogeneous element of gl(m|t) with its parity."""

    __slots__ = ("matrix", "block_sizes", "parity")

    def __init__(self, matrix: ExactMatrix, block_sizes: tuple[int, int], parity: str):
        m, t = block_sizes
        if matrix.rows != m + t or matrix.cols != m + t:
            raise ValueError("matrix size does not match block sizes")
        if parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
        for r, c, _ in matrix.nonzero_items():
            diag = (r < m) == (c < m)
            if parity == EVEN and not diag:
                raise ValueError("even element has entries in an off-diagonal block")
            if parity == ODD and diag:
                raise ValueError("odd element has entries in a diagonal block")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "block_sizes", block_sizes)
        object.__setattr__(self, "parity", parity)

    def __setattr__(self, name, value):
        raise AttributeError("GradedMatrix is immutable")

    @classmethod
    def from_sparse(cls, block_sizes, parity, items) -> "GradedMatrix":
        n = sum(block_sizes)
        return cls(ExactMatrix.from_sparse(n, n, items), block_sizes, parity)

    # block views; names follow the (A B / C D) layout
    def block_a(self) -> ExactMatrix:
        m, _ = self.block_sizes
        return self.matrix.block(0, m, 0, m)

    def block_b(self) -> ExactMatrix:
        m, t = self.block_sizes
        return self.matrix.block(0, m, m, m + t)

    def block_c(self) -> ExactMatrix:
        m, t = self.block_sizes
        return self.matrix.block(m, m + t, 0, m)

    def block_d(self) -> ExactMatrix:
        m, t = self.block_sizes
        return self.matrix.block(m, m + t, m, m + t)

    def add(self, other: "GradedMatrix") -> "GradedMatrix":
        if other.parity != self.parity or other.block_sizes != self.block_sizes:
            raise ValueError("can only add like-graded elements")
        return GradedMatrix(self.matrix + other.matrix, self.block_sizes, self.parity)

    def scale(self, c) -> "GradedMatrix":
        return GradedMatrix(self.matrix.scale(c), self.block_sizes, self.parity)

    def vectorize(self) -> SparseVec:
        return self.matrix.vectorize()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def supertrace(self) -> GaussianRational:
        return self.block_a().trace() - self.block_d().trace()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (
            self.parity == other.parity
            and self.block_sizes == other.block_sizes
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.parity, self.block_sizes, self.matrix))

    def __repr__(self) -> str:
        return f"GradedMatrix({self.parity}, {self.block_sizes[0]}|{self.block_sizes[1]})"


def superbracket(x: GradedMatrix, y: GradedMatrix) -> GradedMatrix:
    """[x, y] = xy - (-1)^{|x||y|} yx; anticommutator on odd pairs."""
    if x.block_sizes != y.block_sizes:
        raise ValueError("ambient mismatch")
    xy = x.matrix @ y.matrix
    yx = y.matrix @ x.matrix
    if x.parity == ODD and y.parity == ODD:
        out, parity = xy + yx, EVEN
    else:
        out = xy - yx
        parity = ODD if x.parity != y.parity else EVEN
    return GradedMatrix(out, x.block_sizes, parity)


def symplectic_form(n: int) -> ExactMatrix:
    """G = [[0, I_n], [-I_n, 0]]."""
    items = []
    for i in range(n):
        items.append((i, n + i, 1))
        items.append((n + i, i, -1))
    return ExactMatrix.from_sparse(2 * n, 2 * n, items)


def split_ortho_form(m: int) -> ExactMatrix:
    """Hyperbolic symmetric form: antidiagonal identity blocks, plus a lone
    1 in the corner when m is odd."""
    l = m // 2
    items = []
    for i in range(l):
        items.append((i, l + i, 1))
        items.append((l + i, i, 1))
    if m % 2:
        items.append((m - 1, m - 1, 1))
    return ExactMatrix.from_sparse(m, m, items)


@dataclass(frozen=True)
class BilinearFormSpec:
    """The pair of forms an orthosymplectic realization preserves."""

    ortho: str  # "identity" | "split"
    m: int
    n: int  # symplectic rank; the symplectic block has size 2n

    def __post_init__(self):
        if self.ortho not in ("identity", "split"):
            raise ValueError(f"unknown orthogonal form {self.ortho!r}")
        if self.ortho == "split" and self.m % 2 and self.m > 0:
            # odd split forms only arise for the plain orthogonal families
            pass

    def ortho_matrix(self) -> ExactMatrix:
        if self.ortho == "identity":
            return ExactMatrix.identity(self.m)
        return split_ortho_form(self.m)

    def symp_matrix(self) -> ExactMatrix:
        return symplectic_form(self.n)


@dataclass(frozen=True)
class CartanBasis:
    """A Cartan family with the bookkeeping to read weights off it.

    ``elements`` act by the adjoint/defining action; raw simultaneous
    eigenvalue tuples are ordered by ``order_key`` (an epsilon-coordinate
    lift, so the maximum is the true highest weight) and converted to
    fundamental-weight (Dynkin) labels by ``to_labels``.
    """

    family: str
    elements: tuple
    to_labels: Callable
    order_key: Callable

    @property
    def rank(self) -> int:
        return len(self.elements)


def _require_int(x: GaussianRational) -> int:
    if x.im or x.re.denominator != 1:
        raise ValueError(f"expected an integer eigenvalue, got {x!r}")
    return int(x.re)


def cartan_sl(k: int, offset: int, total: int) -> CartanBasis:
    """h_i = E_ii - E_{i+1,i+1} inside a k-block starting at ``offset``.

    Raw eigenvalues of these elements are already Dynkin labels; the order
    key lifts them back to epsilon coordinates via suffix sums.
    """
    els = []
    for i in range(k - 1):
        els.append(ExactMatrix.from_sparse(
            total, total, [(offset + i, offset + i, 1), (offset + i + 1, offset + i + 1, -1)]))

    def to_labels(raw):
        return tuple(_require_int(x) for x in raw)

    def order_key(raw):
        # suffix sums lift Dynkin labels to epsilon coordinates (common shift
        # is irrelevant for comparisons)
        run = gr(0)
        eps = []
        for x in reversed(raw):
            run = run + x
            eps.append(run.sort_key())
        eps.reverse()
        return tuple(eps)

    return CartanBasis("sl", tuple(els), to_labels, order_key)


def cartan_sp(n: int, offset: int, total: int) -> CartanBasis:
    """Epsilon family h_i = E_ii - E_{n+i,n+i} for the G-form sp(2n)."""
    els = []
    for i in range(n):
        els.append(ExactMatrix.from_sparse(
            total, total, [(offset + i, offset + i, 1), (offset + n + i, offset + n + i, -1)]))

    def to_labels(raw):
        a = [_require_int(x) for x in raw]
        return tuple(a[i] - a[i + 1] for i in range(n - 1)) + (a[n - 1],)

    def order_key(raw):
        return tuple(x.sort_key() for x in raw)

    return CartanBasis("sp", tuple(els), to_labels, order_key)


def cartan_o_split(m: int, offset: int, total: int) -> CartanBasis:
    """Epsilon family for the split orthogonal realization."""
    l = m // 2
    els = []
    for i in range(l):
        els.append(ExactMatrix.from_sparse(
            total, total, [(offset + i, offset + i, 1), (offset + l + i, offset + l + i, -1)]))

    if m % 2:
        def to_labels(raw):  # B_l; the last simple root is short
            a = [_require_int(x) for x in raw]
            return tuple(a[i] - a[i + 1] for i in range(l - 1)) + (2 * a[l - 1],)
    else:
        def to_labels(raw):  # D_l
            a = [_require_int(x) for x in raw]
            if l == 1:
                return (a[0],)
            head = tuple(a[i] - a[i + 1] for i in range(l - 1))
            return head + (a[l - 2] + a[l - 1],)

    def order_key(raw):
        return tuple(x.sort_key() for x in raw)

    return CartanBasis("o", tuple(els), to_labels, order_key)


@dataclass(frozen=True)
class Superalgebra:
    """A subalgebra of some gl(m|t) given by a homogeneous basis.

    ``ideals`` maps names ("I1", "I2", "center") to index tuples into
    ``basis``.  ``cartans`` carries per-ideal Cartan data when the
    construction provides it.  ``conjugation`` records P such that this
    realization equals P . (reference realization) . P^{-1}; module
    analysis uses it to pull natural modules back to coordinates where
    Cartan elements act diagonally.
    """

    label: str
    block_sizes: tuple[int, int]
    basis: tuple
    even_indices: tuple
    odd_indices: tuple
    form: Optional[BilinearFormSpec] = None
    ideals: Mapping[str, tuple] = field(default_factory=dict)
    cartans: Mapping[str, CartanBasis] = field(default_factory=dict)
    conjugation: Optional[ExactMatrix] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def even_dim(self) -> int:
        return len(self.even_indices)

    @property
    def odd_dim(self) -> int:
        return len(self.odd_indices)

    @property
    def graded_dims(self) -> tuple[int, int]:
        return (self.even_dim, self.odd_dim)

    @property
    def ambient_dim(self) -> int:
        n = sum(self.block_sizes)
        return n * n

    def even_basis(self) -> list:
        return [self.basis[i] for i in self.even_indices]

    def odd_basis(self) -> list:
        return [self.basis[i] for i in self.odd_indices]

    def ideal_basis(self, name: str) -> list:
        return [self.basis[i] for i in self.ideals.get(name, ())]

    def span_solver(self) -> SpanSolver:
        if "span" not in self._cache:
            self._cache["span"] = SpanSolver([g.vectorize() for g in self.basis])
        return self._cache["span"]

    def contains(self, g: GradedMatrix) -> bool:
        return self.span_solver().contains(g.vectorize())

    def coordinates(self, g: GradedMatrix) -> Optional[SparseVec]:
        return self.span_solver().coordinates(g.vectorize())

    def __repr__(self) -> str:
        m, t = self.block_sizes
        return f"Superalgebra({self.label}, dim={self.dim}, ambient={m}|{t})"


# ---------------------------------------------------------------------------
# constructors


def build_gl(m: int, two_n: int) -> Superalgebra:
    """Full gl(m|2n): all matrix units, graded by block position.

    Basis order: diagonal-block units first (orthogonal block row-major,
    then symplectic block row-major), then off-diagonal units (upper right
    row-major, then lower left row-major).
    """
    if m < 0 or two_n < 0 or m + two_n == 0:
        raise ValueError("need a nonempty ambient space")
    if two_n % 2:
        raise ValueError(f"symplectic block size must be even, got {two_n}")
    total = m + two_n
    sizes = (m, two_n)
    basis: list[GradedMatrix] = []
    for r in range(m):
        for c in range(m):
            basis.append(GradedMatrix.from_sparse(sizes, EVEN, _unit_items(r, c)))
    for r in range(two_n):
        for c in range(two_n):
            basis.append(GradedMatrix.from_sparse(sizes, EVEN, _unit_items(m + r, m + c)))
    even_count = len(basis)
    for r in range(m):
        for c in range(two_n):
            basis.append(GradedMatrix.from_sparse(sizes, ODD, _unit_items(r, m + c)))
    for r in range(two_n):
        for c in range(m):
            basis.append(GradedMatrix.from_sparse(sizes, ODD, _unit_items(m + r, c)))
    return Superalgebra(
        label=f"gl({m}|{two_n})",
        block_sizes=sizes,
        basis=tuple(basis),
        even_indices=tuple(range(even_count)),
        odd_indices=tuple(range(even_count, len(basis))),
    )


def build_sl(m: int, n: int) -> Superalgebra:
    """Supertrace-zero matrices in gl(m|n).

    Rejects m = n: there the identity matrix has supertrace zero, so the
    algebra carries a one-dimensional center and is not basic simple.
    Basis order: I1 (top-block off-diagonal units row-major, then diagonal
    differences), I2 (same pattern in the bottom block), the central
    element diag(n*I_m, m*I_n), then odd units (upper right row-major,
    lower left row-major).
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1, n >= 0")
    if m == n:
        raise ValueError(
            f"sl({m}|{n}) is rejected: supertrace-zero identity gives a "
            "one-dimensional center, so the algebra is not basic simple"
        )
    total = m + n
    sizes = (m, n)
    basis: list[GradedMatrix] = []

    def block_sl_units(size: int, offset: int) -> list:
        out = []
        for r in range(size):
            for c in range(size):
                if r != c:
                    out.append(GradedMatrix.from_sparse(
                        sizes, EVEN, _unit_items(offset + r, offset + c)))
        for i in range(size - 1):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN,
                [(offset + i, offset + i, 1), (offset + i + 1, offset + i + 1, -1)]))
        return out

    i1 = block_sl_units(m, 0)
    i2 = block_sl_units(n, m)
    basis.extend(i1)
    i1_idx = tuple(range(len(i1)))
    basis.extend(i2)
    i2_idx = tuple(range(len(i1), len(i1) + len(i2)))
    center_idx: tuple = ()
    if n > 0:
        items = [(i, i, n) for i in range(m)] + [(m + j, m + j, m) for j in range(n)]
        basis.append(GradedMatrix.from_sparse(sizes, EVEN, items))
        center_idx = (len(basis) - 1,)
    even_count = len(basis)
    for r in range(m):
        for c in range(n):
            basis.append(GradedMatrix.from_sparse(sizes, ODD, _unit_items(r, m + c)))
    for r in range(n):
        for c in range(m):
            basis.append(GradedMatrix.from_sparse(sizes, ODD, _unit_items(m + r, c)))
    cartans = {}
    if m >= 2:
        cartans["I1"] = cartan_sl(m, 0, total)
    if n >= 2:
        cartans["I2"] = cartan_sl(n, m, total)
    return Superalgebra(
        label=f"sl({m}|{n})",
        block_sizes=sizes,
        basis=tuple(basis),
        even_indices=tuple(range(even_count)),
        odd_indices=tuple(range(even_count, len(basis))),
        ideals={"I1": i1_idx, "I2": i2_idx, "center": center_idx},
        cartans=cartans,
    )


def _ortho_block_basis(m: int, form: str, sizes, offset: int = 0) -> list:
    """Basis of the orthogonal family in the chosen realization, embedded
    at ``offset`` inside diagonal-block coordinates."""
    out = []
    if form == "identity":
        for r in range(m):
            for c in range(r + 1, m):
                out.append(GradedMatrix.from_sparse(
                    sizes, EVEN, [(offset + r, offset + c, 1), (offset + c, offset + r, -1)]))
        return out
    l = m // 2
    for r in range(l):
        for c in range(l):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN,
                [(offset + r, offset + c, 1), (offset + l + c, offset + l + r, -1)]))
    for r in range(l):
        for c in range(r + 1, l):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN,
                [(offset + r, offset + l + c, 1), (offset + c, offset + l + r, -1)]))
    for r in range(l):
        for c in range(r + 1, l):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN,
                [(offset + l + r, offset + c, 1), (offset + l + c, offset + r, -1)]))
    if m % 2:
        # odd split form: extra row/column against the corner 1
        z = offset + m - 1
        for r in range(l):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN, [(offset + r, z, 1), (z, offset + l + r, -1)]))
        for r in range(l):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN, [(offset + l + r, z, 1), (z, offset + r, -1)]))
    return out


def _sp_block_basis(n: int, sizes, offset: int) -> list:
    """G-form symplectic family: [[X, Y], [Z, -X^t]] with Y, Z symmetric."""
    out = []
    for r in range(n):
        for c in range(n):
            out.append(GradedMatrix.from_sparse(
                sizes, EVEN,
                [(offset + r, offset + c, 1), (offset + n + c, offset + n + r, -1)]))
    for r in range(n):
        for c in range(r, n):
            items = [(offset + r, offset + n + c, 1)]
            if c != r:
                items.append((offset + c, offset + n + r, 1))
            out.append(GradedMatrix.from_sparse(sizes, EVEN, items))
    for r in range(n):
        for c in range(r, n):
            items = [(offset + n + r, offset + c, 1)]
            if c != r:
                items.append((offset + n + c, offset + r, 1))
            out.append(GradedMatrix.from_sparse(sizes, EVEN, items))
    return out


def build_osp(m: int, n: int, form: str = "identity") -> Superalgebra:
    """osp(m|2n) preserving (orthogonal form, G).

    identity form: A^t = -A, D^t G = -G D, C = G B^t.
    split form (even m): A in hyperbolic-form o(m), C = G B^t Phi, where
    Phi is the hyperbolic symmetric form.

    Basis order: orthogonal block (I1), symplectic block (I2), then odd
    elements indexed by the free B-block unit row-major.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1, n >= 0")
    if form not in ("identity", "split"):
        raise ValueError(f"unknown orthogonal form {form!r}")
    if form == "split" and m % 2:
        raise ValueError("split orthogonal form needs an even orthogonal dimension")
    two_n = 2 * n
    total = m + two_n
    sizes = (m, two_n)
    spec = BilinearFormSpec(form, m, n)
    basis: list[GradedMatrix] = []
    i1 = _ortho_block_basis(m, form, sizes, 0)
    basis.extend(i1)
    i1_idx = tuple(range(len(i1)))
    i2 = _sp_block_basis(n, sizes, m)
    basis.extend(i2)
    i2_idx = tuple(range(len(i1), len(i1) + len(i2)))
    even_count = len(basis)
    if n > 0:
        g_mat = spec.symp_matrix()
        phi = spec.ortho_matrix()
        for r in range(m):
            for s in range(two_n):
                b = ExactMatrix.from_sparse(m, two_n, [(r, s, 1)])
                c = g_mat @ b.transpose() @ phi
                items = [(r, m + s, ONE)]
                for rr, cc, v in c.nonzero_items():
                    items.append((m + rr, cc, v))
                basis.append(GradedMatrix.from_sparse(sizes, ODD, items))
    cartans = {}
    if form == "split" and m >= 2:
        cartans["I1"] = cartan_o_split(m, 0, total)
    if n >= 1:
        cartans["I2"] = cartan_sp(n, m, total)
    return Superalgebra(
        label=f"osp({m}|{two_n})" if n else f"o({m})",
        block_sizes=sizes,
        basis=tuple(basis),
        even_indices=tuple(range(even_count)),
        odd_indices=tuple(range(even_count, len(basis))),
        form=spec,
        ideals={"I1": i1_idx, "I2": i2_idx},
        cartans=cartans,
    )


def build_orthogonal(m: int, form: str = "identity") -> Superalgebra:
    """Plain o(m) as a purely even algebra (empty symplectic block).

    The split realization exists for every m (hyperbolic plus a corner 1
    when m is odd) and carries a diagonal Cartan family.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if form not in ("identity", "split"):
        raise ValueError(f"unknown orthogonal form {form!r}")
    sizes = (m, 0)
    basis = _ortho_block_basis(m, form, sizes, 0)
    cartans = {}
    if form == "split" and m >= 2:
        cartans["I1"] = cartan_o_split(m, 0, m)
    return Superalgebra(
        label=f"o({m})",
        block_sizes=sizes,
        basis=tuple(basis),
        even_indices=tuple(range(len(basis))),
        odd_indices=(),
        form=BilinearFormSpec(form, m, 0),
        ideals={"I1": tuple(range(len(basis)))},
        cartans=cartans,
    )


def build_symplectic(n: int) -> Superalgebra:
    """Plain sp(2n) for the form G, as a purely even algebra."""
    if n < 1:
        raise ValueError("need n >= 1")
    sizes = (0, 2 * n)
    basis = _sp_block_basis(n, sizes, 0)
    return Superalgebra(
        label=f"sp({2 * n})",
        block_sizes=sizes,
        basis=tuple(basis),
        even_indices=tuple(range(len(basis))),
        odd_indices=(),
        form=BilinearFormSpec("identity", 0, n),
        ideals={"I1": tuple(range(len(basis)))},
        cartans={"I1": cartan_sp(n, 0, 2 * n)},
    )


def build_special_linear(k: int) -> Superalgebra:
    """Plain sl(k) (trace-zero k x k), as a purely even algebra."""
    if k < 2:
        raise ValueError("need k >= 2")
    sizes = (k, 0)
    basis = []
    for r in range(k):
        for c in range(k):
            if r != c:
                basis.append(GradedMatrix.from_sparse(sizes, EVEN, _unit_items(r, c)))
    for i in range(k - 1):
        basis.append(GradedMatrix.from_sparse(
            sizes, EVEN, [(i, i, 1), (i + 1, i + 1, -1)]))
    return Superalgebra(
        label=f"sl({k})",
        block_sizes=sizes,
        basis=tuple(basis),
        even_indices=tuple(range(len(basis))),
        odd_indices=(),
        ideals={"I1": tuple(range(len(basis)))},
        cartans={"I1": cartan_sl(k, 0, k)},
    )


# ---------------------------------------------------------------------------
# closure and center


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    violation: Optional[tuple[int, int]] = None
    detail: str = ""


def is_closed_subalgebra(elements: Sequence[GradedMatrix],
                         ambient: Optional[Superalgebra] = None) -> ClosureReport:
    """Check all pairwise superbrackets land back in the span.

    Only pairs i <= j are tested; the reversed bracket is a scalar multiple.
    The first violating pair is reported by index.
    """
    if not elements:
        return ClosureReport(True, detail="empty family")
    sizes = elements[0].block_sizes
    for g in elements:
        if g.block_sizes != sizes:
            raise ValueError("mixed ambients in closure check")
    if ambient is not None:
        solver = ambient.span_solver()
        for idx, g in enumerate(elements):
            if not solver.contains(g.vectorize()):
                raise ValueError(f"element {idx} is outside the ambient algebra")
    span = SpanSolver([g.vectorize() for g in elements])
    for i in range(len(elements)):
        for j in range(i, len(elements)):
            br = superbracket(elements[i], elements[j])
            if br.is_zero():
                continue
            if not span.contains(br.vectorize()):
                return ClosureReport(
                    False, (i, j),
                    f"bracket of basis elements {i} and {j} leaves the span")
    return ClosureReport(True)


def center_dimension(algebra: Superalgebra) -> int:
    """Dimension of {x : [x, algebra] = 0} inside the algebra."""
    from .linalg import nullspace_sparse

    d = algebra.dim
    rows: dict[tuple[int, int], SparseVec] = {}
    for s, bs in enumerate(algebra.basis):
        for t, bt in enumerate(algebra.basis):
            br = superbracket(bt, bs)
            for coord, v in br.vectorize().items():
                rows.setdefault((s, coord), {})[t] = v
    return nullspace_sparse(rows.values(), d).dim
