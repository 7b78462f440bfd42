"""Structure fingerprints and the even/odd structure check suites.

A fingerprint is the invariant tuple (graded dims, even-ideal dims,
odd-module splits) that identifies a constructed algebra with the
expected sl(m,n) or osp(m,2n) pattern without building an explicit
isomorphism.  The even-ideal dimensions are read off a decomposition of
the adjoint action, grouping components by which diagonal block they
live in; the grouping also absorbs non-simple cases like o(4), whose
adjoint splits into two 3-dim ideals that both sit in the orthogonal
block.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .linalg import Echelon, ExactMatrix, SpanSolver
from .superalg import CartanBasis, Superalgebra, superbracket
from .repmod import ModuleAction, decompose_module, highest_weight


@dataclass(frozen=True)
class StructureFingerprint:
    """(graded dims, even-ideal dims, odd splits per even ideal group).

    ``even_ideal_dims`` is (orthogonal-block group, symplectic-block
    group, center); each odd split is a tuple of (multiplicity, dim)
    pairs sorted by decreasing dimension.
    """

    graded_dims: tuple
    even_ideal_dims: tuple
    odd_split_i1: tuple
    odd_split_i2: tuple


@dataclass(frozen=True)
class StructureCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class StructureReport:
    label: str
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def adjoint_action(algebra: Superalgebra, part: str) -> ModuleAction:
    """Action of the even part on the even or odd part, in basis
    coordinates."""
    if part not in ("even", "odd"):
        raise ValueError("part must be 'even' or 'odd'")
    target = algebra.even_basis() if part == "even" else algebra.odd_basis()
    solver = SpanSolver([g.vectorize() for g in target])
    actions = []
    for i in algebra.even_indices:
        a = algebra.basis[i]
        items = []
        for col, e in enumerate(target):
            coords = solver.coordinates(superbracket(a, e).vectorize())
            if coords is None:
                raise ValueError("even part does not preserve the graded pieces")
            for row, v in coords.items():
                items.append((row, col, v))
        actions.append(ExactMatrix.from_sparse(len(target), len(target), items))
    return ModuleAction(
        acting=tuple(algebra.basis[i].matrix for i in algebra.even_indices),
        actions=tuple(actions),
        dim=len(target),
    )


def matrix_action_on_part(h: ExactMatrix, algebra: Superalgebra, part: str) -> ExactMatrix:
    """ad(h) on the chosen part for an ambient even matrix h (a Cartan
    element, say) that need not be a basis member."""
    target = algebra.even_basis() if part == "even" else algebra.odd_basis()
    solver = SpanSolver([g.vectorize() for g in target])
    items = []
    for col, e in enumerate(target):
        br = h @ e.matrix - e.matrix @ h
        coords = solver.coordinates(br.vectorize())
        if coords is None:
            raise ValueError("matrix does not normalize the part")
        for row, v in coords.items():
            items.append((row, col, v))
    return ExactMatrix.from_sparse(len(target), len(target), items)


def _component_is_trivial(comp, actions) -> bool:
    for row in comp.subspace.sparse_rows():
        for a in actions:
            if a.apply_sparse(row):
                return False
    return True


def _component_touches_ortho_block(comp, algebra: Superalgebra) -> bool:
    even = algebra.even_basis()
    for row in comp.subspace.sparse_rows():
        for p, c in row.items():
            blk = even[p].block_a()
            if c and not blk.is_zero():
                return True
    return False


def _split_counts(comps) -> tuple:
    counts = Counter(c.dim for c in comps)
    return tuple(sorted(((mult, d) for d, mult in counts.items()),
                        key=lambda md: -md[1]))


def _group_actions(rows, odd_actions, odd_dim) -> list:
    """Action matrices of arbitrary even elements (coordinate rows over the
    even basis) on the odd part."""
    out = []
    for row in rows:
        acc = ExactMatrix.zeros(odd_dim, odd_dim)
        for p, c in row.items():
            acc = acc + odd_actions[p].scale(c)
        out.append(acc)
    return out


def fingerprint(algebra: Superalgebra, seed: int = 0) -> StructureFingerprint:
    """Identify the even-ideal layout and the odd-part splits.

    Groups the components of the even adjoint action into (orthogonal
    block, symplectic block, center); the odd part is then decomposed
    once under each of the two groups.
    """
    even_adj = adjoint_action(algebra, "even")
    comps = decompose_module(even_adj, seed=seed)
    i1_rows: list = []
    i2_rows: list = []
    dims = [0, 0, 0]
    for comp in comps:
        if _component_is_trivial(comp, even_adj.actions):
            dims[2] += comp.dim
        elif _component_touches_ortho_block(comp, algebra):
            dims[0] += comp.dim
            i1_rows.extend(comp.subspace.sparse_rows())
        else:
            dims[1] += comp.dim
            i2_rows.extend(comp.subspace.sparse_rows())
    odd_dim = algebra.odd_dim
    if odd_dim:
        odd_adj = adjoint_action(algebra, "odd")
        splits = []
        for rows in (i1_rows, i2_rows):
            acts = _group_actions(rows, odd_adj.actions, odd_dim)
            sub = ModuleAction(acting=tuple(acts), actions=tuple(acts), dim=odd_dim)
            splits.append(_split_counts(decompose_module(sub, seed=seed)))
        split1, split2 = splits
    else:
        split1 = split2 = ()
    return StructureFingerprint(
        graded_dims=algebra.graded_dims,
        even_ideal_dims=tuple(dims),
        odd_split_i1=split1,
        odd_split_i2=split2,
    )


def expected_sl_fingerprint(m: int, n: int) -> StructureFingerprint:
    return StructureFingerprint(
        graded_dims=(m * m + n * n - 1, 2 * m * n),
        even_ideal_dims=(m * m - 1, n * n - 1, 1),
        odd_split_i1=((2 * n, m),),
        odd_split_i2=((2 * m, n),),
    )


def expected_osp_fingerprint(m: int, n: int) -> StructureFingerprint:
    return StructureFingerprint(
        graded_dims=(m * (m - 1) // 2 + n * (2 * n + 1), 2 * m * n),
        even_ideal_dims=(m * (m - 1) // 2, n * (2 * n + 1), 0),
        odd_split_i1=((2 * n, m),),
        odd_split_i2=((m, 2 * n),),
    )


def match_sl_pattern(fp: StructureFingerprint, m: int, n: int) -> bool:
    return fp == expected_sl_fingerprint(m, n)


def match_osp_pattern(fp: StructureFingerprint, m: int, n: int) -> bool:
    return fp == expected_osp_fingerprint(m, n)


# ---------------------------------------------------------------------------
# check suites


def _span_rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(dict(v))
    return ech.dim


def _brackets_span_part(algebra, left_indices, right_indices, target_indices,
                        symmetric: bool) -> tuple:
    """Rank of span{[x,y]} and whether every bracket stays inside the
    span of the target part."""
    target = [algebra.basis[i].vectorize() for i in target_indices]
    solver = SpanSolver(target) if target else None
    ech = Echelon()
    contained = True
    for a, i in enumerate(left_indices):
        for b, j in enumerate(right_indices):
            if symmetric and b < a:
                continue
            br = superbracket(algebra.basis[i], algebra.basis[j])
            v = br.vectorize()
            if not v:
                continue
            if solver is None or solver.coordinates(v) is None:
                contained = False
            ech.insert(v)
    return ech.dim, contained


def _check(name, passed, detail) -> StructureCheck:
    return StructureCheck(name=name, passed=passed, detail=detail)


def _ideal_positions(algebra, name) -> list:
    idx = algebra.ideals.get(name, ())
    return [algebra.even_indices.index(i) for i in idx]


def _even_sum_check(algebra, parts, expected_dims) -> StructureCheck:
    """parts = [(name, indices)] must be independent, exact, and pairwise
    commuting ideals of the even part."""
    details = []
    ok = True
    total = 0
    for (name, idx), want in zip(parts, expected_dims):
        rank = _span_rank(algebra.basis[i].vectorize() for i in idx)
        total += len(idx)
        if len(idx) != want or rank != len(idx):
            ok = False
        details.append(f"{name}: dim {len(idx)} (expected {want})")
    rank_all = _span_rank(
        algebra.basis[i].vectorize() for _, idx in parts for i in idx)
    if rank_all != total or total != algebra.even_dim:
        ok = False
        details.append(f"parts span {rank_all} of {algebra.even_dim}")
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            for i in parts[a][1]:
                for j in parts[b][1]:
                    if not superbracket(algebra.basis[i], algebra.basis[j]).is_zero():
                        ok = False
                        details.append(
                            f"[{parts[a][0]}, {parts[b][0]}] != 0 at ({i},{j})")
                        break
    return _check("a-even-part-splits", ok, "; ".join(details))


def _odd_component_check(algebra, expected, seed) -> tuple:
    """Decompose the odd part under the full even part; returns the check
    plus the pieces for weight analysis."""
    odd_adj = adjoint_action(algebra, "odd")
    comps = decompose_module(odd_adj, seed=seed)
    got = [c.dim for c in comps]
    ok = got == expected
    return (
        _check("b-odd-part-components", ok,
               f"component dims {got} (expected {expected})"),
        odd_adj,
        comps,
    )


def _combined_cartan(algebra) -> Optional[tuple]:
    """CartanBasis spanning both even ideals, plus its odd-part action
    matrices.  None when neither ideal carries Cartan data."""
    cb1 = algebra.cartans.get("I1")
    cb2 = algebra.cartans.get("I2")
    r1 = cb1.rank if cb1 else 0
    elements = tuple()
    if cb1:
        elements += cb1.elements
    if cb2:
        elements += cb2.elements
    if not elements:
        return None

    def to_labels(raw):
        left = cb1.to_labels(raw[:r1]) if cb1 else ()
        right = cb2.to_labels(raw[r1:]) if cb2 else ()
        return left + right

    def order_key(raw):
        parts = []
        if cb1:
            parts.append(cb1.order_key(raw[:r1]))
        if cb2:
            parts.append(cb2.order_key(raw[r1:]))
        return tuple(parts)

    cb = CartanBasis(family="product", elements=elements,
                     to_labels=to_labels, order_key=order_key)
    acts = [matrix_action_on_part(h, algebra, "odd") for h in elements]
    return cb, acts


def _surjective_action_check(algebra, name, positions, augmented: str = "") -> StructureCheck:
    rank, contained = _brackets_span_part(
        algebra,
        [algebra.even_indices[p] for p in positions],
        list(algebra.odd_indices),
        list(algebra.odd_indices),
        symmetric=False,
    )
    ok = contained and rank == algebra.odd_dim
    detail = f"bracket span rank {rank} of {algebra.odd_dim}"
    if augmented:
        detail += f"; {augmented}"
    return _check(name, ok, detail)


def _split_count_check(odd_adj, name, positions, expected, seed) -> StructureCheck:
    sub = odd_adj.restricted_family(positions)
    counts = _split_counts(decompose_module(sub, seed=seed))
    ok = counts == expected
    return _check(name, ok, f"split {counts} (expected {expected})")


def _fundamental(rank: int, first: bool) -> tuple:
    """(1,0,...,0) or (0,...,0,1); empty at rank 0."""
    if rank == 0:
        return ()
    out = [0] * rank
    out[0 if first else -1] = 1
    return tuple(out)


def verify_sl_structure(algebra: Superalgebra, m: int, n: int,
                        seed: int = 0) -> StructureReport:
    """The five structure facts for sl(m,n), m != n.

    The even part splits as two special-linear ideals plus a
    one-dimensional center of the even part; the center element
    diag(n*I, m*I) is present for every m != n (the dimension count
    m^2+n^2-1 does not work without it).
    At n = 1 the second ideal is zero, so the surjectivity of its action
    on the odd part is checked with the center adjoined, and the check
    records that substitution.
    """
    checks = []
    i1 = _ideal_positions(algebra, "I1")
    i2 = _ideal_positions(algebra, "I2")
    u = _ideal_positions(algebra, "center")
    checks.append(_even_sum_check(
        algebra,
        [("I1", [algebra.even_indices[p] for p in i1]),
         ("I2", [algebra.even_indices[p] for p in i2]),
         ("U", [algebra.even_indices[p] for p in u])],
        (m * m - 1, n * n - 1, 1)))

    comp_check, odd_adj, comps = _odd_component_check(
        algebra, [m * n, m * n], seed)
    checks.append(comp_check)

    lam_m, mu_m = _fundamental(m - 1, True), _fundamental(m - 1, False)
    lam_n, mu_n = _fundamental(n - 1, True), _fundamental(n - 1, False)
    expected_weights = sorted([lam_m + mu_n, mu_m + lam_n])
    cart = _combined_cartan(algebra)
    if comp_check.passed and cart is not None:
        cb, acts = cart
        got = sorted(highest_weight(c, cb, acts) for c in comps)
        checks.append(_check(
            "b-odd-highest-weights", got == expected_weights,
            f"weights {got} (expected {expected_weights})"))
    else:
        checks.append(_check(
            "b-odd-highest-weights", False,
            "no Cartan data or wrong component count"))

    rank, contained = _brackets_span_part(
        algebra, list(algebra.odd_indices), list(algebra.odd_indices),
        list(algebra.even_indices), symmetric=True)
    checks.append(_check(
        "c-odd-brackets-span-even",
        contained and rank == algebra.even_dim,
        f"span rank {rank} of {algebra.even_dim}"))

    checks.append(_surjective_action_check(algebra, "d-I1-action-spans-odd", i1))
    if n == 1:
        checks.append(_surjective_action_check(
            algebra, "d-I2-action-spans-odd-center-augmented", i2 + u,
            augmented="I2 is zero at n=1; the center acts by m-n"))
    else:
        checks.append(_surjective_action_check(
            algebra, "d-I2-action-spans-odd", i2))

    checks.append(_split_count_check(
        odd_adj, "e-odd-split-under-I1", i1, ((2 * n, m),), seed))
    checks.append(_split_count_check(
        odd_adj, "e-odd-split-under-I2", i2, ((2 * m, n),), seed))
    return StructureReport(label=algebra.label, checks=tuple(checks))


def verify_osp_structure(algebra: Superalgebra, m: int, n: int,
                         seed: int = 0) -> StructureReport:
    """The five structure facts for osp(m,2n): orthogonal plus symplectic
    even ideals, one irreducible odd module of dimension 2mn, odd
    brackets spanning the even part, surjective ideal actions, and the
    2n x m / m x 2n odd splits under the separate ideals."""
    checks = []
    i1 = _ideal_positions(algebra, "I1")
    i2 = _ideal_positions(algebra, "I2")
    checks.append(_even_sum_check(
        algebra,
        [("I1", [algebra.even_indices[p] for p in i1]),
         ("I2", [algebra.even_indices[p] for p in i2])],
        (m * (m - 1) // 2, n * (2 * n + 1))))

    comp_check, odd_adj, _ = _odd_component_check(algebra, [2 * m * n], seed)
    checks.append(comp_check)

    rank, contained = _brackets_span_part(
        algebra, list(algebra.odd_indices), list(algebra.odd_indices),
        list(algebra.even_indices), symmetric=True)
    checks.append(_check(
        "c-odd-brackets-span-even",
        contained and rank == algebra.even_dim,
        f"span rank {rank} of {algebra.even_dim}"))

    checks.append(_surjective_action_check(algebra, "d-I1-action-spans-odd", i1))
    checks.append(_surjective_action_check(algebra, "d-I2-action-spans-odd", i2))

    checks.append(_split_count_check(
        odd_adj, "e-odd-split-under-I1", i1, ((2 * n, m),), seed))
    checks.append(_split_count_check(
        odd_adj, "e-odd-split-under-I2", i2, ((m, 2 * n),), seed))
    return StructureReport(label=algebra.label, checks=tuple(checks))
