"""Letter-coboundary spaces and their interaction with a directive sequence.

A letter-coboundary at level n is a morphism c from level-n words to numbers
that vanishes on every return word to every letter.  Its value vector is
determined by the empty-word extension graph: the space is spanned by the
indicator differences 1^R_K - 1^L_K over connected components K, and has
dimension r - 1 where r is the number of components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .directive import DirectiveSequence
from .exactalg import (
    QuadNumber,
    as_quad,
    in_row_span,
    left_kernel,
    qmat,
    rank,
    right_kernel,
    row_times_mat,
    snf_with_transforms,
    solve_right,
)
from .language import (
    ComponentPartition,
    ReturnWordSet,
    empty_word_components,
    return_words,
)


@dataclass(frozen=True)
class CoboundaryVector:
    level: int
    values: tuple[QuadNumber, ...]

    def value(self, word: Sequence[int]) -> QuadNumber:
        acc = as_quad(0)
        for i in word:
            acc = acc + self.values[i]
        return acc

    def is_trivial(self) -> bool:
        return all(not v for v in self.values)


@dataclass(frozen=True)
class CoboundaryBasis:
    level: int
    rows: tuple[tuple[int, ...], ...]  # integer generators 1^R_K - 1^L_K
    partition: ComponentPartition

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, values: Sequence) -> bool:
        return in_row_span([list(r) for r in self.rows], [as_quad(x) for x in values])

    def coordinates(self, values: Sequence) -> Optional[list[QuadNumber]]:
        if not self.rows:
            return [] if all(not as_quad(x) for x in values) else None
        cols = [[as_quad(r[j]) for r in self.rows] for j in range(len(values))]
        return solve_right(cols, [as_quad(x) for x in values])


@dataclass(frozen=True)
class RhoMap:
    """Values on letters, constant on each right class of the partition."""

    level: int
    values: tuple[QuadNumber, ...]
    partition: ComponentPartition


def coboundary_space(ds: DirectiveSequence, n: int) -> CoboundaryBasis:
    """Basis 1^R_K - 1^L_K over all components but the last (canonical order).

    The r generators always satisfy one relation (they sum to zero), so
    dropping the last sorted component leaves an independent family of
    dimension r - 1; independence is verified.
    """
    part = empty_word_components(ds, n)
    size = ds.alphabet_at(n).size
    rows = []
    for lefts, rights in zip(part.left_classes[:-1], part.right_classes[:-1]):
        row = [0] * size
        for a in rights:
            row[a] += 1
        for a in lefts:
            row[a] -= 1
        rows.append(tuple(row))
    basis = CoboundaryBasis(n, tuple(rows), part)
    if rows and rank([list(r) for r in rows]) != len(rows):
        raise AssertionError("coboundary generators must be independent")
    return basis


def is_trivial_space(ds: DirectiveSequence, n: int) -> bool:
    return coboundary_space(ds, n).dim == 0


def coboundary_to_rho(c: CoboundaryVector, basis: CoboundaryBasis) -> RhoMap:
    """Recover rho with c(a) = rho(b) - rho(a) for every edge (a, b).

    rho is constant on right classes; it is normalized to zero on the right
    class of the first (canonically ordered) component.
    """
    part = basis.partition
    size = len(c.values)
    class_of = {}
    for idx, rights in enumerate(part.right_classes):
        for a in rights:
            class_of[a] = idx
    rho_class: dict[int, QuadNumber] = {0: as_quad(0)}
    # rho is one value per right class; each letter a links its own class (as
    # a right vertex) to the class holding its right extensions (where it is
    # a left vertex) through c(a) = rho(ext class) - rho(own class).
    changed = True
    guard = 0
    while changed:
        changed = False
        guard += 1
        if guard > size * size + 4:
            raise AssertionError("rho propagation did not converge")
        for a in range(size):
            ka = class_of.get(a)
            if ka is None:
                continue
            # find some b with (a_L, b_R) an edge: all such b share a class
            kb = None
            for idx, (lefts, rights) in enumerate(
                zip(part.left_classes, part.right_classes)
            ):
                if a in lefts:
                    kb = idx
                    break
            if kb is None:
                continue
            if ka in rho_class and kb not in rho_class:
                rho_class[kb] = rho_class[ka] + c.values[a]
                changed = True
            elif kb in rho_class and ka not in rho_class:
                rho_class[ka] = rho_class[kb] - c.values[a]
                changed = True
    values = tuple(rho_class[class_of[a]] for a in range(size))
    return RhoMap(c.level, values, part)


def rho_to_coboundary(rho: RhoMap) -> CoboundaryVector:
    """c(a) = rho(b) - rho(a) for any b with ab in the language."""
    part = rho.partition
    size = len(rho.values)
    right_of: dict[int, int] = {}
    for idx, lefts in enumerate(part.left_classes):
        for a in lefts:
            right_of[a] = idx  # a's right extensions live in component idx
    values = []
    for a in range(size):
        idx = right_of[a]
        b = part.right_classes[idx][0]
        values.append(rho.values[b] - rho.values[a])
    return CoboundaryVector(rho.level, tuple(values))


def verify_coboundary(
    c: CoboundaryVector, return_sets: Sequence[ReturnWordSet]
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Exact vanishing of c on every provided return word."""
    for rs in return_sets:
        for w in rs.words:
            if c.value(w):
                return False, w
    return True, None


def compose_with(c: CoboundaryVector, ds: DirectiveSequence, m: int) -> CoboundaryVector:
    """The level-m coboundary c o tau_{n,m}, i.e. the row vector c . M_{n,m}."""
    if m < c.level:
        raise ValueError("target level must not precede the coboundary level")
    mat = ds.compose_range(c.level, m).incidence()
    return CoboundaryVector(m, tuple(row_times_mat(list(c.values), mat)))


def stable_coboundaries(ds: DirectiveSequence, n: int, depth: int = 32) -> list[tuple[QuadNumber, ...]]:
    """Coboundary row vectors whose push-forwards stabilize along the period.

    For eventually periodic sequences: x in the coboundary space such that
    x . M_{n,m0} is fixed by the period-product matrix, where m0 is the first
    aligned level >= n; vectors whose push-forward dies (lands in the kernel)
    are dropped since they compose to the trivial coboundary.  For explicit
    schedules the condition x . M_{n,m} = x . M_{n,m+1} is only checked up to
    the declared depth.
    """
    basis = coboundary_space(ds, n)
    if basis.dim == 0:
        return []
    rows = [list(map(as_quad, r)) for r in basis.rows]
    if ds.is_eventually_periodic:
        m0 = max(n, len(ds.preperiod))
        fwd = ds.compose_range(n, m0).incidence()
        period = ds.compose_range(m0, m0 + len(ds.period)).incidence()
        size = len(period)
        # condition on x: (x A)(P - I) = 0
        conds = []
        for x in rows:
            xa = row_times_mat(x, fwd)
            xap = row_times_mat(xa, period)
            conds.append([xap[j] - xa[j] for j in range(size)])
        kern = right_kernel(qmat(conds)) if rows else []
        out = []
        for coeffs in kern:
            vec = [as_quad(0)] * len(rows[0])
            for c, row in zip(coeffs, rows):
                for j in range(len(row)):
                    vec[j] = vec[j] + c * row[j]
            pushed = row_times_mat(vec, fwd)
            pushed = row_times_mat(pushed, period)
            if any(pushed):
                out.append(tuple(vec))
        return out
    # explicit schedule: require stabilization of the push-forward up to depth
    top = min(depth, len(ds.explicit))
    if top < n + 2:
        return []
    m1 = ds.compose_range(n, top - 1).incidence()
    m2 = ds.compose_range(n, top).incidence()
    conds = []
    for x in rows:
        a = row_times_mat(x, m1)
        b = row_times_mat(x, m2)
        # compare push-forwards where alphabets coincide; sizes may differ,
        # in which case nothing stabilizes
        if len(a) != len(b):
            return []
        conds.append([b[j] - a[j] for j in range(len(a))])
    kern = right_kernel(qmat(conds))
    out = []
    for coeffs in kern:
        vec = [as_quad(0)] * len(rows[0])
        for c, row in zip(coeffs, rows):
            for j in range(len(row)):
                vec[j] = vec[j] + c * row[j]
        if any(row_times_mat(vec, m2)):
            out.append(tuple(vec))
    return out


@dataclass(frozen=True)
class LatticeReport:
    target: tuple[int, ...]
    alphabet_size: int
    rank: int
    elementary_divisors: tuple[int, ...]
    finite_index: bool
    index: Optional[int]
    saturated: bool
    implies_trivial_coboundaries: bool


def return_word_lattice(
    ds: DirectiveSequence, n: int, u: Sequence[int], budget: int
) -> LatticeReport:
    """Smith normal form of the abelianized return words to u.

    Finite index (rank equal to the alphabet size) forces every
    letter-coboundary to be trivial; that implication is cross-checked
    against the extension-graph computation.  The converse is false in
    general, so nothing is inferred from an infinite index.
    """
    size = ds.alphabet_at(n).size
    rs = return_words(ds, n, tuple(u), budget)
    rows = rs.parikh_rows(size)
    if not rows:
        return LatticeReport(tuple(u), size, 0, (), False, None, rs.saturated, False)
    divisors, _, _ = snf_with_transforms(rows)
    rk = len(divisors)
    finite = rk == size
    index = None
    if finite:
        index = 1
        for d in divisors:
            index *= abs(d)
    implies = finite
    if finite and not is_trivial_space(ds, n):
        raise AssertionError(
            "finite return-word lattice index with a nontrivial coboundary "
            "space: language generation is inconsistent"
        )
    return LatticeReport(
        tuple(u), size, rk, tuple(divisors), finite, index, rs.saturated, implies
    )


def coboundary_report(ds: DirectiveSequence, n: int, budget: int = 4096) -> dict:
    """JSON-ready summary: components, basis, stable basis, letter lattice."""
    basis = coboundary_space(ds, n)
    stable = stable_coboundaries(ds, n)
    lattice = return_word_lattice(ds, n, (0,), budget)
    alpha = ds.alphabet_at(n)
    return {
        "level": n,
        "components": basis.partition.count,
        "dimension": basis.dim,
        "trivial": basis.dim == 0,
        "basis": [[str(x) for x in row] for row in basis.rows],
        "stable_basis": [[str(x) for x in row] for row in stable],
        "left_classes": [
            [alpha.symbols[a] for a in c] for c in basis.partition.left_classes
        ],
        "right_classes": [
            [alpha.symbols[a] for a in c] for c in basis.partition.right_classes
        ],
        "lattice": {
            "target": [alpha.symbols[a] for a in lattice.target],
            "rank": lattice.rank,
            "elementary_divisors": list(lattice.elementary_divisors),
            "finite_index": lattice.finite_index,
            "index": lattice.index,
            "saturated": lattice.saturated,
        },
    }
