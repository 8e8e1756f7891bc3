"""Exact letter frequencies, tower base measures, empirical frequencies, and
the Z-module generated by base measures.

Exact values need a primitive eventually periodic sequence whose Perron root
is rational or quadratic; anything else is served by empirical scans only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .directive import DirectiveSequence
from .exactalg import (
    FieldMixError,
    QuadNumber,
    as_quad,
    hnf,
    perron_data,
    rank,
    _merge_field,
)


class InexactMode(ValueError):
    """Exact frequencies are unavailable (non-quadratic Perron root)."""


@dataclass(frozen=True)
class FrequencyVector:
    level: int
    values: Optional[tuple[QuadNumber, ...]]  # None in inexact mode
    approx: tuple[float, ...]
    exact: bool

    def as_floats(self) -> list[float]:
        return list(self.approx)


@dataclass(frozen=True)
class BaseMeasureTable:
    """mu(B_n(a)) = u_a / lambda^n for n <= depth, exact."""

    depth: int
    perron: QuadNumber
    rows: tuple[tuple[QuadNumber, ...], ...]  # index n -> per-letter measures

    def measure(self, n: int, a: int) -> QuadNumber:
        return self.rows[n][a]


@dataclass(frozen=True)
class ZModuleDescription:
    field: int
    generators: tuple[QuadNumber, ...]

    def contains(self, x: QuadNumber) -> bool:
        """Exact membership of x in the Z-span of the generators."""
        if not self.generators:
            return not x
        den = 1
        for g in self.generators:
            den = math.lcm(den, g.p.denominator, g.q.denominator)
        den = math.lcm(den, x.p.denominator, x.q.denominator)
        rows = [[int(g.p * den), int(g.q * den)] for g in self.generators]
        h = hnf(rows)
        v = [int(x.p * den), int(x.q * den)]
        for row in h:
            pc = next(j for j, e in enumerate(row) if e)
            if v[pc] % row[pc] == 0:
                q = v[pc] // row[pc]
                v = [v[j] - q * row[j] for j in range(2)]
        return v == [0, 0]


def _aligned_level(ds: DirectiveSequence, n: int) -> int:
    start = len(ds.preperiod)
    if n <= start:
        return start
    p = len(ds.period)
    return start + math.ceil((n - start) / p) * p


def letter_frequencies(ds: DirectiveSequence, n: int) -> FrequencyVector:
    """Invariant letter frequencies of the level-n subshift.

    Computed as the normalized right Perron eigenvector of the period-product
    matrix at the first aligned level >= n, pulled back through the morphisms
    in between and renormalized.  Exact (QuadNumber) when the Perron root has
    degree <= 2 over Q; otherwise a float approximation flagged inexact.
    """
    if not ds.is_eventually_periodic:
        raise InexactMode("exact frequencies need an eventually periodic sequence")
    m0 = _aligned_level(ds, n)
    period = ds.compose_range(m0, m0 + len(ds.period)).incidence()
    data = perron_data(period)
    if not data.exact:
        u_f = list(data.right)
        if m0 > n:
            mat = ds.compose_range(n, m0).incidence()
            pulled = [
                sum(mat[b][a] * u_f[a] for a in range(len(mat[0])))
                for b in range(len(mat))
            ]
            total = sum(pulled)
            u_f = [x / total for x in pulled]
        return FrequencyVector(n, None, tuple(u_f), False)
    u = list(data.right)
    if m0 > n:
        mat = ds.compose_range(n, m0).incidence()
        pulled = []
        for b in range(len(mat)):
            acc = as_quad(0)
            for a in range(len(mat[0])):
                acc = acc + as_quad(mat[b][a]) * u[a]
            pulled.append(acc)
        total = as_quad(0)
        for x in pulled:
            total = total + x
        u = [x / total for x in pulled]
    for x in u:
        if x.sign() <= 0:
            raise AssertionError("frequencies must be strictly positive")
    return FrequencyVector(n, tuple(u), tuple(float(x) for x in u), True)


def frequencies_rationally_independent(ds: DirectiveSequence, n: int) -> Optional[bool]:
    """Exact rational independence of the level-n letter frequencies.

    When the frequencies are quadratic this is the rank of their coordinate
    matrix.  Otherwise irreducibility of the characteristic polynomial of the
    period-product matrix decides it: an irreducible polynomial forces the
    Perron eigenvector coordinates to be independent over Q, and a reducible
    one confines them to a proper subfield.
    """
    from .exactalg import char_poly, factor_over_Q

    if not ds.is_eventually_periodic:
        return None
    size = ds.alphabet_at(n).size
    freqs = letter_frequencies(ds, n)
    if freqs.exact:
        return rational_dimension(list(freqs.values)) == size
    m0 = _aligned_level(ds, n)
    period = ds.compose_range(m0, m0 + len(ds.period)).incidence()
    if m0 != n:
        return None  # pulled-back coordinates need the exact values
    fct = factor_over_Q(char_poly(period))
    return len(fct) == 1 and fct[0][1] == 1


def base_measures(ds: DirectiveSequence, depth: int) -> BaseMeasureTable:
    """Tower base measures of a constant sequence: mu(B_n(a)) = u_a / lambda^n.

    The normalization sum_a h_n(a) mu(B_n(a)) = 1 holds exactly at every
    level and is asserted.
    """
    if not (ds.is_eventually_periodic and not ds.preperiod and len(ds.period) == 1):
        raise InexactMode("base measures implemented for constant sequences")
    data = perron_data(ds.period[0].incidence())
    if not data.exact:
        raise InexactMode("Perron root has degree > 2")
    lam = data.value
    rows = []
    scale = as_quad(1)
    for n in range(depth + 1):
        row = tuple(u * scale for u in data.right)
        h = ds.heights(n)
        total = as_quad(0)
        for a, m in enumerate(row):
            total = total + as_quad(h[a]) * m
        assert total == as_quad(1), "tower measures must fill the space"
        rows.append(row)
        scale = scale / lam
    return BaseMeasureTable(depth, lam, tuple(rows))


def empirical_word_frequencies(
    ds: DirectiveSequence, prefix_length: int, k: int
) -> tuple[dict[tuple[int, ...], Fraction], int]:
    """Sliding-window counts over a generated level-0 prefix.

    Returns ({word: count / window_count}, actual prefix length); words of
    every length 1..k are included.
    """
    prefix = ds.point_prefix(0, prefix_length).indices[:prefix_length]
    n = len(prefix)
    out: dict[tuple[int, ...], Fraction] = {}
    for length in range(1, k + 1):
        windows = n - length + 1
        if windows <= 0:
            continue
        counts: dict[tuple[int, ...], int] = {}
        for i in range(windows):
            w = prefix[i : i + length]
            counts[w] = counts.get(w, 0) + 1
        for w, c in counts.items():
            out[w] = Fraction(c, windows)
    return out, n


def zmodule_reduce(values: Sequence[QuadNumber]) -> ZModuleDescription:
    """Canonical (at most two-generator) form of the Z-span of the values."""
    d = 1
    for v in values:
        d = _merge_field(d, v.d)
    den = 1
    for v in values:
        den = math.lcm(den, v.p.denominator, v.q.denominator)
    rows = [[int(v.p * den), int(v.q * den)] for v in values if v]
    if not rows:
        return ZModuleDescription(d, ())
    h = hnf(rows)
    gens = tuple(
        QuadNumber(d, Fraction(row[0], den), Fraction(row[1], den)) for row in h
    )
    return ZModuleDescription(d, gens)


def itau_module(ds: DirectiveSequence, depth: int) -> ZModuleDescription:
    """Z-module generated by all base measures mu(B_n(a)), n <= depth."""
    table = base_measures(ds, depth)
    values = [x for row in table.rows for x in row]
    return zmodule_reduce(values)


def rational_dimension(values: Sequence[QuadNumber]) -> int:
    """Dimension over Q of the span of the given quadratic numbers."""
    d = 1
    for v in values:
        d = _merge_field(d, as_quad(v).d)
    rows = [[as_quad(v).p, as_quad(v).q] for v in values]
    return rank(rows)
