"""Continuous-eigenvalue certification and refutation, constant-length
spectra, balancedness, and dimension/complexity bounds.

A certificate for a candidate alpha at level n is an exact decomposition

    alpha * h_n = c + v + w

with c in the letter-coboundary space, v in the left stable space of the
period dynamics, and w an integer vector.  The residual v is contracted by
the incidence action, so alpha * h_m(u) - c(tau_{n,m}(u)) tends to zero
uniformly over bounded-length factors u; the decay is also checked
numerically.  Failure to find a certificate is never reported as a
refutation: refutations come only from the necessary condition that
max_a ||alpha h_n(a)|| tends to zero, observed to fail with a uniform gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .coboundary import (
    CoboundaryVector,
    coboundary_space,
    return_word_lattice,
    stable_coboundaries,
)
from .directive import DirectiveSequence
from .exactalg import (
    QuadNumber,
    SubspaceBasis,
    as_quad,
    in_row_span,
    char_poly,
    integer_completion_solve,
    left_kernel,
    parse_quad,
    qmat,
    rank,
    right_kernel,
    row_times_mat,
    stable_space,
)
from .language import (
    block_presentation,
    extension_graph,
    connected_components,
    factors,
    is_dendric_up_to,
    return_words,
    InternalInconsistency,
)
from .measures import (
    InexactMode,
    frequencies_rationally_independent,
    letter_frequencies,
    rational_dimension,
)

CERTIFIED = "certified"
REFUTED = "refuted-by-trend"
INCONCLUSIVE = "inconclusive"

REFUTATION_GAP = Fraction(1, 16)  # uniform gap demanded of a failing trend


@dataclass(frozen=True)
class Certificate:
    level: int
    alpha: QuadNumber
    coboundary: tuple[QuadNumber, ...]
    stable: tuple[QuadNumber, ...]
    integral: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "alpha": str(self.alpha),
            "coboundary": [str(x) for x in self.coboundary],
            "stable": [str(x) for x in self.stable],
            "integral": list(self.integral),
        }


@dataclass(frozen=True)
class LevelDiagnostics:
    level: int
    sup_prefix: Optional[QuadNumber]
    necessary: QuadNumber
    recurrence_letter: Optional[int]  # r(n)
    recurrence_pair: Optional[int]  # r'(n)


@dataclass(frozen=True)
class DiagnosticReport:
    alpha: QuadNumber
    verdict: str
    gap: Optional[QuadNumber]
    levels: tuple[LevelDiagnostics, ...]
    scan_budget: Optional[int] = None

    def to_json_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "verdict": self.verdict,
            "gap": None if self.gap is None else str(self.gap),
            "scan_budget": self.scan_budget,
            "levels": [
                {
                    "level": d.level,
                    "sup_prefix": None if d.sup_prefix is None else str(d.sup_prefix),
                    "sup_prefix_float": None
                    if d.sup_prefix is None
                    else float(d.sup_prefix),
                    "necessary": str(d.necessary),
                    "necessary_float": float(d.necessary),
                    "r": d.recurrence_letter,
                    "r_pair": d.recurrence_pair,
                }
                for d in self.levels
            ],
        }


def _require_exact_alpha(alpha) -> QuadNumber:
    a = as_quad(alpha)
    return a


def _stable_space_at(ds: DirectiveSequence, n: int) -> SubspaceBasis:
    """Left stable space of the level-n incidence dynamics (row convention).

    x belongs iff x . M_{n,m} -> 0 as m grows.  For eventually periodic
    sequences this is the preimage, under right multiplication by
    A = M_{n,m0}, of the stable space of the period-product matrix at the
    first aligned level m0 >= n.
    """
    if not ds.is_eventually_periodic:
        raise ValueError("stable space needs an eventually periodic sequence")
    start = len(ds.preperiod)
    p = len(ds.period)
    m0 = start if n <= start else start + math.ceil((n - start) / p) * p
    period = ds.compose_range(m0, m0 + p).incidence()
    vp = stable_space(period)
    if m0 == n:
        return vp
    a_mat = ds.compose_range(n, m0).incidence()
    size_m0 = len(period)
    if vp.dim == 0:
        # preimage of {0}: left kernel of A
        rows = left_kernel(qmat(a_mat))
        return SubspaceBasis(1, tuple(tuple(r) for r in rows))
    # y in rowspan(Vp) iff y . z = 0 for every z in the right kernel of Vp
    z_cols = right_kernel([list(r) for r in vp.rows])
    if not z_cols:
        # Vp is the whole space: no constraint on x
        size_n = len(a_mat)
        full = [
            [as_quad(1 if i == j else 0) for j in range(size_n)] for i in range(size_n)
        ]
        return SubspaceBasis(vp.d, tuple(tuple(r) for r in full))
    # constraint matrix: columns A . z
    constraint = []
    for i in range(len(a_mat)):
        row = []
        for z in z_cols:
            acc = as_quad(0)
            for j in range(size_m0):
                acc = acc + as_quad(a_mat[i][j]) * z[j]
            row.append(acc)
        constraint.append(row)
    rows = left_kernel(constraint)
    return SubspaceBasis(vp.d, tuple(tuple(r) for r in rows))


def _alpha_heights(ds: DirectiveSequence, n: int, alpha: QuadNumber) -> list[QuadNumber]:
    return [alpha * h for h in ds.heights(n)]


def _certify_at_level(
    ds: DirectiveSequence,
    alpha: QuadNumber,
    n: int,
    cob_rows: Sequence[Sequence[QuadNumber]],
) -> Optional[Certificate]:
    v_basis = _stable_space_at(ds, n)
    stacked: list[list[QuadNumber]] = [list(r) for r in cob_rows]
    kept_v: list[list[QuadNumber]] = []
    for row in v_basis.rows:
        trial = stacked + kept_v + [list(row)]
        if rank(trial) == len(trial):
            kept_v.append(list(row))
    target = _alpha_heights(ds, n, alpha)
    sol = integer_completion_solve(target, [stacked, kept_v])
    if sol is None:
        return None
    (c_coeffs, v_coeffs), w = sol
    size = len(target)
    c_vec = [as_quad(0)] * size
    for coef, row in zip(c_coeffs, stacked):
        for j in range(size):
            c_vec[j] = c_vec[j] + coef * row[j]
    v_vec = [as_quad(0)] * size
    for coef, row in zip(v_coeffs, kept_v):
        for j in range(size):
            v_vec[j] = v_vec[j] + coef * row[j]
    cert = Certificate(n, alpha, tuple(c_vec), tuple(v_vec), tuple(w))
    # exact substitution check before emitting
    for j in range(size):
        assert target[j] == cert.coboundary[j] + cert.stable[j] + as_quad(cert.integral[j])
    return cert


def certify_eigenvalue(
    ds: DirectiveSequence, alpha, n_max: int = 8
) -> Optional[Certificate]:
    """Search levels 0..n_max for an exact eigenvalue certificate.

    The coboundary part ranges over the stable coboundaries first; if that
    fails at every level, the full coboundary space is tried as a fallback
    and the resulting certificate must additionally pass the numeric decay
    check before being returned.  None is NOT a refutation.
    """
    if not ds.is_eventually_periodic:
        raise ValueError("certification needs an eventually periodic sequence")
    if not ds.recognizable_assumed:
        raise ValueError("certification needs recognizability (declared flag)")
    alpha = _require_exact_alpha(alpha)
    for n in range(n_max + 1):
        cert = _certify_at_level(ds, alpha, n, stable_coboundaries(ds, n))
        if cert is not None:
            return cert
    for n in range(n_max + 1):
        full = [tuple(as_quad(x) for x in row) for row in coboundary_space(ds, n).rows]
        cert = _certify_at_level(ds, alpha, n, full)
        if cert is not None:
            ok, _, ratio = verify_certificate(cert, ds, depth=cert.level + 8, length=4)
            if ok and ratio is not None and ratio < 0.999:
                return cert
    return None


def verify_certificate(
    cert: Certificate, ds: DirectiveSequence, depth: int = 10, length: int = 6
) -> tuple[bool, list[tuple[int, float]], Optional[float]]:
    """Exact identity/membership checks plus a numeric decay table.

    Returns (ok, [(m, sup)], fitted ratio).  The table rows are the suprema
    of ||alpha h_m(u) - c(tau_{n,m}(u))|| over stored factors u of length up
    to `length`; they must eventually decrease and fit a ratio < 1.
    """
    n = cert.level
    size = len(cert.integral)
    target = _alpha_heights(ds, n, cert.alpha)
    for j in range(size):
        if target[j] != cert.coboundary[j] + cert.stable[j] + as_quad(cert.integral[j]):
            return False, [], None
    if not coboundary_space(ds, n).contains(cert.coboundary):
        return False, [], None
    v_basis = _stable_space_at(ds, n)
    if any(cert.stable) and not v_basis.contains(cert.stable):
        return False, [], None
    table: list[tuple[int, float]] = []
    sups: list[float] = []
    for m in range(n, depth + 1):
        if ds.depth is not None and m > ds.depth:
            break
        mat = ds.compose_range(n, m).incidence()
        pushed = row_times_mat(list(cert.coboundary), mat)
        gamma = [
            cert.alpha * h - pushed[a] for a, h in enumerate(ds.heights(m))
        ]
        lang = factors(ds, m, length)
        sup = as_quad(0)
        for w in lang.factors:
            acc = as_quad(0)
            for i in w:
                acc = acc + gamma[i]
            dist = acc.dist_to_int()
            if dist > sup:
                sup = dist
        table.append((m, float(sup)))
        sups.append(float(sup))
    ratio = None
    pairs = [(a, b) for a, b in zip(sups, sups[1:]) if a > 1e-15 and b > 1e-15]
    pairs = pairs[len(pairs) // 2 :]  # transient levels bias the fit
    if pairs:
        logs = [math.log(b / a) for a, b in pairs]
        ratio = math.exp(sum(logs) / len(logs))
    elif len(sups) >= 2 and max(sups[2:], default=0.0) == 0.0:
        ratio = 0.0
    # decreasing after the first two levels
    for a, b in zip(sups[2:], sups[3:]):
        if b > a + 1e-12:
            return False, table, ratio
    return True, table, ratio


# ---------------------------------------------------------------------------
# bounded diagnostics
# ---------------------------------------------------------------------------


def _recurrence_indices(
    ds: DirectiveSequence, n: int, cap: int = 12
) -> tuple[Optional[int], Optional[int]]:
    """r(n): least m with every level-n letter in every tau_{n,m}(a);
    r'(n): same for every length-2 level-n factor."""
    size = ds.alphabet_at(n).size
    try:
        pairs = {w for w in factors(ds, n, 2).factors if len(w) == 2}
    except Exception:
        pairs = set()
    r_letter = r_pair = None
    for m in range(n + 1, n + cap + 1):
        if ds.depth is not None and m > ds.depth:
            break
        ok_letters, ok_pairs = True, True
        for a in range(ds.alphabet_at(m).size):
            w = ds.expand_letter(n, m, a)
            present = set(w.indices)
            if present != set(range(size)):
                ok_letters = False
            if pairs and not pairs <= w.factors(2):
                ok_pairs = False
            if not ok_letters and not ok_pairs:
                break
        if r_letter is None and ok_letters:
            r_letter = m
        if r_pair is None and ok_pairs and pairs:
            r_pair = m
        if r_letter is not None and (r_pair is not None or not pairs):
            break
    return r_letter, r_pair


def _trend_verdict(
    necessary: list[QuadNumber],
) -> tuple[str, Optional[QuadNumber]]:
    if len(necessary) < 2:
        return INCONCLUSIVE, None
    half = necessary[len(necessary) // 2 :]
    gap = min(half)
    if gap >= as_quad(REFUTATION_GAP):
        return REFUTED, gap
    return INCONCLUSIVE, None


def host_diagnostic(
    ds: DirectiveSequence,
    alpha,
    depth: int,
    with_coboundary: Optional[CoboundaryVector] = None,
) -> DiagnosticReport:
    """Per-level suprema of ||alpha h_n(u) - c(u)|| over u in pref(tau_n tau_{n+1}(a)).

    c defaults to zero; a provided coboundary is pushed forward from its own
    level.  The necessary-condition sequence max_a ||alpha h_n(a)|| is always
    reported; the verdict is refuted-by-trend when it stays above the gap
    1/16 over the last half of the computed levels.
    """
    alpha = _require_exact_alpha(alpha)
    levels: list[LevelDiagnostics] = []
    necessary_seq: list[QuadNumber] = []
    max_n = depth
    if ds.depth is not None:
        max_n = min(depth, ds.depth - 2)
    for n in range(max_n + 1):
        h = ds.heights(n)
        c_vals: Optional[list[QuadNumber]] = None
        if with_coboundary is not None and with_coboundary.level <= n:
            mat = ds.compose_range(with_coboundary.level, n).incidence()
            c_vals = row_times_mat(list(with_coboundary.values), mat)
        necessary = max((alpha * hh).dist_to_int() for hh in h)
        sup = as_quad(0)
        pair = ds.compose_range(n, n + 2)
        for a in range(pair.domain.size):
            image = pair.image(a)
            acc = as_quad(0)
            for i in image.indices:
                term = alpha * h[i]
                if c_vals is not None:
                    term = term - c_vals[i]
                acc = acc + term
                dist = acc.dist_to_int()
                if dist > sup:
                    sup = dist
        r_letter, r_pair = _recurrence_indices(ds, n)
        levels.append(LevelDiagnostics(n, sup, necessary, r_letter, r_pair))
        necessary_seq.append(necessary)
    verdict, gap = _trend_verdict(necessary_seq)
    return DiagnosticReport(alpha, verdict, gap, tuple(levels))


def return_word_diagnostic(
    ds: DirectiveSequence, alpha, depth: int, budget: int = 4096
) -> DiagnosticReport:
    """Per-level suprema of ||alpha h_n(w)|| over scanned return words w and
    their concatenations up to three factors."""
    alpha = _require_exact_alpha(alpha)
    levels: list[LevelDiagnostics] = []
    necessary_seq: list[QuadNumber] = []
    max_n = depth if ds.depth is None else min(depth, ds.depth - 1)
    for n in range(max_n + 1):
        h = ds.heights(n)
        necessary = max((alpha * hh).dist_to_int() for hh in h)
        sup = as_quad(0)
        for a in range(ds.alphabet_at(n).size):
            rs = return_words(ds, n, (a,), budget)
            lengths = sorted({sum(h[i] for i in w) for w in rs.words})[:10]
            combos = set(lengths)
            for x in lengths:
                for y in lengths:
                    combos.add(x + y)
                    for z in lengths:
                        combos.add(x + y + z)
            for total in combos:
                dist = (alpha * total).dist_to_int()
                if dist > sup:
                    sup = dist
        r_letter, r_pair = _recurrence_indices(ds, n)
        levels.append(LevelDiagnostics(n, sup, necessary, r_letter, r_pair))
        necessary_seq.append(necessary)
    verdict, gap = _trend_verdict(necessary_seq)
    return DiagnosticReport(alpha, verdict, gap, tuple(levels), scan_budget=budget)


# ---------------------------------------------------------------------------
# constant-length spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    lengths: tuple[int, ...]  # q_n = |tau_{0,n}| for n = 1..depth
    q: int
    alphabet_bound: int
    description: str
    gcd_trace: tuple[tuple[int, int], ...]  # (level, gcd of return lengths)
    evidence: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return {
            "lengths": list(self.lengths),
            "q": self.q,
            "alphabet_bound": self.alphabet_bound,
            "description": self.description,
            "gcd_trace": [list(t) for t in self.gcd_trace],
            "evidence": list(self.evidence),
        }


def constant_length_spectrum(
    ds: DirectiveSequence, depth: int = 8, budget: int = 4096
) -> SpectrumReport:
    """Rational spectrum data of a constant-length sequence.

    The group of eigenvalues has the form { p / (q * |tau_{0,n}|) } for a
    single integer q coprime to every |tau_{0,n}| and bounded by the maximal
    alphabet size.  q is estimated as the stabilized gcd of scanned
    return-word lengths, reduced to its part coprime to the lengths and
    clipped by the alphabet bound; the evidence trail is part of the report.
    """
    morphs = list(ds.explicit) if ds.explicit else list(ds.preperiod) + list(ds.period)
    lens = []
    for m in morphs:
        ell = m.constant_length()
        if ell is None:
            raise ValueError("sequence is not of constant length")
        lens.append(ell)
    max_n = depth if ds.depth is None else min(depth, ds.depth - 1)
    qn = []
    for n in range(1, max_n + 1):
        total = 1
        for level in range(n):
            total *= ds.morphism_at(level).constant_length()
        qn.append(total)
    alpha_bound = max(
        max(m.domain.size, m.codomain.size) for m in morphs
    )
    trace = []
    for n in range(1, max_n + 1):
        g = 0
        for a in range(ds.alphabet_at(n).size):
            rs = return_words(ds, n, (a,), budget)
            for w in rs.words:
                g = math.gcd(g, len(w))
        trace.append((n, g))
    tail = [g for _, g in trace[len(trace) // 2 :]] or [1]
    q_raw = 0
    for g in tail:
        q_raw = math.gcd(q_raw, g)
    q_raw = q_raw or 1
    # strip primes shared with the constant lengths
    for ell in set(lens):
        while math.gcd(q_raw, ell) > 1:
            q_raw //= math.gcd(q_raw, ell)
    q = max(d for d in range(1, q_raw + 1) if q_raw % d == 0 and d <= alpha_bound)
    evidence = []
    for n in (1, 2):
        if n - 1 < len(qn):
            cand = QuadNumber.rational(Fraction(1, q * qn[n - 1]))
            rep = return_word_diagnostic(ds, cand, min(max_n, 6), budget)
            evidence.append(
                {
                    "alpha": str(cand),
                    "verdict": rep.verdict,
                    "final_sup": float(rep.levels[-1].sup_prefix)
                    if rep.levels and rep.levels[-1].sup_prefix is not None
                    else None,
                }
            )
    if len(set(lens)) == 1:
        desc = f"p/({q}*{lens[0]}^n)" if q > 1 else f"p/{lens[0]}^n"
    else:
        desc = f"p/({q}*q_n), q_n in {qn}"
    return SpectrumReport(tuple(qn), q, alpha_bound, desc, tuple(trace), tuple(evidence))


# ---------------------------------------------------------------------------
# balancedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    alphabet_size: int
    dim_stable: int
    dim_coboundary: int
    dim_sum: int
    codimension: int
    orthogonal_to_frequencies: bool

    def to_json_dict(self) -> dict:
        return {
            "balanced": self.balanced,
            "alphabet_size": self.alphabet_size,
            "dim_stable": self.dim_stable,
            "dim_coboundary": self.dim_coboundary,
            "dim_sum": self.dim_sum,
            "codimension": self.codimension,
            "orthogonal_to_frequencies": self.orthogonal_to_frequencies,
        }


def balanced_on_letters(ds: DirectiveSequence) -> BalanceReport:
    """Letter balance of a substitutive subshift (constant sequence).

    Balanced iff the sum of the stable space and the coboundary space has
    codimension one.  Both spaces are exactly orthogonal to the frequency
    vector, which is verified as a sanity check.
    """
    if not (ds.is_eventually_periodic and not ds.preperiod and len(ds.period) == 1):
        raise ValueError("letter balance implemented for constant sequences")
    mat = ds.period[0].incidence()
    v_basis = stable_space(mat)
    c_basis = coboundary_space(ds, 0)
    rows = [list(r) for r in v_basis.rows] + [
        [as_quad(x) for x in r] for r in c_basis.rows
    ]
    size = len(mat)
    dim_sum = rank(rows) if rows else 0
    freqs = letter_frequencies(ds, 0)
    if not freqs.exact:
        raise InexactMode("letter balance needs exact (degree <= 2) frequencies")
    ortho = True
    for row in rows:
        acc = as_quad(0)
        for x, mu in zip(row, freqs.values):
            acc = acc + as_quad(x) * mu
        if acc:
            ortho = False
    if not ortho:
        raise AssertionError("stable + coboundary must be orthogonal to frequencies")
    return BalanceReport(
        balanced=(size - dim_sum == 1),
        alphabet_size=size,
        dim_stable=v_basis.dim,
        dim_coboundary=c_basis.dim,
        dim_sum=dim_sum,
        codimension=size - dim_sum,
        orthogonal_to_frequencies=ortho,
    )


def balanced_on_factors(ds: DirectiveSequence, k: int) -> BalanceReport:
    """Balance on length-k factors via the k-block presentation.

    Length-k cylinders of the original subshift are letter cylinders of the
    block system under the radius-zero recoding, so letter balance of the
    block presentation decides factor balance.
    """
    return balanced_on_letters(block_presentation(ds, k))


# ---------------------------------------------------------------------------
# dimension and complexity bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionBounds:
    component_bound: int  # p(k) - |K_{k-1}| + 1
    unimodular_bound: Optional[int]  # |A| - r + 1 when unimodular
    rational_dim: int
    tijdeman_ok: bool
    tijdeman_equality: bool
    dendric_checked: Optional[bool]

    def to_json_dict(self) -> dict:
        return {
            "component_bound": self.component_bound,
            "unimodular_bound": self.unimodular_bound,
            "rational_dim": self.rational_dim,
            "tijdeman_ok": self.tijdeman_ok,
            "tijdeman_equality": self.tijdeman_equality,
            "dendric_checked": self.dendric_checked,
        }


def _is_unimodular(ds: DirectiveSequence) -> bool:
    from .exactalg import bareiss_det

    morphs = list(ds.explicit) if ds.explicit else list(ds.preperiod) + list(ds.period)
    for m in morphs:
        mat = m.incidence()
        if len(mat) != len(mat[0]) or abs(bareiss_det(mat)) != 1:
            return False
    return True


def eigenvalue_dim_bounds(ds: DirectiveSequence, n: int, k: int) -> DimensionBounds:
    """Upper bounds for the rational dimension of the eigenvalue group, and
    the Tijdeman complexity inequality p(j) >= (j-1)(t-1) + |A|.

    A Tijdeman violation cannot happen for correct tables and is raised as an
    internal inconsistency rather than reported.
    """
    table = factors(ds, n, k + 1)
    size = ds.alphabet_at(n).size
    p = [table.count(j) for j in range(1, k + 2)]
    comp_count = 0
    for w in ([()] if k - 1 == 0 else table.of_length(k - 1)):
        comp_count += connected_components(extension_graph(ds, n, w)).count
    bound1 = p[k - 1] - comp_count + 1
    r = connected_components(extension_graph(ds, n, ())).count
    bound2 = size - r + 1 if _is_unimodular(ds) else None
    freqs = letter_frequencies(ds, n)
    if freqs.exact:
        t = rational_dimension(list(freqs.values))
    elif frequencies_rationally_independent(ds, n):
        t = size
    else:
        raise InexactMode("rational dimension of frequencies not exactly decidable")
    equality = True
    for j in range(1, k + 1):
        lower = (j - 1) * (t - 1) + size
        if p[j - 1] < lower:
            raise InternalInconsistency(
                f"complexity p({j}) = {p[j - 1]} below Tijdeman bound {lower}"
            )
        if p[j - 1] != lower:
            equality = False
    dendric = None
    if equality and t == size:
        dendric, _ = is_dendric_up_to(ds, n, max(0, k - 2))
    return DimensionBounds(bound1, bound2, t, True, equality, dendric)


# ---------------------------------------------------------------------------
# sufficient conditions gathered per level
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CocoboundaryReport:
    per_level: tuple[dict, ...]
    everywhere: dict

    def to_json_dict(self) -> dict:
        return {"per_level": list(self.per_level), "everywhere": self.everywhere}


def cocoboundary_conditions(
    ds: DirectiveSequence, depth: int, budget: int = 4096
) -> CocoboundaryReport:
    """Evaluate, per level, the five sufficient conditions for trivial
    push-forward coboundaries: C1 connected empty-word graph, C2 rationally
    independent letter frequencies, C3 finite return-word lattice index,
    C4 left/right properness, C5 bounded alphabets with 1 not an eigenvalue
    of the period product.

    When some condition holds at every tested level, the summary marks the
    prefix-sup criterion as sufficient (P1) and necessary (P3) for
    eigenvalues.
    """
    rows = []
    max_n = depth if ds.depth is None else min(depth, ds.depth - 1)
    for n in range(max_n + 1):
        row: dict = {"level": n}
        part = connected_components(extension_graph(ds, n, ()))
        row["C1_connected"] = part.count == 1
        try:
            row["C2_rationally_independent"] = frequencies_rationally_independent(ds, n)
        except Exception:
            row["C2_rationally_independent"] = None
        finite = False
        for a in range(ds.alphabet_at(n).size):
            rep = return_word_lattice(ds, n, (a,), budget)
            if rep.finite_index:
                finite = True
                break
        row["C3_finite_lattice_index"] = finite
        tau = ds.morphism_at(n)
        row["C4_proper"] = tau.is_left_proper() or tau.is_right_proper()
        if ds.is_eventually_periodic:
            start = len(ds.preperiod)
            m0 = start if n <= start else n
            period = ds.compose_range(
                max(m0, start), max(m0, start) + len(ds.period)
            ).incidence()
            row["C5_one_not_eigenvalue"] = char_poly(period)(Fraction(1)) != 0
        else:
            row["C5_one_not_eigenvalue"] = None
        rows.append(row)
    everywhere = {}
    for key in (
        "C1_connected",
        "C2_rationally_independent",
        "C3_finite_lattice_index",
        "C4_proper",
        "C5_one_not_eigenvalue",
    ):
        vals = [r[key] for r in rows]
        everywhere[key] = all(v is True for v in vals) if vals else False
    everywhere["criterion_applies"] = any(
        everywhere[k] for k in everywhere if k.startswith("C")
    )
    return CocoboundaryReport(tuple(rows), everywhere)


# ---------------------------------------------------------------------------
# candidate parsing (CLI surface)
# ---------------------------------------------------------------------------

_NAMED = {
    "golden": QuadNumber(5, Fraction(1, 2), Fraction(1, 2)),
    "sqrt2": QuadNumber(2, Fraction(0), Fraction(1)),
}


def parse_alpha(text: str) -> QuadNumber:
    """Parse an eigenvalue candidate: `p/q`, `p + q*sqrt(d)`, or a name."""
    key = text.strip().lower()
    if key in _NAMED:
        return _NAMED[key]
    return parse_quad(text)
