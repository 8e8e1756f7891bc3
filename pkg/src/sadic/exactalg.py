"""Exact linear algebra over Q and real quadratic fields Q(sqrt(d)).

Everything in this module is exact: numbers are rationals or elements
p + q*sqrt(d) of a real quadratic field, comparisons go through exact sign
determination, and no certified result ever depends on floating point.
Floats appear only as first guesses (root location, floor estimates) that
are always corrected by exact arithmetic afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction

ALL_INSIDE = "all_inside_unit_disk"
NONE_INSIDE = "none_inside"
MIXED = "mixed"
BOUNDARY = "boundary"


class FieldMixError(ValueError):
    """Two distinct irrational quadratic fields met in one computation."""


class ClassificationError(ValueError):
    """Root modulus could not be decided exactly or with a safe margin."""


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n > 0 as s^2 * d with d squarefree; returns (s, d)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, d, p = 1, 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return s, d * n


def _coerce_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


@dataclass(frozen=True)
class QuadNumber:
    """Exact element p + q*sqrt(d) of Q(sqrt(d)); d = 1 means a plain rational.

    Normal form: d is squarefree and positive, and q == 0 forces d == 1, so
    equality and hashing are structural.
    """

    d: int
    p: Fraction
    q: Fraction

    def __post_init__(self):
        p = _coerce_fraction(self.p)
        q = _coerce_fraction(self.q)
        d = self.d
        if d < 1:
            raise ValueError("field parameter d must be >= 1")
        s, sf = squarefree_part(d)
        if s != 1:
            q, d = q * s, sf
        if q == 0 or d == 1:
            p, q, d = p + (q if d == 1 else 0), Fraction(0), 1
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(x) -> "QuadNumber":
        return QuadNumber(1, _coerce_fraction(x), Fraction(0))

    @staticmethod
    def sqrt(n: int) -> "QuadNumber":
        return QuadNumber(n, Fraction(0), Fraction(1))

    # -- field bookkeeping -------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _common_d(self, other: "QuadNumber") -> int:
        if self.is_rational:
            return other.d
        if other.is_rational:
            return self.d
        if self.d != other.d:
            raise FieldMixError(f"sqrt({self.d}) and sqrt({other.d}) do not mix")
        return self.d

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "QuadNumber":
        other = as_quad(other)
        d = self._common_d(other)
        return QuadNumber(d, self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __neg__(self) -> "QuadNumber":
        return QuadNumber(self.d, -self.p, -self.q)

    def __sub__(self, other) -> "QuadNumber":
        return self + (-as_quad(other))

    def __rsub__(self, other) -> "QuadNumber":
        return as_quad(other) + (-self)

    def __mul__(self, other) -> "QuadNumber":
        other = as_quad(other)
        d = self._common_d(other)
        return QuadNumber(
            d,
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadNumber":
        nrm = self.p * self.p - self.q * self.q * self.d
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadNumber(self.d, self.p / nrm, -self.q / nrm)

    def __truediv__(self, other) -> "QuadNumber":
        return self * as_quad(other).inverse()

    def __rtruediv__(self, other) -> "QuadNumber":
        return as_quad(other) * self.inverse()

    def conjugate(self) -> "QuadNumber":
        return QuadNumber(self.d, self.p, -self.q)

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of p + q*sqrt(d)."""
        p, q, d = self.p, self.q, self.d
        if q == 0:
            return 0 if p == 0 else (1 if p > 0 else -1)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p^2 against q^2 d
        lhs, rhs = p * p, q * q * d
        if lhs == rhs:
            return 0
        return (1 if p > 0 else -1) if lhs > rhs else (1 if q > 0 else -1)

    def __lt__(self, other) -> bool:
        return (self - as_quad(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - as_quad(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - as_quad(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - as_quad(other)).sign() >= 0

    def __abs__(self) -> "QuadNumber":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return not (self.p == 0 and self.q == 0)

    # -- rounding ----------------------------------------------------------

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(self.d)

    def floor(self) -> int:
        z = math.floor(float(self))
        # float was a guess; fix it exactly
        while (self - z).sign() < 0:
            z -= 1
        while (self - (z + 1)).sign() >= 0:
            z += 1
        return z

    def nearest_int(self) -> int:
        """floor(x + 1/2): ties round up."""
        return (self + Fraction(1, 2)).floor()

    def centered_frac(self) -> "QuadNumber":
        """x - nearest_int(x), lying in [-1/2, 1/2)."""
        return self - self.nearest_int()

    def dist_to_int(self) -> "QuadNumber":
        """Distance to the nearest integer, exact and nonnegative."""
        return abs(self.centered_frac())

    def is_integer(self) -> bool:
        return self.q == 0 and self.p.denominator == 1

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.p)
        return f"{self.p} + {self.q}*sqrt({self.d})"

    def __repr__(self) -> str:
        return f"QuadNumber({self})"


def as_quad(x) -> QuadNumber:
    if isinstance(x, QuadNumber):
        return x
    return QuadNumber.rational(x)


_TOKEN_SPLIT = None  # placeholder keeps import surface minimal


def parse_quad(text: str) -> QuadNumber:
    """Parse `p + q*sqrt(d)` with rational p, q in num/den form.

    Accepted terms: `3`, `-1/2`, `sqrt(5)`, `2*sqrt(5)`, `-1/2*sqrt(5)`,
    joined by `+` or `-`.  Inverse of str(QuadNumber).
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty number")
    # split into signed terms at top level
    terms, cur, i = [], "", 0
    for j, ch in enumerate(s):
        if ch in "+-" and j > 0 and s[j - 1] not in "+-*/(":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    total = QuadNumber.rational(0)
    for t in terms:
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"malformed number {text!r}")
        if "sqrt(" in t:
            head, _, tail = t.partition("sqrt(")
            if not tail.endswith(")"):
                raise ValueError(f"malformed sqrt in {text!r}")
            d = int(tail[:-1])
            head = head.rstrip("*")
            coeff = Fraction(head) if head else Fraction(1)
            total = total + QuadNumber(d, Fraction(0), sign * coeff)
        else:
            total = total + QuadNumber.rational(sign * Fraction(t))
    return total


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyZ:
    """Integer-coefficient polynomial, coefficients low degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c:
            c = (0,)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __call__(self, x):
        acc = as_quad(0) if isinstance(x, QuadNumber) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, m: Sequence[Sequence[int]]) -> list[list[int]]:
        n = len(m)
        acc = [[0] * n for _ in range(n)]
        for c in reversed(self.coeffs):
            acc = mat_mul_int(acc, m)
            for i in range(n):
                acc[i][i] += c
        return acc

    def __mul__(self, other: "PolyZ") -> "PolyZ":
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return PolyZ(tuple(out))

    def divmod_exact(self, other: "PolyZ") -> Optional["PolyZ"]:
        """Quotient if other divides self exactly over Z, else None."""
        if other.is_zero():
            raise ZeroDivisionError
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        if dq < 0:
            return None
        out = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            lead = rem[k + other.degree]
            if lead % other.leading != 0:
                return None
            q = lead // other.leading
            out[k] = q
            for j, c in enumerate(other.coeffs):
                rem[k + j] -= q * c
        if any(rem):
            return None
        return PolyZ(tuple(out))

    def __str__(self) -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0 and self.degree > 0:
                continue
            term = "" if (abs(c) == 1 and i > 0) else str(abs(c))
            if i >= 1:
                term += "x" if i == 1 else f"x^{i}"
            parts.append(("-" if c < 0 else "+", term))
        if not parts:
            return "0"
        sgn, t = parts[0]
        s = ("-" if sgn == "-" else "") + t
        for sgn, t in parts[1:]:
            s += f" {sgn} {t}"
        return s


def mat_mul_int(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                oi = out[i]
                for j in range(m):
                    oi[j] += c * bt[j]
    return out


def mat_pow_int(m: Sequence[Sequence[int]], e: int) -> list[list[int]]:
    n = len(m)
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [list(r) for r in m]
    while e:
        if e & 1:
            out = mat_mul_int(out, base)
        base = mat_mul_int(base, base)
        e >>= 1
    return out


def bareiss_det(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix, fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def char_poly(mat: Sequence[Sequence[int]]) -> PolyZ:
    """Monic characteristic polynomial det(xI - M), exact.

    Evaluated at n+1 integer points via fraction-free determinants and
    interpolated; the result is checked against trace and determinant.
    """
    n = len(mat)
    if n == 0:
        return PolyZ((1,))
    pts = list(range(n + 1))
    vals = []
    for x in pts:
        shifted = [[(x if i == j else 0) - mat[i][j] for j in range(n)] for i in range(n)]
        vals.append(bareiss_det(shifted))
    # Lagrange interpolation over Q; coefficients must come out integral
    coeffs = [Fraction(0)] * (n + 1)
    for i, xi in enumerate(pts):
        # basis polynomial prod_{j != i} (x - xj) / (xi - xj)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(pts):
            if j == i:
                continue
            denom *= xi - xj
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] -= c * xj
                new[k + 1] += c
            basis = new
        scale = Fraction(vals[i]) / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    assert all(c.denominator == 1 for c in coeffs), "interpolation must be integral"
    poly = PolyZ(tuple(int(c) for c in coeffs))
    tr = sum(mat[i][i] for i in range(n))
    assert poly.coeffs[-1] == 1 and poly.coeffs[n - 1] == -tr
    assert poly.coeffs[0] == (-1) ** n * bareiss_det(mat)
    return poly


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _poly_content(c: Iterable[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    return g or 1


def _mignotte_bound(f: PolyZ) -> int:
    norm2 = math.isqrt(sum(c * c for c in f.coeffs)) + 1
    return (2 ** (f.degree // 2 + 1)) * (norm2 + abs(f.leading))


def _find_integer_factor(f: PolyZ) -> Optional[PolyZ]:
    """A nontrivial monic-leading integer factor of degree <= deg/2, or None.

    Exhaustive coefficient search pruned by divisibility of f(0), f(1) and
    f(-1), with magnitudes capped by a Mignotte-style bound.  Only meant for
    the small degrees this library meets (alphabets <= 8, degree <= 12).
    """
    if f.degree > 12:
        raise ValueError("factorization implemented for degree <= 12 only")
    f0, f1, fm1 = f.eval_int(0), f.eval_int(1), f.eval_int(-1)
    bound = _mignotte_bound(f)
    lead_divs = [x for x in _divisors(f.leading)]
    const_divs = _divisors(f0) if f0 != 0 else list(range(-bound, bound + 1))
    for deg in range(1, f.degree // 2 + 1):
        for lead in lead_divs:
            for c0 in const_divs:
                for c0s in ((c0, -c0) if c0 != 0 else (0,)):
                    stack = [(c0s,)]
                    while stack:
                        partial = stack.pop()
                        if len(partial) == deg:
                            cand = PolyZ(partial + (lead,))
                            if f1 != 0 and cand.eval_int(1) != 0 and f1 % cand.eval_int(1) != 0:
                                continue
                            if fm1 != 0 and cand.eval_int(-1) != 0 and fm1 % cand.eval_int(-1) != 0:
                                continue
                            if f.divmod_exact(cand) is not None:
                                return cand
                        else:
                            for mid in range(-bound, bound + 1):
                                stack.append(partial + (mid,))
    return None


def factor_over_Q(f: PolyZ) -> list[tuple[PolyZ, int]]:
    """Irreducible integer factors of f with multiplicities.

    Rational roots are stripped first, then factor pairs are searched
    exhaustively within coefficient bounds.  The product of the returned
    powers equals f up to the sign/content unit, which is asserted.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    work = f
    unit = 1
    content = _poly_content(work.coeffs)
    if content > 1 or work.leading < 0:
        scale = content * (1 if work.leading > 0 else -1)
        unit = scale
        work = PolyZ(tuple(c // scale for c in work.coeffs))
    factors: list[PolyZ] = []
    # powers of x
    k = 0
    while work.coeffs[0] == 0 and work.degree > 0:
        work = PolyZ(work.coeffs[1:])
        k += 1
    factors.extend([PolyZ((0, 1))] * k)
    # rational (hence integer-pair p/q) roots
    changed = True
    while changed and work.degree >= 1:
        changed = False
        for qden in _divisors(work.leading):
            for pnum in _divisors(work.coeffs[0]):
                for r_num in (pnum, -pnum):
                    lin = PolyZ((-r_num, qden))
                    quot = work.divmod_exact(lin)
                    if quot is not None:
                        factors.append(lin)
                        work = quot
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    # recursive exhaustive splitting
    def split(g: PolyZ) -> list[PolyZ]:
        if g.degree <= 1:
            return [g] if g.degree == 1 else []
        h = _find_integer_factor(g)
        if h is None:
            return [g]
        quot = g.divmod_exact(h)
        return split(h) + split(quot)

    factors.extend(split(work))
    # normalize signs and group multiplicities
    normed = []
    for g in factors:
        if g.leading < 0:
            g = PolyZ(tuple(-c for c in g.coeffs))
            unit = -unit
        normed.append(g)
    normed.sort(key=lambda g: (g.degree, g.coeffs))
    grouped: list[tuple[PolyZ, int]] = []
    for g in normed:
        if grouped and grouped[-1][0] == g:
            grouped[-1] = (g, grouped[-1][1] + 1)
        else:
            grouped.append((g, 1))
    prod = PolyZ((unit,))
    for g, m in grouped:
        for _ in range(m):
            prod = prod * g
    assert prod == f, "factorization must reproduce the input"
    return grouped


def quad_factor_roots(g: PolyZ) -> list[QuadNumber]:
    """Exact roots of an irreducible degree<=2 integer polynomial.

    Degree-2 factors with negative discriminant (complex pair) yield no
    real roots and return [].
    """
    if g.degree == 1:
        return [QuadNumber.rational(Fraction(-g.coeffs[0], g.coeffs[1]))]
    if g.degree != 2:
        raise ValueError("exact roots only for degree <= 2")
    c, b, a = g.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s, d = squarefree_part(disc) if disc > 0 else (0, 1)
    if disc == 0:
        return [QuadNumber.rational(Fraction(-b, 2 * a))]
    root_disc = QuadNumber(d, Fraction(0), Fraction(s))
    return [
        (QuadNumber.rational(Fraction(-b)) + sgn * root_disc) / Fraction(2 * a)
        for sgn in (1, -1)
    ]


def root_moduli_classify(g: PolyZ) -> str:
    """Classify all roots of an irreducible factor against the unit circle.

    Exact for degree <= 2.  Higher degrees are classified numerically with a
    safety margin; an indeterminate boundary raises ClassificationError.
    """
    one = QuadNumber.rational(1)
    if g.degree == 1:
        (r,) = quad_factor_roots(g)
        m = abs(r)
        if m < one:
            return ALL_INSIDE
        if m == one:
            return BOUNDARY
        return NONE_INSIDE
    if g.degree == 2:
        c, b, a = g.coeffs
        if b * b - 4 * a * c < 0:
            # complex pair, |root|^2 == c/a exactly
            mod2 = Fraction(c, a)
            if mod2 < 1:
                return ALL_INSIDE
            if mod2 == 1:
                return BOUNDARY
            return NONE_INSIDE
        roots = quad_factor_roots(g)
        inside = [abs(r) < one for r in roots]
        if any(abs(abs(r) - one).sign() == 0 for r in roots):
            return BOUNDARY
        if all(inside):
            return ALL_INSIDE
        if not any(inside):
            return NONE_INSIDE
        return MIXED
    # numeric fallback with margin
    moduli = sorted(abs(z) for z in _numeric_roots(g))
    eps = 1e-9
    if any(abs(m - 1.0) < eps for m in moduli):
        raise ClassificationError(f"root modulus too close to 1 for {g}")
    inside = [m < 1.0 for m in moduli]
    if all(inside):
        return ALL_INSIDE
    if not any(inside):
        return NONE_INSIDE
    return MIXED


def _numeric_roots(g: PolyZ) -> list[complex]:
    """All complex roots, Durand-Kerner iteration (diagnostic use only)."""
    n = g.degree
    coeffs = [Fraction(c, g.leading) for c in g.coeffs]

    def ev(z: complex) -> complex:
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * z + complex(c)
        return acc

    roots = [(0.4 + 0.9j) ** k for k in range(n)]
    for _ in range(200):
        new = []
        for i, z in enumerate(roots):
            denom = 1.0 + 0j
            for j, w in enumerate(roots):
                if i != j:
                    denom *= z - w
            new.append(z - ev(z) / denom)
        if max(abs(a - b) for a, b in zip(new, roots)) < 1e-13:
            roots = new
            break
        roots = new
    return roots


# ---------------------------------------------------------------------------
# generic exact matrices (entries are QuadNumbers)
# ---------------------------------------------------------------------------

QMatrix = list[list[QuadNumber]]


def qmat(rows: Sequence[Sequence]) -> QMatrix:
    return [[as_quad(x) for x in row] for row in rows]


def mat_mul(a: QMatrix, b: QMatrix) -> QMatrix:
    n, k, m = len(a), len(b), len(b[0])
    zero = as_quad(0)
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            c = a[i][t]
            if c:
                for j in range(m):
                    out[i][j] = out[i][j] + c * b[t][j]
    return out


def row_times_mat(v: Sequence, m: Sequence[Sequence]) -> list[QuadNumber]:
    """Right action of a matrix on a row vector: (vM)_a = sum_b v_b M[b][a]."""
    rows, cols = len(m), len(m[0])
    out = [as_quad(0)] * cols
    for b in range(rows):
        c = as_quad(v[b])
        if c:
            for a in range(cols):
                out[a] = out[a] + c * m[b][a]
    return out


def rref(rows: Sequence[Sequence]) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form with deterministic first-nonzero pivoting."""
    m = qmat(rows)
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [m[i][j] - f * m[r][j] for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def right_kernel(rows: Sequence[Sequence]) -> QMatrix:
    """Canonical basis (as rows) of {x : M x = 0}."""
    if not rows:
        return []
    red, pivots = rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [as_quad(0)] * ncols
        vec[fc] = as_quad(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def left_kernel(rows: Sequence[Sequence]) -> QMatrix:
    """Canonical basis of {x : x M = 0} (row vectors)."""
    if not rows:
        return []
    transpose = [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]
    return right_kernel(transpose)


def solve_right(a: Sequence[Sequence], b: Sequence) -> Optional[list[QuadNumber]]:
    """One exact solution x of A x = b, or None."""
    if not a:
        return [] if all(not as_quad(x) for x in b) else None
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [as_quad(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def in_row_span(rows: Sequence[Sequence], v: Sequence) -> bool:
    if not rows:
        return all(not as_quad(x) for x in v)
    return rank(list(rows) + [list(v)]) == rank(rows)


# ---------------------------------------------------------------------------
# integer lattices: Hermite and Smith normal forms
# ---------------------------------------------------------------------------


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form (positive pivots, reduced above)."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # gcd-reduce column c below row r
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            i = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[i] = m[i], m[r]
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [m[i][j] - q * m[r][j] for j in range(ncols)]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [m[i][j] - q * m[r][j] for j in range(ncols)]
            r += 1
            if r == len(m):
                break
    return [row for row in m if any(row)]


def snf_with_transforms(
    a: Sequence[Sequence[int]],
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form: returns (divisors, U, V) with U A V diagonal.

    U and V are unimodular; divisors are the nonzero diagonal entries with
    d1 | d2 | ... .
    """
    m = [list(map(int, r)) for r in a]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        m[dst] = [m[dst][k] - q * m[src][k] for k in range(nc)]
        u[dst] = [u[dst][k] - q * u[src][k] for k in range(nr)]

    def add_col(dst, src, q):
        for row in m:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    t = 0
    while t < min(nr, nc):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        dirty = False
        for i in range(t + 1, nr):
            if m[i][t] != 0:
                add_row(i, t, m[i][t] // m[t][t])
                dirty = dirty or m[i][t] != 0
        for j in range(t + 1, nc):
            if m[t][j] != 0:
                add_col(j, t, m[t][j] // m[t][t])
                dirty = dirty or m[t][j] != 0
        if dirty:
            continue
        # enforce divisibility of the remaining block by m[t][t]
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % m[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, -1)
            continue
        t += 1
    divisors = [m[i][i] for i in range(min(nr, nc)) if m[i][i] != 0]
    return divisors, u, v


def solve_integer_system(
    a: Sequence[Sequence[int]], b: Sequence[int]
) -> Optional[tuple[list[int], list[list[int]]]]:
    """Integer solutions of A w = b: (particular, kernel basis) or None."""
    nr = len(a)
    nc = len(a[0]) if nr else 0
    if nr == 0:
        return [0] * nc, [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]
    divisors, u, v = snf_with_transforms(a)
    ub = [sum(u[i][k] * b[k] for k in range(nr)) for i in range(nr)]
    y = [0] * nc
    for i in range(min(nr, nc)):
        d = divisors[i] if i < len(divisors) else 0
        if d == 0:
            if i < nr and ub[i] != 0:
                return None
        else:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] // d
    for i in range(min(nr, nc), nr):
        if ub[i] != 0:
            return None
    w = [sum(v[i][k] * y[k] for k in range(nc)) for i in range(nc)]
    kernel = []
    for k in range(len(divisors), nc):
        kernel.append([v[i][k] for i in range(nc)])
    return w, kernel


def reduce_mod_lattice(vec: list[Fraction], lattice: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Canonical representative of vec modulo the lattice spanned by the rows.

    Uses the integer HNF of the (denominator-cleared) lattice and pushes each
    pivot coordinate into [-pivot/2, pivot/2).
    """
    if not lattice:
        return list(vec)
    den = 1
    for row in lattice:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    h = hnf([[int(x * den) for x in row] for row in lattice])
    v = [x * den for x in vec]
    for row in reversed(h):
        pc = next(j for j, x in enumerate(row) if x)
        # k = round(v[pc]/row[pc]) with half rounding up
        k = math.floor(v[pc] / row[pc] + Fraction(1, 2))
        if k:
            v = [v[j] - k * row[j] for j in range(len(v))]
    return [x / den for x in v]


# ---------------------------------------------------------------------------
# spectral structure of integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent row vectors over Q(sqrt(d))."""

    d: int
    rows: tuple[tuple[QuadNumber, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Sequence) -> bool:
        return in_row_span([list(r) for r in self.rows], [as_quad(x) for x in v])


def _merge_field(d1: int, d2: int) -> int:
    if d1 == 1:
        return d2
    if d2 == 1 or d1 == d2:
        return d1
    raise FieldMixError(f"analysis mixes Q(sqrt({d1})) and Q(sqrt({d2}))")


def _shifted(mat: Sequence[Sequence[int]], eta: QuadNumber) -> QMatrix:
    n = len(mat)
    return [
        [as_quad(mat[i][j]) - (eta if i == j else as_quad(0)) for j in range(n)]
        for i in range(n)
    ]


def eigen_left(mat: Sequence[Sequence[int]], eta: QuadNumber) -> SubspaceBasis:
    """Basis of the left eta-eigenspace {x : x M = eta x}, exact.

    eta must be an exact root of the characteristic polynomial.
    """
    cp = char_poly(mat)
    if cp(eta).sign() != 0:
        raise ValueError(f"{eta} is not an eigenvalue")
    basis = left_kernel(_shifted(mat, eta))
    return SubspaceBasis(eta.d, tuple(tuple(r) for r in basis))


def eigen_right(mat: Sequence[Sequence[int]], eta: QuadNumber) -> SubspaceBasis:
    """Basis of the right eta-eigenspace {x : M x = eta x}, rows = vectors."""
    cp = char_poly(mat)
    if cp(eta).sign() != 0:
        raise ValueError(f"{eta} is not an eigenvalue")
    basis = right_kernel(_shifted(mat, eta))
    return SubspaceBasis(eta.d, tuple(tuple(r) for r in basis))


def qmat_pow(m: QMatrix, e: int) -> QMatrix:
    n = len(m)
    out = qmat([[1 if i == j else 0 for j in range(n)] for i in range(n)])
    base = [row[:] for row in m]
    while e:
        if e & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        e >>= 1
    return out


def stable_space(mat: Sequence[Sequence[int]]) -> SubspaceBasis:
    """Left stable space: span of left generalized eigenspaces with |eta| < 1.

    Row convention throughout: x belongs to the space iff x M^k -> 0.  The
    basis lives in Q(sqrt(d)) where d is forced by the contracting quadratic
    factors; mixing two distinct irrational fields raises FieldMixError.

    Irreducible integer factors can contribute only in two ways: powers of x
    (the generalized kernel) and real quadratic factors with exactly one root
    inside the unit disk.  A rational root r != 0 has |r| >= 1, and a complex
    pair of an irreducible quadratic has |eta|^2 = c >= 1.
    """
    n = len(mat)
    factors = factor_over_Q(char_poly(mat))
    d = 1
    rows: list[list[QuadNumber]] = []
    for g, mult in factors:
        cls = root_moduli_classify(g)
        if cls in (NONE_INSIDE, BOUNDARY):
            continue
        if g.degree == 1 and g.coeffs == (0, 1):
            power = mat_pow_int(mat, mult)
            rows.extend(left_kernel(qmat(power)))
            continue
        if g.degree == 1:
            # nonzero rational root strictly inside is impossible for monic
            # integer factors; guarded by the classifier
            raise AssertionError("unexpected contracting rational root")
        if g.degree == 2:
            for root in quad_factor_roots(g):
                if abs(root) < QuadNumber.rational(1):
                    d = _merge_field(d, root.d)
                    shifted = _shifted(mat, root)
                    block = qmat_pow(shifted, mult) if mult > 1 else shifted
                    rows.extend(left_kernel(block))
            continue
        raise ClassificationError(
            f"contracting factor of degree {g.degree} needs an exact field "
            "beyond quadratic"
        )
    # defensive: confirm joint independence
    if rows and rank(rows) != len(rows):
        raise AssertionError("stable space basis must be independent")
    return SubspaceBasis(d, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class PerronData:
    """Perron root with right (frequency-direction) and left eigenvectors."""

    value: QuadNumber | float
    right: tuple
    left: tuple
    exact: bool
    enclosure: tuple[float, float] | None = None


def _max_real_root_float(g: PolyZ) -> float:
    return max((z.real for z in _numeric_roots(g) if abs(z.imag) < 1e-8), default=-math.inf)


def is_primitive_matrix(mat: Sequence[Sequence[int]]) -> bool:
    """Wielandt bound check: M^((n-1)^2 + 1) positive."""
    n = len(mat)
    e = (n - 1) ** 2 + 1
    p = mat_pow_int(mat, e)
    return all(x > 0 for row in p for x in row)


def perron_data(mat: Sequence[Sequence[int]]) -> PerronData:
    """Perron root and eigenvectors of a primitive nonnegative integer matrix.

    Exact (QuadNumber) when the Perron root has degree <= 2 over Q; otherwise
    a float enclosure of width <= 1e-12 is returned with exact=False.
    """
    if not is_primitive_matrix(mat):
        raise ValueError("matrix is not primitive")
    factors = factor_over_Q(char_poly(mat))
    best, best_val = None, -math.inf
    for g, _ in factors:
        val = _max_real_root_float(g)
        if val > best_val:
            best, best_val = g, val
    assert best is not None
    if best.degree <= 2:
        roots = quad_factor_roots(best)
        lam = max(roots)
        right = right_kernel(_shifted(mat, lam))
        assert len(right) == 1, "Perron root must be simple"
        u = right[0]
        total = as_quad(0)
        for x in u:
            total = total + x
        u = [x / total for x in u]
        left = left_kernel(_shifted(mat, lam))
        assert len(left) == 1
        lv = left[0]
        lead = next(x for x in lv if x)
        lv = [x / lead for x in lv]
        return PerronData(lam, tuple(u), tuple(lv), True)
    # numeric fallback: power iteration refined by bisection on the factor
    lo, hi = best_val - 1e-6, best_val + 1e-6

    def ev(x: float) -> float:
        acc = 0.0
        for c in reversed(best.coeffs):
            acc = acc * x + c
        return acc

    while ev(lo) * ev(hi) > 0:
        lo -= 1e-6
        hi += 1e-6
    for _ in range(80):
        mid = (lo + hi) / 2
        if ev(lo) * ev(mid) <= 0:
            hi = mid
        else:
            lo = mid
    lam_f = (lo + hi) / 2
    n = len(mat)
    vec = [1.0] * n
    for _ in range(200):
        nxt = [sum(mat[i][j] * vec[j] for j in range(n)) for i in range(n)]
        s = sum(nxt)
        vec = [x / s for x in nxt]
    lvec = [1.0] * n
    for _ in range(200):
        nxt = [sum(lvec[b] * mat[b][a] for b in range(n)) for a in range(n)]
        s = sum(nxt)
        lvec = [x / s for x in nxt]
    return PerronData(lam_f, tuple(vec), tuple(lvec), False, (lo, hi))


# ---------------------------------------------------------------------------
# decomposition target = sum(coeff_i * basis_i) + integer vector
# ---------------------------------------------------------------------------


def _fraction_matrix_lcm(rows: Sequence[Sequence[Fraction]]) -> int:
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return den


def integer_completion_solve(
    target: Sequence[QuadNumber],
    bases: Sequence[Sequence[Sequence[QuadNumber]]],
) -> Optional[tuple[list[list[QuadNumber]], list[int]]]:
    """Solve target = sum over bases of (coeff * vector) + integer vector.

    Coefficients range over Q(sqrt(d)).  The sqrt(d)-parts of the equation
    pin down part of the coefficients; the remaining rational system is
    solved with the integrality constraint via Hermite/Smith reduction of
    the lattice of achievable residues.  Returns per-basis coefficient lists
    and the integer vector, or None when no decomposition exists.

    The solution is canonicalized: the coefficient vector is reduced modulo
    the ambiguity lattice (combinations of basis vectors that are integer
    vectors), centering each reduced coordinate.  In particular a coefficient
    that is free modulo 1 comes out with rational part in [-1/2, 1/2).
    """
    n = len(target)
    flat: list[list[QuadNumber]] = [list(v) for basis in bases for v in basis]
    k = len(flat)
    d = 1
    for x in list(target) + [x for v in flat for x in v]:
        d = _merge_field(d, as_quad(x).d)
    # joint independence: required so the reported split is well defined
    if flat and rank(flat) != k:
        raise ValueError("basis vectors across spaces must be jointly independent")
    t_rat = [as_quad(x).p for x in target]
    t_irr = [as_quad(x).q for x in target]

    if k == 0:
        if all(q == 0 for q in t_irr) and all(p.denominator == 1 for p in t_rat):
            return [[] for _ in bases], [int(p) for p in t_rat]
        return None

    # unknown layout: y = (p_0, q_0, p_1, q_1, ..., p_{k-1}, q_{k-1})
    # coordinate j of sum(xi_i b_i):
    #   rational part: sum_i p_i*brat[i][j] + d*q_i*birr[i][j]
    #   sqrt-d  part: sum_i q_i*brat[i][j] +   p_i*birr[i][j]
    brat = [[as_quad(x).p for x in v] for v in flat]
    birr = [[as_quad(x).q for x in v] for v in flat]
    a_irr = [[Fraction(0)] * (2 * k) for _ in range(n)]
    a_rat = [[Fraction(0)] * (2 * k) for _ in range(n)]
    for j in range(n):
        for i in range(k):
            a_irr[j][2 * i] = birr[i][j]
            a_irr[j][2 * i + 1] = brat[i][j]
            a_rat[j][2 * i] = brat[i][j]
            a_rat[j][2 * i + 1] = d * birr[i][j]

    sol = solve_right(qmat(a_irr), [as_quad(x) for x in t_irr])
    if sol is None:
        return None
    y0 = [x.p for x in sol]
    null = right_kernel(qmat(a_irr))
    null_f = [[x.p for x in row] for row in null]
    if d == 1:
        # q parts are rigidly zero: drop kernel directions that touch them
        null_f = [row for row in null_f if all(row[2 * i + 1] == 0 for i in range(k))]

    def rat_part(y: Sequence[Fraction]) -> list[Fraction]:
        return [
            sum(a_rat[j][c] * y[c] for c in range(2 * k)) if k else Fraction(0)
            for j in range(n)
        ]

    r0 = [t_rat[j] - x for j, x in enumerate(rat_part(y0))]
    g_cols = [rat_part(row) for row in null_f]  # one column per kernel direction
    s = len(g_cols)
    # annihilator rows L with L * G == 0 : integrality condition L w = L r0
    if s:
        gmat = [[g_cols[c][j] for c in range(s)] for j in range(n)]
        ann = left_kernel(qmat(gmat))
        ann_f = [[x.p for x in row] for row in ann]
    else:
        ann_f = [[Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    if ann_f:
        den = _fraction_matrix_lcm(ann_f + [r0])
        a_int = [[int(x * den) for x in row] for row in ann_f]
        b_int = [int(sum(row[j] * r0[j] for j in range(n)) * den) for row in ann_f]
        got = solve_integer_system(a_int, b_int)
        if got is None:
            return None
        w, _ = got
    else:
        w = [0] * n
    # back-substitute the kernel coefficients c from G c = r0 - w
    if s:
        rhs = [r0[j] - w[j] for j in range(n)]
        gmat = [[g_cols[c][j] for c in range(s)] for j in range(n)]
        csol = solve_right(qmat(gmat), [as_quad(x) for x in rhs])
        if csol is None:
            return None
        cf = [x.p for x in csol]
        y = [y0[i] + sum(null_f[c][i] * cf[c] for c in range(s)) for i in range(2 * k)]
    else:
        if any(x.denominator != 1 for x in r0):
            return None
        w = [int(x) for x in r0]
        y = list(y0)

    # canonical reduction: ambiguity lattice in y-space
    if s:
        den = _fraction_matrix_lcm(g_cols)
        scaled = [[int(x * den) for x in col] for col in g_cols]
        # lattice of c with G c integral: preimage via Smith reduction
        gt = [[scaled[c][j] for c in range(s)] for j in range(n)]
        divisors, _, v = snf_with_transforms(gt)
        lat_c: list[list[Fraction]] = []
        for i in range(s):
            step = Fraction(den, divisors[i]) if i < len(divisors) else None
            if step is None:
                continue
            lat_c.append([Fraction(v[r][i]) * step for r in range(s)])
        lat_y = [
            [sum(Fraction(null_f[c][i]) * lc[c] for c in range(s)) for i in range(2 * k)]
            for lc in lat_c
        ]
        y = reduce_mod_lattice(y, lat_y)

    coeffs = [QuadNumber(d, y[2 * i], y[2 * i + 1]) for i in range(k)]
    combo = [as_quad(0)] * n
    for i, v in enumerate(flat):
        for j in range(n):
            combo[j] = combo[j] + coeffs[i] * v[j]
    w_vec = []
    for j in range(n):
        resid = as_quad(target[j]) - combo[j]
        if not resid.is_integer():
            return None
        w_vec.append(int(resid.p))
    out, at = [], 0
    for basis in bases:
        out.append(coeffs[at : at + len(basis)])
        at += len(basis)
    return out, w_vec
