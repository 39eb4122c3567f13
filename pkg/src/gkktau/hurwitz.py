"""Hurwitz matrices, exact Routh-Hurwitz decisions, and the threshold scan.

The Hurwitz matrix of a degree-m polynomial arranges its coefficients so
that row 2i-1 carries the even-offset slice and row 2i the odd-offset
slice, shifted one column per row pair; positivity of all leading principal
minors decides strict left-half-plane stability.  One specific 4x4 minor of
the Hurwitz matrix of the reversed stability polynomial has a closed form
whose sign flips, permanently, at band parameter k = 21: that sign is the
instability threshold this module scans for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .charpoly import Polynomial, eta, poly_gcd, squarefree_decomposition
from .exact import IndexSet, RatMatrix, frac_str, leading_principal_minors, minor
from .rootfind import count_real_roots


@dataclass(frozen=True)
class HurwitzMatrix:
    """The order-(deg p) Hurwitz arrangement of a polynomial's coefficients."""

    source: Polynomial
    matrix: RatMatrix


def build_hurwitz(p: Polynomial) -> HurwitzMatrix:
    """Hurwitz matrix: entry (i, j), 1-based, is the coefficient of
    lambda^(m - (2j - i)), zero outside [0, m]."""
    m = p.degree
    if m < 1:
        raise ValueError("Hurwitz matrix needs degree >= 1")
    entries = [p.coeff(m - (2 * j - i)) for i in range(1, m + 1) for j in range(1, m + 1)]
    return HurwitzMatrix(source=p, matrix=RatMatrix(m, m, entries))


def hurwitz_minor_2to5(k: int) -> Fraction:
    """The rows/cols {2..5} minor of the Hurwitz matrix of eta(k)."""
    if k < 3:
        raise ValueError(f"need k >= 3 so the Hurwitz matrix has order >= 5, got {k}")
    h = build_hurwitz(eta(k))
    block = IndexSet.interval(2, 5, h.matrix.rows)
    return minor(h.matrix, block, block)


def closed_form_minor(k: int) -> Fraction:
    """Closed form of the same minor:
    -(1/132300) (3k^3 - 49k^2 - 210k - 318) (k+4)^2 (k+5) C(k+3,2) C(k+3,4) C(k+3,6)."""
    if k < 3:
        raise ValueError(f"need k >= 3, got {k}")
    cubic = cubic_factor(k)
    return (
        Fraction(-1, 132300)
        * cubic
        * (k + 4) ** 2
        * (k + 5)
        * comb(k + 3, 2)
        * comb(k + 3, 4)
        * comb(k + 3, 6)
    )


def cubic_factor(k: int) -> int:
    """3k^3 - 49k^2 - 210k - 318, the sign-determining factor of the minor."""
    return 3 * k**3 - 49 * k**2 - 210 * k - 318


def _even_odd_parts(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    even = Polynomial([c if i % 2 == 0 else 0 for i, c in enumerate(p.coeffs)])
    odd = Polynomial([c if i % 2 == 1 else 0 for i, c in enumerate(p.coeffs)])
    return even, odd


def _imaginary_axis_only(h: Polynomial) -> bool:
    """True when every root of h lies on the imaginary axis.

    h is even or odd (it divides both q(x) and q(-x) up to sign).  Strip the
    power of x, substitute x -> i*w in the even remainder (a real
    polynomial in w), and compare the multiplicity-weighted real-root count
    against the degree.
    """
    coeffs = list(h.coeffs)
    a = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        a += 1
    h1 = Polynomial(coeffs)
    if h1.degree == 0:
        return True
    if any(c != 0 for i, c in enumerate(h1.coeffs) if i % 2 == 1):
        return False
    r = Polynomial(
        [(-1) ** (i // 2) * c if i % 2 == 0 else Fraction(0) for i, c in enumerate(h1.coeffs)]
    )
    total = 0
    for factor, mult in squarefree_decomposition(r):
        total += mult * count_real_roots(factor)
    return total == h1.degree


def routh_stable(p: Polynomial) -> str:
    """Exact verdict 'stable' | 'unstable' | 'boundary' for a real polynomial.

    After sign normalization, split off h = gcd(even part, odd part), the
    factor carrying all sign-symmetric root pairs (in particular every
    imaginary-axis root, at full multiplicity).  The cofactor q is
    axis-root-free, so positivity of all leading principal Hurwitz minors of
    q is decisive for it.  The verdict is stable iff q is stable and h is
    constant; boundary iff q is stable and h has only imaginary-axis roots;
    unstable otherwise.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    if p.leading() < 0:
        p = -p
    even, odd = _even_odd_parts(p)
    h = poly_gcd(even, odd)
    q = p.div_exact(h)
    if q.degree >= 1:
        minors = leading_principal_minors(build_hurwitz(q).matrix)
        q_stable = all(v > 0 for v in minors)
    else:
        q_stable = True
    if not q_stable:
        return "unstable"
    if h.degree == 0:
        return "stable"
    return "boundary" if _imaginary_axis_only(h) else "unstable"


@dataclass(frozen=True)
class TnnReport:
    """Outcome of the totally-nonnegative spot check."""

    negative_minor: tuple[int, list[int], list[int], Fraction] | None
    minors_checked: int

    @property
    def found_negative(self) -> bool:
        return self.negative_minor is not None


def _comb_rank(combo: tuple[int, ...], n: int) -> int:
    """Lexicographic rank of an ascending 0-based combination within C(n, k)."""
    rank = 0
    prev = -1
    k = len(combo)
    for i, c in enumerate(combo):
        for v in range(prev + 1, c):
            rank += comb(n - 1 - v, k - 1 - i)
        prev = c
    return rank


def tnn_spot_check(h: HurwitzMatrix, max_order: int = 4) -> TnnReport:
    """Scan minors of order 1..max_order for a negative value.

    One negative minor certifies the matrix is not totally nonnegative,
    hence (for a Hurwitz matrix) that the source polynomial has a root with
    positive real part.  Enumeration is by ascending order, then
    lexicographic row and column sets, stopping at the first hit; column
    sets touching an all-zero column within the selected rows give minor 0
    and are counted without expansion (Hurwitz matrices are banded, so this
    prunes most of the scan).
    """
    mat = h.matrix
    n = mat.rows
    if max_order > n:
        raise ValueError(f"max_order {max_order} exceeds matrix order {n}")
    if all(e.denominator == 1 for e in mat.entries):
        grid = [[int(e) for e in mat.row(i)] for i in range(n)]
    else:
        grid = mat.to_lists()  # the expansions below work on Fractions too
    checked = 0
    for order in range(1, max_order + 1):
        per_row_set = comb(n, order)
        for ri, rows in enumerate(combinations(range(n), order)):
            live = [c for c in range(n) if any(grid[r][c] != 0 for r in rows)]
            hit = _scan_row_block(grid, rows, live, order)
            if hit is not None:
                cols, value = hit
                position = checked + ri * per_row_set + _comb_rank(cols, n) + 1
                return TnnReport(
                    negative_minor=(
                        order,
                        [r + 1 for r in rows],
                        [c + 1 for c in cols],
                        Fraction(value),
                    ),
                    minors_checked=position,
                )
        checked += per_row_set * per_row_set
    return TnnReport(negative_minor=None, minors_checked=checked)


def _scan_row_block(grid, rows, live, order):
    """First column set (lex) with a negative minor on the given rows, or None."""
    if order == 4:
        return _scan_rows4(grid, rows, live)
    for cols in combinations(live, order):
        value = _small_det([[grid[r][c] for c in cols] for r in rows])
        if value < 0:
            return cols, value
    return None


def _scan_rows4(grid, rows, live):
    # Laplace by complementary 2x2 minors of the top and bottom row pairs;
    # the pair tables are shared across all column quadruples of this block.
    r1, r2, r3, r4 = (grid[r] for r in rows)
    idx = {c: i for i, c in enumerate(live)}
    nlive = len(live)
    pair_id = {}
    top = []
    bot = []
    pid = 0
    for a in range(nlive):
        ca = live[a]
        for b in range(a + 1, nlive):
            cb = live[b]
            pair_id[(a, b)] = pid
            top.append(r1[ca] * r2[cb] - r1[cb] * r2[ca])
            bot.append(r3[ca] * r4[cb] - r3[cb] * r4[ca])
            pid += 1
    for cols in combinations(range(nlive), 4):
        a, b, c, d = cols
        value = (
            top[pair_id[(a, b)]] * bot[pair_id[(c, d)]]
            - top[pair_id[(a, c)]] * bot[pair_id[(b, d)]]
            + top[pair_id[(a, d)]] * bot[pair_id[(b, c)]]
            + top[pair_id[(b, c)]] * bot[pair_id[(a, d)]]
            - top[pair_id[(b, d)]] * bot[pair_id[(a, c)]]
            + top[pair_id[(c, d)]] * bot[pair_id[(a, b)]]
        )
        if value < 0:
            return tuple(live[x] for x in cols), value
    return None


def _small_det(m: list[list]) -> int:
    """Cofactor determinant tuned for the tiny orders of the spot check."""
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if k == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    total = 0
    for c in range(k):
        if m[0][c] == 0:
            continue
        sub = [row[:c] + row[c + 1 :] for row in m[1:]]
        term = m[0][c] * _small_det(sub)
        total += term if c % 2 == 0 else -term
    return total


@dataclass(frozen=True)
class ScanRow:
    k: int
    cubic: int
    minor_value: Fraction
    sign: int


@dataclass(frozen=True)
class ThresholdScan:
    first_negative_k: int
    rows: tuple[ScanRow, ...]


def threshold_scan(k_max: int) -> ThresholdScan:
    """Sign table of the closed-form minor for k = 3..k_max.

    Returns the least k with a negative value (the instability threshold)
    together with the full table.
    """
    if k_max < 21:
        raise ValueError(f"scan range must reach the known threshold, need k_max >= 21, got {k_max}")
    rows = []
    first = None
    for k in range(3, k_max + 1):
        v = closed_form_minor(k)
        sign = (v > 0) - (v < 0)
        rows.append(ScanRow(k=k, cubic=cubic_factor(k), minor_value=v, sign=sign))
        if sign < 0 and first is None:
            first = k
    if first is None:
        raise AssertionError("no sign change found; the closed form is wrong")
    return ThresholdScan(first_negative_k=first, rows=tuple(rows))


def scan_csv_lines(scan: ThresholdScan) -> list[str]:
    """CSV rows: k, cubic_factor, minor_value (exact), sign."""
    out = ["k,cubic_factor,minor_value,sign"]
    for row in scan.rows:
        out.append(f"{row.k},{row.cubic},{frac_str(row.minor_value)},{row.sign:+d}")
    return out
