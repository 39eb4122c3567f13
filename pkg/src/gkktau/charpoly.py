"""Exact univariate polynomials and characteristic polynomials.

Polynomials carry Fraction coefficients in ascending degree order and are
immutable values.  Characteristic polynomials of Hessenberg matrices use an
O(n^2) expansion recurrence over leading principal blocks; general matrices
are first reduced to Hessenberg form by exact similarity transforms.  An
independent fraction-free (Bareiss) determinant over the polynomial ring is
kept as a test oracle.

The module also materializes the closed-form polynomial family attached to
the Toeplitz Hessenberg matrices: phi (characteristic polynomials of the
leading blocks), g_poly (the border-determinant increments in the last-row
expansion), nu (the small-parameter limit of phi), and the transformed
stability polynomials psi and eta.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Sequence

from .exact import DimensionError, RatMatrix


class InexactDivisionError(ArithmeticError):
    """A polynomial division expected to be exact left a remainder."""


def _normalize(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Polynomial:
    """Immutable polynomial over Fraction, coefficients ascending by degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        object.__setattr__(self, "coeffs", _normalize([Fraction(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    ZERO: "Polynomial"
    ONE: "Polynomial"
    X: "Polynomial"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        """Coefficient of lambda^i (0 outside the stored range)."""
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner; works for Fraction, float, mpf/mpc alike."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, d: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if d.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = d.degree
        lead = d.leading()
        q = [Fraction(0)] * max(len(rem) - dd, 0)
        for i in range(len(rem) - dd - 1, -1, -1):
            f = rem[i + dd] / lead
            if f == 0:
                continue
            q[i] = f
            for j, c in enumerate(d.coeffs):
                rem[i + j] -= f * c
        return Polynomial(q), Polynomial(rem[:dd])

    def div_exact(self, d: "Polynomial") -> "Polynomial":
        q, r = self.divmod(d)
        if not r.is_zero:
            raise InexactDivisionError(f"division left remainder {r.coeffs}")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self * (1 / self.leading())

    def compose_neg(self) -> "Polynomial":
        """p(-lambda)."""
        return Polynomial([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def reversed(self, n: int | None = None) -> "Polynomial":
        """lambda^n * p(1/lambda); n defaults to deg p and must be >= deg p."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError(f"reversal order {n} below degree {self.degree}")
        return Polynomial([self.coeff(n - i) for i in range(n + 1)])

    def __repr__(self) -> str:
        if self.is_zero:
            return "Polynomial(0)"
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "Polynomial(" + " + ".join(terms) + ")"

    def to_json(self) -> str:
        return json.dumps(
            {"coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        obj = json.loads(text)
        return cls([Fraction(int(num), int(den)) for num, den in obj["coeffs"]])


def _coerce(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial([value])
    raise TypeError(f"cannot coerce {type(value).__name__} to Polynomial")


Polynomial.ZERO = Polynomial()
Polynomial.ONE = Polynomial([1])
Polynomial.X = Polynomial([0, 1])

ONE_MINUS_X = Polynomial([1, -1])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm over Fraction coefficients."""
    while not b.is_zero:
        _, r = a.divmod(b)
        a, b = b, _primitive(r)
    return a.monic()


def _primitive(p: Polynomial) -> Polynomial:
    # scale by a positive rational so coefficients are coprime integers;
    # keeps Euclidean remainders from ballooning
    if p.is_zero:
        return p
    den = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return Polynomial([Fraction(v, g) for v in ints])


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        return p.monic() if not p.is_zero else p
    return p.div_exact(poly_gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: p = lc * prod f_i^i with the f_i coprime, square-free.

    Returns [(f_i, i)] for the nonconstant factors, in increasing i.
    """
    if p.degree < 1:
        return []
    p = p.monic()
    g = poly_gcd(p, p.derivative())
    b = p.div_exact(g)
    c = p.derivative().div_exact(g)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.div_exact(a)
        c = d.div_exact(a)
        d = c - b.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# characteristic polynomials


def _hessenberg_charpolys(rows: list[list[Fraction]]) -> list[Polynomial]:
    """Charpolys of all leading principal blocks of a Hessenberg matrix.

    Requires rows[i][j] == 0 for i > j+1.  Expansion of det(A - xI) along the
    last column of each leading block: the cofactor of entry (i, m) factors
    into the order-(i-1) block determinant times the product of subdiagonal
    entries between them.
    """
    n = len(rows)
    p = [Polynomial.ONE]
    for m in range(n):
        col = [rows[i][m] for i in range(m + 1)]
        total = (Polynomial([col[m]]) - Polynomial.X) * p[m]
        prod_sub = Fraction(1)
        sign = -1
        for i in range(m - 1, -1, -1):
            prod_sub *= rows[i + 1][i]
            if prod_sub == 0:
                break
            if col[i] != 0:
                total = total + (sign * prod_sub * col[i]) * p[i]
            sign = -sign
        p.append(total)
    return p[1:]


def _to_hessenberg(a: RatMatrix) -> list[list[Fraction]]:
    """Similarity-reduce a square matrix to Hessenberg form (zero below the
    first subdiagonal) using exact Gaussian transforms with row/column swaps."""
    n = a.rows
    m = a.to_lists()
    for c in range(n - 2):
        piv = next((r for r in range(c + 1, n) if m[r][c] != 0), None)
        if piv is None:
            continue
        if piv != c + 1:
            m[c + 1], m[piv] = m[piv], m[c + 1]
            for r in range(n):
                m[r][c + 1], m[r][piv] = m[r][piv], m[r][c + 1]
        for i in range(c + 2, n):
            f = m[i][c] / m[c + 1][c]
            if f == 0:
                continue
            for j in range(n):
                m[i][j] -= f * m[c + 1][j]
            for r in range(n):
                m[r][c + 1] += f * m[r][i]
    return m


def charpoly(a: RatMatrix) -> Polynomial:
    """Exact det(A - lambda*I) as a polynomial in lambda."""
    if not a.is_square:
        raise DimensionError("charpoly needs a square matrix")
    if a.rows == 0:
        return Polynomial.ONE
    if a.is_hessenberg():
        rows = a.to_lists()
    elif a.transpose().is_hessenberg():
        rows = a.transpose().to_lists()
    else:
        rows = _to_hessenberg(a)
    return _hessenberg_charpolys(rows)[-1]


def leading_charpolys(a: RatMatrix) -> list[Polynomial]:
    """Charpolys of every leading principal block A_1, ..., A_n.

    Only defined for Hessenberg matrices (either orientation), where the
    expansion recurrence yields the whole chain in one pass.
    """
    if not a.is_square:
        raise DimensionError("leading_charpolys needs a square matrix")
    if a.is_hessenberg():
        return _hessenberg_charpolys(a.to_lists())
    if a.transpose().is_hessenberg():
        return _hessenberg_charpolys(a.transpose().to_lists())
    raise DimensionError("leading_charpolys needs a Hessenberg matrix")


def poly_det(rows: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a matrix of polynomials by fraction-free elimination.

    Bareiss over the polynomial ring: every interior division is exact.
    Used as the general-matrix test oracle and for border determinants.
    """
    n = len(rows)
    if n == 0:
        return Polynomial.ONE
    m = [row[:] for row in rows]
    sign = 1
    prev = Polynomial.ONE
    for c in range(n - 1):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero), None)
        if piv is None:
            return Polynomial.ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]).div_exact(prev)
            m[i][c] = Polynomial.ZERO
        prev = m[c][c]
    return m[n - 1][n - 1] if sign == 1 else -m[n - 1][n - 1]


def charpoly_general(a: RatMatrix) -> Polynomial:
    """Independent charpoly oracle: Bareiss over the polynomial ring."""
    if not a.is_square:
        raise DimensionError("charpoly needs a square matrix")
    n = a.rows
    rows = [
        [
            Polynomial([a.entry(i, j), -1]) if i == j else Polynomial([a.entry(i, j)])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return poly_det(rows)


# ---------------------------------------------------------------------------
# the closed-form polynomial family


def _check_t(t: Fraction):
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0,1), got {t}")
    return t


def phi(k: int, t: Fraction, j: int) -> Polynomial:
    """Closed form of the order-(k+j+1) leading-block characteristic polynomial.

    For j = 1 this is (1-x)^(k+2) - (1-t).  For j > 1 the closed form carries
    a rational term whose numerator is exactly divisible by ((1-x) - t)^2;
    the division is performed once here and a nonzero remainder raises.
    """
    t = _check_t(t)
    if not 1 <= j <= k + 1:
        raise ValueError(f"phi needs 1 <= j <= k+1, got j={j}, k={k}")
    u = ONE_MINUS_X
    if j == 1:
        return u ** (k + 2) - (1 - t)
    main = u ** (j + k + 1) - (j * (1 - t)) * u ** (j - 1) + ((j - 1) * (1 - t) ** 2) * u ** (j - 2)
    bracket = (
        Polynomial([t ** (j - 1)])
        - ((j - 1) * t) * u ** (j - 2)
        + (j - 2) * u ** (j - 1)
    )
    quotient = bracket.div_exact((u - t) ** 2)
    return main + (t * (1 - t) ** 2) * quotient


def phi_tilde(k: int, t: Fraction, j: int) -> Polynomial:
    """The cofactor polynomial defined by phi(x) = t^j - x * phi_tilde(x)."""
    t = _check_t(t)
    p = phi(k, t, j)
    if p.coeff(0) != t**j:
        raise InexactDivisionError(f"phi constant term {p.coeff(0)} != t^{j}")
    return Polynomial([-c for c in p.coeffs[1:]])


def g_poly(k: int, t: Fraction, j: int) -> Polynomial:
    """The border-determinant increment in the last-row expansion.

    Closed form: -(1-t)(1-x)^(j-1) + (1-t)^2 * sum_{i<j-1} (1-x)^i t^(j-2-i),
    the geometric-quotient expansion; g_1 is the constant -(1-t).
    """
    t = _check_t(t)
    if j < 1:
        raise ValueError(f"g_poly needs j >= 1, got {j}")
    u = ONE_MINUS_X
    geo = Polynomial.ZERO
    for i in range(j - 1):
        geo = geo + t ** (j - 2 - i) * u**i
    return -(1 - t) * u ** (j - 1) + (1 - t) ** 2 * geo


def nu(k: int, j: int) -> Polynomial:
    """Limit of phi as t -> 0+: (1-x)^(j+k+1) - j(1-x)^(j-1) + (j-1)(1-x)^(j-2)."""
    if j < 1:
        raise ValueError(f"nu needs j >= 1, got {j}")
    u = ONE_MINUS_X
    p = u ** (j + k + 1) - j * u ** (j - 1)
    if j >= 2:
        p = p + (j - 1) * u ** (j - 2)
    return p


def psi(k: int) -> Polynomial:
    """nu(k, k+1) reflected and stripped of its (1+x)^(k-1) factor.

    The result equals (1+x)^(k+3) - (k+1)(1+x) + k; the division must be
    remainder-free and the displayed form is asserted.
    """
    if k < 1:
        raise ValueError(f"psi needs k >= 1, got {k}")
    one_plus = Polynomial([1, 1])
    q = nu(k, k + 1).compose_neg().div_exact(one_plus ** (k - 1))
    display = one_plus ** (k + 3) - (k + 1) * one_plus + k
    if q != display:
        raise InexactDivisionError("psi quotient disagrees with its displayed form")
    return q


def eta(k: int) -> Polynomial:
    """Coefficient reversal x^(k+3) * psi(1/x); degree k+2, leading coefficient 2."""
    if k < 1:
        raise ValueError(f"eta needs k >= 1, got {k}")
    p = psi(k).reversed(k + 3)
    display = Polynomial([comb(k + 3, k + 3 - i) for i in range(k + 2)] + [2])
    if p != display:
        raise InexactDivisionError("eta reversal disagrees with its displayed form")
    return p
