"""Construction of the Toeplitz Hessenberg family and its limit matrix.

A family member of order n with band parameter k and weight t in (0,1) is
Toeplitz with first column (1, 1, 0, ..., 0)^T and first row
(1, 0 x k, a_1, ..., a_(n-k-1)).  The coefficients a_j are pinned by
requiring every leading principal minor of order k+j+1 to equal t^j.  The
closed form a_1 = (-1)^k (1-t), a_j = (-1)^(k+j) t^(j-2) (1-t)^2 satisfies
those identities exactly for j <= k+2 and genuinely diverges from them at
j = k+3 (computed fact, robust across k), so build_A takes the closed form
on the head and extends by the defining linear solve beyond it; orders up
to n = 2k+3 never leave the closed-form range.  Sending t -> 0 at order
n = 2k+2 yields the limit matrix with first row
(1, 0 x k, (-1)^k, (-1)^k, 0 x (k-1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import IndexSet, RatMatrix, det


def pos_part(x: int) -> int:
    """x_+ : x if x > 0, else 0."""
    return x if x > 0 else 0


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (n, k, t) selecting one member of the family."""

    n: int
    k: int
    t: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.t < 1:
            raise ValueError(f"t must lie in (0,1), got {self.t}")


def coeff_a(k: int, t: Fraction, j: int) -> Fraction:
    """Closed-form first-row coefficient a_j."""
    t = Fraction(t)
    if j < 1:
        raise ValueError(f"coefficient index must be >= 1, got {j}")
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0,1), got {t}")
    if j == 1:
        return (-1) ** k * (1 - t)
    return (-1) ** (k + j) * t ** (j - 2) * (1 - t) ** 2


def _toeplitz(n: int, k: int, coeffs: list[Fraction]) -> RatMatrix:
    """Assemble the banded Toeplitz matrix from first-row coefficients.

    Diagonal offsets: 0 and -1 carry 1; +1..+k carry 0; +k+j carries coeffs[j-1].
    """
    zero = Fraction(0)
    one = Fraction(1)

    def at(offset: int) -> Fraction:
        if offset in (0, -1):
            return one
        if offset <= k or offset - k > len(coeffs):
            return zero
        return coeffs[offset - k - 1]

    return RatMatrix(n, n, [at(j - i) for i in range(n) for j in range(n)])


def family_coefficients(n: int, k: int, t: Fraction) -> list[Fraction]:
    """First-row coefficients (a_1, ..., a_(n-k-1)) of the order-n member.

    The closed form covers j <= k+2; later coefficients come from the
    defining linear solve seeded with that head.
    """
    t = Fraction(t)
    head = [coeff_a(k, t, j) for j in range(1, min(n - k - 1, k + 2) + 1)]
    if n - k - 1 <= k + 2:
        return head
    return _solve_coefficients(n, k, t, head)


def build_A(params: FamilyParams) -> RatMatrix:
    """The order-n family member; lower bidiagonal when n <= k+1."""
    n, k, t = params.n, params.k, params.t
    return _toeplitz(n, k, family_coefficients(n, k, t))


def build_A_from_coeffs(n: int, k: int, coeffs: list[Fraction]) -> RatMatrix:
    """Assemble an order-n member from explicit first-row coefficients.

    Needs n - k - 1 coefficients (none when n <= k+1); used by the
    minor-driven solver, which must stay independent of coeff_a.
    """
    need = max(n - k - 1, 0)
    if len(coeffs) < need:
        raise ValueError(f"order {n} needs {need} coefficients, got {len(coeffs)}")
    return _toeplitz(n, k, list(coeffs[:need]))


def _solve_coefficients(n: int, k: int, t: Fraction, initial: list[Fraction]) -> list[Fraction]:
    """Extend a coefficient prefix by the defining minor identities.

    Expanding the order-(k+j+1) determinant along its first row gives

        det A_(k+j+1) = det A_(k+j) + sum_l (-1)^(k+l) a_l det A_(j-l)

    which is linear in a_j with coefficient (-1)^(k+j) (det A_0 = 1 by the
    empty convention).  Solving against the target value t^j one j at a time
    uses only determinants of matrices built from already-known prefixes.
    """
    solved = list(initial)

    def det_order(m: int) -> Fraction:
        return det(build_A_from_coeffs(m, k, solved))

    for j in range(len(solved) + 1, n - k):
        known = det_order(k + j)
        for l in range(1, j):
            known += (-1) ** (k + l) * solved[l - 1] * det_order(j - l)
        sign = (-1) ** (k + j)
        solved.append((t**j - known) * sign)
    return solved


def coeff_a_solve(n: int, k: int, t: Fraction) -> list[Fraction]:
    """Recover (a_1, ..., a_(n-k-1)) purely from the defining minor identities.

    Starts from nothing, so this path never consults the closed form; it is
    the independent cross-check of coeff_a on j <= k+2 and the authority
    beyond, where the closed form no longer satisfies the identities.
    """
    t = Fraction(t)
    if n <= k + 1:
        raise ValueError(f"need n > k+1 to have coefficients, got n={n}, k={k}")
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0,1), got {t}")
    return _solve_coefficients(n, k, t, [])


def build_B(k: int) -> RatMatrix:
    """The order-(2k+2) limit matrix (t -> 0 of the order-2k+2 member)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    s = Fraction((-1) ** k)
    return _toeplitz(2 * k + 2, k, [s, s] + [Fraction(0)] * (k - 1))


def minor_formula(n: int, k: int, t: Fraction, i: int, j: int) -> Fraction:
    """Predicted value t^((j-k-1)_+) of the window minor on rows/cols i..i+j-1."""
    t = Fraction(t)
    if not (1 <= i and j >= 1 and i + j - 1 <= n):
        raise ValueError(f"window i={i}, length j={j} falls outside 1..{n}")
    return t ** pos_part(j - k - 1)


def window(n: int, i: int, j: int) -> IndexSet:
    """The consecutive index set {i..i+j-1} inside ambient n."""
    return IndexSet.interval(i, i + j - 1, n)
