"""Exact rational matrices, determinants, and minor extraction.

Everything downstream (family construction, class certification, Hurwitz
minors) runs on these primitives, so all arithmetic here is exact: scalars
are `fractions.Fraction` backed by Python's arbitrary-precision integers,
and determinants are computed by fraction-free (Bareiss) elimination over
integers after clearing denominators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

# The exact scalar type used throughout the package.  Fraction already
# maintains the required invariants: reduced to lowest terms, denominator > 0.
Rational = Fraction

DET_ORACLE_CAP = 8


class DimensionError(ValueError):
    """Matrix dimensions incompatible with the requested operation."""


@dataclass(frozen=True)
class IndexSet:
    """A sorted subset of {1..ambient}, the row/column selector for minors.

    Members are 1-based, strictly increasing; the empty set is allowed.
    """

    ambient: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.ambient < 0:
            raise ValueError(f"ambient must be >= 0, got {self.ambient}")
        prev = 0
        for m in self.members:
            if not prev < m <= self.ambient:
                raise ValueError(
                    f"members must be strictly increasing in [1, {self.ambient}], got {self.members}"
                )
            prev = m

    @classmethod
    def of(cls, members: Iterable[int], ambient: int) -> "IndexSet":
        return cls(ambient, tuple(sorted(set(members))))

    @classmethod
    def interval(cls, p: int, q: int, ambient: int) -> "IndexSet":
        """The consecutive range {p..q}; empty when p > q."""
        if p > q:
            return cls(ambient, ())
        return cls(ambient, tuple(range(p, q + 1)))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.members)

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet.of(set(self.members) | set(other.members), self.ambient)

    def intersection(self, other: "IndexSet") -> "IndexSet":
        return IndexSet.of(set(self.members) & set(other.members), self.ambient)


class RatMatrix:
    """An immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        entries = tuple(Fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionError("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int) -> Fraction:
        """Entry at 0-based position (i, j)."""
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def matmul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[k] * other.entry(k, j) for k in range(self.cols)), Fraction(0)))
        return RatMatrix(self.rows, other.cols, out)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_toeplitz(self) -> bool:
        return all(
            self.entry(i, j) == self.entry(i + 1, j + 1)
            for i in range(self.rows - 1)
            for j in range(self.cols - 1)
        )

    def is_hessenberg(self) -> bool:
        """True when all entries below the first subdiagonal vanish."""
        return all(
            self.entry(i, j) == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i > j + 1
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: {body})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": self.rows,
                "cols": self.cols,
                "entries": [[str(e.numerator), str(e.denominator)] for e in self.entries],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "RatMatrix":
        obj = json.loads(text)
        entries = [Fraction(int(num), int(den)) for num, den in obj["entries"]]
        return cls(obj["rows"], obj["cols"], entries)


def submatrix(a: RatMatrix, rows: IndexSet, cols: IndexSet) -> RatMatrix:
    """The submatrix with the given (1-based) row and column index sets.

    Empty index sets give the 0x0 matrix.
    """
    if rows.ambient != a.rows or cols.ambient != a.cols:
        raise DimensionError(
            f"index sets sized for {rows.ambient}x{cols.ambient}, matrix is {a.rows}x{a.cols}"
        )
    out = [a.entry(i - 1, j - 1) for i in rows.members for j in cols.members]
    return RatMatrix(len(rows.members), len(cols.members), out)


def _clear_denominators(a: RatMatrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; return (int rows, product of row scales)."""
    m = []
    scale = Fraction(1)
    for i in range(a.rows):
        row = a.row(i)
        d = lcm(*(e.denominator for e in row)) if row else 1
        scale *= d
        m.append([int(e * d) for e in row])
    return m, scale


def det(a: RatMatrix) -> Fraction:
    """Exact determinant via Bareiss fraction-free elimination.

    Denominators are cleared row by row first so all elimination arithmetic
    is over integers; every interior division in Bareiss is exact.  The 0x0
    determinant is 1 by convention.
    """
    if not a.is_square:
        raise DimensionError(f"determinant needs a square matrix, got {a.rows}x{a.cols}")
    n = a.rows
    if n == 0:
        return Fraction(1)
    m, scale = _clear_denominators(a)
    sign = 1
    prev = 1
    for c in range(n - 1):
        pivot_row = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        pc = m[c]
        for i in range(c + 1, n):
            mi = m[i]
            mic = mi[c]
            for j in range(c + 1, n):
                mi[j] = (mi[j] * pc[c] - mic * pc[j]) // prev
            mi[c] = 0
        prev = pc[c]
    return Fraction(sign * m[n - 1][n - 1]) / scale


def det_oracle(a: RatMatrix) -> Fraction:
    """Independent Laplace-expansion determinant, for cross-checking det().

    Recursion on the first row; capped at order 8 to keep the factorial
    blowup in check.
    """
    if not a.is_square:
        raise DimensionError(f"determinant needs a square matrix, got {a.rows}x{a.cols}")
    if a.rows > DET_ORACLE_CAP:
        raise DimensionError(f"det_oracle capped at n <= {DET_ORACLE_CAP}, got {a.rows}")

    def rec(rows: list[int], cols: list[int]) -> Fraction:
        k = len(rows)
        if k == 0:
            return Fraction(1)
        if k == 1:
            return a.entry(rows[0], cols[0])
        r = rows[0]
        total = Fraction(0)
        for pos, c in enumerate(cols):
            e = a.entry(r, c)
            if e == 0:
                continue
            sub = rec(rows[1:], cols[:pos] + cols[pos + 1 :])
            total += e * sub if pos % 2 == 0 else -e * sub
        return total

    idx = list(range(a.rows))
    return rec(idx, idx)


def minor(a: RatMatrix, alpha: IndexSet, beta: IndexSet) -> Fraction:
    """det of the submatrix selected by (alpha, beta); requires #alpha = #beta."""
    if len(alpha) != len(beta):
        raise DimensionError(f"minor needs equal cardinalities, got {len(alpha)} and {len(beta)}")
    return det(submatrix(a, alpha, beta))


def leading_principal_minors(a: RatMatrix) -> list[Fraction]:
    """All leading principal minors [det A_1, ..., det A_n] of a square matrix.

    Fast path: a single swap-free Bareiss pass yields every leading minor as
    a running pivot.  A zero pivot ends the fast path and the remaining
    minors fall back to individual determinants.
    """
    if not a.is_square:
        raise DimensionError("leading_principal_minors needs a square matrix")
    n = a.rows
    if n == 0:
        return []
    d = lcm(*(e.denominator for e in a.entries))
    m = [[int(e * d) for e in a.row(i)] for i in range(n)]
    out: list[Fraction] = [Fraction(m[0][0], d)]
    prev = 1
    for c in range(n - 1):
        if m[c][c] == 0:
            # swap-free pass broke down; finish with generic determinants
            for k in range(c + 1, n):
                block = IndexSet.interval(1, k + 1, n)
                out.append(minor(a, block, block))
            return out
        pc = m[c]
        for i in range(c + 1, n):
            mi = m[i]
            mic = mi[c]
            for j in range(c + 1, n):
                mi[j] = (mi[j] * pc[c] - mic * pc[j]) // prev
            mi[c] = 0
        prev = pc[c]
        out.append(Fraction(m[c + 1][c + 1], d ** (c + 2)))
    return out


def frac_str(x: Fraction) -> str:
    """Render a Fraction as the "num/den" exchange string."""
    return f"{x.numerator}/{x.denominator}"
