"""
Exact integer and rational algebra.

Binomial coefficients with the truncating convention, integer matrices with
fraction-free determinants and exact rational elimination, and univariate
polynomials over the rationals. No floating point is used anywhere.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm


@lru_cache(maxsize=None)
def binomial(a: int, b: int) -> int:
    """C(a, b), zero whenever a < 0, b < 0 or a < b."""
    if a < 0 or b < 0 or a < b:
        return 0
    return comb(a, b)


# ═══════════════════════════════════════════════════════════════════════════
# INTEGER MATRICES
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class IntMatrix:
    """Dense matrix of arbitrary-precision integers (row-major)."""

    entries: tuple[tuple[int, ...], ...]
    cols: int

    def __post_init__(self) -> None:
        if self.cols < 0:
            raise ValueError("column count must be nonnegative")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError(
                    f"row of length {len(row)} in a matrix with {self.cols} columns"
                )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(tuple(tuple(int(x) for x in r) for r in rows), width)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(tuple((0,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if other.rows == 0 or other.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        columns = list(zip(*other.entries, strict=True))
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(r, c, strict=True)) for c in columns)
                for r in self.entries
            ),
            other.cols,
        )

    def apply(self, vector: Sequence[int | Fraction]) -> tuple[int | Fraction, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} for {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(r, vector, strict=True)) for r in self.entries)

    def power(self, n: int) -> IntMatrix:
        """Square-and-multiply power; ``power(0)`` is the identity."""
        if self.rows != self.cols:
            raise ValueError("only square matrices have powers")
        if n < 0:
            raise ValueError("negative matrix power")
        result = IntMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def determinant(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form over the rationals and its pivot columns."""
        m = [[Fraction(x) for x in r] for r in self.entries]
        pivots: list[int] = []
        lead = 0
        for c in range(self.cols):
            pivot = next((i for i in range(lead, self.rows) if m[i][c] != 0), None)
            if pivot is None:
                continue
            m[lead], m[pivot] = m[pivot], m[lead]
            inv = 1 / m[lead][c]
            m[lead] = [x * inv for x in m[lead]]
            for i in range(self.rows):
                if i != lead and m[i][c] != 0:
                    factor = m[i][c]
                    m[i] = [a - factor * b for a, b in zip(m[i], m[lead], strict=True)]
            pivots.append(c)
            lead += 1
            if lead == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def primitive(vector: Iterable[Fraction | int]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to content 1 with positive leading entry."""
    values = [Fraction(x) for x in vector]
    denom = lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * denom) for v in values]
    content = 0
    for x in ints:
        content = gcd(content, x)
    if content == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [x // content for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


# ═══════════════════════════════════════════════════════════════════════════
# RATIONAL POLYNOMIALS
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class RatPoly:
    """Polynomial in t with rational coefficients, index = degree."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        trimmed = list(Fraction(c) for c in self.coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @classmethod
    def constant(cls, c: int | Fraction) -> RatPoly:
        return cls((Fraction(c),))

    @classmethod
    def t(cls) -> RatPoly:
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def __add__(self, other: RatPoly) -> RatPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(tuple(x + y for x, y in zip(a, b, strict=True)))

    def __neg__(self) -> RatPoly:
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: RatPoly) -> RatPoly:
        return self + (-other)

    def __mul__(self, other: RatPoly) -> RatPoly:
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(tuple(out))

    def scale(self, c: int | Fraction) -> RatPoly:
        return RatPoly(tuple(Fraction(c) * x for x in self.coeffs))

    def __call__(self, t: int | Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @classmethod
    def interpolate(cls, points: Sequence[tuple[int, int | Fraction]]) -> RatPoly:
        """Lagrange interpolation through distinct nodes."""
        result = RatPoly()
        for i, (xi, yi) in enumerate(points):
            term = RatPoly.constant(yi)
            for j, (xj, _) in enumerate(points):
                if i == j:
                    continue
                if xi == xj:
                    raise ValueError(f"repeated interpolation node {xi}")
                term = term * RatPoly((Fraction(-xj), Fraction(1))).scale(
                    Fraction(1, xi - xj)
                )
            result = result + term
        return result

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text
