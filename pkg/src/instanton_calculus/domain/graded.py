"""
Z/4-graded dimension vectors, Laurent polynomials and exact-triangle specs.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

GRADINGS = (0, 1, 2, 3)


@dataclass(frozen=True, order=True)
class GradedDim:
    """Dimensions (d0, d1, d2, d3) of a Z/4-graded rational vector space."""

    d: tuple[int, int, int, int] = (0, 0, 0, 0)

    def __post_init__(self) -> None:
        if len(self.d) != 4:
            raise ValueError(f"a Z/4 graded dimension has 4 entries, got {len(self.d)}")
        if any(x < 0 for x in self.d):
            raise ValueError(f"graded dimensions must be nonnegative, got {self.d}")

    @classmethod
    def of(cls, *gradings: int) -> GradedDim:
        """Direct sum of one-dimensional summands Q_g, gradings read mod 4."""
        dims = [0, 0, 0, 0]
        for g in gradings:
            dims[g % 4] += 1
        return cls(tuple(dims))  # type: ignore[arg-type]

    def __getitem__(self, grading: int) -> int:
        return self.d[grading % 4]

    def __add__(self, other: GradedDim) -> GradedDim:
        return GradedDim(tuple(a + b for a, b in zip(self.d, other.d, strict=True)))  # type: ignore[arg-type]

    def shift(self, k: int) -> GradedDim:
        """Move every summand from grading g to g + k."""
        return GradedDim(tuple(self.d[(g - k) % 4] for g in GRADINGS))  # type: ignore[arg-type]

    @property
    def total(self) -> int:
        return sum(self.d)

    def summands(self) -> list[int]:
        return [g for g in GRADINGS for _ in range(self.d[g])]

    def __str__(self) -> str:
        if self.total == 0:
            return "0"
        return " ⊕ ".join(f"Q_{g}" for g in self.summands())


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial, stored as sorted (exponent, coefficient) pairs."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for e, c in self.terms:
            merged[e] = merged.get(e, 0) + c
        object.__setattr__(
            self, "terms", tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        )

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> LaurentPoly:
        return cls(tuple(coeffs.items()))

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls(((0, c),))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def coefficient(self, e: int) -> int:
        return self.as_dict().get(e, 0)

    def is_symmetric(self) -> bool:
        d = self.as_dict()
        return all(d.get(-e, 0) == c for e, c in d.items())

    def at_one(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def span(self) -> int:
        if not self.terms:
            return 0
        return self.terms[-1][0] - self.terms[0][0]

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self.terms + other.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        text = ""
        for e, c in sorted(self.terms, key=lambda t: -t[0]):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            body = mono if mono and abs(c) == 1 else f"{abs(c)}{mono}"
            if not text:
                text = ("-" if c < 0 else "") + body
            else:
                text += f" {'-' if c < 0 else '+'} {body}"
        return text


@dataclass(frozen=True)
class TriangleSpec:
    """Three graded spaces A -> B -> C -> A with the Z/4 degree of each map."""

    a: GradedDim
    b: GradedDim
    c: GradedDim
    degrees: tuple[int, int, int] = field(default=(0, 0, 0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", tuple(d % 4 for d in self.degrees))

    @property
    def vertices(self) -> tuple[GradedDim, GradedDim, GradedDim]:
        return (self.a, self.b, self.c)


def direct_sum(parts: Iterable[GradedDim]) -> GradedDim:
    total = GradedDim()
    for p in parts:
        total = total + p
    return total
