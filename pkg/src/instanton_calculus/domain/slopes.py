"""
Rational surgery slopes.

A slope p/q is stored reduced with q >= 0 and the sign carried by p. The
infinity slope is 1/0; it is accepted by ``normalize`` and ``distance`` but
never by dimension queries.
"""

from math import gcd

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Slope(BaseModel):
    """A reduced rational surgery coefficient p/q."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(description="Numerator (carries the sign)")
    q: int = Field(ge=0, description="Denominator, 0 only for the infinity slope")

    @model_validator(mode="after")
    def check_reduced(self) -> "Slope":
        if self.q == 0 and self.p != 1:
            raise ValueError("infinity slope must be written 1/0")
        if gcd(abs(self.p), self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q} is not reduced")
        return self

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "Slope":
        """Parse ``"p/q"`` or a bare integer ``"n"`` and normalize it."""
        raw = text.strip()
        try:
            if "/" in raw:
                num, den = raw.split("/", 1)
                return normalize(int(num), int(den))
            return normalize(int(raw), 1)
        except ValueError as e:
            raise ValueError(f"invalid slope {text!r}: {e}") from e


def normalize(p: int, q: int) -> Slope:
    """Reduce p/q so that gcd(|p|, q) = 1 and q >= 0.

    Raises:
        ValueError: For the meaningless pair (0, 0)
    """
    if p == 0 and q == 0:
        raise ValueError("0/0 is not a slope")
    if q == 0:
        return Slope(p=1, q=0)
    if q < 0:
        p, q = -p, -q
    g = gcd(abs(p), q)
    return Slope(p=p // g, q=q // g)


def distance(s1: Slope, s2: Slope) -> int:
    """Minimal geometric intersection number |p1*q2 - p2*q1|."""
    return abs(s1.p * s2.q - s2.p * s1.q)


def farey_parents(s: Slope) -> tuple[Slope, Slope]:
    """Return the two distance-one slopes whose mediant is ``s``.

    The parents a/b and c/d satisfy a + c = p and b + d = q. They are ordered
    by denominator, then numerator.
    """
    if s.q <= 1:
        raise ValueError(f"slope {s} has no Farey parents (denominator must be >= 2)")
    # left parent: p*b - a*q = 1 with 0 < b < q
    b = pow(s.p, -1, s.q)
    a = (s.p * b - 1) // s.q
    left = Slope(p=a, q=b)
    right = Slope(p=s.p - a, q=s.q - b)
    return tuple(sorted((left, right), key=lambda t: (t.q, t.p)))  # type: ignore[return-value]


def cable_slope(p: int, q: int, eps: int) -> Slope:
    """Slope on the companion realising (pq + eps)-surgery on the (p, q)-cable.

    Only the distance-one case eps = +1 or -1 is supported.
    """
    if abs(eps) != 1:
        raise ValueError(f"cable slope needs eps = +1 or -1, got {eps}")
    if q < 2:
        raise ValueError(f"cable parameter q must be >= 2, got {q}")
    if gcd(abs(p), q) != 1:
        raise ValueError(f"cable parameters ({p}, {q}) are not coprime")
    return normalize(p * q + eps, q * q)
