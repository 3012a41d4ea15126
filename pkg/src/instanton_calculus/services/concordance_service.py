"""
Connected-sum calculus.

nu-sharp is a quasi-morphism, tau-sharp a homomorphism, and on ker(nu-sharp)
the zero-surgery shape is a Z/2-valued homomorphism. epsilon-sharp =
2 tau - nu takes values in {-1, 0, 1} and orders concordance classes
modulo ker(nu-sharp).
"""

from __future__ import annotations

import logging
from enum import Enum
from itertools import product

from pydantic import BaseModel, ConfigDict, Field, field_validator

from instanton_calculus.domain.models import (
    FLAG_NAMES,
    MIRROR_INVARIANT_FLAGS,
    KnotFlags,
    KnotRecord,
    Shape,
)

logger = logging.getLogger(__name__)


class EpsilonValue(BaseModel):
    """epsilon-sharp of a knot, or unknown (``value`` is None)."""

    model_config = ConfigDict(frozen=True)

    value: int | None = None

    @field_validator("value")
    @classmethod
    def in_range(cls, v: int | None) -> int | None:
        if v is not None and v not in (-1, 0, 1):
            raise ValueError(f"epsilon must be -1, 0 or 1, got {v}")
        return v

    @property
    def known(self) -> bool:
        return self.value is not None

    def __neg__(self) -> EpsilonValue:
        return EpsilonValue(value=None if self.value is None else -self.value)

    def __str__(self) -> str:
        return "unknown" if self.value is None else f"{self.value:+d}".replace("+0", "0")


UNKNOWN_EPSILON = EpsilonValue()


class Comparison(str, Enum):
    GREATER = "greater"
    LESS = "less"
    EQUIVALENT = "equivalent"
    UNDETERMINED = "undetermined"


class Summand(BaseModel):
    model_config = ConfigDict(frozen=True)

    record: KnotRecord
    mirrored: bool = False

    @property
    def effective(self) -> KnotRecord:
        return mirror(self.record) if self.mirrored else self.record

    @property
    def label(self) -> str:
        return f"mirror({self.record.name})" if self.mirrored else self.record.name


class SumExpr(BaseModel):
    """A connected sum of knots and mirrors, kept as a sorted multiset."""

    model_config = ConfigDict(frozen=True)

    summands: tuple[Summand, ...]

    @field_validator("summands")
    @classmethod
    def normalized(cls, v: tuple[Summand, ...]) -> tuple[Summand, ...]:
        if not v:
            raise ValueError("a connected sum needs at least one summand")
        return tuple(sorted(v, key=lambda s: (s.record.name, s.mirrored)))

    @property
    def label(self) -> str:
        return " # ".join(s.label for s in self.summands)


class SumReport(BaseModel):
    expression: str
    nu_sharp: list[int]
    tau_sharp: int | None = None
    epsilon: int | None = None
    shape: Shape | None = None
    notes: list[str] = Field(default_factory=list)


# ── Mirror ───────────────────────────────────────────────────────────────


def mirror(rec: KnotRecord) -> KnotRecord:
    """Mirror image: negate signed invariants, swap the +-1 Froyshov signs.

    Chiral flags trade places with ``mirror_flags``, so mirroring twice
    returns the original record.
    """

    def neg(v: int | None) -> int | None:
        return None if v is None else -v

    chiral = [name for name in FLAG_NAMES if name not in MIRROR_INVARIANT_FLAGS]
    flags = KnotFlags(
        **{name: getattr(rec.flags, name) for name in MIRROR_INVARIANT_FLAGS},
        **{name: getattr(rec.mirror_flags, name) for name in chiral},
    )
    mirror_flags = KnotFlags(**{name: getattr(rec.flags, name) for name in chiral})
    return rec.model_copy(
        update={
            "nu_sharp": neg(rec.nu_sharp),
            "tau_sharp": neg(rec.tau_sharp),
            "signature": neg(rec.signature),
            "flags": flags,
            "mirror_flags": mirror_flags,
            "froyshov_plus1": rec.froyshov_minus1.negated(),
            "froyshov_minus1": rec.froyshov_plus1.negated(),
        }
    )


# ── nu-sharp, tau-sharp, shape ───────────────────────────────────────────


def _check_nu(nu: int) -> None:
    if nu != 0 and nu % 2 == 0:
        raise ValueError(f"nu_sharp={nu} is neither zero nor odd")


def nu_of_sum(nu_k: int, nu_l: int) -> frozenset[int]:
    """Candidates for nu-sharp(K # L)."""
    _check_nu(nu_k)
    _check_nu(nu_l)
    if nu_k == 0:
        return frozenset({nu_l})
    if nu_l == 0:
        return frozenset({nu_k})
    total = nu_k + nu_l
    return frozenset(n for n in (total - 1, total, total + 1) if n == 0 or n % 2)


def shape_of_sum(s1: Shape, s2: Shape) -> Shape:
    """Shape is a homomorphism ker(nu-sharp) -> Z/2 with W = 0."""
    return Shape.W if s1 == s2 else Shape.V


def tau_from_doubling(nu_k: int, nu_kk: int) -> int:
    """tau-sharp(K) from nu-sharp(K) and nu-sharp(K # K)."""
    if (nu_kk - nu_k) % 2:
        raise ValueError(
            f"nu_sharp(K#K) - nu_sharp(K) = {nu_kk - nu_k} must be even"
        )
    return (nu_kk - nu_k) // 2


# ── epsilon-sharp ────────────────────────────────────────────────────────


def epsilon(rec: KnotRecord) -> EpsilonValue:
    """epsilon-sharp = 2 tau - nu for a record with both values known."""
    if rec.tau_sharp is None or rec.nu_sharp is None:
        raise ValueError(f"knot {rec.name!r} needs tau_sharp and nu_sharp for epsilon")
    value = 2 * rec.tau_sharp - rec.nu_sharp
    if value not in (-1, 0, 1):
        raise ValueError(
            f"knot {rec.name!r} is inconsistent: 2*tau_sharp - nu_sharp = {value}"
        )
    return EpsilonValue(value=value)


def epsilon_or_unknown(rec: KnotRecord) -> EpsilonValue:
    """Best available epsilon: exact when possible, 0 when nu-sharp = 0."""
    if rec.tau_sharp is not None and rec.nu_sharp is not None:
        return epsilon(rec)
    if rec.nu_sharp == 0:
        return EpsilonValue(value=0)
    return UNKNOWN_EPSILON


def epsilon_of_sum(e1: EpsilonValue, e2: EpsilonValue) -> EpsilonValue:
    """epsilon(K # K') from the summands' values; opposite signs stay unknown."""
    if e1.value == 0:
        return e2
    if e2.value == 0:
        return e1
    if e1.known and e1.value == e2.value:
        return e1
    return UNKNOWN_EPSILON


def compare(r1: KnotRecord, r2: KnotRecord) -> Comparison:
    """Order [K] against [K'] via epsilon(K # mirror K')."""
    diff = epsilon_of_sum(epsilon_or_unknown(r1), -epsilon_or_unknown(r2))
    return {
        1: Comparison.GREATER,
        -1: Comparison.LESS,
        0: Comparison.EQUIVALENT,
        None: Comparison.UNDETERMINED,
    }[diff.value]


# ── Sums ─────────────────────────────────────────────────────────────────


def sum_invariants(expr: SumExpr) -> SumReport:
    """Fold every summand rule over a connected sum."""
    parts = [s.effective for s in expr.summands]
    notes: list[str] = []

    nus: frozenset[int] | None = None
    for rec in parts:
        if rec.nu_sharp is None:
            nus = None
            notes.append(f"nu_sharp of {rec.name} unknown")
            break
        current = frozenset({rec.nu_sharp})
        nus = (
            current
            if nus is None
            else frozenset().union(*(nu_of_sum(a, b) for a, b in product(nus, current)))
        )

    taus = [rec.tau_sharp for rec in parts]
    tau = sum(t for t in taus if t is not None) if all(t is not None for t in taus) else None

    eps = epsilon_or_unknown(parts[0])
    for rec in parts[1:]:
        eps = epsilon_of_sum(eps, epsilon_or_unknown(rec))

    if nus is not None and tau is not None and eps.known:
        pinned = 2 * tau - eps.value  # type: ignore[operator]
        if pinned in nus:
            nus = frozenset({pinned})
            notes.append("nu_sharp pinned by 2*tau_sharp - epsilon")

    shape = None
    if all(rec.nu_sharp == 0 and rec.shape is not None for rec in parts):
        shape = parts[0].shape
        for rec in parts[1:]:
            shape = shape_of_sum(shape, rec.shape)  # type: ignore[arg-type]

    logger.debug("sum %s: nu=%s tau=%s eps=%s", expr.label, nus, tau, eps)
    return SumReport(
        expression=expr.label,
        nu_sharp=sorted(nus) if nus is not None else [],
        tau_sharp=tau,
        epsilon=eps.value,
        shape=shape,
        notes=notes,
    )
