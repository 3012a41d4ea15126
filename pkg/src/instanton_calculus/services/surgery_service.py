"""
Surgery-dimension engine.

Computes dim I#(S^3_{p/q}(K)) from (nu-sharp, r0), enumerates the slopes
compatible with a given total dimension, and classifies knots of small r0.
"""

import logging
from math import gcd

from pydantic import BaseModel, Field

from instanton_calculus.domain.models import (
    Bundle,
    Classification,
    KnotRecord,
    Shape,
)
from instanton_calculus.domain.slopes import Slope

logger = logging.getLogger(__name__)

ZERO_SLOPE = Slope(p=0, q=1)


class FeasibleSurgery(BaseModel):
    """One (p, q, nu, r0) solving q*r0 + |p - q*nu| = D."""

    p: int
    q: int
    nu_sharp: int
    r0: int

    @property
    def slope(self) -> str:
        return f"{self.p}/{self.q}"


class SlopeBound(BaseModel):
    """Denominator bound for surgeries of a given framed-instanton dimension."""

    dimension: int
    exclude_exceptional: bool
    q_max: int
    equality_cases: list[FeasibleSurgery] = Field(default_factory=list)
    feasible: list[FeasibleSurgery] = Field(default_factory=list)


def _require_invariants(rec: KnotRecord) -> tuple[int, int]:
    if rec.nu_sharp is None or rec.r0 is None:
        missing = [f for f in ("nu_sharp", "r0") if getattr(rec, f) is None]
        raise ValueError(f"knot {rec.name!r} is missing {', '.join(missing)}")
    violations = rec.invariant_violations()
    if violations:
        details = "; ".join(f"{rule}: {msg}" for rule, msg in violations)
        raise ValueError(f"knot {rec.name!r} is inconsistent ({details})")
    return rec.nu_sharp, rec.r0


def dim_surgery(
    rec: KnotRecord, s: Slope, bundle: Bundle = Bundle.TRIVIAL
) -> frozenset[int]:
    """Possible values of dim I#(S^3_s(K), bundle).

    The answer is a singleton whenever it is determined; only zero surgery on
    a knot with nu-sharp = 0 and unknown shape leaves two candidates.
    """
    nu, r0 = _require_invariants(rec)
    if s.q < 1:
        raise ValueError("dimension queries need a finite slope (q >= 1)")
    if s.p != 0:
        return frozenset({s.q * r0 + abs(s.p - s.q * nu)})
    if nu != 0:
        return frozenset({r0 + abs(nu)})
    if rec.shape is None:
        return frozenset({r0, r0 + 2})
    larger_on_trivial = rec.shape == Shape.W
    if (bundle == Bundle.TRIVIAL) == larger_on_trivial:
        return frozenset({r0 + 2})
    return frozenset({r0})


def dim_table(
    rec: KnotRecord, slopes: list[Slope], bundle: Bundle = Bundle.TRIVIAL
) -> list[tuple[Slope, frozenset[int]]]:
    """Map ``dim_surgery`` over ``slopes`` preserving order."""
    return [(s, dim_surgery(rec, s, bundle)) for s in slopes]


def zero_surgery_is_small(rec: KnotRecord) -> bool:
    """True when dim I#(S^3_0(K)) = 2 is forced (unknot or a trefoil)."""
    return dim_surgery(rec, ZERO_SLOPE, Bundle.TRIVIAL) == frozenset({2})


# ── Slope bounds ─────────────────────────────────────────────────────────


def _is_nu_value(nu: int) -> bool:
    return nu == 0 or nu % 2 == 1


def enumerate_feasible(dimension: int, r_min: int) -> list[FeasibleSurgery]:
    """All (p, q, nu, r0) with q*r0 + |p - q*nu| = dimension and r0 >= r_min.

    Rational homology spheres only, so p = 0 is excluded.
    """
    found: set[tuple[int, int, int, int]] = set()
    for q in range(1, dimension // max(r_min, 1) + 1):
        for r in range(r_min, dimension // q + 1):
            rest = dimension - q * r
            for nu in range(-r, r + 1):
                if not _is_nu_value(nu) or (r - nu) % 2:
                    continue
                for p in {q * nu + rest, q * nu - rest}:
                    if p != 0 and gcd(abs(p), q) == 1:
                        found.add((p, q, nu, r))
    return [
        FeasibleSurgery(p=p, q=q, nu_sharp=nu, r0=r) for p, q, nu, r in sorted(found)
    ]


def slope_bound(dimension: int, exclude_exceptional: bool = True) -> SlopeBound:
    """Bound q for S^3_{p/q}(K) with dim I# = ``dimension``.

    With ``exclude_exceptional`` the knot is assumed not to be the unknot, a
    trefoil or the figure eight, so r0 >= 3 and q <= D/3. Otherwise r0 >= 1
    (any nontrivial knot) and q <= D.
    """
    if dimension <= 0:
        raise ValueError(f"dimension must be positive, got {dimension}")
    r_min = 3 if exclude_exceptional else 1
    feasible = enumerate_feasible(dimension, r_min)
    q_max = dimension // r_min
    logger.debug(
        "slope_bound(D=%d, r_min=%d): %d feasible surgeries", dimension, r_min, len(feasible)
    )
    return SlopeBound(
        dimension=dimension,
        exclude_exceptional=exclude_exceptional,
        q_max=q_max,
        equality_cases=[f for f in feasible if f.q * r_min == dimension],
        feasible=feasible,
    )


# ── Small r0 classification ──────────────────────────────────────────────

_CLASSIFIED: dict[tuple[int, int], list[str]] = {
    (0, 0): ["unknot"],
    (1, 1): ["right-handed trefoil"],
    (-1, 1): ["left-handed trefoil"],
    (0, 2): ["figure eight"],
    (3, 3): ["T(2,5)"],
    (-3, 3): ["T(-2,5)"],
}

GENUS_ONE_ALEXANDER = "Alexander polynomial 2t - 3 + 2t^-1 or 1"


def classify_small(nu: int, r0: int) -> Classification:
    """Identify or constrain a knot from its (nu-sharp, r0) pair."""
    candidate = KnotRecord(name="query", nu_sharp=nu, r0=r0)
    violations = candidate.invariant_violations()
    if violations:
        raise ValueError("; ".join(f"{rule}: {msg}" for rule, msg in violations))

    knots = list(_CLASSIFIED.get((nu, r0), []))
    constraints: list[str] = []
    conjecture = None

    if r0 - abs(nu) == 2 and abs(nu) <= 1:
        constraints.append("Seifert genus 1")
    if (abs(nu), r0) == (1, 3):
        constraints.append(GENUS_ONE_ALEXANDER)
    if r0 == abs(nu) and r0 > 0:
        genus = (r0 + 1) // 2
        subject = "K" if nu > 0 else "the mirror of K"
        constraints.append(
            f"{subject} is an instanton L-space knot of Seifert genus {genus}, "
            "fibered and strongly quasipositive"
        )
    if r0 == 3:
        conjecture = (
            "r0 = 3 is believed to occur only for T(2,5), the twist knot 5_2 "
            "and their mirrors (not proven)"
        )
    return Classification(
        nu_sharp=nu, r0=r0, knots=knots, constraints=constraints, conjecture=conjecture
    )
