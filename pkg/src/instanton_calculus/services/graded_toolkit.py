"""
Z/4-graded bookkeeping for surgery exact triangles.

Euler characteristics, the cobordism-map degree formula, per-grading rank
feasibility of exact triangles, Froyshov and Fukaya dimension relations,
Alexander/Casson arithmetic, and the finite enumeration that rules out a
knot with (nu-sharp, r0) = (0, 2) and zero-surgery dimension 2 other than
the figure eight.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from itertools import product

from pydantic import BaseModel, Field

from instanton_calculus.domain.graded import GRADINGS, GradedDim, LaurentPoly, TriangleSpec
from instanton_calculus.domain.models import KnotRecord
from instanton_calculus.domain.slopes import cable_slope
from instanton_calculus.services.surgery_service import dim_surgery

logger = logging.getLogger(__name__)

# Degrees mod 4 of the maps in the two surgery triangles
# S^3 -> S^3_{-1} -> S^3_0 -> S^3 and S^3 -> S^3_0 -> S^3_1 -> S^3.
TRIANGLE_DEGREES: dict[str, int] = {
    "F_-1": 2,
    "G_0": 3,
    "H_0": 2,
    "F_0": 3,
    "G_1": 2,
    "H_1": 2,
}

SPHERE = GradedDim.of(0)
SPHERE_HOMOLOGY = GradedDim.of(0, 3)


# ═══════════════════════════════════════════════════════════════════════════
# EULER CHARACTERISTIC AND DEGREES
# ═══════════════════════════════════════════════════════════════════════════


def euler_char(g: GradedDim) -> int:
    return g[0] - g[1] + g[2] - g[3]


def expected_euler_char(h1_order: int, b1: int) -> int:
    """|H_1(Y)| when b_1 = 0, otherwise 0."""
    if b1 < 0 or h1_order < 0:
        raise ValueError("b1 and |H_1| must be nonnegative")
    if b1 == 0 and h1_order == 0:
        raise ValueError("a rational homology sphere has nonzero |H_1|")
    return h1_order if b1 == 0 else 0


def cobordism_degree(chi: int, sigma: int, b1_in: int, b1_out: int, nu_sq: int) -> int:
    """-3/2 (chi + sigma) + 1/2 (b1_out - b1_in) + 2 nu^2, reduced mod 4.

    Raises:
        ValueError: If the combination is not an integer
    """
    twice = -3 * (chi + sigma) + (b1_out - b1_in)
    if twice % 2:
        raise ValueError(
            f"non-integral degree: chi+sigma={chi + sigma}, b1 change={b1_out - b1_in}"
        )
    return (twice // 2 + 2 * nu_sq) % 4


# ═══════════════════════════════════════════════════════════════════════════
# EXACT TRIANGLES
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class RankDecomposition:
    """Per-grading ranks of the three maps; index g is the source grading."""

    ab: tuple[int, int, int, int]
    bc: tuple[int, int, int, int]
    ca: tuple[int, int, int, int]

    @property
    def totals(self) -> tuple[int, int, int]:
        return (sum(self.ab), sum(self.bc), sum(self.ca))


def _ranks_from_ab(
    t: TriangleSpec, ab: tuple[int, ...]
) -> RankDecomposition | None:
    d_ab, d_bc, d_ca = t.degrees
    bc = tuple(t.b[g] - ab[(g - d_ab) % 4] for g in GRADINGS)
    if any(r < 0 or r > t.c[g + d_bc] for g, r in enumerate(bc)):
        return None
    ca = tuple(t.c[g] - bc[(g - d_bc) % 4] for g in GRADINGS)
    if any(r < 0 or r > t.a[g + d_ca] for g, r in enumerate(ca)):
        return None
    if any(t.a[g] != ab[g] + ca[(g - d_ca) % 4] for g in GRADINGS):
        return None
    return RankDecomposition(ab, bc, ca)  # type: ignore[arg-type]


def rank_decompositions(t: TriangleSpec) -> Iterator[RankDecomposition]:
    """Every per-grading rank assignment making the triangle exact."""
    d_ab = t.degrees[0]
    ranges = [range(min(t.a[g], t.b[g + d_ab]) + 1) for g in GRADINGS]
    for ab in product(*ranges):
        found = _ranks_from_ab(t, ab)
        if found is not None:
            yield found


def triangle_feasible(t: TriangleSpec) -> RankDecomposition | None:
    """One exact rank decomposition of the triangle, or None."""
    return next(rank_decompositions(t), None)


# ═══════════════════════════════════════════════════════════════════════════
# FROYSHOV AND FUKAYA RELATIONS
# ═══════════════════════════════════════════════════════════════════════════


def reduced_from_sharp(sharp: GradedDim) -> GradedDim:
    """Recover the mod-4 reduced group from I# = Q_0 + (Q_0 + Q_3) x reduced.

    Raises:
        ValueError: If no reduced group, or more than one, fits
    """
    if sharp[0] < 1:
        raise ValueError(f"{sharp} has no Q_0 summand to split off")
    rest = GradedDim(tuple(x - (g == 0) for g, x in enumerate(sharp.d)))  # type: ignore[arg-type]
    bound = rest.total
    fits = []
    for cand in product(range(bound + 1), repeat=4):
        reduced = GradedDim(cand)  # type: ignore[arg-type]
        if reduced + reduced.shift(3) == rest:
            fits.append(reduced)
    if not fits:
        raise ValueError(f"{sharp} is not of the form Q_0 + (Q_0 + Q_3) x R")
    if len(fits) > 1:
        raise ValueError(f"{sharp} determines no unique reduced group: {fits}")
    return fits[0]


def floer_from_reduced(reduced: GradedDim, h: int) -> GradedDim:
    """One mod-4 period of I: reduced plus |h| generators in grading 1 (h > 0) or 0."""
    extra = GradedDim.of(*([1] * h)) if h > 0 else GradedDim.of(*([0] * -h))
    return reduced + extra


def floer_euler_char(reduced: GradedDim, h: int) -> int:
    """Euler characteristic over Z/8: two mod-4 periods."""
    return 2 * euler_char(floer_from_reduced(reduced, h))


def froyshov_gap(dim_i: int, dim_ihat: int) -> int:
    """|h| = (dim I - dim I-hat) / 2."""
    if dim_i < dim_ihat:
        raise ValueError(f"dim I = {dim_i} is smaller than dim I-hat = {dim_ihat}")
    if (dim_i - dim_ihat) % 2:
        raise ValueError(f"dim I - dim I-hat = {dim_i - dim_ihat} is odd")
    return (dim_i - dim_ihat) // 2


def fukaya_kernel_dim(dim_sharp_pm1: int) -> int:
    """a with dim I#(S^3_{+-1}) = 1 + 2a for a knot of genus at most 2."""
    if dim_sharp_pm1 < 1 or dim_sharp_pm1 % 2 == 0:
        raise ValueError(f"dim I# of a +-1 surgery must be odd and positive, got {dim_sharp_pm1}")
    return (dim_sharp_pm1 - 1) // 2


def fukaya_zero_surgery_consistent(dim_sharp_zero_mu: int, dim_i_zero_mu: int) -> bool:
    """The framed and unframed zero-surgery groups have equal dimension."""
    return dim_sharp_zero_mu == dim_i_zero_mu


# ═══════════════════════════════════════════════════════════════════════════
# ALEXANDER / CASSON
# ═══════════════════════════════════════════════════════════════════════════


def second_derivative_at_1(p: LaurentPoly) -> int:
    return sum(c * e * (e - 1) for e, c in p.terms)


def cable_substitute(p: LaurentPoly, power: int = 2) -> LaurentPoly:
    """p(t^power)."""
    if power < 1:
        raise ValueError(f"substitution power must be >= 1, got {power}")
    return LaurentPoly(tuple((e * power, c) for e, c in p.terms))


def casson_chi(p: LaurentPoly) -> int:
    """-Delta''(1) for a symmetric Alexander polynomial."""
    if not p.is_symmetric():
        raise ValueError(f"{p} is not symmetric under t -> 1/t")
    return -second_derivative_at_1(p)


def genus1_alexander(a: int) -> LaurentPoly:
    return LaurentPoly(((1, a), (0, 1 - 2 * a), (-1, a)))


def alexander_from_surgery(sharp: GradedDim, h: int, surgery_sign: int) -> LaurentPoly:
    """Genus-one Alexander polynomial forced by I# and h of a +-1 surgery.

    chi(I(S^3_{+-1})) = +-Delta''(1) and Delta''(1) = 2a.
    """
    if surgery_sign not in (1, -1):
        raise ValueError(f"surgery sign must be +1 or -1, got {surgery_sign}")
    chi = floer_euler_char(reduced_from_sharp(sharp), h)
    second = surgery_sign * chi
    if second % 2:
        raise ValueError(f"Delta''(1) = {second} is odd; no genus-one polynomial fits")
    return genus1_alexander(second // 2)


def one_three_alexander(k: int) -> LaurentPoly:
    """Alexander polynomial when I#(S^3_1) = Q_0 + Q_{k-1} + Q_k and h(S^3_1) = -1."""
    return alexander_from_surgery(GradedDim.of(0, k - 1, k), h=-1, surgery_sign=1)


# ═══════════════════════════════════════════════════════════════════════════
# TRIANGLE CHASE FOR (nu, r0) = (0, 2)
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class TriangleSolution:
    k: int
    m: int
    minus_one: GradedDim
    plus_one: GradedDim
    zero: GradedDim
    ranks_minus: RankDecomposition
    ranks_plus: RankDecomposition

    def as_dict(self) -> dict[str, object]:
        return {
            "k": self.k,
            "m": self.m,
            "minus_one": str(self.minus_one),
            "plus_one": str(self.plus_one),
            "zero": str(self.zero),
            "map_ranks": {
                "F_-1": self.ranks_minus.totals[0],
                "G_0": self.ranks_minus.totals[1],
                "H_0": self.ranks_minus.totals[2],
                "F_0": self.ranks_plus.totals[0],
                "G_1": self.ranks_plus.totals[1],
                "H_1": self.ranks_plus.totals[2],
            },
        }


def _zero_surgery_shapes(total: int) -> Iterator[GradedDim]:
    for d in product(range(total + 1), repeat=4):
        g = GradedDim(d)  # type: ignore[arg-type]
        if g.total == total and euler_char(g) == 0:
            yield g


def solve_section9(
    dim_zero_total: int = 2, forced_zero: GradedDim | None = None
) -> list[TriangleSolution]:
    """All (k, m, I#(S^3_{-1}), I#(S^3_1), I#(S^3_0)) fitting both triangles.

    I#(S^3_{-1}) = Q_0 + Q_{k-1} + Q_k and I#(S^3_1) = Q_0 + Q_{m-1} + Q_m.
    ``forced_zero`` pins the zero-surgery shape instead of enumerating it.
    """
    if dim_zero_total < 0 or dim_zero_total % 2:
        raise ValueError(f"zero-surgery dimension must be even and >= 0, got {dim_zero_total}")
    shapes = [forced_zero] if forced_zero is not None else list(_zero_surgery_shapes(dim_zero_total))
    minus_degrees = (TRIANGLE_DEGREES["F_-1"], TRIANGLE_DEGREES["G_0"], TRIANGLE_DEGREES["H_0"])
    plus_degrees = (TRIANGLE_DEGREES["F_0"], TRIANGLE_DEGREES["G_1"], TRIANGLE_DEGREES["H_1"])
    solutions = []
    for k, m in product(GRADINGS, GRADINGS):
        minus_one = GradedDim.of(0, k - 1, k)
        plus_one = GradedDim.of(0, m - 1, m)
        for zero in shapes:
            if zero.total != dim_zero_total or euler_char(zero) != 0:
                continue
            ranks_minus = triangle_feasible(TriangleSpec(SPHERE, minus_one, zero, minus_degrees))
            if ranks_minus is None:
                continue
            ranks_plus = triangle_feasible(TriangleSpec(SPHERE, zero, plus_one, plus_degrees))
            if ranks_plus is None:
                continue
            solutions.append(
                TriangleSolution(k, m, minus_one, plus_one, zero, ranks_minus, ranks_plus)
            )
    logger.debug("Triangle chase with dim %d: %d solution(s)", dim_zero_total, len(solutions))
    return sorted(solutions, key=lambda s: (s.k, s.m, s.zero.d))


class ContradictionReport(BaseModel):
    branch: str
    contradiction: bool
    steps: list[str] = Field(default_factory=list)
    solutions: list[dict[str, object]] = Field(default_factory=list)
    alexander: str | None = None
    cable_alexander: str | None = None
    lower_bound: int | None = None
    feasible_dimensions: list[int] = Field(default_factory=list)


def section9_contradiction(
    alexander_a: int | None = None,
    dim_zero_total: int = 2,
    froyshov_minus_one: int = 1,
) -> ContradictionReport:
    """Chain the triangle chase into the (2, 1)-cable dimension clash.

    ``alexander_a`` overrides the coefficient derived from the chase.
    """
    steps: list[str] = []
    solutions = solve_section9(dim_zero_total)
    rows = [s.as_dict() for s in solutions]
    if dim_zero_total != 2:
        steps.append(
            f"dim I#(S^3_0) = {dim_zero_total}: the figure eight branch, nothing to refute"
        )
        return ContradictionReport(
            branch="figure_eight", contradiction=False, steps=steps, solutions=rows
        )
    if len(solutions) != 1:
        steps.append(f"triangle chase left {len(solutions)} solutions; expected exactly one")
        return ContradictionReport(
            branch="unresolved", contradiction=False, steps=steps, solutions=rows
        )

    sol = solutions[0]
    steps.append(
        f"triangles force k={sol.k}, m={sol.m}: I#(S^3_-1) = {sol.minus_one}, "
        f"I#(S^3_1) = {sol.plus_one}, I#(S^3_0) = {sol.zero}"
    )
    reduced = reduced_from_sharp(sol.minus_one)
    floer = floer_from_reduced(reduced, froyshov_minus_one)
    chi = floer_euler_char(reduced, froyshov_minus_one)
    steps.append(
        f"reduced group {reduced} per period; with h = {froyshov_minus_one}, "
        f"I(S^3_-1) per period is {floer} and chi over Z/8 is {chi}"
    )
    derived = alexander_from_surgery(sol.minus_one, froyshov_minus_one, surgery_sign=-1)
    delta_k = genus1_alexander(alexander_a) if alexander_a is not None else derived
    if alexander_a is not None:
        steps.append(f"Alexander coefficient forced to a = {alexander_a} (derived {derived})")
    steps.append(f"Delta_K = {delta_k}, Delta_K''(1) = {second_derivative_at_1(delta_k)}")

    delta_c = cable_substitute(delta_k)
    bound = abs(casson_chi(delta_c))
    steps.append(f"cable C: Delta_C = {delta_c}, so dim I(S^3_0(C))_mu >= {bound}")

    slope = cable_slope(-1, 2, 1)
    companion = KnotRecord(name="K", nu_sharp=0, r0=2)
    (dim_cable,) = dim_surgery(companion, slope)
    feasible = [dim_cable - 1, dim_cable + 1]
    steps.append(
        f"S^3_-1(C) = S^3_{slope}(K) has dim I# = {dim_cable}, "
        f"so dim I#(S^3_0(C), mu) is one of {feasible}"
    )
    steps.append("framed and unframed zero-surgery groups of C have equal dimension")
    clash = bound > max(feasible)
    steps.append(
        f"{bound} > {max(feasible)}: contradiction" if clash else f"{bound} fits {feasible}"
    )
    logger.info("Triangle chase finished: contradiction=%s", clash)
    return ContradictionReport(
        branch="cable",
        contradiction=clash,
        steps=steps,
        solutions=rows,
        alexander=str(delta_k),
        cable_alexander=str(delta_c),
        lower_bound=bound,
        feasible_dimensions=feasible,
    )
