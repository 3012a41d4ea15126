"""
Exact verification of the binomial linear algebra behind the parity of
nu-sharp.

For an index set 0 < i_1 < ... < i_k <= h the 2k x k matrix N (entries
d_{j,i}) has a nonzero integer kernel vector, and lifting that vector
antisymmetrically produces a kernel vector of the 2k x 2k matrix M (entries
c_{j,i}). So M is singular. Everything here is computed with Python
integers and ``fractions.Fraction``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from pydantic import BaseModel, Field

from instanton_calculus.domain.algebra import IntMatrix, RatPoly, binomial, primitive

logger = logging.getLogger(__name__)


class VerificationFailure(RuntimeError):
    """A check that must succeed did not."""


# ═══════════════════════════════════════════════════════════════════════════
# COEFFICIENTS
# ═══════════════════════════════════════════════════════════════════════════


def _check_index(i: int, h: int) -> None:
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    if not -h <= i <= h:
        raise ValueError(f"index {i} outside [-{h}, {h}]")


@lru_cache(maxsize=None)
def c_coeff(n: int, i: int, h: int) -> int:
    """c_{n,i} for -h <= i <= h; c_{0,i} = (-1)^i."""
    _check_index(i, h)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return -1 if i % 2 else 1
    if n == 1:
        return 0 if (i - h) % 2 == 0 else 1
    return sum(binomial(h - i - 2 * k, n - 2) for k in range(1, (h - i) // 2 + 1))


def d_coeff(j: int, i: int, h: int) -> int:
    """d_{j,i} = c_{j,-i} - c_{j,i}; antisymmetric in i."""
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    return c_coeff(j, -i, h) - c_coeff(j, i, h)


def _falling_term(j: int, h: int) -> RatPoly:
    """(1/(j-2)!) * prod_{l=1}^{j-2} ((h - l) - t)."""
    poly = RatPoly.constant(1)
    for ell in range(1, j - 1):
        poly = poly * RatPoly((Fraction(h - ell), Fraction(-1)))
    return poly.scale(Fraction(1, factorial(j - 2)))


@lru_cache(maxsize=None)
def _p_poly_raw(j: int, h: int) -> RatPoly:
    if j <= 1:
        return RatPoly()
    step = _p_poly_raw(j - 1, h) + _falling_term(j, h)
    # p_j(t) = sum_{s < t} step(s): one degree above step
    nodes = max(step.degree, 0) + 2
    points = []
    acc = Fraction(0)
    for t in range(nodes):
        points.append((t, acc))
        acc += step(t)
    return RatPoly.interpolate(points)


def p_poly(j: int, h: int) -> RatPoly:
    """The odd polynomial with p_j(0) = 0 interpolating d_{j,.} on [-h, h].

    Raises:
        ValueError: If j is outside 0..2h+1
        VerificationFailure: If the oddness, degree or value claims fail
    """
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    if not 0 <= j <= 2 * h + 1:
        raise ValueError(f"j={j} outside 0..{2 * h + 1}")
    poly = _p_poly_raw(j, h)
    problems = p_poly_problems(j, h, poly)
    if problems:
        raise VerificationFailure(f"p_{j} for h={h}: " + "; ".join(problems))
    return poly


def p_poly_problems(j: int, h: int, poly: RatPoly) -> list[str]:
    problems = []
    if not poly.is_odd():
        problems.append(f"not odd: {poly}")
    if poly.degree > max(j - 1, 0):
        problems.append(f"degree {poly.degree} exceeds {max(j - 1, 0)}")
    if j >= 2 and j % 2 == 0 and poly.degree != j - 1:
        problems.append(f"degree {poly.degree} should be exactly {j - 1}")
    for i in range(-h, h + 1):
        if poly(i) != d_coeff(j, i, h):
            problems.append(f"p({i}) = {poly(i)} but d = {d_coeff(j, i, h)}")
    return problems


# ═══════════════════════════════════════════════════════════════════════════
# MATRICES
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing indices 0 < i_1 < ... < i_k <= h."""

    h: int
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.h < 1:
            raise ValueError(f"h must be >= 1, got {self.h}")
        if not self.indices:
            raise ValueError("an index set needs at least one index")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:], strict=False)):
            raise ValueError(f"indices {self.indices} are not strictly increasing")
        if self.indices[0] < 1 or self.indices[-1] > self.h:
            raise ValueError(f"indices {self.indices} must lie in 1..{self.h}")

    @property
    def k(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return f"h={self.h} ({', '.join(map(str, self.indices))})"


def build_n(ix: IndexSet) -> IntMatrix:
    """2k x k matrix with entries d_{j, i_m}, j = 0..2k-1."""
    return IntMatrix.from_rows(
        [[d_coeff(j, i, ix.h) for i in ix.indices] for j in range(2 * ix.k)], ix.k
    )


def build_m(ix: IndexSet) -> IntMatrix:
    """2k x 2k matrix c_{j,x} over columns (-i_k, ..., -i_1, i_1, ..., i_k)."""
    columns = [-i for i in reversed(ix.indices)] + list(ix.indices)
    return IntMatrix.from_rows(
        [[c_coeff(j, x, ix.h) for x in columns] for j in range(2 * ix.k)], 2 * ix.k
    )


def nullspace_int(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the rational kernel, each vector primitive with positive lead."""
    reduced, pivots = m.rref()
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m.cols
        vec[f] = Fraction(1)
        for row, p in enumerate(pivots):
            vec[p] = -reduced[row][f]
        basis.append(primitive(vec))
    return basis


def lift_kernel(x: tuple[int, ...]) -> tuple[int, ...]:
    """(x_1..x_k) -> (x_k, ..., x_1, -x_1, ..., -x_k)."""
    return tuple(reversed(x)) + tuple(-v for v in x)


class IndexSetReport(BaseModel):
    h: int
    indices: list[int]
    rank_n: int
    kernel: list[int] | None = None
    lifted: list[int] | None = None
    annihilated: bool = False
    det_m: int
    passed: bool
    problems: list[str] = Field(default_factory=list)


def verify_index_set(ix: IndexSet) -> IndexSetReport:
    """Check rank N <= k-1, lift a kernel vector, and confirm M kills it."""
    n_mat, m_mat = build_n(ix), build_m(ix)
    rank = n_mat.rank()
    kernel = nullspace_int(n_mat)
    problems = []
    if rank > ix.k - 1:
        problems.append(f"rank N = {rank} > k - 1 = {ix.k - 1}")
    x = kernel[0] if kernel else None
    lifted = lift_kernel(x) if x is not None else None
    annihilated = lifted is not None and all(v == 0 for v in m_mat.apply(lifted))
    if x is None:
        problems.append("N has no nonzero kernel vector")
    elif not annihilated:
        problems.append(f"M does not annihilate the lifted vector {lifted}")
    det = m_mat.determinant()
    if det != 0:
        problems.append(f"det M = {det} is nonzero")
    return IndexSetReport(
        h=ix.h,
        indices=list(ix.indices),
        rank_n=rank,
        kernel=list(x) if x is not None else None,
        lifted=list(lifted) if lifted is not None else None,
        annihilated=annihilated,
        det_m=det,
        passed=not problems,
        problems=problems,
    )


# ── Sweep ────────────────────────────────────────────────────────────────


class SweepRow(BaseModel):
    h: int
    k: int
    cases: int
    failures: int


class SweepReport(BaseModel):
    h_max: int
    k_max: int
    rows: list[SweepRow]
    failed: list[IndexSetReport] = Field(default_factory=list)

    @property
    def total_cases(self) -> int:
        return sum(r.cases for r in self.rows)

    @property
    def passed(self) -> bool:
        return not self.failed


def iter_index_sets(h_max: int, k_max: int) -> Iterator[IndexSet]:
    """All index sets with h <= h_max and k <= k_max, in a fixed order."""
    for h in range(1, h_max + 1):
        for k in range(1, min(k_max, h) + 1):
            for combo in combinations(range(1, h + 1), k):
                yield IndexSet(h, combo)


def _verify_case(ix: IndexSet) -> IndexSetReport:
    return verify_index_set(ix)


def sweep(h_max: int, k_max: int, jobs: int = 1) -> SweepReport:
    """Verify every index set up to (h_max, k_max).

    With ``jobs > 1`` the cases are spread over a process pool; results are
    merged in enumeration order so the report does not depend on ``jobs``.
    """
    if h_max < 1 or k_max < 1:
        raise ValueError("h_max and k_max must be >= 1")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    cases = list(iter_index_sets(h_max, k_max))
    logger.info(
        "Verifying %d index sets (h <= %d, k <= %d) with %d worker(s)",
        len(cases),
        h_max,
        k_max,
        jobs,
    )
    if jobs == 1:
        reports = [_verify_case(ix) for ix in cases]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_case, cases, chunksize=64))

    counts: dict[tuple[int, int], list[int]] = {}
    failed = []
    for report in reports:
        key = (report.h, len(report.indices))
        entry = counts.setdefault(key, [0, 0])
        entry[0] += 1
        if not report.passed:
            entry[1] += 1
            failed.append(report)
    rows = [
        SweepRow(h=h, k=k, cases=c, failures=f) for (h, k), (c, f) in sorted(counts.items())
    ]
    logger.debug("Sweep finished: %d failures", len(failed))
    return SweepReport(h_max=h_max, k_max=k_max, rows=rows, failed=failed)


# ═══════════════════════════════════════════════════════════════════════════
# BINOMIAL IDENTITIES
# ═══════════════════════════════════════════════════════════════════════════


def pathcount_power(h: int, n: int) -> IntMatrix:
    """(n-1)-th power of the 2h x 2h strictly lower all-ones matrix."""
    if h < 1 or n < 1:
        raise ValueError("h and n must be >= 1")
    size = 2 * h
    lower = IntMatrix.from_rows(
        [[1 if i > j else 0 for j in range(size)] for i in range(size)], size
    )
    return lower.power(n - 1)


def pathcount_closed_form(h: int, n: int) -> IntMatrix:
    """Entry (i, j) counts increasing paths: C(i - j - 1, n - 2)."""
    size = 2 * h
    if n == 1:
        return IntMatrix.identity(size)
    return IntMatrix.from_rows(
        [[binomial(i - j - 1, n - 2) for j in range(size)] for i in range(size)], size
    )


def hockey_stick(m: int, k: int) -> bool:
    """sum_{l=0}^{m} C(l, k) == C(m + 1, k + 1)."""
    return sum(binomial(ell, k) for ell in range(m + 1)) == binomial(m + 1, k + 1)


def v_support(h: int, n: int) -> range:
    """Indices i carrying a coefficient of v_n: 1 - h <= i <= h - (n - 1)."""
    return range(1 - h, h - n + 2)


def v_coeffs(h: int, n: int, restricted: bool = False) -> list[int]:
    """Coefficients C(h - i, n - 1) for i = -h..h.

    The binomial vanishes above h - (n - 1). The entry at i = -h is nonzero
    as a binomial but multiplies a vanishing class; ``restricted`` zeroes it.
    """
    if h < 1 or not 1 <= n <= 2 * h + 1:
        raise ValueError(f"need h >= 1 and 1 <= n <= {2 * h + 1}, got h={h}, n={n}")
    support = v_support(h, n)
    return [
        binomial(h - i, n - 1) if (not restricted or i in support) else 0
        for i in range(-h, h + 1)
    ]


def alternating_coefficient(n: int, j: int, h: int) -> int:
    """sum_{i=j+1}^{h} (-1)^(i-j-1) C(h - i, n - 1)."""
    return sum(
        (-1) ** (i - j - 1) * binomial(h - i, n - 1) for i in range(j + 1, h + 1)
    )


class IdentityCheck(BaseModel):
    name: str
    cases: int
    failures: int
    examples: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _check(name: str, cases: Iterator[tuple[str, bool]]) -> IdentityCheck:
    total, bad = 0, []
    for label, ok in cases:
        total += 1
        if not ok:
            bad.append(label)
    return IdentityCheck(name=name, cases=total, failures=len(bad), examples=bad[:5])


def verify_identities(
    hockey_max: int = 30,
    recurrence_h: int = 12,
    d2_h: int = 20,
    poly_h: int = 10,
    pathcount_h: int = 8,
    telescoping_h: int = 12,
) -> list[IdentityCheck]:
    """Run the whole coefficient identity suite."""

    def hockey() -> Iterator[tuple[str, bool]]:
        for m in range(hockey_max + 1):
            for k in range(hockey_max + 1):
                yield f"m={m} k={k}", hockey_stick(m, k)

    def recurrence() -> Iterator[tuple[str, bool]]:
        for h in range(1, recurrence_h + 1):
            for j in range(2, 2 * h + 2):
                for i in range(-h, h):
                    lhs = d_coeff(j, i + 1, h) - d_coeff(j, i, h)
                    rhs = d_coeff(j - 1, i, h) + binomial(h - i - 1, j - 2)
                    yield f"h={h} j={j} i={i}", lhs == rhs

    def antisymmetry() -> Iterator[tuple[str, bool]]:
        for h in range(1, recurrence_h + 1):
            for j in range(0, 2 * h + 2):
                for i in range(-h, h + 1):
                    yield f"h={h} j={j} i={i}", d_coeff(j, -i, h) == -d_coeff(j, i, h)

    def d_two() -> Iterator[tuple[str, bool]]:
        for h in range(1, d2_h + 1):
            for i in range(1, h + 1):
                yield f"h={h} i={i}", d_coeff(2, i, h) == i

    def polynomials() -> Iterator[tuple[str, bool]]:
        for h in range(1, poly_h + 1):
            for j in range(0, 2 * h + 2):
                poly = _p_poly_raw(j, h)
                yield f"h={h} j={j}", not p_poly_problems(j, h, poly)

    def pathcounts() -> Iterator[tuple[str, bool]]:
        for h in range(1, pathcount_h + 1):
            for n in range(1, 2 * h + 2):
                yield f"h={h} n={n}", pathcount_power(h, n) == pathcount_closed_form(h, n)

    def telescoping() -> Iterator[tuple[str, bool]]:
        for h in range(1, telescoping_h + 1):
            for n in range(1, 2 * h + 2):
                for j in range(-h, h + 1):
                    yield (
                        f"h={h} n={n} j={j}",
                        alternating_coefficient(n, j, h) == c_coeff(n, j, h),
                    )

    checks = [
        _check("hockey stick", hockey()),
        _check("d difference recurrence", recurrence()),
        _check("d antisymmetry", antisymmetry()),
        _check("d_2 = i", d_two()),
        _check("p_j odd, degree, values", polynomials()),
        _check("path-count matrix powers", pathcounts()),
        _check("alternating sums give c", telescoping()),
    ]
    for check in checks:
        logger.debug("%s: %d cases, %d failures", check.name, check.cases, check.failures)
    return checks
