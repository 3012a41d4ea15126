"""Tests for the surgery-dimension engine, slope bounds and classification."""

import itertools
import random
from math import gcd

import pytest

from instanton_calculus.domain.models import Bundle, KnotRecord, Shape
from instanton_calculus.domain.slopes import Slope
from instanton_calculus.services.concordance_service import mirror
from instanton_calculus.services.surgery_service import (
    GENUS_ONE_ALEXANDER,
    classify_small,
    dim_surgery,
    dim_table,
    enumerate_feasible,
    slope_bound,
    zero_surgery_is_small,
)

# ─── Dimension formula ───


class TestDimSurgery:
    """Exact values of dim I#(S^3_{p/q}(K))."""

    def test_figure_eight_zero_surgery(self, seed_records: dict[str, KnotRecord]) -> None:
        fig8 = seed_records["fig8"]
        zero = Slope(p=0, q=1)
        assert dim_surgery(fig8, zero, Bundle.TRIVIAL) == {4}
        assert dim_surgery(fig8, zero, Bundle.MERIDIONAL) == {2}

    def test_v_shape_swaps_bundles(self) -> None:
        rec = KnotRecord(name="v", nu_sharp=0, r0=2, shape=Shape.V)
        zero = Slope(p=0, q=1)
        assert dim_surgery(rec, zero, Bundle.TRIVIAL) == {2}
        assert dim_surgery(rec, zero, Bundle.MERIDIONAL) == {4}

    def test_unknown_shape_gives_two_candidates(self) -> None:
        rec = KnotRecord(name="k", nu_sharp=0, r0=2)
        assert dim_surgery(rec, Slope(p=0, q=1)) == {2, 4}

    def test_cable_companion_slope(self) -> None:
        rec = KnotRecord(name="k", nu_sharp=0, r0=2)
        assert dim_surgery(rec, Slope(p=-1, q=4)) == {9}

    def test_unknot_reciprocal_surgeries(self, seed_records: dict[str, KnotRecord]) -> None:
        for n in range(1, 12):
            assert dim_surgery(seed_records["unknot"], Slope(p=1, q=n)) == {1}

    def test_trefoil_integer_profile(self, seed_records: dict[str, KnotRecord]) -> None:
        rows = dim_table(seed_records["trefoil_right"], [Slope(p=n, q=1) for n in range(-3, 6)])
        dims = {s.p: next(iter(d)) for s, d in rows}
        assert dims == {n: 1 + abs(n - 1) for n in range(-3, 6)}
        assert min(dims, key=dims.__getitem__) == 1

    def test_nonzero_nu_zero_surgery(self, seed_records: dict[str, KnotRecord]) -> None:
        assert dim_surgery(seed_records["T2_5"], Slope(p=0, q=1)) == {6}

    def test_mirror_reverses_slope(self, seed_records: dict[str, KnotRecord]) -> None:
        rng = random.Random(3)
        records = [r for r in seed_records.values() if r.nu_sharp is not None and r.r0 is not None]
        for i in range(200):
            nu = rng.choice([0, *range(-11, 12, 2)])
            shape = rng.choice([None, *Shape]) if nu == 0 else None
            records.append(
                KnotRecord(
                    name=f"k{i}", nu_sharp=nu, r0=abs(nu) + 2 * rng.randrange(5), shape=shape
                )
            )
        for rec in records:
            flipped = mirror(rec)
            for _ in range(25):
                q = rng.randint(1, 50)
                p = rng.randint(-200, 200)
                if gcd(abs(p), q) != 1:
                    continue
                for bundle in Bundle:
                    assert dim_surgery(flipped, Slope(p=-p, q=q), bundle) == dim_surgery(
                        rec, Slope(p=p, q=q), bundle
                    ), (rec, p, q)

    def test_integer_profile_has_one_minimum(self) -> None:
        rng = random.Random(4)
        for _ in range(300):
            nu = rng.choice(range(-15, 16, 2))
            rec = KnotRecord(name="k", nu_sharp=nu, r0=abs(nu) + 2 * rng.randrange(4))
            dims = [
                next(iter(dim_surgery(rec, Slope(p=n, q=1)))) for n in range(-40, 41)
            ]
            low = dims.index(min(dims))
            assert low - 40 == nu
            assert all(x > y for x, y in itertools.pairwise(dims[: low + 1]))
            assert all(x < y for x, y in itertools.pairwise(dims[low:]))

    def test_infinity_rejected(self, seed_records: dict[str, KnotRecord]) -> None:
        with pytest.raises(ValueError, match="finite slope"):
            dim_surgery(seed_records["unknot"], Slope(p=1, q=0))

    def test_missing_invariants(self) -> None:
        with pytest.raises(ValueError, match="missing r0"):
            dim_surgery(KnotRecord(name="k", nu_sharp=1), Slope(p=1, q=1))

    def test_inconsistent_record(self) -> None:
        with pytest.raises(ValueError, match="R1"):
            dim_surgery(KnotRecord(name="k", nu_sharp=2, r0=2), Slope(p=1, q=1))


class TestZeroSurgerySmall:
    def test_only_unknot_and_trefoils(self, seed_records: dict[str, KnotRecord]) -> None:
        small = {name for name, rec in seed_records.items() if zero_surgery_is_small(rec)}
        assert small == {"unknot", "trefoil_left", "trefoil_right"}


# ─── Slope bounds ───


def _oracle(dimension: int, r_min: int) -> set[tuple[int, int, int, int]]:
    found = set()
    for q in range(1, dimension + 1):
        for r in range(r_min, dimension // q + 1):
            slack = dimension - q * r
            for nu in range(-r, r + 1):
                if (nu != 0 and nu % 2 == 0) or (r - nu) % 2:
                    continue
                for p in range(q * nu - slack, q * nu + slack + 1):
                    if p == 0 or gcd(abs(p), q) != 1:
                        continue
                    if q * r + abs(p - q * nu) == dimension:
                        found.add((p, q, nu, r))
    return found


class TestSlopeBound:
    """Denominator bounds from a total dimension."""

    def test_dimension_three(self) -> None:
        result = slope_bound(3)
        assert result.q_max == 1
        assert {(c.p, c.q) for c in result.equality_cases} == {(-3, 1), (-1, 1), (1, 1), (3, 1)}

    def test_include_exceptional(self) -> None:
        result = slope_bound(1, exclude_exceptional=False)
        assert result.q_max == 1
        assert {(c.p, c.q) for c in result.equality_cases} == {(-1, 1), (1, 1)}

    def test_equality_needs_integral_slope(self) -> None:
        result = slope_bound(4, exclude_exceptional=False)
        assert result.q_max == 4
        assert result.equality_cases == []
        assert max(f.q for f in result.feasible) == 3

    def test_every_feasible_q_within_bound(self) -> None:
        for d in range(1, 30):
            result = slope_bound(d)
            assert all(f.q <= result.q_max for f in result.feasible)

    @pytest.mark.parametrize("exclude_exceptional", [True, False])
    def test_matches_brute_force(self, exclude_exceptional: bool) -> None:
        r_min = 3 if exclude_exceptional else 1
        for d in range(1, 61):
            expected = _oracle(d, r_min)
            result = slope_bound(d, exclude_exceptional)
            got = {(f.p, f.q, f.nu_sharp, f.r0) for f in result.feasible}
            assert got == expected, d
            assert result.q_max == d // r_min
            assert all(q <= result.q_max for _, q, _, _ in expected)
            equality = {(f.p, f.q, f.nu_sharp, f.r0) for f in result.equality_cases}
            assert equality == {c for c in expected if c[1] * r_min == d}, d

    def test_nonpositive_dimension(self) -> None:
        with pytest.raises(ValueError, match="positive"):
            slope_bound(0)


# ─── Classification ───


class TestClassifySmall:
    @pytest.mark.parametrize(
        ("nu", "r0", "name"),
        [
            (0, 0, "unknot"),
            (1, 1, "right-handed trefoil"),
            (-1, 1, "left-handed trefoil"),
            (0, 2, "figure eight"),
            (3, 3, "T(2,5)"),
        ],
    )
    def test_named(self, nu: int, r0: int, name: str) -> None:
        assert classify_small(nu, r0).knots == [name]

    def test_genus_one_with_alexander(self) -> None:
        result = classify_small(1, 3)
        assert result.knots == []
        assert "Seifert genus 1" in result.constraints
        assert GENUS_ONE_ALEXANDER in result.constraints
        assert result.conjecture is not None

    def test_lspace_knot(self) -> None:
        result = classify_small(5, 5)
        assert result.knots == []
        assert any("L-space knot of Seifert genus 3" in c for c in result.constraints)

    def test_mirror_lspace_knot(self) -> None:
        assert any(c.startswith("the mirror of K") for c in classify_small(-5, 5).constraints)

    def test_impossible_pair(self) -> None:
        with pytest.raises(ValueError, match="R1"):
            classify_small(2, 2)
        with pytest.raises(ValueError, match="R2"):
            classify_small(3, 1)
