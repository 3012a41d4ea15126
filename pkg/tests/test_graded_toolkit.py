"""Tests for Z/4-graded bookkeeping, triangle feasibility and the triangle chase."""

from __future__ import annotations

import random
from collections.abc import Iterator
from itertools import product

import pytest

from instanton_calculus.domain.graded import GradedDim, LaurentPoly, TriangleSpec, direct_sum
from instanton_calculus.services.graded_toolkit import (
    SPHERE,
    alexander_from_surgery,
    cable_substitute,
    casson_chi,
    cobordism_degree,
    euler_char,
    expected_euler_char,
    floer_euler_char,
    floer_from_reduced,
    froyshov_gap,
    fukaya_kernel_dim,
    fukaya_zero_surgery_consistent,
    genus1_alexander,
    one_three_alexander,
    reduced_from_sharp,
    second_derivative_at_1,
    section9_contradiction,
    solve_section9,
    triangle_feasible,
)

# ─── Helpers ───


def _oracle_feasible(t: TriangleSpec) -> bool:
    """Brute force over the ranks of A -> B and C -> A."""
    d_ab, d_bc, d_ca = t.degrees
    for ab in product(*(range(t.a[g] + 1) for g in range(4))):
        bc = [t.b[g] - ab[(g - d_ab) % 4] for g in range(4)]
        if min(bc) < 0:
            continue
        for ca in product(*(range(t.c[g] + 1) for g in range(4))):
            if all(
                ab[g] <= t.b[g + d_ab]
                and bc[g] <= t.c[g + d_bc]
                and ca[g] <= t.a[g + d_ca]
                and t.a[g] == ab[g] + ca[(g - d_ca) % 4]
                and t.c[g] == ca[g] + bc[(g - d_bc) % 4]
                for g in range(4)
            ):
                return True
    return False


def _random_dim(rng: random.Random) -> GradedDim:
    return GradedDim(tuple(rng.choice((0, 0, 1, 1, 2)) for _ in range(4)))  # type: ignore[arg-type]


def _bounded_tuples(length: int, budget: int) -> Iterator[tuple[int, ...]]:
    """Every nonnegative tuple of the given length with sum <= budget."""
    if length == 0:
        yield ()
        return
    for head in range(budget + 1):
        for tail in _bounded_tuples(length - 1, budget - head):
            yield (head, *tail)


# ─── Graded dimensions ───


class TestGradedDim:
    def test_of_reads_mod_four(self) -> None:
        assert GradedDim.of(0, -1, 4) == GradedDim((2, 0, 0, 1))

    def test_shift(self) -> None:
        assert GradedDim.of(0, 3).shift(1) == GradedDim.of(1, 0)

    def test_str(self) -> None:
        assert str(GradedDim.of(0, 2, 3)) == "Q_0 ⊕ Q_2 ⊕ Q_3"
        assert str(GradedDim()) == "0"

    def test_negative_rejected(self) -> None:
        with pytest.raises(ValueError, match="nonnegative"):
            GradedDim((0, -1, 0, 0))

    def test_direct_sum(self) -> None:
        assert direct_sum([SPHERE, SPHERE, GradedDim.of(3)]) == GradedDim((2, 0, 0, 1))


class TestEulerCharacteristic:
    def test_additive(self) -> None:
        rng = random.Random(11)
        for _ in range(50):
            a, b = _random_dim(rng), _random_dim(rng)
            assert euler_char(a + b) == euler_char(a) + euler_char(b)

    def test_expected(self) -> None:
        assert expected_euler_char(5, 0) == 5
        assert expected_euler_char(0, 1) == 0
        with pytest.raises(ValueError, match="nonzero"):
            expected_euler_char(0, 0)
        with pytest.raises(ValueError, match="nonnegative"):
            expected_euler_char(-1, 0)


class TestCobordismDegree:
    def test_values(self) -> None:
        assert cobordism_degree(1, -1, 0, 0, 0) == 0
        assert cobordism_degree(2, 0, 0, 0, 0) == 1
        assert cobordism_degree(2, 0, 0, 0, 1) == 3
        assert cobordism_degree(1, 0, 0, 1, 0) == 3

    def test_non_integral(self) -> None:
        with pytest.raises(ValueError, match="non-integral"):
            cobordism_degree(1, 0, 0, 0, 0)


# ─── Exact triangles ───


class TestTriangleFeasible:
    def test_isomorphism(self) -> None:
        ranks = triangle_feasible(TriangleSpec(SPHERE, SPHERE, GradedDim()))
        assert ranks is not None
        assert ranks.totals == (1, 0, 0)

    def test_lonely_generator(self) -> None:
        assert triangle_feasible(TriangleSpec(SPHERE, GradedDim(), GradedDim())) is None

    def test_degree_mismatch(self) -> None:
        spec = TriangleSpec(SPHERE, GradedDim.of(1), GradedDim(), (0, 0, 0))
        assert triangle_feasible(spec) is None
        assert triangle_feasible(TriangleSpec(SPHERE, GradedDim.of(1), GradedDim(), (1, 0, 0)))

    def test_matches_brute_force(self) -> None:
        rng = random.Random(2024)
        for _ in range(150):
            spec = TriangleSpec(
                _random_dim(rng),
                _random_dim(rng),
                _random_dim(rng),
                (rng.randrange(4), rng.randrange(4), rng.randrange(4)),
            )
            found = triangle_feasible(spec)
            assert (found is not None) == _oracle_feasible(spec), spec
            if found is not None:
                x, y, z = found.totals
                assert x + z == spec.a.total
                assert x + y == spec.b.total
                assert y + z == spec.c.total

    @pytest.mark.slow
    def test_exhaustive_small_triangles(self) -> None:
        degrees = list(product(range(4), repeat=3))
        for entries in _bounded_tuples(12, 4):
            a, b, c = (GradedDim(entries[i : i + 4]) for i in (0, 4, 8))  # type: ignore[arg-type]
            for degs in degrees:
                spec = TriangleSpec(a, b, c, degs)
                assert (triangle_feasible(spec) is not None) == _oracle_feasible(spec), spec

    @pytest.mark.slow
    def test_entries_up_to_four(self) -> None:
        rng = random.Random(4)
        for _ in range(500):
            spec = TriangleSpec(
                *(GradedDim(tuple(rng.randint(0, 4) for _ in range(4))) for _ in range(3)),  # type: ignore[arg-type]
                (rng.randrange(4), rng.randrange(4), rng.randrange(4)),
            )
            assert (triangle_feasible(spec) is not None) == _oracle_feasible(spec), spec


# ─── Froyshov, Fukaya ───


class TestReducedGroup:
    def test_recovers_reduced(self) -> None:
        assert reduced_from_sharp(GradedDim.of(0, 2, 3)) == GradedDim.of(3)
        assert reduced_from_sharp(SPHERE) == GradedDim()

    def test_no_q0(self) -> None:
        with pytest.raises(ValueError, match="no Q_0"):
            reduced_from_sharp(GradedDim.of(1))

    def test_wrong_form(self) -> None:
        with pytest.raises(ValueError, match="not of the form"):
            reduced_from_sharp(GradedDim.of(0, 1))

    def test_ambiguous(self) -> None:
        with pytest.raises(ValueError, match="no unique"):
            reduced_from_sharp(GradedDim((2, 1, 1, 1)))

    def test_floer_group(self) -> None:
        assert floer_from_reduced(GradedDim.of(3), 1) == GradedDim.of(1, 3)
        assert floer_from_reduced(GradedDim(), -2) == GradedDim((2, 0, 0, 0))
        assert floer_euler_char(GradedDim.of(3), 1) == -4


class TestDimensionRelations:
    def test_froyshov_gap(self) -> None:
        assert froyshov_gap(4, 2) == 1
        assert froyshov_gap(2, 2) == 0
        with pytest.raises(ValueError, match="smaller"):
            froyshov_gap(2, 4)
        with pytest.raises(ValueError, match="odd"):
            froyshov_gap(5, 2)

    def test_fukaya(self) -> None:
        assert fukaya_kernel_dim(5) == 2
        assert fukaya_kernel_dim(1) == 0
        with pytest.raises(ValueError, match="odd and positive"):
            fukaya_kernel_dim(4)
        assert fukaya_zero_surgery_consistent(4, 4)
        assert not fukaya_zero_surgery_consistent(4, 2)


# ─── Alexander / Casson ───


class TestAlexander:
    def test_genus_one(self) -> None:
        assert str(genus1_alexander(2)) == "2t - 3 + 2t^-1"
        assert genus1_alexander(0) == LaurentPoly.constant(1)
        assert genus1_alexander(-1).at_one() == 1

    def test_casson(self) -> None:
        for a in range(-4, 5):
            assert casson_chi(genus1_alexander(a)) == -2 * a

    def test_asymmetric(self) -> None:
        with pytest.raises(ValueError, match="not symmetric"):
            casson_chi(LaurentPoly(((1, 1),)))

    def test_cable_quadruples_second_derivative(self) -> None:
        rng = random.Random(7)
        for _ in range(500):
            coeffs = {0: rng.randint(-5, 5)}
            for e in range(1, rng.randint(1, 5) + 1):
                c = rng.randint(-5, 5)
                coeffs[e] = coeffs[-e] = c
            p = LaurentPoly.from_dict(coeffs)
            assert second_derivative_at_1(cable_substitute(p)) == 4 * second_derivative_at_1(p)

    def test_cable_substitute(self) -> None:
        assert str(cable_substitute(genus1_alexander(2))) == "2t^2 - 3 + 2t^-2"
        with pytest.raises(ValueError, match="power"):
            cable_substitute(genus1_alexander(1), power=0)

    def test_from_surgery(self) -> None:
        delta = alexander_from_surgery(GradedDim.of(0, 2, 3), 1, surgery_sign=-1)
        assert delta == genus1_alexander(2)
        with pytest.raises(ValueError, match="surgery sign"):
            alexander_from_surgery(GradedDim.of(0, 2, 3), 1, surgery_sign=0)

    @pytest.mark.parametrize("k", [0, 1, 2, 3, 6, 7])
    def test_one_three(self, k: int) -> None:
        expected = genus1_alexander(2) if k % 2 == 0 else LaurentPoly.constant(1)
        assert one_three_alexander(k) == expected


# ─── Triangle chase ───


class TestTriangleChase:
    """The (nu, r0) = (0, 2) enumeration."""

    def test_unique_solution(self) -> None:
        (sol,) = solve_section9()
        assert (sol.k, sol.m) == (3, 2)
        assert sol.minus_one == GradedDim.of(0, 2, 3)
        assert sol.plus_one == GradedDim.of(0, 1, 2)
        assert sol.zero == GradedDim.of(2, 3)
        assert sol.as_dict()["map_ranks"] == {
            "F_-1": 1,
            "G_0": 2,
            "H_0": 0,
            "F_0": 0,
            "G_1": 2,
            "H_1": 1,
        }

    def test_forced_zero_shape(self) -> None:
        assert solve_section9(forced_zero=GradedDim.of(0, 1)) == []
        assert len(solve_section9(forced_zero=GradedDim.of(2, 3))) == 1

    def test_figure_eight_dimension(self) -> None:
        solutions = solve_section9(dim_zero_total=4)
        assert len(solutions) == 4
        for sol in solutions:
            assert sol.m == (sol.k + 1) % 4
            assert sol.zero.total == 4

    def test_invalid_dimension(self) -> None:
        with pytest.raises(ValueError, match="even"):
            solve_section9(dim_zero_total=3)


class TestContradiction:
    def test_default_chain(self) -> None:
        report = section9_contradiction()
        assert report.branch == "cable"
        assert report.contradiction
        assert report.alexander == "2t - 3 + 2t^-1"
        assert report.cable_alexander == "2t^2 - 3 + 2t^-2"
        assert report.lower_bound == 16
        assert report.feasible_dimensions == [8, 10]
        assert report.steps[-1] == "16 > 10: contradiction"

    def test_small_coefficient_fits(self) -> None:
        report = section9_contradiction(alexander_a=1)
        assert report.lower_bound == 8
        assert not report.contradiction

    def test_figure_eight_branch(self) -> None:
        report = section9_contradiction(dim_zero_total=4)
        assert report.branch == "figure_eight"
        assert not report.contradiction
        assert len(report.solutions) == 4
