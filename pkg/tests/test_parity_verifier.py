"""Tests for the exact binomial linear-algebra verifier."""

from __future__ import annotations

import pytest

from instanton_calculus.domain.algebra import IntMatrix
from instanton_calculus.services.parity_verifier import (
    IndexSet,
    VerificationFailure,
    alternating_coefficient,
    build_m,
    build_n,
    c_coeff,
    d_coeff,
    hockey_stick,
    iter_index_sets,
    lift_kernel,
    nullspace_int,
    p_poly,
    pathcount_closed_form,
    pathcount_power,
    sweep,
    v_coeffs,
    verify_identities,
    verify_index_set,
)

# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------


class TestCoefficients:
    def test_c_zero_alternates(self) -> None:
        assert [c_coeff(0, i, 3) for i in range(-3, 4)] == [-1, 1, -1, 1, -1, 1, -1]

    def test_c_one_is_parity(self) -> None:
        assert [c_coeff(1, i, 2) for i in range(-2, 3)] == [0, 1, 0, 1, 0]

    def test_known_values(self) -> None:
        assert c_coeff(3, -2, 2) == 2
        assert c_coeff(3, 2, 2) == 0
        assert d_coeff(3, 2, 2) == 2

    def test_d_two_is_identity(self) -> None:
        for h in range(1, 8):
            assert [d_coeff(2, i, h) for i in range(-h, h + 1)] == list(range(-h, h + 1))

    def test_index_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="outside"):
            c_coeff(2, 4, 3)
        with pytest.raises(ValueError, match="h must be >= 1"):
            c_coeff(2, 0, 0)


class TestPolynomials:
    def test_p_two_is_t(self) -> None:
        p = p_poly(2, 5)
        assert p.degree == 1
        assert p(7) == 7

    def test_p_three(self) -> None:
        p = p_poly(3, 4)
        assert p.degree == 1
        assert p(5) == 15

    def test_even_index_has_full_degree(self) -> None:
        for h in range(2, 6):
            for j in range(2, 2 * h + 2, 2):
                p = p_poly(j, h)
                assert p.degree == j - 1
                assert p.is_odd()

    def test_out_of_range(self) -> None:
        with pytest.raises(ValueError, match="outside 0..7"):
            p_poly(8, 3)


# ---------------------------------------------------------------------------
# Index sets and matrices
# ---------------------------------------------------------------------------


class TestIndexSet:
    @pytest.mark.parametrize(
        ("h", "indices", "message"),
        [
            (2, (2, 1), "strictly increasing"),
            (2, (0, 1), "must lie in"),
            (3, (1, 5), "must lie in"),
            (3, (), "at least one"),
            (0, (1,), "h must be"),
        ],
    )
    def test_invalid(self, h: int, indices: tuple[int, ...], message: str) -> None:
        with pytest.raises(ValueError, match=message):
            IndexSet(h, indices)

    def test_enumeration_count(self) -> None:
        assert len(list(iter_index_sets(6, 3))) == 91


class TestSingleCase:
    """h = 2, indices (1, 2) worked by hand."""

    @pytest.fixture()
    def ix(self) -> IndexSet:
        return IndexSet(2, (1, 2))

    def test_n_matrix(self, ix: IndexSet) -> None:
        assert build_n(ix).to_lists() == [[0, 0], [0, 0], [1, 2], [1, 2]]

    def test_kernel_and_lift(self, ix: IndexSet) -> None:
        assert nullspace_int(build_n(ix)) == [(2, -1)]
        assert lift_kernel((2, -1)) == (-1, 2, -2, 1)

    def test_m_rows(self, ix: IndexSet) -> None:
        m = build_m(ix)
        assert m.row(0) == (1, -1, -1, 1)
        assert m.row(2) == (2, 1, 0, 0)
        assert m.row(3) == (2, 1, 0, 0)

    def test_report(self, ix: IndexSet) -> None:
        report = verify_index_set(ix)
        assert report.passed
        assert report.rank_n == 1
        assert report.kernel == [2, -1]
        assert report.lifted == [-1, 2, -2, 1]
        assert report.annihilated
        assert report.det_m == 0

    def test_single_index(self) -> None:
        report = verify_index_set(IndexSet(3, (2,)))
        assert report.passed
        assert report.kernel == [1]
        assert report.lifted == [1, -1]


class TestSweep:
    def test_small_sweep(self) -> None:
        report = sweep(6, 3)
        assert report.passed
        assert report.total_cases == 91
        assert {(r.h, r.k) for r in report.rows} == {
            (h, k) for h in range(1, 7) for k in range(1, min(3, h) + 1)
        }

    def test_parallel_matches_serial(self) -> None:
        assert sweep(5, 3, jobs=2) == sweep(5, 3, jobs=1)

    @pytest.mark.slow
    def test_default_range(self) -> None:
        report = sweep(12, 5)
        assert report.passed
        assert report.failed == []

    def test_bounds(self) -> None:
        with pytest.raises(ValueError, match="h_max and k_max"):
            sweep(0, 1)
        with pytest.raises(ValueError, match="jobs"):
            sweep(2, 2, jobs=0)


# ---------------------------------------------------------------------------
# Binomial identities
# ---------------------------------------------------------------------------


class TestIdentities:
    def test_hockey_stick(self) -> None:
        assert all(hockey_stick(m, k) for m in range(20) for k in range(20))

    def test_pathcount(self) -> None:
        assert pathcount_power(2, 1) == IntMatrix.identity(4)
        assert pathcount_power(2, 3)[3, 0] == 2
        for h in range(1, 5):
            for n in range(1, 2 * h + 2):
                assert pathcount_power(h, n) == pathcount_closed_form(h, n)

    def test_v_coeffs(self) -> None:
        assert v_coeffs(2, 2) == [4, 3, 2, 1, 0]
        assert v_coeffs(2, 2, restricted=True) == [0, 3, 2, 1, 0]
        assert v_coeffs(2, 5, restricted=True) == [0, 0, 0, 0, 0]
        with pytest.raises(ValueError, match="need h >= 1"):
            v_coeffs(2, 6)

    def test_alternating_sums(self) -> None:
        for h in range(1, 7):
            for n in range(1, 2 * h + 2):
                for j in range(-h, h + 1):
                    assert alternating_coefficient(n, j, h) == c_coeff(n, j, h)

    def test_suite_passes(self) -> None:
        checks = verify_identities(
            hockey_max=10, recurrence_h=5, d2_h=5, poly_h=5, pathcount_h=4, telescoping_h=5
        )
        assert [c.name for c in checks] == [
            "hockey stick",
            "d difference recurrence",
            "d antisymmetry",
            "d_2 = i",
            "p_j odd, degree, values",
            "path-count matrix powers",
            "alternating sums give c",
        ]
        assert all(c.passed and c.cases > 0 for c in checks)

    @pytest.mark.slow
    def test_default_ranges(self) -> None:
        checks = verify_identities()
        assert len(checks) == 7
        assert all(c.passed and c.cases > 0 for c in checks), [
            (c.name, c.examples) for c in checks if not c.passed
        ]
        pathcount = next(c for c in checks if c.name == "path-count matrix powers")
        assert pathcount.cases == sum(2 * h + 1 for h in range(1, 9))


def test_verification_failure_is_runtime_error() -> None:
    assert issubclass(VerificationFailure, RuntimeError)
