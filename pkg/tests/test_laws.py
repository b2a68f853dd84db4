"""Law oracles, the balanced recurrence, and the comparison harness."""

import math
from fractions import Fraction

import pytest

from partcat.categories import EH, EO, NCO, NCS, PB, PH, PO, PS, eh_s
from partcat.laws import (
    LawCompareReport,
    balanced_recurrence,
    bessel_moments,
    free_poisson_moments,
    gaussian_moments,
    law_compare,
    law_moments,
    poisson_moments,
    sample_s_bessel,
    semicircle_moments,
    shifted_gaussian_moments,
    squeezed_complex_gaussian_moments,
    squeezed_s_bessel_even_moments,
)
from partcat.weingarten import asymptotic_moment, diagrams

from oracles import bell_number, catalan_number, double_factorial


class TestClosedForms:
    def test_gaussian(self):
        assert gaussian_moments(1, 4).values == (0, 1, 0, 3)
        assert gaussian_moments(Fraction(1, 2), 4).values[3] == Fraction(3, 4)

    def test_poisson_bell(self):
        assert poisson_moments(1, 4).values == (1, 2, 5, 15)
        for k in range(1, 7):
            assert poisson_moments(1, 7).values[k - 1] == bell_number(k)

    def test_free_poisson_catalan(self):
        for k in range(1, 7):
            assert free_poisson_moments(1, 7).values[k - 1] == catalan_number(k)

    def test_semicircle(self):
        assert semicircle_moments(1, 6).values == (0, 1, 0, 2, 0, 5)

    def test_law_order_cap(self):
        with pytest.raises(ValueError):
            gaussian_moments(1, 13)

    def test_moments_match_diagram_sums(self):
        # the closed forms agree with the partition sums they describe
        checks = [
            ("gaussian", PO),
            ("poisson", PS),
            ("free_poisson", NCS),
            ("semicircle", NCO),
            ("shifted_gaussian", PB),
            ("bessel", PH),
        ]
        for t in (Fraction(1), Fraction(1, 2)):
            for law, cat in checks:
                series = law_moments(law, t, 6)
                for k in range(1, 7):
                    assert series.values[k - 1] == asymptotic_moment(cat, k, t), (
                        law, t, k,
                    )

    def test_squeezed_complex_gaussian(self):
        series = squeezed_complex_gaussian_moments(1, 3)
        assert series.orders == (2, 4, 6)
        assert series.values == (1, 2, 6)
        for j in range(1, 4):
            assert series.values[j - 1] == asymptotic_moment(EO, 2 * j, 1)

    def test_dispatcher(self):
        assert law_moments("poisson", 1, 3).values == (1, 2, 5)
        with pytest.raises(ValueError):
            law_moments("squeezed_s_bessel", 1, 3)
        with pytest.raises(ValueError):
            law_moments("cauchy", 1, 3)


class TestBalancedRecurrence:
    def test_values(self):
        assert balanced_recurrence(5).values == (1, 3, 16, 131, 1496)

    def test_counts_balanced_partitions(self):
        for k in range(1, 5):
            assert balanced_recurrence(5).values[k - 1] == len(diagrams(EH, 2 * k))

    def test_matches_diagram_sum_with_weights(self):
        # at full truncation the recurrence equals the plain diagram count
        for k in range(1, 5):
            assert balanced_recurrence(4).values[k - 1] == asymptotic_moment(
                EH, 2 * k, 1
            )


class TestOddMoments:
    def test_vanish_for_even_categories(self):
        # categories whose diagrams all have an even number of legs carry no
        # odd-order diagrams at all
        from partcat.categories import NCH, PB2, PS2, eh_loc

        cats = [PO, PH, PS2, PB2, NCO, NCH, EO, EH, eh_s(3), eh_loc(3)]
        for c in cats:
            for k in (1, 3, 5, 7):
                assert asymptotic_moment(c, k, 1) == 0
                assert not diagrams(c, k)


class TestSampler:
    def test_deterministic(self):
        a = sample_s_bessel(3, 1, 1000, seed=5)
        b = sample_s_bessel(3, 1, 1000, seed=5)
        assert (a == b).all()

    def test_two_bessel_matches_skellam_moments(self):
        orders, means, errs = squeezed_s_bessel_even_moments(2, 1, 3, 200_000, seed=5)
        reference = bessel_moments(1, 6)
        for order, mean, err in zip(orders, means, errs):
            exact = float(reference.values[order - 1])
            assert abs(mean - exact) < 5 * err

    def test_three_bessel_matches_diagram_sums(self):
        orders, means, errs = squeezed_s_bessel_even_moments(3, 1, 3, 200_000, seed=5)
        for order, mean, err in zip(orders, means, errs):
            exact = float(asymptotic_moment(eh_s(3), order, 1))
            assert abs(mean - exact) < 5 * err


class TestCompare:
    def test_poisson_convergence(self):
        report = law_compare(PS, "poisson", Fraction(1, 2), 4, (8, 16, 32))
        assert report.convergent
        csv = report.to_csv()
        assert csv.splitlines()[0] == "category,law,t,k,finite_n,value,reference,abs_dev"
        assert csv.strip().endswith("CONVERGENT")

    def test_squeezed_odd_moments_must_vanish(self):
        report = law_compare(EO, "squeezed_complex_gaussian", 1, 4, (6, 8))
        assert report.convergent
        odd_rows = [r for r in report.rows if r.k % 2]
        assert odd_rows and all(r.value == 0 for r in odd_rows)

    def test_gaussian_exact_at_full_truncation(self):
        report = law_compare(PO, "gaussian", 1, 4, (8, 16))
        assert report.convergent
        assert all(r.abs_dev == 0 for r in report.rows)

    def test_truncation_must_be_positive(self):
        with pytest.raises(ValueError):
            law_compare(PS, "poisson", Fraction(1, 10), 2, (4,))

    def test_sampled_reference_requires_seed(self):
        with pytest.raises(ValueError):
            law_compare(eh_s(3), "squeezed_s_bessel", 1, 2, (8,), s=3)
