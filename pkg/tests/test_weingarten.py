"""Gram/Weingarten matrices, Haar integrals, truncated-character moments."""

import itertools
import math
from fractions import Fraction

import pytest

from partcat.categories import (
    BASE_FAMILIES,
    EH,
    EO,
    NCO,
    NCS,
    PH,
    PO,
    PS,
    PS2,
    eh_loc,
    eh_s,
)
from partcat.exact import SingularMatrixError, identity_matrix, invert, rank_of
from partcat.partitions import Partition
from partcat.tensors import exact_haar_integral, gram_from_vectors
from partcat.weingarten import (
    GramSingularError,
    asymptotic_moment,
    diagrams,
    gram_matrix,
    haar_integral,
    moment,
    moment_table_csv,
    weingarten_matrix,
)

from oracles import bell_number, brute_group_average, catalan_number, double_factorial


class TestExactLinearAlgebra:
    def test_invert_small(self):
        import numpy as np

        a = np.array(
            [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]], dtype=object
        )
        inv = invert(a)
        assert np.array_equal(a @ inv, identity_matrix(2))

    def test_singular_reports_rank(self):
        import numpy as np

        a = np.array(
            [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], dtype=object
        )
        with pytest.raises(SingularMatrixError) as err:
            invert(a)
        assert err.value.rank == 1
        assert rank_of(a) == 1


class TestGram:
    def test_ncs_k2(self):
        g = gram_matrix(NCS, 2, 3)
        assert [[int(x) for x in row] for row in g.data] == [[3, 3], [3, 9]]

    def test_po_k2(self):
        g = gram_matrix(PO, 2, 5)
        assert g.size == 1 and g.data[0, 0] == 5

    def test_empty_diagram_set(self):
        g = gram_matrix(EO, 3, 4)
        assert g.size == 0

    def test_matches_vector_gram(self):
        series = [eh_s(s) for s in (2, 3, 4, math.inf)]
        local = [eh_loc(s) for s in (2, 3, 4, math.inf)]
        for c in list(BASE_FAMILIES) + series + local:
            for k in (1, 2, 3, 4):
                basis = diagrams(c, k)
                for n in (2, 3):
                    assert gram_matrix(c, k, n) == gram_from_vectors(basis, n)


class TestWeingarten:
    def test_ncs_k2_closed_form(self):
        for n in (2, 3, 5, 7):
            w = weingarten_matrix(NCS, 2, n)
            assert w.data[0, 0] == Fraction(1, n - 1)
            assert w.data[0, 1] == Fraction(-1, n * (n - 1))
            assert w.data[1, 1] == Fraction(1, n * (n - 1))

    def test_po_k2(self):
        assert weingarten_matrix(PO, 2, 4).data[0, 0] == Fraction(1, 4)

    def test_product_is_identity(self):
        for c in BASE_FAMILIES:
            for k in (1, 2, 3, 4):
                for n in range(k, 7):
                    w = weingarten_matrix(c, k, n)
                    if w.size:
                        assert (w @ gram_matrix(c, k, n)).is_identity()

    def test_singular_below_dimension(self):
        with pytest.raises(GramSingularError) as err:
            weingarten_matrix(PS, 4, 2)
        assert err.value.rank == 8 and err.value.size == 15

    def test_small_n_can_still_invert(self):
        # pairings stay independent at n=2 for k=4
        w = weingarten_matrix(PO, 4, 2)
        assert (w @ gram_matrix(PO, 4, 2)).is_identity()


class TestHaarIntegral:
    def test_symmetric_group_values(self):
        n = 5
        assert haar_integral(PS, n, (1, 2), (1, 2)) == Fraction(1, n * (n - 1))
        assert haar_integral(PS, n, (1, 1), (1, 1)) == Fraction(1, n)
        assert haar_integral(PO, n, (1,), (1,)) == 0

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            haar_integral(PS, 3, (1, 2), (1,))

    def test_matches_group_average_exactly(self):
        cases = [
            ("S", 3, None, PS),
            ("H", 2, None, PH),
            ("S'", 3, None, PS2),
            ("Hs", 2, 3, eh_s(3)),
        ]
        for tag, n, s, cat in cases:
            for k in (1, 2, 3):
                for i in itertools.product(range(1, n + 1), repeat=k):
                    for j in itertools.product(range(1, n + 1), repeat=k):
                        assert haar_integral(cat, n, i, j) == exact_haar_integral(
                            tag, n, i, j, s
                        )

    def test_permutation_invariance(self):
        # relabeling rows and columns by one permutation fixes every integral
        import random

        rng = random.Random(11)
        n = 4
        for cat in (PS, PO, PH, EO):
            for _ in range(25):
                k = rng.randint(1, 3)
                i = tuple(rng.randint(1, n) for _ in range(k))
                j = tuple(rng.randint(1, n) for _ in range(k))
                sigma = list(range(1, n + 1))
                rng.shuffle(sigma)
                i2 = tuple(sigma[x - 1] for x in i)
                j2 = tuple(sigma[x - 1] for x in j)
                assert haar_integral(cat, n, i, j) == haar_integral(cat, n, i2, j2)


class TestMoments:
    def test_symmetric_group_fixed_points(self):
        for n in (2, 3, 5, 8):
            assert moment(PS, n, 2, n) == 2
            assert moment(PS, n, 1, n) == 1

    def test_orthogonal_second_moment(self):
        for n in (2, 4, 6):
            assert moment(PO, n, 2, n) == 1

    def test_full_character_moment_is_diagram_count(self):
        for c in (PS, PO, PH, EH):
            for k in (1, 2, 3, 4):
                for n in (6, 8):
                    assert moment(c, n, k, n) == len(diagrams(c, k))

    def test_truncation_validation(self):
        with pytest.raises(ValueError):
            moment(PS, 4, 2, 5)
        with pytest.raises(ValueError):
            moment(PS, 4, 2, 0)

    def test_empty_diagrams_give_zero(self):
        assert moment(EO, 6, 3, 3) == 0

    def test_asymptotic_values(self):
        assert asymptotic_moment(PS, 4, 1) == bell_number(4)
        assert asymptotic_moment(NCS, 4, 1) == catalan_number(4)
        assert asymptotic_moment(NCO, 4, 1) == catalan_number(2)
        assert asymptotic_moment(PO, 4, 1) == double_factorial(3)
        assert asymptotic_moment(EO, 4, 1) == 2
        assert asymptotic_moment(PS, 2, Fraction(1, 2)) == Fraction(3, 4)

    def test_csv_layout(self):
        text = moment_table_csv([(PS, 2, 4, 4, Fraction(2))])
        assert text.splitlines() == [
            "category,k,n,m,value_num,value_den",
            "Ps,2,4,4,2,1",
        ]


class TestBrutForceCross:
    def test_s4_all_words_k2(self):
        # independent matrix-by-matrix average against the Weingarten value
        n = 4
        for i in itertools.product(range(1, n + 1), repeat=2):
            for j in itertools.product(range(1, n + 1), repeat=2):
                assert haar_integral(PS, n, i, j) == brute_group_average(
                    "S", n, i, j
                )
