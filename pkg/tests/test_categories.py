"""Membership predicates, special generators, axiom checks, bounded closure."""

import math

import pytest

from partcat.categories import (
    BASE_FAMILIES,
    EH,
    EO,
    NC_OF,
    NCH,
    NCO,
    NCS,
    PB,
    PH,
    PO,
    PS,
    PS2,
    CategoryId,
    axioms_hold,
    category_table,
    eh_loc,
    eh_s,
    enumerate_category,
    generate,
    half_commutation,
    k_cubic,
    member,
    parse_category,
    s_mixing,
    special_partition,
)
from partcat.partitions import Partition, enumerate_all, enumerate_partitions, parse

from oracles import double_factorial


def count(c, upper, lower, leg_bound=8):
    return sum(1 for _ in enumerate_category(c, upper, lower, leg_bound=leg_bound))


class TestCategoryId:
    def test_series_parameter_required(self):
        with pytest.raises(ValueError):
            CategoryId("Eh(s)")
        with pytest.raises(ValueError):
            CategoryId("Eh(s)", 1)
        with pytest.raises(ValueError):
            CategoryId("Po", 3)

    def test_parse_round_trip(self):
        for c in list(BASE_FAMILIES) + [eh_s(3), eh_loc(2), eh_s(math.inf)]:
            assert parse_category(str(c)) == c

    def test_parse_inf(self):
        assert parse_category("Eh(s=inf)") == eh_s(math.inf)


class TestMembership:
    def test_single_block_four_points_balanced(self):
        assert member(EH, parse("l1 l2 l3 l4"))

    def test_series_witness(self):
        # the six-point three-string diagram is 3-balanced but a subpartition
        # of it is not, so it separates the two series
        w = parse("1 4 | 2 5 | 3 6")
        assert member(eh_s(3), w)
        assert not member(eh_loc(3), w)

    def test_odd_block_not_even(self):
        assert not member(PH, parse("l1 l2 l3 | l4"))

    def test_noncrossing_families_by_construction(self):
        for crossing_family, nc_family in NC_OF.items():
            for p in enumerate_all(6):
                expected = member(crossing_family, p) and p.is_noncrossing()
                assert member(nc_family, p) == expected

    def test_identity_and_pair_in_all_families(self):
        cats = list(BASE_FAMILIES) + [eh_s(s) for s in (2, 3, 4, math.inf)] + [
            eh_loc(s) for s in (2, 3, 4, math.inf)
        ]
        for c in cats:
            assert member(c, Partition.identity())
            assert member(c, Partition.pair())

    def test_balanced_pairing_counts(self):
        # odd labels pair bijectively with even labels: k! diagrams
        for k in range(1, 5):
            assert count(EO, 0, 2 * k) == math.factorial(k)

    def test_pairing_counts(self):
        for k in range(1, 5):
            assert count(PO, 0, 2 * k) == double_factorial(2 * k - 1)

    def test_eh2_equals_ph(self):
        assert category_table(eh_s(2), 8) == category_table(PH, 8)
        assert category_table(eh_loc(2), 8) == category_table(PH, 8)

    def test_eh_inf_equals_eh(self):
        assert category_table(eh_s(math.inf), 8) == category_table(EH, 8)

    def test_series_inclusions(self):
        # locally balanced implies balanced; plain balance implies balance mod s
        for s in (2, 3, 4):
            loc = category_table(eh_loc(s), 8)
            glob = category_table(eh_s(s), 8)
            assert loc <= glob
            assert category_table(EH, 8) <= glob


class TestSpecialPartitions:
    def test_half_commutation(self):
        p = half_commutation()
        assert p == parse("u1 l3 | u2 l2 | u3 l1")
        assert member(EO, p) and not p.is_noncrossing()

    def test_s_mixing_two_is_crossing(self):
        assert s_mixing(2) == parse("u1 l2 | u2 l1")

    def test_s_mixing_structure(self):
        p = s_mixing(3)
        assert p == parse("P(3,3): u1 u3 l2 | u2 l1 l3")
        assert member(eh_s(3), p)
        assert not member(EH, p)

    def test_k_cubic(self):
        assert k_cubic(0) == parse("u1 u2 l1 l2")
        assert k_cubic(1) == parse("u1 u3 l1 l3 | u2 l2")
        assert special_partition("ultracubic_generator") == k_cubic(1)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            s_mixing(1)
        with pytest.raises(ValueError):
            k_cubic(-1)
        with pytest.raises(ValueError):
            special_partition("s_mixing")

    def test_dispatcher(self):
        assert special_partition("half_commutation") == half_commutation()
        assert special_partition("s_mixing", 2) == s_mixing(2)
        assert special_partition("k_cubic", 0) == k_cubic(0)


class TestAxioms:
    def test_small_bound_families(self):
        for c in (PO, PS, NCS, EO, EH, eh_s(3), eh_loc(3)):
            report = axioms_hold(c, 6)
            assert report.passed, report.to_dict()

    def test_blocks_up_to_three_fails_composition(self):
        # blocks of size <= 3 are not stable: two triples fused through the
        # middle row produce a four-point block
        table = frozenset(
            p
            for p in enumerate_all(6)
            if all(size <= 3 for size in p.block_sizes())
        )
        from partcat import _sweeps

        members = sorted(table, key=lambda p: (p.legs, p.upper, p.blocks))
        checked, failures = _sweeps.compose_closure_check(members, 6)
        assert failures
        i, j = failures[0]
        result, _ = members[i].compose(members[j])
        assert max(result.block_sizes()) > 3

    def test_report_structure(self):
        report = axioms_hold(EO, 4)
        data = report.to_dict()
        assert data["passed"] is True
        assert set(data["checked"]) == {
            "contains", "involute", "rotate", "tensor", "compose",
        }


class TestGenerate:
    def test_closure_of_base_is_itself(self):
        g = generate([], NCO, 6)
        assert g.same_table(category_table(NCO, 6))

    def test_crossing_generates_everything(self):
        target = category_table(PS, 6)
        g = generate([parse("u1 l2 | u2 l1")], NCS, 6, target=target)
        assert g.same_table(target)

    def test_half_commutation_generates_balanced_pairings(self):
        target = category_table(EO, 8)
        g = generate([half_commutation()], NCO, 8, target=target)
        assert g.same_table(target)

    def test_s_mixing_closure_stays_inside_series(self):
        # bounded closure is an under-approximation: subset is guaranteed
        g = generate([s_mixing(3)], NCH, 8)
        assert g.table <= category_table(eh_s(3), 8)

    def test_restriction_agreement_across_bounds(self):
        # the bounded closure at L agrees with the restriction of the closure
        # at L+2, for the difference-set generator cases
        cases = [
            ([parse("u1 l2 | u2 l1")], NCS, 4),
            ([parse("1 3 | 2 4")], NCO, 6),
            ([half_commutation()], NCO, 6),
            ([parse("1 3 | 2 4")], CategoryId("NCb"), 4),
        ]
        for gens, base, bound in cases:
            small = generate(gens, base, bound).table
            large = generate(gens, base, bound + 2).table
            assert small == frozenset(p for p in large if p.legs <= bound)

    def test_monotone_in_generators(self):
        lone = generate([half_commutation()], NCO, 6)
        both = generate([half_commutation(), parse("1 3 | 2 4")], NCO, 6)
        assert lone.table <= both.table

    def test_members_listing(self):
        g = generate([], NCO, 4)
        pairs = g.members(0, 2)
        assert pairs == [Partition.pair()]
