"""Categories of partitions: membership, special generators, bounded closure.

Sixteen families are supported.  The six "crossing" families and their six
noncrossing restrictions are defined by block-size and parity conditions; the
remaining four use the clockwise point labels of :class:`~partcat.partitions.Partition`:

* ``Eo``   -- pairings whose every string joins an odd label to an even label;
* ``Eh``   -- every block carries as many odd as even labels ("balanced");
* ``Eh(s)`` -- even leg total, and per block the odd/even label counts agree
  modulo s ("s-balanced");
* ``Eh[s]`` -- every block-subset restriction is s-balanced ("locally
  s-balanced").

The series parameter s ranges over 2, 3, ... and ``math.inf``; at s=inf the
modular condition becomes equality over the integers, so ``Eh(s=inf)``
coincides with ``Eh``.

A category here is a set of partitions closed under tensor, composition,
involution and the four rotations, containing the single string ``|`` and the
pair partition.  :func:`axioms_hold` verifies these closure properties
exhaustively below a leg bound, and :func:`generate` computes the bounded
closure of a generator set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import _sweeps
from .partitions import (
    DEFAULT_LEG_BOUND,
    LegBoundError,
    Partition,
    all_shapes,
    enumerate_partitions,
)

_PLAIN_FAMILIES = (
    "Po", "Ps", "Ph", "Pb", "Ps'", "Pb'",
    "NCo", "NCs", "NCh", "NCb", "NCs'", "NCb'",
    "Eo", "Eh",
)
_SERIES_FAMILIES = ("Eh(s)", "Eh[s]")


@dataclass(frozen=True)
class CategoryId:
    """A named category of partitions, with the series parameter where needed."""

    family: str
    s: float | None = None

    def __post_init__(self) -> None:
        if self.family in _PLAIN_FAMILIES:
            if self.s is not None:
                raise ValueError(f"{self.family} takes no parameter")
        elif self.family in _SERIES_FAMILIES:
            if self.s != math.inf and (
                not isinstance(self.s, int) or self.s < 2
            ):
                raise ValueError("series parameter s must be an integer >= 2 or inf")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    def __str__(self) -> str:
        if self.s is None:
            return self.family
        s = "inf" if self.s == math.inf else str(self.s)
        bracket = "[]" if self.family == "Eh[s]" else "()"
        return f"Eh{bracket[0]}s={s}{bracket[1]}"


PO = CategoryId("Po")
PS = CategoryId("Ps")
PH = CategoryId("Ph")
PB = CategoryId("Pb")
PS2 = CategoryId("Ps'")
PB2 = CategoryId("Pb'")
NCO = CategoryId("NCo")
NCS = CategoryId("NCs")
NCH = CategoryId("NCh")
NCB = CategoryId("NCb")
NCS2 = CategoryId("NCs'")
NCB2 = CategoryId("NCb'")
EO = CategoryId("Eo")
EH = CategoryId("Eh")

BASE_FAMILIES = (PO, PS, PH, PB, PS2, PB2, NCO, NCS, NCH, NCB, NCS2, NCB2, EO, EH)

NC_FAMILIES = (NCO, NCS, NCH, NCB, NCS2, NCB2)

#: Noncrossing restriction of each crossing-partition family.
NC_OF = {
    PO: NCO, PS: NCS, PH: NCH, PB: NCB, PS2: NCS2, PB2: NCB2,
}


def eh_s(s: float) -> CategoryId:
    """The s-balanced series member."""
    return CategoryId("Eh(s)", s)


def eh_loc(s: float) -> CategoryId:
    """The locally s-balanced series member."""
    return CategoryId("Eh[s]", s)


def parse_category(text: str) -> CategoryId:
    """Parse a category name such as ``"Ph"``, ``"Eh(s=3)"`` or ``"Eh[s=inf]"``."""
    text = text.strip()
    for fam in _PLAIN_FAMILIES:
        if text == fam:
            return CategoryId(fam)
    for bracket, family in (("()", "Eh(s)"), ("[]", "Eh[s]")):
        prefix, suffix = "Eh" + bracket[0] + "s=", bracket[1]
        if text.startswith(prefix) and text.endswith(suffix):
            body = text[len(prefix):-1]
            s: float = math.inf if body == "inf" else int(body)
            return CategoryId(family, s)
    raise ValueError(f"unknown category name {text!r}")


# -- membership ------------------------------------------------------------------


def _odd_even_counts(p: Partition) -> list[tuple[int, int]]:
    """Per block, the number of odd and even clockwise labels."""
    counts = [[0, 0] for _ in range(p.block_count)]
    for t, label in enumerate(p.labels()):
        counts[p.blocks[t]][label % 2] += 1
    return [(c[1], c[0]) for c in counts]  # (odd, even)


def _is_balanced_mod(p: Partition, s: float) -> bool:
    """Even leg total and per-block odd/even label counts equal modulo s."""
    if p.legs % 2:
        return False
    for odd, even in _odd_even_counts(p):
        diff = odd - even
        if (diff != 0) if s == math.inf else (diff % s != 0):
            return False
    return True


def _is_locally_balanced_mod(p: Partition, s: float) -> bool:
    for q in p.subpartitions():
        if not _is_balanced_mod(q, s):
            return False
    return True


def member(c: CategoryId, p: Partition) -> bool:
    """Decide membership of a partition in a category."""
    fam = c.family
    if fam == "Po":
        return p.legs == 2 * p.block_count and min(p.block_sizes(), default=2) == 2
    if fam == "Ps":
        return True
    if fam == "Ph":
        return all(size % 2 == 0 for size in p.block_sizes())
    if fam == "Pb":
        return all(size <= 2 for size in p.block_sizes())
    if fam == "Ps'":
        return p.legs % 2 == 0
    if fam == "Pb'":
        return p.legs % 2 == 0 and all(size <= 2 for size in p.block_sizes())
    if fam.startswith("NC"):
        return member(CategoryId("P" + fam[2:]), p) and p.is_noncrossing()
    if fam == "Eo":
        if not member(PO, p):
            return False
        return all(odd == even == 1 for odd, even in _odd_even_counts(p))
    if fam == "Eh":
        return all(odd == even for odd, even in _odd_even_counts(p))
    if fam == "Eh(s)":
        return _is_balanced_mod(p, c.s)
    if fam == "Eh[s]":
        return _is_balanced_mod(p, c.s) and _is_locally_balanced_mod(p, c.s)
    raise ValueError(f"unknown family {fam!r}")


def enumerate_category(
    c: CategoryId,
    upper: int,
    lower: int,
    *,
    leg_bound: int = DEFAULT_LEG_BOUND,
) -> Iterator[Partition]:
    """Stream the members of a category in one shape, in canonical order."""
    return enumerate_partitions(
        upper, lower, lambda p: member(c, p), leg_bound=leg_bound
    )


@lru_cache(maxsize=64)
def category_table(c: CategoryId, leg_bound: int) -> frozenset[Partition]:
    """All members of a category with at most ``leg_bound`` legs."""
    return frozenset(
        p
        for upper, lower in all_shapes(leg_bound)
        for p in enumerate_category(c, upper, lower, leg_bound=leg_bound)
    )


# -- special generators -----------------------------------------------------------


def half_commutation() -> Partition:
    """The three-string crossing diagram joining u1-l3, u2-l2, u3-l1."""
    return Partition.from_point_blocks(3, 3, [[0, 5], [1, 4], [2, 3]])


def s_mixing(s: int) -> Partition:
    """The two-block P(s,s) diagram joining odd uppers with even lowers and
    even uppers with odd lowers."""
    if not isinstance(s, int) or s < 2:
        raise ValueError("s must be an integer >= 2")
    block_a = [t for t in range(s) if t % 2 == 0] + [
        s + t for t in range(s) if t % 2 == 1
    ]
    block_b = [t for t in range(s) if t % 2 == 1] + [
        s + t for t in range(s) if t % 2 == 0
    ]
    return Partition.from_point_blocks(s, s, [block_a, block_b])


def k_cubic(k: int) -> Partition:
    """The P(k+2,k+2) diagram with a four-point block joining the outer
    strings u1-l1 and u(k+2)-l(k+2) around k vertical strings."""
    if not isinstance(k, int) or k < 0:
        raise ValueError("k must be a nonnegative integer")
    n = k + 2
    outer = [0, n, n - 1, 2 * n - 1]
    inner = [[t, n + t] for t in range(1, n - 1)]
    return Partition.from_point_blocks(n, n, [outer] + inner)


def special_partition(name: str, param: int | None = None) -> Partition:
    """Construct one of the named generator partitions.

    ``name`` is one of ``half_commutation``, ``s_mixing`` (with parameter s),
    ``k_cubic`` (with parameter k) or ``ultracubic_generator``.
    """
    if name == "half_commutation":
        return half_commutation()
    if name == "s_mixing":
        if param is None:
            raise ValueError("s_mixing requires a parameter")
        return s_mixing(param)
    if name == "k_cubic":
        if param is None:
            raise ValueError("k_cubic requires a parameter")
        return k_cubic(param)
    if name == "ultracubic_generator":
        return k_cubic(1)
    raise ValueError(f"unknown special partition {name!r}")


# -- axiom verification ------------------------------------------------------------


@dataclass(frozen=True)
class AxiomFailure:
    operation: str
    inputs: tuple[Partition, ...]
    result: Partition


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of the bounded closure check of a membership predicate."""

    category: str
    leg_bound: int
    table_size: int
    checked: dict[str, int]
    failures: tuple[AxiomFailure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "leg_bound": self.leg_bound,
            "table_size": self.table_size,
            "checked": dict(self.checked),
            "passed": self.passed,
            "failures": [
                {
                    "operation": f.operation,
                    "inputs": [str(p) for p in f.inputs],
                    "result": str(f.result),
                }
                for f in self.failures
            ],
        }


_ROTATIONS = (("left", "top"), ("right", "top"), ("left", "bottom"), ("right", "bottom"))


def axioms_hold(
    c: CategoryId,
    leg_bound: int = DEFAULT_LEG_BOUND,
    *,
    required: Sequence[Partition] = (),
    max_failures: int = 8,
) -> AxiomReport:
    """Exhaustively verify that the members of ``c`` with at most ``leg_bound``
    legs are closed under tensor, composition, involution and rotation (for
    results within the bound), and contain the identity string and the pair.

    ``required`` overrides the default base partitions that must be present.
    """
    if leg_bound > 12:
        raise LegBoundError("axiom verification is limited to 12 legs")
    table = category_table(c, leg_bound)
    failures: list[AxiomFailure] = []
    checked: dict[str, int] = {}

    base = tuple(required) if required else (Partition.identity(), Partition.pair())
    for p in base:
        if p not in table:
            failures.append(AxiomFailure("contains", (p,), p))
    checked["contains"] = len(base)

    n = 0
    for p in table:
        q = p.involute()
        n += 1
        if q not in table and len(failures) < max_failures:
            failures.append(AxiomFailure("involute", (p,), q))
    checked["involute"] = n

    n = 0
    for p in table:
        for side, frm in _ROTATIONS:
            if (frm == "top" and p.upper == 0) or (frm == "bottom" and p.lower == 0):
                continue
            q = p.rotate(side, frm)
            n += 1
            if q not in table and len(failures) < max_failures:
                failures.append(AxiomFailure(f"rotate-{side}-{frm}", (p,), q))
    checked["rotate"] = n

    by_legs: dict[int, list[Partition]] = {}
    for p in table:
        by_legs.setdefault(p.legs, []).append(p)
    n = 0
    for legs_p, group in sorted(by_legs.items()):
        for legs_q, group_q in sorted(by_legs.items()):
            if legs_p + legs_q > leg_bound:
                continue
            for p in group:
                for q in group_q:
                    r = p.tensor(q)
                    n += 1
                    if r not in table and len(failures) < max_failures:
                        failures.append(AxiomFailure("tensor", (p, q), r))
    checked["tensor"] = n

    members = sorted(table, key=lambda p: (p.legs, p.upper, p.blocks))
    n_comp, bad_pairs = _sweeps.compose_closure_check(members, leg_bound)
    checked["compose"] = n_comp
    for i, j in bad_pairs[: max(0, max_failures - len(failures))]:
        r, _ = members[i].compose(members[j])
        failures.append(AxiomFailure("compose", (members[i], members[j]), r))

    return AxiomReport(
        category=str(c),
        leg_bound=leg_bound,
        table_size=len(table),
        checked=checked,
        failures=tuple(failures),
    )


# -- bounded closure ---------------------------------------------------------------


@dataclass
class GeneratedCategory:
    """The bounded closure of a generator set over a base category.

    The table contains every partition reachable from the generators, the base
    category members and the base partitions (identity and pair) via tensor,
    composition, involution and rotation, discarding intermediate results with
    more than ``leg_bound`` legs.  The truncation makes the table a possibly
    strict subset of the untruncated closure restricted to the bound.
    """

    generators: tuple[Partition, ...]
    base: CategoryId | None
    leg_bound: int
    table: frozenset[Partition] = field(repr=False)

    def __contains__(self, p: Partition) -> bool:
        return p in self.table

    def members(self, upper: int, lower: int) -> list[Partition]:
        return sorted(
            (p for p in self.table if (p.upper, p.lower) == (upper, lower)),
            key=lambda p: p.blocks,
        )

    def same_table(self, other: GeneratedCategory | frozenset[Partition]) -> bool:
        table = other.table if isinstance(other, GeneratedCategory) else other
        return self.table == table


class _TargetReached(Exception):
    pass


def generate(
    generators: Iterable[Partition],
    base: CategoryId | None,
    leg_bound: int,
    *,
    target: frozenset[Partition] | None = None,
) -> GeneratedCategory:
    """Close a generator set under the categorical operations, up to the bound.

    Starting set: the generators, all base-category members within the bound,
    the identity string and the pair partition.  When ``target`` is given the
    iteration stops as soon as the table equals it (the table can only keep
    growing, so equality is final); without a target it runs to a fixed point.

    Pairs drawn from the base alone are never recombined: the base is a
    category, so it is already closed under all four operations.
    """
    gens = tuple(generators)
    for g in gens:
        if g.legs > leg_bound:
            raise LegBoundError(f"generator {g} exceeds the leg bound {leg_bound}")

    base_table: frozenset[Partition] = (
        category_table(base, leg_bound) if base is not None else frozenset()
    )
    start: set[Partition] = {Partition.identity(), Partition.pair()}
    start.update(gens)
    start.update(base_table)

    table: set[Partition] = set(start)
    by_lower: dict[int, list[Partition]] = {}
    by_upper: dict[int, list[Partition]] = {}
    by_legs: dict[int, list[Partition]] = {}

    def index(p: Partition) -> None:
        by_lower.setdefault(p.lower, []).append(p)
        by_upper.setdefault(p.upper, []).append(p)
        by_legs.setdefault(p.legs, []).append(p)

    for p in table:
        index(p)

    def add(p: Partition, new: list[Partition]) -> None:
        if p.legs <= leg_bound and p not in table:
            table.add(p)
            index(p)
            new.append(p)
            if target is not None and len(table) == len(target) and table == target:
                raise _TargetReached

    frontier = sorted(table - base_table, key=lambda p: (p.legs, p.upper, p.blocks))
    try:
        if target is not None and table == target:
            raise _TargetReached
        while frontier:
            new: list[Partition] = []
            for p in frontier:
                add(p.involute(), new)
                for side, frm in _ROTATIONS:
                    if (frm == "top" and p.upper == 0) or (
                        frm == "bottom" and p.lower == 0
                    ):
                        continue
                    add(p.rotate(side, frm), new)
                for legs_q, group in list(by_legs.items()):
                    if p.legs + legs_q > leg_bound:
                        continue
                    for q in list(group):
                        add(p.tensor(q), new)
                        add(q.tensor(p), new)
                for q in list(by_upper.get(p.lower, ())):
                    if p.upper + q.lower <= leg_bound:
                        add(p.compose(q)[0], new)
                for q in list(by_lower.get(p.upper, ())):
                    if q.upper + p.lower <= leg_bound:
                        add(q.compose(p)[0], new)
            frontier = new
    except _TargetReached:
        pass

    return GeneratedCategory(gens, base, leg_bound, frozenset(table))
