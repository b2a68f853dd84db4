"""Bounded verification of the classification machinery.

The capping operations reduce a partition by joining two cyclically adjacent
legs with a semicircle, or deleting one or two legs as singletons.  Positions
are counted counterclockwise starting from the bottom-left leg (bottom row
left-to-right, then top row right-to-left), 0-based and modulo the leg count;
the two positions straddling a side of the rectangle are still adjacent, so a
"semicircle" there is a vertical bar.

On top of the cappings sit the bounded lemma verifiers: block-size spectra and
their comparison with the associated noncrossing category, the capping descent
for the six difference sets, the generator identities for those difference
sets, the trichotomy of pairing-generated categories, and the equivalence of
the ring-of-strings relations family.  Each verifier sweeps every partition in
scope below an explicit leg bound and returns a structured report; nothing is
asserted beyond the bound.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .categories import (
    CategoryId,
    EO,
    NC_FAMILIES,
    NCB,
    NCB2,
    NCH,
    NCO,
    NCS,
    NCS2,
    PB,
    PB2,
    PO,
    PS,
    PS2,
    category_table,
    generate,
    k_cubic,
    member,
)
from .partitions import Partition, _rg, all_shapes, enumerate_partitions, parse

CAPPING_KINDS = ("semicircle", "singleton", "doubleton")


class NoMatchError(ValueError):
    """No noncrossing family matches the category's noncrossing part."""


@dataclass(frozen=True)
class Capping:
    """A reduction move; positions are counterclockwise-from-bottom-left."""

    kind: str
    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in CAPPING_KINDS:
            raise ValueError(f"unknown capping kind {self.kind!r}")
        want = 1 if self.kind == "singleton" else 2
        if len(self.positions) != want:
            raise ValueError(f"{self.kind} capping takes {want} position(s)")


def _ccw_to_storage(p: Partition, pos: int) -> int:
    """Map a counterclockwise position to a storage point index."""
    total = p.legs
    if total == 0:
        raise ValueError("the empty partition has no legs to cap")
    pos %= total
    if pos < p.lower:
        return p.upper + pos
    return p.upper - 1 - (pos - p.lower)


def apply_capping(p: Partition, capping: Capping) -> Partition:
    """Apply a capping, returning the reduced partition.

    A semicircle joins two cyclically adjacent legs (their blocks fuse, both
    legs disappear); singletons simply delete legs.  Components left with no
    legs are dropped.
    """
    total = p.legs
    if capping.kind == "semicircle":
        a, b = capping.positions
        if (a - b) % total not in (1, total - 1):
            raise ValueError("semicircle positions must be adjacent")
        pa, pb = _ccw_to_storage(p, a), _ccw_to_storage(p, b)
        fused = list(p.blocks)
        keep_id, drop_id = fused[pa], fused[pb]
        removed = {pa, pb}
        assignment = [
            keep_id if x == drop_id else x
            for t, x in enumerate(fused)
            if t not in removed
        ]
    else:
        removed = {_ccw_to_storage(p, pos) for pos in capping.positions}
        if len(removed) != len(capping.positions):
            raise ValueError("capping positions must be distinct")
        assignment = [x for t, x in enumerate(p.blocks) if t not in removed]
    upper = sum(1 for t in range(p.upper) if t not in removed)
    lower = sum(1 for t in range(p.upper, total) if t not in removed)
    return Partition(upper, lower, _rg(assignment))


def semicircle_cappings(p: Partition) -> list[Capping]:
    """All leg-count many semicircle cappings, including the two side bars."""
    total = p.legs
    return [Capping("semicircle", (t, (t + 1) % total)) for t in range(total)]


def singleton_cappings(p: Partition) -> list[Capping]:
    return [Capping("singleton", (t,)) for t in range(p.legs)]


def doubleton_cappings(p: Partition) -> list[Capping]:
    total = p.legs
    return [
        Capping("doubleton", (a, b))
        for a in range(total)
        for b in range(a + 1, total)
    ]


_CAPPING_ENUM = {
    "semicircle": semicircle_cappings,
    "singleton": singleton_cappings,
    "doubleton": doubleton_cappings,
}


# -- reports --------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    lemma: str
    case: int | None
    bound: int
    checked: int
    failures: tuple[str, ...]
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "case": self.case,
            "bound": self.bound,
            "checked_count": self.checked,
            "passed": self.passed,
            "failures": list(self.failures),
            **self.details,
        }


# -- block-size spectra (Lambda sets) ----------------------------------------------


def lambda_set(c: CategoryId, leg_bound: int) -> frozenset[int]:
    """All block sizes occurring among members with at most ``leg_bound`` legs."""
    sizes: set[int] = set()
    for p in category_table(c, leg_bound):
        sizes.update(p.block_sizes())
    return frozenset(sizes)


def associated_easy_group(c: CategoryId, leg_bound: int) -> CategoryId:
    """The noncrossing family whose table equals the noncrossing part of c."""
    if leg_bound < 6:
        raise ValueError("need at least 6 legs to separate the six families")
    nc_part = frozenset(
        p for p in category_table(c, leg_bound) if p.is_noncrossing()
    )
    matches = [
        fam for fam in NC_FAMILIES if category_table(fam, leg_bound) == nc_part
    ]
    if not matches:
        raise NoMatchError(f"the noncrossing part of {c} matches no known family")
    return matches[0]


def is_even_category(c: CategoryId, leg_bound: int) -> bool:
    return all(p.legs % 2 == 0 for p in category_table(c, leg_bound))


def verify_block_size_lemma(c: CategoryId, leg_bound: int) -> VerificationReport:
    """Check the three block-size clauses relating a category to its
    associated noncrossing family: the spectra are nested with defect at most
    one, a singleton block on one side forces one on the other, and evenness
    of the noncrossing family forces evenness of the category."""
    assoc = associated_easy_group(c, leg_bound)
    lam_g = lambda_set(c, leg_bound)
    lam_k = lambda_set(assoc, leg_bound)
    failures = []
    if not lam_k <= lam_g:
        failures.append(f"spectrum of {assoc} not contained in that of {c}")
    allowed = lam_k | {x - 1 for x in lam_k if x > 1}
    if not lam_g <= allowed:
        failures.append(f"spectrum of {c} exceeds {sorted(allowed)}")
    if 1 in lam_g and 1 not in lam_k:
        failures.append("singleton blocks occur but not in the noncrossing part")
    if is_even_category(assoc, leg_bound) and not is_even_category(c, leg_bound):
        failures.append(f"{assoc} is even but {c} is not")
    return VerificationReport(
        lemma="block-size-spectra",
        case=None,
        bound=leg_bound,
        checked=len(category_table(c, leg_bound)),
        failures=tuple(failures),
        details={
            "category": str(c),
            "associated": str(assoc),
            "lambda_category": sorted(lam_g),
            "lambda_associated": sorted(lam_k),
        },
    )


# -- capping descent over the six difference sets -----------------------------------

#: case number -> (big category, small category, capping kind, legs threshold)
CAPPING_DESCENT_CASES = {
    1: (PO, EO, "semicircle", 4),
    2: (EO, NCO, "semicircle", 6),
    3: (PS, NCS, "singleton", 4),
    4: (PB, NCB, "singleton", 4),
    5: (PS2, NCS2, "doubleton", 4),
    6: (PB2, NCB2, "doubleton", 4),
}


def _descent_shape(args) -> tuple[int, list[str]]:
    case, upper, lower, bound = args
    big, small, kind, _ = CAPPING_DESCENT_CASES[case]
    enum = _CAPPING_ENUM[kind]
    checked = 0
    failures: list[str] = []
    for p in enumerate_partitions(upper, lower, leg_bound=bound):
        if not member(big, p) or member(small, p):
            continue
        checked += 1
        if not any(
            member(big, q) and not member(small, q)
            for q in (apply_capping(p, cap) for cap in enum(p))
        ):
            failures.append(str(p))
    return checked, failures


def verify_capping_descent(
    case: int, leg_bound: int, *, jobs: int = 1
) -> VerificationReport:
    """For every partition in the case's difference set with more legs than
    the case threshold, confirm that some capping of the stated kind lands
    back in the difference set."""
    big, small, kind, threshold = CAPPING_DESCENT_CASES[case]
    tasks = [
        (case, upper, lower, leg_bound)
        for upper, lower in all_shapes(leg_bound)
        if upper + lower > threshold
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_descent_shape, tasks))
    else:
        results = [_descent_shape(t) for t in tasks]
    checked = sum(r[0] for r in results)
    failures = tuple(f for r in results for f in r[1])
    return VerificationReport(
        lemma="capping-descent",
        case=case,
        bound=leg_bound,
        checked=checked,
        failures=failures,
        details={
            "difference": f"{big} minus {small}",
            "capping": kind,
            "min_legs": threshold + 1,
        },
    )


# -- generator identities for the difference sets -----------------------------------

#: case number -> (big, small, base for generation, generated target)
GENERATOR_CASES = {
    1: (PO, EO, NCO, PO),
    2: (EO, NCO, NCO, EO),
    3: (PS, NCS, NCS, PS),
    4: (PB, NCB, NCB, PB),
    5: (PS2, NCS2, NCS2, PS2),
    6: (PB2, NCB2, NCB2, PB2),
}

#: fixed sample set: for each case, difference-set members driving the check.
PUBLISHED_SAMPLES: dict[int, tuple[str, ...]] = {
    1: ("1 3 | 2 4", "1 3 | 2 5 | 4 6"),
    2: ("P(3,3): u1 l3 | u2 l2 | u3 l1", "1 4 | 2 5 | 3 6", "1 4 | 2 5 | 3 8 | 6 7"),
    3: ("1 3 | 2 4", "1 3 5 | 2 4 | 6"),
    4: ("1 3 | 2 4", "1 3 | 2 4 | 5 | 6"),
    5: ("1 3 | 2 4", "1 3 | 2 4 5 | 6"),
    6: ("1 3 | 2 4", "1 3 | 2 4 | 5 | 6"),
}

GENERATOR_CASE_BOUNDS = {1: 8, 2: 8, 3: 6, 4: 6, 5: 6, 6: 6}


def verify_difference_generators(
    case: int,
    samples: Sequence[Partition] | None = None,
    leg_bound: int | None = None,
) -> VerificationReport:
    """Check that each sample from the difference set generates, together with
    the base noncrossing family, the full target table below the bound."""
    big, small, base, target = GENERATOR_CASES[case]
    bound = GENERATOR_CASE_BOUNDS[case] if leg_bound is None else leg_bound
    if samples is None:
        samples = [parse(text) for text in PUBLISHED_SAMPLES[case]]
    target_table = category_table(target, bound)
    failures = []
    for p in samples:
        if not member(big, p) or member(small, p):
            raise ValueError(f"sample {p} is not in {big} minus {small}")
        closure = generate([p], base, bound, target=target_table)
        if not closure.same_table(target_table):
            failures.append(
                f"<{p}, {base}> has {len(closure.table)} members, "
                f"{target} has {len(target_table)}"
            )
    return VerificationReport(
        lemma="difference-generators",
        case=case,
        bound=bound,
        checked=len(samples),
        failures=tuple(failures),
        details={"base": str(base), "target": str(target)},
    )


# -- trichotomy for pairings ---------------------------------------------------------


def _rotation_orbit(p: Partition) -> frozenset[Partition]:
    seen = {p}
    stack = [p]
    while stack:
        q = stack.pop()
        for side in ("left", "right"):
            for frm, row in (("top", q.upper), ("bottom", q.lower)):
                if row:
                    r = q.rotate(side, frm)
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
    return frozenset(seen)


def verify_pairing_trichotomy(leg_bound: int = 6) -> VerificationReport:
    """Every pairing, adjoined to the noncrossing pairings, generates one of
    exactly three tables: the noncrossing pairings, the balanced pairings, or
    all pairings.  Swept over every pairing with at most ``leg_bound`` legs;
    rotation orbits share a closure (rotation is an invertible closure
    operation), so one representative per orbit is closed.
    """
    tables = {
        "NCo": category_table(NCO, leg_bound),
        "Eo": category_table(EO, leg_bound),
        "Po": category_table(PO, leg_bound),
    }
    pending = {
        p
        for upper, lower in all_shapes(leg_bound)
        for p in enumerate_partitions(upper, lower, leg_bound=leg_bound)
        if member(PO, p)
    }
    checked = len(pending)
    counts = {"NCo": 0, "Eo": 0, "Po": 0}
    failures = []
    orbits = 0
    while pending:
        p = min(pending, key=lambda q: (q.legs, q.upper, q.blocks))
        orbit = _rotation_orbit(p) & pending
        pending -= orbit
        orbits += 1
        closure = generate([p], NCO, leg_bound, target=tables["Po"])
        for name in ("NCo", "Eo", "Po"):
            if closure.same_table(tables[name]):
                counts[name] += len(orbit)
                break
        else:
            failures.append(f"<{p}, NCo> matches none of the three tables")
    return VerificationReport(
        lemma="pairing-trichotomy",
        case=None,
        bound=leg_bound,
        checked=checked,
        failures=tuple(failures),
        details={"orbits": orbits, "closure_counts": counts},
    )


# -- equivalence of the ring relations ----------------------------------------------


def verify_cubic_ring_relations(k_max: int, leg_bound: int) -> VerificationReport:
    """The four-point-block generators with k inner strings all generate the
    same category as the one-string version, and that closure contains the
    plain four-point block."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    reference = generate([k_cubic(1)], NCH, leg_bound)
    failures = []
    checked = 0
    for k in range(2, k_max + 1):
        if k_cubic(k).legs > leg_bound:
            failures.append(f"generator with k={k} exceeds the bound")
            continue
        checked += 1
        closure = generate([k_cubic(k)], NCH, leg_bound)
        if not closure.same_table(reference):
            failures.append(
                f"k={k}: table size {len(closure.table)} != {len(reference.table)}"
            )
    checked += 1
    if k_cubic(0) not in reference:
        failures.append("the four-point block is not reached")
    return VerificationReport(
        lemma="cubic-ring-relations",
        case=None,
        bound=leg_bound,
        checked=checked,
        failures=tuple(failures),
        details={"table_size": len(reference.table)},
    )
