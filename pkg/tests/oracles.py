"""Independent brute-force oracles used by the test suite.

Everything here is deliberately naive and self-contained: recurrences for the
counting sequences, quadratic crossing detection, transitive-closure joins,
and full matrix-by-matrix group averages with a tiny exact cyclotomic
accumulator.  None of it shares code with the library paths under test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from partcat.partitions import Partition


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


def catalan_number(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def naive_noncrossing(p: Partition) -> bool:
    """Pairwise alternation test in the clockwise circular order."""
    order = p.clockwise_order()
    seq = [p.blocks[t] for t in order]
    for a, b in itertools.combinations(range(p.block_count), 2):
        pattern = [x for x in seq if x in (a, b)]
        switches = sum(1 for u, v in zip(pattern, pattern[1:]) if u != v)
        if switches >= 3:
            return False
    return True


def naive_join(p: Partition, q: Partition) -> Partition:
    """Lattice join by repeated merging until stable."""
    blocks = [set(s) for s in p.blocks_as_sets()] + [set(s) for s in q.blocks_as_sets()]
    changed = True
    while changed:
        changed = False
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if blocks[i] and blocks[j] and blocks[i] & blocks[j]:
                    blocks[i] |= blocks[j]
                    blocks[j] = set()
                    changed = True
    blocks = [sorted(b) for b in blocks if b]
    return Partition.from_point_blocks(p.upper, p.lower, blocks)


# -- exact group averages, matrix by matrix -------------------------------------


def cyclo_value(counts: list[Fraction | int], s: int) -> Fraction:
    """Evaluate sum_m counts[m] * omega^m for the primitive s-th root omega,
    raising if the result is not rational (s in {1, 2, 3, 4, 6} supported)."""
    counts = [Fraction(x) for x in counts]
    if s == 1:
        return counts[0]
    if s == 2:
        return counts[0] - counts[1]
    if s == 3:
        if counts[1] != counts[2]:
            raise ValueError("irrational cyclotomic value")
        return counts[0] - counts[1]
    if s == 4:
        if counts[1] != counts[3]:
            raise ValueError("irrational cyclotomic value")
        return counts[0] - counts[2]
    if s == 6:
        # omega = -omega_3^2: 1, w, w^2, -1, -w, -w^2 with w the cube root
        c = [counts[0] - counts[3], counts[1] - counts[4], counts[2] - counts[5]]
        return cyclo_value(c, 3)
    raise ValueError(f"unsupported root order {s}")


def monomial_elements(tag: str, n: int, s: int | None = None):
    """All elements of a finite monomial group as (perm, phases, order)."""
    if tag == "S":
        order, phase_sets = 1, [(0,) * n]
    elif tag == "H":
        order, phase_sets = 2, list(itertools.product((0, 1), repeat=n))
    elif tag == "S'":
        order, phase_sets = 2, [(0,) * n, (1,) * n]
    elif tag == "Hs":
        order, phase_sets = s, list(itertools.product(range(s), repeat=n))
    else:
        raise ValueError(tag)
    for perm in itertools.permutations(range(n)):
        for phases in phase_sets:
            yield perm, phases, order


def brute_group_average(
    tag: str,
    n: int,
    i: tuple[int, ...],
    j: tuple[int, ...],
    s: int | None = None,
    conjugate_mask: tuple[bool, ...] | None = None,
) -> Fraction:
    """Exact average of u[i1,j1] u[i2,j2] ... over a finite monomial group,
    multiplying entries element by element.

    Entry (a, b) of the element (perm, phases) is omega^phases[b] when
    a == perm[b] and zero otherwise; a True in ``conjugate_mask`` conjugates
    that factor.  The accumulated root-of-unity counts are reduced to an
    exact rational at the end.
    """
    k = len(i)
    if conjugate_mask is None:
        conjugate_mask = ((False,) * k)
    size = 0
    counts = [0] * (s if tag == "Hs" else 2 if tag in ("H", "S'") else 1)
    order = len(counts)
    for perm, phases, _ in monomial_elements(tag, n, s):
        size += 1
        exponent = 0
        zero = False
        for t in range(k):
            a, b = i[t] - 1, j[t] - 1
            if perm[b] != a:
                zero = True
                break
            exponent += -phases[b] if conjugate_mask[t] else phases[b]
        if not zero:
            counts[exponent % order] += 1
    return cyclo_value(counts, order) / size
