"""Exact Weingarten calculus over categories of partitions.

For a category c and order k, the diagrams are the bottom-row members
D_k = {p in P(0,k) : p in c} in canonical enumeration order.  The Gram matrix
has entries n^b(p v q) with b the block count of the lattice join; its exact
inverse is the Weingarten matrix, and the Haar integral of a word of k
coordinates is the double sum of delta factors against Weingarten entries.

Moments of truncated characters follow by contracting both index tuples over
1..m: summing delta_p(i) delta_q(i) over i in {1..m}^k counts assignments
constant on p v q, which is m^b(p v q), so the k-th moment of the character
truncated to m diagonal coordinates is sum_{p,q} W(p,q) m^b(p v q).  Its
n -> infinity limit with t = m/n fixed is the plain diagram sum of t^b(p).

Everything here is exact rational arithmetic; n is a concrete integer.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .categories import CategoryId, enumerate_category
from .exact import PartitionMatrix, SingularMatrixError, invert
from .partitions import DEFAULT_LEG_BOUND, Partition


class GramSingularError(ValueError):
    """The Gram matrix is not invertible at this dimension; carries the rank."""

    def __init__(self, category: str, k: int, n: int, rank: int, size: int):
        super().__init__(
            f"Gram matrix of {category} at k={k}, n={n} is singular "
            f"(rank {rank} of {size})"
        )
        self.category = category
        self.k = k
        self.n = n
        self.rank = rank
        self.size = size


@lru_cache(maxsize=256)
def diagrams(
    c: CategoryId, k: int, leg_bound: int = DEFAULT_LEG_BOUND
) -> tuple[Partition, ...]:
    """The bottom-row members of the category, in canonical order."""
    return tuple(enumerate_category(c, 0, k, leg_bound=leg_bound))


@lru_cache(maxsize=256)
def _join_blocks(
    c: CategoryId, k: int, leg_bound: int = DEFAULT_LEG_BOUND
) -> tuple[tuple[int, ...], ...]:
    basis = diagrams(c, k, leg_bound)
    return tuple(
        tuple(p.join(q).block_count for q in basis) for p in basis
    )


def gram_matrix(
    c: CategoryId, k: int, n: int, leg_bound: int = DEFAULT_LEG_BOUND
) -> PartitionMatrix:
    """The Gram matrix n^b(p v q) over the category's order-k diagrams."""
    if n < 1:
        raise ValueError("dimension must be positive")
    basis = diagrams(c, k, leg_bound)
    if not basis:
        return PartitionMatrix((), np.empty((0, 0), dtype=object))
    exponents = _join_blocks(c, k, leg_bound)
    data = np.array(
        [[Fraction(n ** e) for e in row] for row in exponents], dtype=object
    )
    return PartitionMatrix(basis, data)


@lru_cache(maxsize=256)
def weingarten_matrix(
    c: CategoryId, k: int, n: int, leg_bound: int = DEFAULT_LEG_BOUND
) -> PartitionMatrix:
    """The exact inverse of the Gram matrix.

    Invertibility is guaranteed for n >= k; for smaller n the inversion is
    attempted anyway and a singular Gram raises :class:`GramSingularError`
    with its rank.
    """
    gram = gram_matrix(c, k, n, leg_bound)
    if gram.size == 0:
        return gram
    try:
        inv = invert(gram.data)
    except SingularMatrixError as err:
        raise GramSingularError(str(c), k, n, err.rank, err.size) from None
    result = PartitionMatrix(gram.basis, inv)
    assert (result @ gram).is_identity()
    return result


def _fits(p: Partition, idx: Sequence[int]) -> int:
    assigned: dict[int, int] = {}
    for t, v in enumerate(idx):
        b = p.blocks[t]
        if b in assigned:
            if assigned[b] != v:
                return 0
        else:
            assigned[b] = v
    return 1


def haar_integral(
    c: CategoryId, n: int, i: Sequence[int], j: Sequence[int]
) -> Fraction:
    """The Haar integral of the word u[i1,j1]...u[ik,jk] over the easy quantum
    group with category c, via the Weingarten expansion."""
    if len(i) != len(j):
        raise ValueError("index tuples must have equal length")
    k = len(i)
    for v in tuple(i) + tuple(j):
        if not 1 <= v <= n:
            raise ValueError(f"index {v} out of range 1..{n}")
    basis = diagrams(c, k)
    if not basis:
        return Fraction(0)
    wg = weingarten_matrix(c, k, n)
    fit_i = [_fits(p, i) for p in basis]
    fit_j = [_fits(q, j) for q in basis]
    total = Fraction(0)
    for a, fi in enumerate(fit_i):
        if not fi:
            continue
        for b, fj in enumerate(fit_j):
            if fj:
                total += wg.data[a, b]
    return total


def moment(c: CategoryId, n: int, k: int, m: int) -> Fraction:
    """Exact k-th moment of the character truncated to the first m diagonal
    coordinates, at dimension n."""
    if not 1 <= m <= n:
        raise ValueError("truncation m must satisfy 1 <= m <= n")
    if k < 1:
        raise ValueError("moment order must be positive")
    basis = diagrams(c, k)
    if not basis:
        return Fraction(0)
    wg = weingarten_matrix(c, k, n)
    exponents = _join_blocks(c, k)
    total = Fraction(0)
    for a in range(len(basis)):
        for b in range(len(basis)):
            total += wg.data[a, b] * m ** exponents[a][b]
    return total


def asymptotic_moment(c: CategoryId, k: int, t: Fraction | int = 1) -> Fraction:
    """The large-n limit of the k-th truncated-character moment at ratio t:
    the plain diagram sum of t^b(p)."""
    t = Fraction(t)
    return sum((t ** p.block_count for p in diagrams(c, k)), Fraction(0))


def moment_table_csv(
    rows: Sequence[tuple[CategoryId, int, int, int, Fraction]]
) -> str:
    """Render (category, k, n, m, value) rows in the exact CSV layout."""
    lines = ["category,k,n,m,value_num,value_den"]
    for c, k, n, m, value in rows:
        lines.append(f"{c},{k},{n},{m},{value.numerator},{value.denominator}")
    return "\n".join(lines) + "\n"
