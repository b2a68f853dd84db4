"""Two-row set partitions and their diagram calculus.

A partition of type (k, l) joins k upper points and l lower points into
disjoint blocks.  Points are stored in a fixed array order: upper points
left-to-right first, then lower points left-to-right.  The block structure is
kept as a restricted-growth sequence over that order (block ids are 0..b-1 and
first occurrences appear in increasing order), so two partitions are equal iff
their (upper, lower, blocks) triples are equal.

Drawn in the plane, the k+l points sit on the boundary of a rectangle, and the
boundary traversal visits them clockwise starting from the top-left corner:
upper row left-to-right, then lower row right-to-left.  This circular order
drives both the crossing test (a partition is noncrossing iff it can be drawn
inside the rectangle without crossings, i.e. no two blocks interleave on the
boundary circle) and the 1-based point labels used by the balanced-partition
predicates in :mod:`partcat.categories`.

The diagram operations are the usual ones: horizontal concatenation
(``tensor``/``@``), vertical concatenation (``compose``, which reports the
number of closed loops removed from the middle), the upside-down turn
(``involute``) and the four corner rotations that move an extremal leg between
the rows.  All values are immutable; every operation returns a new canonical
partition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

DEFAULT_LEG_BOUND = 8


class ParseError(ValueError):
    """Raised when a partition string does not conform to the grammar."""


class ShapeMismatchError(ValueError):
    """Raised when an operation receives partitions of incompatible shape."""


class LegBoundError(ValueError):
    """Raised when an enumeration or closure would exceed the leg bound."""


def _rg(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel an arbitrary block-id sequence into restricted-growth form."""
    seen: dict[int, int] = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """A two-row set partition in canonical restricted-growth form.

    ``blocks[t]`` is the block id of point ``t`` in storage order (upper row
    left-to-right, then lower row left-to-right).
    """

    upper: int
    lower: int
    blocks: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.upper < 0 or self.lower < 0:
            raise ValueError("point counts must be nonnegative")
        if len(self.blocks) != self.upper + self.lower:
            raise ValueError("block assignment has wrong length")
        if self.blocks != _rg(self.blocks):
            raise ValueError("block assignment is not in restricted-growth form")

    # -- basic structure ----------------------------------------------------

    @property
    def legs(self) -> int:
        return self.upper + self.lower

    @property
    def block_count(self) -> int:
        return max(self.blocks, default=-1) + 1

    def block_sizes(self) -> tuple[int, ...]:
        """Multiset of block cardinalities, as a sorted tuple."""
        counts = [0] * self.block_count
        for b in self.blocks:
            counts[b] += 1
        return tuple(sorted(counts))

    def blocks_as_sets(self) -> tuple[frozenset[int], ...]:
        """Blocks as sets of storage indices, in block-id order."""
        out: list[set[int]] = [set() for _ in range(self.block_count)]
        for t, b in enumerate(self.blocks):
            out[b].add(t)
        return tuple(frozenset(s) for s in out)

    def clockwise_order(self) -> tuple[int, ...]:
        """Storage indices in boundary order: upper L-to-R, then lower R-to-L."""
        k, l = self.upper, self.lower
        return tuple(range(k)) + tuple(range(k + l - 1, k - 1, -1))

    def labels(self) -> tuple[int, ...]:
        """1-based clockwise label of each point, indexed by storage order."""
        out = [0] * self.legs
        for pos, t in enumerate(self.clockwise_order(), start=1):
            out[t] = pos
        return tuple(out)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_point_blocks(
        cls, upper: int, lower: int, blocks: Sequence[Sequence[int]]
    ) -> Partition:
        """Build a partition from blocks given as collections of storage indices."""
        n = upper + lower
        assignment = [-1] * n
        for i, block in enumerate(blocks):
            for t in block:
                if not 0 <= t < n:
                    raise ValueError(f"point index {t} out of range for {n} points")
                if assignment[t] != -1:
                    raise ValueError(f"point {t} listed twice")
                assignment[t] = i
        if -1 in assignment:
            raise ValueError("every point must belong to a block")
        return cls(upper, lower, _rg(assignment))

    @classmethod
    def empty(cls) -> Partition:
        """The unique partition of type (0, 0), the tensor unit."""
        return cls(0, 0, ())

    @classmethod
    def identity(cls, n: int = 1) -> Partition:
        """The n-string identity in P(n, n)."""
        return cls(n, n, tuple(range(n)) * 2)

    @classmethod
    def pair(cls) -> Partition:
        """The bottom pair partition in P(0, 2)."""
        return cls(0, 2, (0, 0))

    @classmethod
    def singletons(cls, upper: int, lower: int) -> Partition:
        """The all-singletons partition of the given shape."""
        return cls(upper, lower, tuple(range(upper + lower)))

    # -- categorical operations ----------------------------------------------

    def tensor(self, other: Partition) -> Partition:
        """Horizontal concatenation, placing ``other`` to the right."""
        k1, l1, k2, l2 = self.upper, self.lower, other.upper, other.lower
        shift = self.block_count
        merged = (
            self.blocks[:k1]
            + tuple(b + shift for b in other.blocks[:k2])
            + self.blocks[k1:]
            + tuple(b + shift for b in other.blocks[k2:])
        )
        return Partition(k1 + k2, l1 + l2, _rg(merged))

    def __matmul__(self, other: Partition) -> Partition:
        return self.tensor(other)

    def compose(self, other: Partition) -> tuple[Partition, int]:
        """Vertical concatenation, placing ``other`` below (our lower row is
        identified with its upper row).

        Returns the resulting partition in P(self.upper, other.lower) together
        with the number of closed loops (fused components living entirely on
        the removed middle row).
        """
        if self.lower != other.upper:
            raise ShapeMismatchError(
                f"cannot compose shapes ({self.upper},{self.lower}) and "
                f"({other.upper},{other.lower})"
            )
        k, l, m = self.upper, self.lower, other.lower
        # Union-find over k upper + l middle + m lower nodes.  Our points map
        # to nodes (upper t -> t, lower t -> k+t); the other partition's points
        # map to nodes (upper t -> k+t, lower t -> k+l+t).
        parent = list(range(k + l + m))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union_by_blocks(blocks: tuple[int, ...], offset: int) -> None:
            rep: dict[int, int] = {}
            for t, b in enumerate(blocks):
                node = t + offset
                if b in rep:
                    ra, rb = find(node), find(rep[b])
                    if ra != rb:
                        parent[ra] = rb
                else:
                    rep[b] = node

        # self: points 0..k+l-1 are already nodes 0..k+l-1
        union_by_blocks(self.blocks, 0)
        # other: its points 0..l+m-1 are nodes k..k+l+m-1
        union_by_blocks(other.blocks, k)

        surviving = list(range(k)) + list(range(k + l, k + l + m))
        assignment = [find(t) for t in surviving]
        result = Partition(k, m, _rg(assignment))
        outer_roots = set(assignment)
        middle_roots = {find(t) for t in range(k, k + l)}
        loops = len(middle_roots - outer_roots)
        return result, loops

    def involute(self) -> Partition:
        """The upside-down turn, exchanging the two rows."""
        k = self.upper
        return Partition(self.lower, self.upper, _rg(self.blocks[k:] + self.blocks[:k]))

    def rotate(self, side: str, frm: str) -> Partition:
        """Move the extremal leg on ``side`` from row ``frm`` to the other row.

        ``side`` is ``"left"`` or ``"right"``; ``frm`` is ``"top"`` or
        ``"bottom"``.  The moved leg keeps its block and the circular point
        order is preserved, so e.g. ``rotate("right", "top")`` turns the
        rightmost upper leg into the rightmost lower leg.
        """
        if side not in ("left", "right") or frm not in ("top", "bottom"):
            raise ValueError("side must be left/right and frm must be top/bottom")
        k, l = self.upper, self.lower
        if frm == "top" and k == 0:
            raise ShapeMismatchError("cannot rotate from an empty upper row")
        if frm == "bottom" and l == 0:
            raise ShapeMismatchError("cannot rotate from an empty lower row")
        b = self.blocks
        if frm == "top" and side == "left":
            order = list(range(1, k)) + [0] + list(range(k, k + l))
            k2, l2 = k - 1, l + 1
        elif frm == "top" and side == "right":
            order = list(range(k - 1)) + list(range(k, k + l)) + [k - 1]
            k2, l2 = k - 1, l + 1
        elif frm == "bottom" and side == "left":
            order = [k] + list(range(k)) + list(range(k + 1, k + l))
            k2, l2 = k + 1, l - 1
        else:  # bottom right
            order = list(range(k)) + [k + l - 1] + list(range(k, k + l - 1))
            k2, l2 = k + 1, l - 1
        return Partition(k2, l2, _rg([b[t] for t in order]))

    def join(self, other: Partition) -> Partition:
        """Lattice join: the finest partition coarser than both arguments."""
        if (self.upper, self.lower) != (other.upper, other.lower):
            raise ShapeMismatchError("join requires identical shapes")
        n = self.legs
        parent = list(range(n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for blocks in (self.blocks, other.blocks):
            rep: dict[int, int] = {}
            for t, bid in enumerate(blocks):
                if bid in rep:
                    ra, rb = find(t), find(rep[bid])
                    if ra != rb:
                        parent[ra] = rb
                else:
                    rep[bid] = t
        return Partition(self.upper, self.lower, _rg([find(t) for t in range(n)]))

    def is_noncrossing(self) -> bool:
        """True iff no two blocks interleave in the clockwise boundary order."""
        order = self.clockwise_order()
        seq = [self.blocks[t] for t in order]
        # A crossing is a pattern a..b..a..b of two distinct blocks.  Scan with
        # a stack of currently open blocks; meeting an open block that is not
        # on top of the stack means some other block interleaves with it.
        remaining = [0] * self.block_count
        for b in seq:
            remaining[b] += 1
        stack: list[int] = []
        open_set: set[int] = set()
        for b in seq:
            if b in open_set:
                if stack[-1] != b:
                    return False
            else:
                stack.append(b)
                open_set.add(b)
            remaining[b] -= 1
            if remaining[b] == 0:
                stack.pop()
                open_set.discard(b)
        return True

    def subpartitions(self) -> Iterator[Partition]:
        """All 2^b restrictions of the partition to a subset of its blocks.

        Each restriction keeps the surviving points in their original order
        and row, re-canonicalized on its own point set.
        """
        b = self.block_count
        k = self.upper
        for mask in range(1 << b):
            keep = [t for t in range(self.legs) if (mask >> self.blocks[t]) & 1]
            yield Partition(
                sum(1 for t in keep if t < k),
                sum(1 for t in keep if t >= k),
                _rg([self.blocks[t] for t in keep]),
            )

    # -- text form -------------------------------------------------------------

    def format(self) -> str:
        """Canonical text form, re-parseable by :func:`parse`."""
        k = self.upper
        names = [f"u{t + 1}" if t < k else f"l{t - k + 1}" for t in range(self.legs)]
        parts = [" ".join(names[t] for t in sorted(s)) for s in self.blocks_as_sets()]
        body = " | ".join(parts)
        prefix = f"P({self.upper},{self.lower}):"
        return f"{prefix} {body}" if body else prefix

    def __str__(self) -> str:
        return self.format()


_TOKEN = re.compile(r"^(?:u(\d+)|l(\d+)|(\d+))$")
_SHAPE = re.compile(r"^\s*P\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*:")


def parse(text: str) -> Partition:
    """Parse a partition string.

    Grammar: blocks are separated by ``|``; points are ``u<i>`` (upper,
    1-based, left-to-right), ``l<j>`` (lower) or bare integers as shorthand
    for lower points; whitespace is insignificant; an optional ``P(k,l):``
    prefix fixes the shape, which is otherwise inferred from the maximal
    indices.  Every point of the shape must appear exactly once.
    """
    declared: tuple[int, int] | None = None
    m = _SHAPE.match(text)
    if m:
        declared = (int(m.group(1)), int(m.group(2)))
        text = text[m.end():]

    blocks: list[list[tuple[int, int]]] = []
    for chunk in text.split("|"):
        tokens = chunk.split()
        if not tokens:
            continue
        block: list[tuple[int, int]] = []
        for tok in tokens:
            tm = _TOKEN.match(tok)
            if not tm:
                raise ParseError(f"bad token {tok!r}")
            if tm.group(1) is not None:
                block.append((0, int(tm.group(1))))
            elif tm.group(2) is not None:
                block.append((1, int(tm.group(2))))
            else:
                block.append((1, int(tm.group(3))))
        if block:
            blocks.append(block)

    points = [pt for block in blocks for pt in block]
    for row, idx in points:
        if idx < 1:
            raise ParseError("point indices are 1-based")
    if declared is not None:
        k, l = declared
    else:
        k = max((idx for row, idx in points if row == 0), default=0)
        l = max((idx for row, idx in points if row == 1), default=0)
    seen = set()
    for row, idx in points:
        if (row, idx) in seen:
            raise ParseError(f"point {'ul'[row]}{idx} listed twice")
        if idx > (k if row == 0 else l):
            raise ParseError(f"point {'ul'[row]}{idx} out of range for P({k},{l})")
        seen.add((row, idx))
    if len(seen) != k + l:
        raise ParseError(f"expected all {k + l} points of P({k},{l}) exactly once")

    def storage(row: int, idx: int) -> int:
        return idx - 1 if row == 0 else k + idx - 1

    return Partition.from_point_blocks(
        k, l, [[storage(row, idx) for row, idx in block] for block in blocks]
    )


# -- enumeration ----------------------------------------------------------------


def rg_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted-growth sequences of length n, in lexicographic order."""
    if n == 0:
        yield ()
        return
    seq = [0] * n

    def rec(i: int, maxb: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(seq)
            return
        for b in range(maxb + 2):
            seq[i] = b
            yield from rec(i + 1, max(maxb, b))

    yield from rec(1, 0)


def enumerate_partitions(
    upper: int,
    lower: int,
    predicate: Callable[[Partition], bool] | None = None,
    *,
    leg_bound: int = DEFAULT_LEG_BOUND,
) -> Iterator[Partition]:
    """Stream all partitions of the given shape in canonical order.

    ``predicate`` filters the stream; ``leg_bound`` guards against accidental
    huge enumerations and can be raised explicitly by the caller.
    """
    if upper + lower > leg_bound:
        raise LegBoundError(
            f"shape ({upper},{lower}) exceeds the leg bound {leg_bound}"
        )
    for seq in rg_sequences(upper + lower):
        p = Partition(upper, lower, seq)
        if predicate is None or predicate(p):
            yield p


def all_shapes(max_legs: int) -> Iterator[tuple[int, int]]:
    """All (upper, lower) shapes with at most ``max_legs`` points."""
    for total in range(max_legs + 1):
        for upper in range(total + 1):
            yield upper, total - upper


def enumerate_all(
    max_legs: int, predicate: Callable[[Partition], bool] | None = None
) -> Iterator[Partition]:
    """Stream all partitions of every shape with at most ``max_legs`` points."""
    for upper, lower in all_shapes(max_legs):
        yield from enumerate_partitions(
            upper, lower, predicate, leg_bound=max_legs
        )
