"""Exact rational matrices indexed by partitions.

Gram and Weingarten matrices are small (their side is the number of diagrams
in one shape) but must be exact: entries are :class:`fractions.Fraction`
held in numpy object arrays, and inversion is plain Gauss-Jordan over Q with
partial pivoting.  No floating point enters any of these computations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .partitions import Partition


class SingularMatrixError(ValueError):
    """Raised when an exact inverse does not exist; carries the rank."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix of size {size} is singular with rank {rank}")
        self.rank = rank
        self.size = size


def identity_matrix(n: int) -> np.ndarray:
    return np.array(
        [[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object
    )


def invert(matrix: np.ndarray) -> np.ndarray:
    """Exact inverse of a square matrix of Fractions via Gauss-Jordan."""
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError("matrix must be square")
    a = matrix.astype(object, copy=True)
    inv = identity_matrix(n)
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, n) if a[r, col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
            inv[[rank, pivot]] = inv[[pivot, rank]]
        scale = a[rank, col]
        a[rank] = a[rank] / scale
        inv[rank] = inv[rank] / scale
        for r in range(n):
            if r != rank and a[r, col] != 0:
                factor = a[r, col]
                a[r] = a[r] - factor * a[rank]
                inv[r] = inv[r] - factor * inv[rank]
        rank += 1
    if rank < n:
        raise SingularMatrixError(rank, n)
    return inv


def rank_of(matrix: np.ndarray) -> int:
    """Exact rank via fraction-valued row reduction."""
    a = matrix.astype(object, copy=True)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] = a[rank] / a[rank, col]
        for r in range(rank + 1, rows):
            if a[r, col] != 0:
                a[r] = a[r] - a[r, col] * a[rank]
        rank += 1
    return rank


def frac_str(x: Fraction) -> str:
    """Serialize a rational as ``num/den`` (denominator kept even when 1)."""
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class PartitionMatrix:
    """A square rational matrix whose rows and columns are indexed by a fixed
    canonical list of partitions."""

    basis: tuple[Partition, ...]
    data: np.ndarray  # object array of Fractions

    def __post_init__(self) -> None:
        n = len(self.basis)
        if self.data.shape != (n, n):
            raise ValueError("matrix shape does not match the basis")

    @property
    def size(self) -> int:
        return len(self.basis)

    def entry(self, p: Partition, q: Partition) -> Fraction:
        return self.data[self.basis.index(p), self.basis.index(q)]

    def __matmul__(self, other: "PartitionMatrix") -> "PartitionMatrix":
        if self.basis != other.basis:
            raise ValueError("mismatched bases")
        return PartitionMatrix(self.basis, self.data @ other.data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartitionMatrix):
            return NotImplemented
        return self.basis == other.basis and bool(
            np.all(self.data == other.data)
        )

    def is_identity(self) -> bool:
        return bool(np.all(self.data == identity_matrix(self.size)))

    def inverse(self) -> "PartitionMatrix":
        return PartitionMatrix(self.basis, invert(self.data))

    def to_json_dict(self) -> dict:
        return {
            "basis": [str(p) for p in self.basis],
            "entries": [[frac_str(x) for x in row] for row in self.data],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_csv(self) -> str:
        lines = [",".join([""] + [f'"{p}"' for p in self.basis])]
        for p, row in zip(self.basis, self.data):
            lines.append(",".join([f'"{p}"'] + [frac_str(x) for x in row]))
        return "\n".join(lines) + "\n"
