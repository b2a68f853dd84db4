"""Linear-algebra semantics of partitions: operators, group samples, checks.

A partition p of type (k, l) acts on n-dimensional tensor legs as the 0/1
operator sending a basis vector indexed by an upper multi-index to the sum of
lower basis vectors whose combined index assignment is constant on every block
of p.  This module builds those operators sparsely, samples the classical
groups appearing alongside them, and provides two kinds of ground truth:

* exact full-enumeration Haar averages over the finite monomial groups, and
* Monte Carlo estimates of fixed-space dimensions for the continuous ones.

Monomial matrices are carried in structural form (a permutation plus a vector
of root-of-unity exponents), so all finite-group computations are exact
rationals; the geometric sum over the phase torus is evaluated in closed form
rather than floating point.  For groups with genuinely complex entries
(s-th roots of unity, s >= 3) the coordinates are not self-adjoint and words
pair each coordinate with a conjugate: integrands and intertwiner checks
alternate u, conj(u), u, ... across tensor legs, which is the convention under
which the balanced-partition categories describe these groups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .categories import PB, PB2, PH, PO, PS, PS2, CategoryId, eh_s
from .exact import PartitionMatrix
from .partitions import Partition

DEFAULT_BUDGET = 1 << 22

GROUP_TAGS = ("O", "S", "H", "B", "S'", "B'", "Hs")


class BudgetError(ValueError):
    """Raised when an operator or estimator would exceed the size budget."""


@dataclass(frozen=True)
class GroupSample:
    """One sampled element of a classical group.

    ``matrix`` is the numeric matrix (complex when s >= 3).  For the monomial
    groups the exact structure is kept alongside: the element maps basis
    vector e_j to ``omega**phases[j] * e_perm[j]`` with omega the primitive
    ``phase_order``-th root of unity.
    """

    tag: str
    n: int
    s: int | None
    seed: object
    matrix: np.ndarray
    perm: tuple[int, ...] | None = None
    phases: tuple[int, ...] | None = None
    phase_order: int = 1

    @property
    def is_monomial(self) -> bool:
        return self.perm is not None

    @property
    def is_complex(self) -> bool:
        return self.phase_order >= 3


def _check_group(tag: str, n: int, s: int | None) -> None:
    if tag not in GROUP_TAGS:
        raise ValueError(f"unknown group tag {tag!r}")
    if n < 1:
        raise ValueError("dimension must be positive")
    if tag == "Hs":
        if s is None or not isinstance(s, int) or s < 2:
            raise ValueError("the root-of-unity order s must be an integer >= 2")
    elif s is not None:
        raise ValueError(f"group {tag} takes no parameter s")


def group_category(tag: str, s: int | None = None) -> CategoryId:
    """The partition category whose diagrams span the group's intertwiners."""
    _check_group(tag, 1, s)
    table = {"O": PO, "S": PS, "H": PH, "B": PB, "S'": PS2, "B'": PB2}
    if tag == "Hs":
        return eh_s(s)
    return table[tag]


def _monomial_matrix(
    perm: Sequence[int], phases: Sequence[int], order: int
) -> np.ndarray:
    n = len(perm)
    if order <= 2:
        m = np.zeros((n, n))
        for j in range(n):
            m[perm[j], j] = 1.0 if phases[j] % 2 == 0 else -1.0
        return m
    m = np.zeros((n, n), dtype=complex)
    omega = np.exp(2j * np.pi / order)
    for j in range(n):
        m[perm[j], j] = omega ** phases[j]
    return m


def _haar_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    # QR of a Ginibre matrix, with the R-diagonal sign correction that makes
    # the factor Haar-distributed.
    a = rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))


def _bistochastic_frame(n: int) -> np.ndarray:
    """A fixed orthogonal matrix whose first column is the normalized
    all-ones vector (Householder reflection)."""
    u = np.full(n, 1.0 / math.sqrt(n))
    w = -u.copy()
    w[0] += 1.0
    norm2 = w @ w
    if norm2 < 1e-30:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(w, w) / norm2


def _draw(rng: np.random.Generator, tag: str, n: int, s: int | None):
    """Draw (matrix, perm, phases, order) for one Haar sample."""
    if tag == "S":
        perm = tuple(int(x) for x in rng.permutation(n))
        return _monomial_matrix(perm, (0,) * n, 1), perm, (0,) * n, 1
    if tag == "H":
        perm = tuple(int(x) for x in rng.permutation(n))
        phases = tuple(int(x) for x in rng.integers(0, 2, size=n))
        return _monomial_matrix(perm, phases, 2), perm, phases, 2
    if tag == "Hs":
        perm = tuple(int(x) for x in rng.permutation(n))
        phases = tuple(int(x) for x in rng.integers(0, s, size=n))
        return _monomial_matrix(perm, phases, s), perm, phases, s
    if tag == "S'":
        perm = tuple(int(x) for x in rng.permutation(n))
        z = int(rng.integers(0, 2))
        phases = (z,) * n
        return _monomial_matrix(perm, phases, 2), perm, phases, 2
    if tag == "O":
        return _haar_orthogonal(rng, n), None, None, 1
    if tag == "B":
        v = _bistochastic_frame(n)
        core = np.eye(n)
        if n > 1:
            core[1:, 1:] = _haar_orthogonal(rng, n - 1)
        return v @ core @ v.T, None, None, 1
    if tag == "B'":
        v = _bistochastic_frame(n)
        core = np.eye(n)
        if n > 1:
            core[1:, 1:] = _haar_orthogonal(rng, n - 1)
        sign = 1.0 if rng.integers(0, 2) == 0 else -1.0
        return sign * (v @ core @ v.T), None, None, 1
    raise ValueError(f"unknown group tag {tag!r}")


def sample(tag: str, n: int, seed, s: int | None = None) -> GroupSample:
    """Draw one Haar-distributed element of the group."""
    _check_group(tag, n, s)
    rng = np.random.default_rng(seed)
    matrix, perm, phases, order = _draw(rng, tag, n, s)
    return GroupSample(tag, n, s, seed, matrix, perm, phases, order)


def enumerate_group(
    tag: str, n: int, s: int | None = None, *, max_order: int = 100_000
) -> Iterator[GroupSample]:
    """Enumerate a finite group exactly, element by element."""
    _check_group(tag, n, s)
    fact = math.factorial(n)
    if tag == "S":
        size, phase_sets, order = fact, [(0,) * n], 1
    elif tag == "H":
        size = fact * 2**n
        phase_sets, order = list(itertools.product((0, 1), repeat=n)), 2
    elif tag == "Hs":
        size = fact * s**n
        phase_sets, order = list(itertools.product(range(s), repeat=n)), s
    elif tag == "S'":
        size = fact * 2
        phase_sets, order = [(0,) * n, (1,) * n], 2
    else:
        raise ValueError(f"group {tag} is not finite")
    if size > max_order:
        raise ValueError(f"group order {size} exceeds the enumeration cap")
    for perm in itertools.permutations(range(n)):
        for phases in phase_sets:
            yield GroupSample(
                tag, n, s, None,
                _monomial_matrix(perm, phases, order), perm, phases, order,
            )


def group_order(tag: str, n: int, s: int | None = None) -> int:
    _check_group(tag, n, s)
    fact = math.factorial(n)
    if tag == "S":
        return fact
    if tag == "H":
        return fact * 2**n
    if tag == "Hs":
        return fact * s**n
    if tag == "S'":
        return fact * 2
    raise ValueError(f"group {tag} is not finite")


# -- the partition operators -------------------------------------------------------


def delta(p: Partition, i: Sequence[int], j: Sequence[int], n: int) -> int:
    """1 iff assigning ``i`` to the upper points and ``j`` to the lower points
    is constant on every block of p; indices are 1-based values in 1..n."""
    if len(i) != p.upper or len(j) != p.lower:
        raise ValueError(
            f"arity mismatch: partition is ({p.upper},{p.lower}), "
            f"indices have lengths ({len(i)},{len(j)})"
        )
    values = list(i) + list(j)
    for v in values:
        if not 1 <= v <= n:
            raise ValueError(f"index {v} out of range 1..{n}")
    assigned: dict[int, int] = {}
    for t, v in enumerate(values):
        b = p.blocks[t]
        if b in assigned:
            if assigned[b] != v:
                return 0
        else:
            assigned[b] = v
    return 1


@dataclass(frozen=True)
class TensorOperator:
    """The sparse 0/1 operator of a partition on n-dimensional legs, as an
    (n^l x n^k) matrix in the row-major multi-index basis."""

    partition: Partition
    dim: int
    matrix: sp.csr_matrix

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def vector(self) -> np.ndarray:
        """For a bottom-row partition, the image of the empty tensor."""
        if self.partition.upper != 0:
            raise ValueError("vector() requires a partition with no upper points")
        return self.matrix.toarray()[:, 0]


def build_operator(
    p: Partition, n: int, *, budget: int = DEFAULT_BUDGET
) -> TensorOperator:
    """Construct the operator of p on n-dimensional legs.

    The number of nonzero entries is n^b over b blocks; both the matrix sides
    and the nonzero count must stay within the budget.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    k, l, b = p.upper, p.lower, p.block_count
    if n ** max(k, l) > budget or n**b > budget:
        raise BudgetError(
            f"operator for {p} at n={n} exceeds the budget of {budget} entries"
        )
    rows = np.zeros(n**b, dtype=np.int64)
    cols = np.zeros(n**b, dtype=np.int64)
    blocks = p.blocks
    for e, values in enumerate(itertools.product(range(n), repeat=b)):
        col = 0
        for t in range(k):
            col = col * n + values[blocks[t]]
        row = 0
        for t in range(k, k + l):
            row = row * n + values[blocks[t]]
        rows[e], cols[e] = row, col
    data = np.ones(n**b, dtype=np.int64)
    matrix = sp.csr_matrix((data, (rows, cols)), shape=(n**l, n**k))
    return TensorOperator(p, n, matrix)


def gram_from_vectors(
    diagrams: Sequence[Partition], n: int, *, budget: int = DEFAULT_BUDGET
) -> PartitionMatrix:
    """Exact Gram matrix of the vectors xi_p obtained by applying each
    bottom-row diagram's operator to the empty tensor."""
    basis = tuple(diagrams)
    if not basis:
        return PartitionMatrix((), np.empty((0, 0), dtype=object))
    k = basis[0].lower
    if any(p.upper != 0 or p.lower != k for p in basis):
        raise ValueError("all diagrams must lie in the same bottom-row shape")
    vectors = np.stack([build_operator(p, n, budget=budget).vector() for p in basis])
    gram = vectors @ vectors.T  # exact: small nonnegative integers
    data = np.array(
        [[Fraction(int(x)) for x in row] for row in gram], dtype=object
    )
    return PartitionMatrix(basis, data)


# -- intertwiner checks --------------------------------------------------------------


def _alternating_signs(count: int, alternating: bool) -> tuple[int, ...]:
    if not alternating:
        return (1,) * count
    return tuple(1 if t % 2 == 0 else -1 for t in range(count))


def _intertwines_exact(p: Partition, g: GroupSample) -> bool:
    """Exact intertwiner check for a monomial sample.

    Writing the element as e_j -> omega^a_j e_sigma(j), both sides of the
    intertwiner equation have the same 0/1 support (the permutation part only
    relabels block-constant assignments), so equality reduces to matching
    phases on that support: for every assignment of a value to each block,
    the net phase exponent collected on the upper legs must agree with the
    lower one modulo the phase order.
    """
    n, s = g.n, g.phase_order
    phases = g.phases
    k, l = p.upper, p.lower
    eps_up = _alternating_signs(k, g.is_complex)
    eps_lo = _alternating_signs(l, g.is_complex)
    blocks = p.blocks
    b = p.block_count
    net = [0] * b  # per block: upper minus lower net conjugation sign
    for t in range(k):
        net[blocks[t]] += eps_up[t]
    for t in range(k, k + l):
        net[blocks[t]] -= eps_lo[t - k]
    if all(c % s == 0 for c in net):
        return True  # holds for every phase vector
    for values in itertools.product(range(n), repeat=b):
        total = sum(c * phases[v] for c, v in zip(net, values))
        if total % s != 0:
            return False
    return True


def _alt_power(g: GroupSample, count: int) -> np.ndarray:
    out = np.eye(1, dtype=g.matrix.dtype)
    for t in range(count):
        factor = g.matrix if (t % 2 == 0 or not g.is_complex) else g.matrix.conj()
        out = np.kron(out, factor)
    return out


def intertwines(
    p: Partition,
    g: GroupSample,
    tol: float = 1e-9,
    *,
    budget: int = DEFAULT_BUDGET,
) -> tuple[bool, float]:
    """Check whether the operator of p commutes with the tensor powers of the
    sample, returning the verdict and the residual operator norm.

    For monomial samples the check is exact (residual 0.0 or computed
    numerically on failure); for continuous samples it is numeric with the
    given tolerance.  Complex-entry groups use alternating-conjugate powers.
    """
    n = g.n
    if n ** max(p.upper, p.lower, 1) > budget or n ** (p.upper + p.lower) > budget:
        raise BudgetError("intertwiner check exceeds the size budget")
    if g.is_monomial:
        ok = _intertwines_exact(p, g)
        if ok:
            return True, 0.0
    op = build_operator(p, n, budget=budget).toarray().astype(
        complex if g.is_complex else float
    )
    lhs = op @ _alt_power(g, p.upper)
    rhs = _alt_power(g, p.lower) @ op
    residual = float(np.linalg.norm(lhs - rhs, 2)) if lhs.size else 0.0
    return residual <= tol, residual


# -- exact Haar averages and fixed-space dimensions -----------------------------------


def exact_haar_integral(
    tag: str,
    n: int,
    i: Sequence[int],
    j: Sequence[int],
    s: int | None = None,
    *,
    alternating: bool | None = None,
) -> Fraction:
    """Exact Haar average of a word of coordinates over a finite group.

    The word is u[i1,j1] u[i2,j2] ... with 1-based indices; for complex-entry
    groups the factors alternate with conjugates (u, conj u, u, ...) unless
    ``alternating`` overrides this.  The permutation part is enumerated fully
    and the phase part is an exact geometric sum, so the result is an exact
    rational.
    """
    _check_group(tag, n, s)
    if len(i) != len(j):
        raise ValueError("index tuples must have equal length")
    k = len(i)
    for v in tuple(i) + tuple(j):
        if not 1 <= v <= n:
            raise ValueError(f"index {v} out of range 1..{n}")
    if tag == "S":
        phase_kind, order = "none", 1
    elif tag in ("H", "Hs"):
        phase_kind, order = "column", 2 if tag == "H" else s
    elif tag == "S'":
        phase_kind, order = "global", 2
    else:
        raise ValueError(f"group {tag} is not finite")
    if alternating is None:
        alternating = order >= 3
    eps = _alternating_signs(k, alternating)

    hits = 0
    i0 = [v - 1 for v in i]
    j0 = [v - 1 for v in j]
    for perm in itertools.permutations(range(n)):
        if any(perm[j0[t]] != i0[t] for t in range(k)):
            continue
        if phase_kind == "none":
            hits += 1
            continue
        if phase_kind == "global":
            if sum(eps) % order == 0:
                hits += 1
            continue
        exponents = [0] * n
        for t in range(k):
            exponents[j0[t]] += eps[t]
        if all(e % order == 0 for e in exponents):
            hits += 1
    return Fraction(hits, math.factorial(n))


def exact_fixed_dim(tag: str, n: int, k: int, s: int | None = None) -> Fraction:
    """dim Fix(u^{tensor k}) as the exact group average of the k-th power of
    the character, by full enumeration."""
    total = Fraction(0)
    for idx in itertools.product(range(1, n + 1), repeat=k):
        total += exact_haar_integral(tag, n, idx, idx, s, alternating=False)
    return total


def mc_fixed_dim(
    tag: str,
    n: int,
    k: int,
    samples: int,
    seed,
    s: int | None = None,
    *,
    budget: int = DEFAULT_BUDGET,
) -> tuple[float, float]:
    """Monte Carlo estimate of dim Fix(u^{tensor k}) = E[character^k].

    Returns the estimate and its standard error.  The sequence of draws is
    fully determined by the seed.
    """
    _check_group(tag, n, s)
    if samples < 2:
        raise ValueError("need at least two samples")
    if n**k > budget:
        raise BudgetError("fixed-space estimate exceeds the size budget")
    rng = np.random.default_rng(seed)
    values = np.empty(samples)
    for t in range(samples):
        matrix, _, _, _ = _draw(rng, tag, n, s)
        chi = np.trace(matrix)
        values[t] = (chi**k).real
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples))
    return mean, stderr
