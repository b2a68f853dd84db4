"""Reference moment oracles for the limit laws of truncated characters.

Each law is given by a closed formula or a classical recursion that never
touches the diagram machinery, so these series can serve as independent
checks of the Weingarten moments:

* gaussian(t): odd moments 0, even moment k equal to (k-1)!! t^(k/2);
* poisson(t): the factorial-binomial recursion m_{k+1} = t sum C(k,i) m_i;
* free_poisson(t): Narayana polynomial sum_j N(k,j) t^j;
* semicircle(t): Catalan numbers times t^(k/2) on even orders;
* shifted_gaussian(t): moments of t + N(0, t);
* bessel(t): difference of two independent Poisson(t/2) variables, moments
  from its cumulant sequence (t on even orders, 0 on odd);
* squeezed complex gaussian(t): even orders 2j carry j! t^j, the squared-
  modulus moments of a complex Gaussian normalized to E|z|^2 = t;
* squeezed s-Bessel(s, t): no closed form is used; a seeded sampler of
  z = sum_r exp(2 pi i r / s) x_r with x_r independent Poisson(t/s) supplies
  Monte Carlo values of E|z|^(2j) with standard errors.

The truncated-character comparison harness contrasts these references with
exact finite-n Weingarten moments and renders the CSV report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .categories import CategoryId
from . import weingarten

MAX_ORDER = 12

LAW_NAMES = (
    "gaussian",
    "poisson",
    "free_poisson",
    "semicircle",
    "shifted_gaussian",
    "bessel",
    "squeezed_complex_gaussian",
    "squeezed_s_bessel",
)


@dataclass(frozen=True)
class MomentSeries:
    """Exact moments of a law (or of a category's character), by order."""

    label: str
    t: Fraction
    orders: tuple[int, ...]
    values: tuple[Fraction, ...]

    def moment(self, k: int) -> Fraction:
        return self.values[self.orders.index(k)]


def _check_order(K: int) -> None:
    if not 1 <= K <= MAX_ORDER:
        raise ValueError(f"order must lie in 1..{MAX_ORDER}")


def _double_factorial(k: int) -> int:
    out = 1
    for x in range(k, 0, -2):
        out *= x
    return out


def gaussian_moments(t: Fraction | int, K: int) -> MomentSeries:
    _check_order(K)
    t = Fraction(t)
    values = [
        Fraction(0) if k % 2 else _double_factorial(k - 1) * t ** (k // 2)
        for k in range(1, K + 1)
    ]
    return MomentSeries("gaussian", t, tuple(range(1, K + 1)), tuple(values))


def poisson_moments(t: Fraction | int, K: int) -> MomentSeries:
    _check_order(K)
    t = Fraction(t)
    m = [Fraction(1)]
    for k in range(K):
        m.append(t * sum(math.comb(k, i) * m[i] for i in range(k + 1)))
    return MomentSeries("poisson", t, tuple(range(1, K + 1)), tuple(m[1:]))


def free_poisson_moments(t: Fraction | int, K: int) -> MomentSeries:
    _check_order(K)
    t = Fraction(t)
    values = [
        sum(
            (Fraction(math.comb(k, j) * math.comb(k, j - 1), k) * t**j
             for j in range(1, k + 1)),
            Fraction(0),
        )
        for k in range(1, K + 1)
    ]
    return MomentSeries("free_poisson", t, tuple(range(1, K + 1)), tuple(values))


def semicircle_moments(t: Fraction | int, K: int) -> MomentSeries:
    _check_order(K)
    t = Fraction(t)
    values = [
        Fraction(0)
        if k % 2
        else Fraction(math.comb(k, k // 2), k // 2 + 1) * t ** (k // 2)
        for k in range(1, K + 1)
    ]
    return MomentSeries("semicircle", t, tuple(range(1, K + 1)), tuple(values))


def shifted_gaussian_moments(t: Fraction | int, K: int) -> MomentSeries:
    """Moments of t + N(0, t), a Gaussian shifted by its own variance."""
    _check_order(K)
    t = Fraction(t)
    values = []
    for k in range(1, K + 1):
        total = Fraction(0)
        for j in range(0, k + 1, 2):
            total += (
                math.comb(k, j)
                * _double_factorial(j - 1)
                * t ** (j // 2)
                * t ** (k - j)
            )
        values.append(total)
    return MomentSeries("shifted_gaussian", t, tuple(range(1, K + 1)), tuple(values))


def bessel_moments(t: Fraction | int, K: int) -> MomentSeries:
    """Moments of the difference of two independent Poisson(t/2) variables,
    from the cumulant sequence (t on even orders, 0 on odd orders)."""
    _check_order(K)
    t = Fraction(t)
    m = [Fraction(1)]
    for k in range(1, K + 1):
        total = Fraction(0)
        for i in range(2, k + 1, 2):
            total += math.comb(k - 1, i - 1) * t * m[k - i]
        m.append(total)
    return MomentSeries("bessel", t, tuple(range(1, K + 1)), tuple(m[1:]))


def squeezed_complex_gaussian_moments(t: Fraction | int, K: int) -> MomentSeries:
    """Even moments E|z|^(2j) = j! t^j of a complex Gaussian with E|z|^2 = t,
    on orders 2, 4, ..., 2K."""
    _check_order(K)
    t = Fraction(t)
    orders = tuple(2 * j for j in range(1, K + 1))
    values = tuple(Fraction(math.factorial(j)) * t**j for j in range(1, K + 1))
    return MomentSeries("squeezed_complex_gaussian", t, orders, values)


def balanced_recurrence(K: int) -> MomentSeries:
    """The even-moment sequence c_1..c_K of the balanced-partition character,
    from c_0 = 1 and c_k = sum_s C(k,s) C(k-1,s) c_s over s < k."""
    _check_order(K)
    c = [Fraction(1)]
    for k in range(1, K + 1):
        c.append(
            sum(
                (math.comb(k, s) * math.comb(k - 1, s) * c[s] for s in range(k)),
                Fraction(0),
            )
        )
    orders = tuple(2 * j for j in range(1, K + 1))
    return MomentSeries("balanced_recurrence", Fraction(1), orders, tuple(c[1:]))


def sample_s_bessel(
    s: int, t: Fraction | float, size: int, seed
) -> np.ndarray:
    """Seeded draws of z = sum_r exp(2 pi i r/s) x_r, x_r iid Poisson(t/s),
    using exact inverse-CDF sampling of the Poisson variables."""
    if s < 2:
        raise ValueError("s must be at least 2")
    lam = float(t) / s
    # Poisson CDF table out to negligible tail mass.
    pmf = [math.exp(-lam)]
    while sum(pmf) < 1.0 - 1e-15 and len(pmf) < 64:
        pmf.append(pmf[-1] * lam / len(pmf))
    cdf = np.cumsum(pmf)
    rng = np.random.default_rng(seed)
    u = rng.random((size, s))
    counts = np.searchsorted(cdf, u, side="right")
    roots = np.exp(2j * np.pi * np.arange(1, s + 1) / s)
    return counts @ roots


def squeezed_s_bessel_even_moments(
    s: int, t: Fraction | float, K: int, samples: int, seed
) -> tuple[tuple[int, ...], tuple[float, ...], tuple[float, ...]]:
    """Monte Carlo even moments E|z|^(2j), j = 1..K, of the s-Bessel law,
    with standard errors."""
    _check_order(K)
    z = sample_s_bessel(s, t, samples, seed)
    sq = np.abs(z) ** 2
    orders, means, errs = [], [], []
    for j in range(1, K + 1):
        powers = sq**j
        orders.append(2 * j)
        means.append(float(powers.mean()))
        errs.append(float(powers.std(ddof=1) / math.sqrt(samples)))
    return tuple(orders), tuple(means), tuple(errs)


def law_moments(
    law: str,
    t: Fraction | int,
    K: int,
    *,
    s: int | None = None,
    samples: int | None = None,
    seed=None,
) -> MomentSeries:
    """Dispatch a law by name.  The squeezed s-Bessel law has no exact oracle
    and is rejected here; use :func:`squeezed_s_bessel_even_moments`."""
    table = {
        "gaussian": gaussian_moments,
        "poisson": poisson_moments,
        "free_poisson": free_poisson_moments,
        "semicircle": semicircle_moments,
        "shifted_gaussian": shifted_gaussian_moments,
        "bessel": bessel_moments,
        "squeezed_complex_gaussian": squeezed_complex_gaussian_moments,
    }
    if law in table:
        return table[law](t, K)
    if law == "squeezed_s_bessel":
        raise ValueError(
            "the squeezed s-Bessel law is sampled, not exact; "
            "use squeezed_s_bessel_even_moments"
        )
    raise ValueError(f"unknown law {law!r}")


# -- comparison harness ---------------------------------------------------------


@dataclass(frozen=True)
class LawCompareRow:
    k: int
    n: int
    m: int
    value: Fraction
    reference: Fraction | float
    abs_dev: float


@dataclass(frozen=True)
class LawCompareReport:
    category: str
    law: str
    t: Fraction
    rows: tuple[LawCompareRow, ...]
    convergent: bool

    def to_csv(self) -> str:
        lines = ["category,law,t,k,finite_n,value,reference,abs_dev"]
        for r in self.rows:
            value = f"{r.value.numerator}/{r.value.denominator}"
            ref = (
                f"{r.reference.numerator}/{r.reference.denominator}"
                if isinstance(r.reference, Fraction)
                else repr(r.reference)
            )
            lines.append(
                f"{self.category},{self.law},{self.t},{r.k},{r.n},{value},{ref},"
                f"{r.abs_dev!r}"
            )
        lines.append("CONVERGENT" if self.convergent else "NOT CONVERGENT")
        return "\n".join(lines) + "\n"


def law_compare(
    c: CategoryId,
    law: str,
    t: Fraction | int,
    K: int,
    n_list: Sequence[int],
    *,
    s: int | None = None,
    samples: int = 100_000,
    seed=None,
) -> LawCompareReport:
    """Compare exact finite-n truncated-character moments against a law.

    Truncation is m = floor(t n) diagonal coordinates.  For the squeezed laws
    only even orders are compared; odd orders must vanish identically, and a
    violation flips the verdict.  The verdict is CONVERGENT when, for every
    order, the absolute deviations are non-increasing along ``n_list``.
    """
    _check_order(K)
    t = Fraction(t)
    squeezed = law.startswith("squeezed")
    if law == "squeezed_s_bessel":
        if s is None:
            raise ValueError("squeezed_s_bessel requires s")
        if seed is None:
            raise ValueError("a seed is mandatory for the sampled reference")
        orders, means, _ = squeezed_s_bessel_even_moments(s, t, K // 2 or 1, samples, seed)
        reference: dict[int, Fraction | float] = dict(zip(orders, means))
    else:
        series = law_moments(law, t, K)
        reference = dict(zip(series.orders, series.values))

    rows: list[LawCompareRow] = []
    convergent = True
    for k in range(1, K + 1):
        if k not in reference and not squeezed:
            continue
        devs: list[float] = []
        for n in n_list:
            m = int(t * n)
            if m < 1:
                raise ValueError(f"truncation floor(t n) vanishes at n={n}")
            value = weingarten.moment(c, n, k, m)
            if squeezed and k % 2:
                ref: Fraction | float = Fraction(0)
                if value != 0:
                    convergent = False
            else:
                ref = reference[k]
            dev = abs(float(value) - float(ref))
            devs.append(dev)
            rows.append(LawCompareRow(k, n, m, value, ref, dev))
        if any(d2 > d1 + 1e-12 for d1, d2 in zip(devs, devs[1:])):
            convergent = False
    return LawCompareReport(str(c), law, t, tuple(rows), convergent)
