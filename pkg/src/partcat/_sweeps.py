"""Compiled kernels for exhaustive sweeps over packed partition arrays.

The pure-Python diagram operations are fine for interactive work, but the
closure and associativity checks quantify over 10^7..10^8 composable pairs or
triples at the default leg bound.  These kernels redo the union-find
composition on flat integer arrays; everything else in the package sticks to
:class:`~partcat.partitions.Partition`.

Packing: a partition with at most 12 points is encoded as the int64
``(upper << 56) | (lower << 52) | sum(block[t] << 4*t)`` over its
restricted-growth sequence, so equality of codes is equality of partitions.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numba import njit

from .partitions import Partition

_MAX_POINTS = 12


def _pack(members: Sequence[Partition]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = len(members)
    kk = np.empty(n, np.int64)
    ll = np.empty(n, np.int64)
    bb = np.zeros((n, _MAX_POINTS), np.int64)
    for i, p in enumerate(members):
        if p.legs > _MAX_POINTS:
            raise ValueError(f"partition with {p.legs} legs exceeds kernel capacity")
        kk[i] = p.upper
        ll[i] = p.lower
        for t, b in enumerate(p.blocks):
            bb[i, t] = b
    return kk, ll, bb


def code_of(p: Partition) -> int:
    code = (p.upper << 56) | (p.lower << 52)
    for t, b in enumerate(p.blocks):
        code |= b << (4 * t)
    return code


@njit(cache=True)
def _find(parent: np.ndarray, a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def _union_blocks(
    parent: np.ndarray, rep: np.ndarray, blocks: np.ndarray, npts: int, offset: int
) -> None:
    for t in range(npts):
        rep[t] = -1
    for t in range(npts):
        b = blocks[t]
        node = t + offset
        if rep[b] < 0:
            rep[b] = node
        else:
            ra = _find(parent, node)
            rb = _find(parent, rep[b])
            if ra != rb:
                parent[ra] = rb


@njit(cache=True)
def _compose_raw(
    k, l, pblocks, m, qblocks, parent, rep, newid, out_blocks
):
    """Compose P(k,l) over P(l,m); fill out_blocks, return (n_blocks, loops)."""
    total = k + l + m
    for t in range(total):
        parent[t] = t
    _union_blocks(parent, rep, pblocks, k + l, 0)
    _union_blocks(parent, rep, qblocks, l + m, k)
    for t in range(total):
        newid[t] = -1
    nb = 0
    pos = 0
    for t in range(total):
        if k <= t < k + l:
            continue
        root = _find(parent, t)
        if newid[root] < 0:
            newid[root] = nb
            nb += 1
        out_blocks[pos] = newid[root]
        pos += 1
    loops = 0
    for t in range(k, k + l):
        root = _find(parent, t)
        if newid[root] < 0:
            newid[root] = nb + loops  # mark counted middle component
            loops += 1
    return nb, loops


@njit(cache=True)
def _bsearch(codes: np.ndarray, code: int) -> bool:
    lo = 0
    hi = codes.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if codes[mid] < code:
            lo = mid + 1
        else:
            hi = mid
    return lo < codes.shape[0] and codes[lo] == code


@njit(cache=True)
def _compose_sweep(
    kk, ll, bb, order_by_upper, upper_start, codes, leg_bound, fail_out
):
    n = kk.shape[0]
    checked = 0
    n_fail = 0
    parent = np.empty(4 * _MAX_POINTS, np.int64)
    rep = np.empty(4 * _MAX_POINTS, np.int64)
    newid = np.empty(4 * _MAX_POINTS, np.int64)
    out = np.empty(2 * _MAX_POINTS, np.int64)
    for i in range(n):
        k = kk[i]
        l = ll[i]
        for jj in range(upper_start[l], upper_start[l + 1]):
            j = order_by_upper[jj]
            m = ll[j]
            if k + m > leg_bound:
                continue
            checked += 1
            _compose_raw(k, l, bb[i], m, bb[j], parent, rep, newid, out)
            code = (k << 56) | (m << 52)
            for t in range(k + m):
                code |= out[t] << (4 * t)
            if not _bsearch(codes, code):
                if n_fail < fail_out.shape[0]:
                    fail_out[n_fail, 0] = i
                    fail_out[n_fail, 1] = j
                n_fail += 1
    return checked, n_fail


def compose_closure_check(
    members: Sequence[Partition], leg_bound: int, max_failures: int = 64
) -> tuple[int, list[tuple[int, int]]]:
    """Compose every composable ordered pair of members whose result stays
    within the leg bound, and report the pairs whose composite leaves the set.

    Returns the number of pairs checked and the failing (i, j) index pairs
    (at most ``max_failures`` of them).
    """
    if not members:
        return 0, []
    kk, ll, bb = _pack(members)
    order = np.argsort(kk, kind="stable").astype(np.int64)
    upper_start = np.zeros(_MAX_POINTS + 2, np.int64)
    counts = np.bincount(kk, minlength=_MAX_POINTS + 1)
    upper_start[1:] = np.cumsum(counts)
    codes = np.sort(np.array([code_of(p) for p in members], np.int64))
    fail_out = np.empty((max_failures, 2), np.int64)
    checked, n_fail = _compose_sweep(
        kk, ll, bb, order, upper_start, codes, leg_bound, fail_out
    )
    fails = [
        (int(fail_out[t, 0]), int(fail_out[t, 1]))
        for t in range(min(n_fail, max_failures))
    ]
    return int(checked), fails


@njit(cache=True)
def _assoc_sweep(kk, ll, bb, order_by_upper, upper_start):
    """Check (p*q)*r == p*(q*r) with additive loop counts over all composable
    triples.  Returns (number of triples, number of mismatches)."""
    n = kk.shape[0]
    parent = np.empty(4 * _MAX_POINTS, np.int64)
    rep = np.empty(4 * _MAX_POINTS, np.int64)
    newid = np.empty(4 * _MAX_POINTS, np.int64)
    pq = np.empty(2 * _MAX_POINTS, np.int64)
    qr = np.empty(2 * _MAX_POINTS, np.int64)
    lhs = np.empty(2 * _MAX_POINTS, np.int64)
    rhs = np.empty(2 * _MAX_POINTS, np.int64)
    triples = 0
    bad = 0
    for iq in range(n):
        kq = kk[iq]
        lq = ll[iq]
        for ir_ in range(upper_start[lq], upper_start[lq + 1]):
            ir = order_by_upper[ir_]
            mr = ll[ir]
            _, loops_qr = _compose_raw(
                kq, lq, bb[iq], mr, bb[ir], parent, rep, newid, qr
            )
            for ip_ in range(n):
                if ll[ip_] != kq:
                    continue
                kp = kk[ip_]
                _, loops_pq = _compose_raw(
                    kp, kq, bb[ip_], lq, bb[iq], parent, rep, newid, pq
                )
                _, loops_l = _compose_raw(
                    kp, lq, pq, mr, bb[ir], parent, rep, newid, lhs
                )
                _, loops_r = _compose_raw(
                    kp, kq, bb[ip_], mr, qr, parent, rep, newid, rhs
                )
                triples += 1
                same = loops_pq + loops_l == loops_qr + loops_r
                if same:
                    for t in range(kp + mr):
                        if lhs[t] != rhs[t]:
                            same = False
                            break
                if not same:
                    bad += 1
    return triples, bad


def associativity_check(members: Sequence[Partition]) -> tuple[int, int]:
    """Exhaustive associativity check of composition over all composable
    triples from ``members``; loop counts must add up on both sides."""
    if not members:
        return 0, 0
    kk, ll, bb = _pack(members)
    order = np.argsort(kk, kind="stable").astype(np.int64)
    upper_start = np.zeros(_MAX_POINTS + 2, np.int64)
    counts = np.bincount(kk, minlength=_MAX_POINTS + 1)
    upper_start[1:] = np.cumsum(counts)
    triples, bad = _assoc_sweep(kk, ll, bb, order, upper_start)
    return int(triples), int(bad)
