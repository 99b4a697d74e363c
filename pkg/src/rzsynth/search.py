"""T-optimal approximation of R_z(phi): the restricted search (RCUP) and the CUP driver.

A candidate top-left entry is x = x' / sqrt2^m with
x' = a0 + b0 sqrt2 + i (a1 + b1 sqrt2).  For theta_k = pi k / 8 - phi / 2 the
squared distance splits as eps_re + eps_im with

    eps_re = c 2^(-m/2) (c 2^(m/2) - (a0 + b0 sqrt2)),   c = cos theta_k
    eps_im = s 2^(-m/2) (s 2^(m/2) - (a1 + b1 sqrt2)),   s = sin theta_k

so real and imaginary halves are enumerated independently and merged by sum.
Doubles only screen; every comparison that decides the answer is redone in mpfr.
"""

from __future__ import annotations

import math
import time
from bisect import bisect_left, bisect_right
from collections import defaultdict
from typing import Callable, NamedTuple

import gmpy2
import numpy as np
from gmpy2 import mpfr

from . import kernels
from .cliffordt import ExactUnitary, base_table, synthesize, t_symbols, tcount_unitary
from .highprec import DEFAULT_PREC, Angle, escalated, precision, tie_threshold
from .normeq import DEFAULT_TIMEOUT, is_solvable, solve_all
from .oracle import cup_table_from_layers
from .ring import BOTTOM, ZOmega, ZSqrt2, sde
from .solution import CupSolution

__all__ = [
    "INFINITY",
    "HalfRecord",
    "CandidateTuple",
    "distance",
    "distance_sq",
    "find_halves",
    "merge_candidates",
    "min_t_count",
    "all_unitaries",
    "rcup",
    "cup",
    "iter_cup",
    "x_from_halves",
]

INFINITY = math.inf
# candidate pairs materialized per merge window
MERGE_BUDGET = 1 << 16
# absolute slack on double-precision screens (their error is far below this)
_SLACK = 1e-11


class HalfRecord(NamedTuple):
    eps_part: object
    a: int
    b: int


class CandidateTuple(NamedTuple):
    eps: object
    a0: int
    b0: int
    a1: int
    b1: int
    k: int


def x_from_halves(a0: int, b0: int, a1: int, b1: int) -> ZOmega:
    """a0 + b0 sqrt2 + i (a1 + b1 sqrt2) as an element of Z[w]."""
    return ZOmega(a0, b0 + b1, a1, b1 - b0)


def _halves_of(x: ZOmega) -> tuple[int, int, int, int]:
    # inverse of x_from_halves; needs c1 + c3 and c1 - c3 even
    c0, c1, c2, c3 = x.coeffs
    return c0, (c1 - c3) // 2, c2, (c1 + c3) // 2


def _eps_part(alpha, m: int, a: int, b: int, prec: int):
    with precision(prec + 32):
        scale = gmpy2.sqrt(mpfr(2)) ** m
        v = alpha * (alpha * scale - (a + b * gmpy2.sqrt(mpfr(2)))) / scale
    with precision(prec):
        return mpfr(v)


def distance_sq(u: ExactUnitary, phi: Angle, prec: int = DEFAULT_PREC):
    """Squared global-phase-invariant distance between u and R_z(phi)."""
    x, m = u.x, u.m
    # the split needs x' in Z[sqrt2] + i Z[sqrt2]; scale by sqrt2 if it is not
    if (x.c1 + x.c3) % 2:
        x, m = x.mul_sqrt2(), m + 1
    a0, b0, a1, b1 = _halves_of(x)
    c, s = phi.theta_trig(u.k, prec + 32)
    with precision(prec + 32):
        r2 = gmpy2.sqrt(mpfr(2))
        proj = (c * (a0 + b0 * r2) + s * (a1 + b1 * r2)) / r2**m
    if proj < 0:
        a0, b0, a1, b1 = -a0, -b0, -a1, -b1
    with precision(prec + 32):
        val = _eps_part(c, m, a0, b0, prec + 32) + _eps_part(s, m, a1, b1, prec + 32)
    with precision(prec):
        return mpfr(val)


def distance(u: ExactUnitary, phi: Angle, prec: int = DEFAULT_PREC):
    """sqrt(1 - |tr(U R_z(phi)^dagger)| / 2), computed through the real/imaginary split."""
    d2 = distance_sq(u, phi, prec)
    with precision(prec):
        return gmpy2.sqrt(d2) if d2 > 0 else mpfr(0)


def _scan(alpha: float, m: int, delta: float):
    """Double-precision halves with a small outward margin, sorted by eps_part."""
    tol = delta * math.sqrt(2.0 ** (m + 1))
    a, b = kernels.halves_scan(alpha * math.sqrt(2.0**m), m, tol * (1 + 1e-9) + 1e-9)
    eps = alpha * (alpha * 2.0 ** (m / 2) - (a + b * math.sqrt(2.0))) * 2.0 ** (-m / 2)
    order = np.lexsort((a, b, eps))
    return eps[order], a[order], b[order]


def find_halves(alpha, m: int, delta, prec: int = DEFAULT_PREC) -> list[HalfRecord]:
    """All (a, b) with a^2 + 2 b^2 <= 2^m and |alpha sqrt2^m - (a + b sqrt2)| <= delta sqrt2^(m+1).

    Records carry eps_part = alpha 2^(-m/2) (alpha 2^(m/2) - (a + b sqrt2)) and come
    sorted by it (ties by b, then a).
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    with precision(prec + 32):
        alpha, delta = mpfr(alpha), mpfr(delta)
    _, aa, bb = _scan(float(alpha), m, float(delta))
    out = []
    with precision(prec + 32):
        r2 = gmpy2.sqrt(mpfr(2))
        # boundary points are kept: a superset never loses a solution
        center, tol = alpha * r2**m, delta * r2 ** (m + 1) * (1 + mpfr(2) ** -(prec - 8))
        for a, b in zip(aa.tolist(), bb.tolist()):
            if abs(center - (a + b * r2)) <= tol:
                out.append(HalfRecord(_eps_part(alpha, m, a, b, prec), a, b))
    out.sort(key=lambda r: (r.eps_part, r.b, r.a))
    return out


def merge_candidates(l_re, l_im, k: int, interval, delta, prec: int = DEFAULT_PREC) -> list[CandidateTuple]:
    """Pairs (re, im) with eps_re + eps_im in interval and in [0, delta].

    ``delta`` bounds the summed eps, which is a squared distance: callers
    searching within distance d pass d**2.
    """
    out = []
    with precision(prec):
        lo, hi = interval
        lo, hi = max(mpfr(lo), mpfr(0)), min(mpfr(hi), mpfr(delta))
        keys = [r.eps_part for r in l_im]
        for re in l_re:
            i0 = bisect_left(keys, lo - re.eps_part)
            i1 = bisect_right(keys, hi - re.eps_part)
            for im in l_im[i0:i1]:
                eps = re.eps_part + im.eps_part
                if lo <= eps <= hi:
                    out.append(CandidateTuple(eps, re.a, re.b, im.a, im.b, k))
    out.sort()
    return out


def min_t_count(x_num: ZOmega, m: int, k: int, timeout: float | None = DEFAULT_TIMEOUT):
    """T-count of the minimal unitaries with top-left entry x_num / sqrt2^m and index k."""
    x_num = ZOmega.coerce(x_num)
    xx = x_num.abs_sq()
    s = sde(xx, 2 * m)
    if s is BOTTOM or s <= 4:
        return INFINITY
    rhs = ZSqrt2(1 << m) - xx
    if not is_solvable(rhs, timeout):
        return INFINITY
    return s - 2 + (k + s) % 2


def _t_formula(x_num: ZOmega, m: int, k: int):
    s = sde(x_num.abs_sq(), 2 * m)
    if s is BOTTOM or s <= 4:
        return None
    return s - 2 + (k + s) % 2


def all_unitaries(x_num: ZOmega, m: int, k: int, timeout: float | None = DEFAULT_TIMEOUT) -> list[ExactUnitary]:
    """Minimal unitaries U[x_num / sqrt2^m, y, k], one phase-canonical representative each."""
    x_num = ZOmega.coerce(x_num)
    rhs = ZSqrt2(1 << m) - x_num.abs_sq()
    units = {}
    for y in solve_all(rhs, timeout):
        u = ExactUnitary.make(x_num, y, k, m)
        units.setdefault(u.key(), u)
    counts = {key: tcount_unitary(u) for key, u in units.items()}
    if not counts:
        return []
    best = min(counts.values())
    return [ExactUnitary.from_key(key) for key in sorted(units) if counts[key] == best]


def _pair_windows(lists, d2f: float, budget: int):
    """Constant-width windows over [-slack, d2f] holding about ``budget`` pairs each."""
    total = 0
    for (e_re, _, _), (e_im, _, _) in lists:
        if len(e_re) and len(e_im):
            hi = np.searchsorted(e_im, d2f + _SLACK - e_re, side="right")
            lo = np.searchsorted(e_im, -_SLACK - e_re, side="left")
            total += int(np.maximum(hi - lo, 0).sum())
    if total <= budget:
        return [(-_SLACK, d2f + _SLACK)], total
    width = max(d2f * budget / total, 1e-15)
    wins, lo = [], -_SLACK
    while lo <= d2f + _SLACK:
        wins.append((lo, lo + width))
        lo += width
    return wins, total


def _window_pairs(e_re, a_re, b_re, e_im, a_im, b_im, lo: float, hi: float):
    start = np.searchsorted(e_im, lo - _SLACK - e_re, side="left")
    stop = np.searchsorted(e_im, hi + _SLACK - e_re, side="right")
    counts = np.maximum(stop - start, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty((0, 4), dtype=np.int64)
    i = np.repeat(np.arange(len(e_re)), counts)
    j = np.repeat(start, counts) + (np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts))
    return np.stack([a_re[i], b_re[i], a_im[j], b_im[j]], axis=1)


class _Evaluator:
    """Exact eps of candidate pairs for one angle and m, cached per half."""

    def __init__(self, phi: Angle, m: int, prec: int):
        self.phi, self.m, self.prec = phi, m, prec
        self._cache = {}

    def half(self, k: int, which: int, a: int, b: int, prec: int):
        key = (k, which, a, b, prec)
        v = self._cache.get(key)
        if v is None:
            alpha = self.phi.theta_trig(k, prec + 32)[which]
            v = self._cache[key] = _eps_part(alpha, self.m, a, b, prec)
        return v

    def eps(self, k, a0, b0, a1, b1, prec=None):
        prec = prec or self.prec
        with precision(prec):
            return self.half(k, 0, a0, b0, prec) + self.half(k, 1, a1, b1, prec)


def _tie_groups(items, ev: _Evaluator, prec: int):
    """Split (eps, cand) sorted by eps into groups of equal eps, escalating precision on near ties."""
    thr = tie_threshold(prec)
    i = 0
    while i < len(items):
        j = i + 1
        while j < len(items) and items[j][0] - items[i][0] <= thr:
            j += 1
        group = items[i:j]
        i = j
        if len(group) == 1:
            yield group[0][0], [group[0][1]]
            continue
        hi_prec = escalated(prec)
        hi = sorted(((ev.eps(*c, prec=hi_prec), c) for _, c in group), key=lambda t: t[0])
        thr_hi = tie_threshold(hi_prec)
        p = 0
        while p < len(hi):
            q = p + 1
            while q < len(hi) and hi[q][0] - hi[p][0] <= thr_hi:
                q += 1
            with precision(prec):
                yield mpfr(hi[p][0]), [c for _, c in hi[p:q]]
            p = q


def rcup(
    n: int,
    phi: Angle,
    delta,
    prec: int = DEFAULT_PREC,
    timeout: float | None = DEFAULT_TIMEOUT,
    stats: dict | None = None,
):
    """Closest unitaries of T-count exactly n within distance delta of R_z(phi).

    Returns (eps, units) with eps the distance (an mpfr) and units the phase-canonical
    minimal unitaries at that distance, or (delta, []) when nothing is within delta.
    """
    with precision(prec):
        delta = mpfr(delta)
    eps_sq, units = _rcup_sq(n, phi, delta, prec, timeout, stats)
    if not units:
        return delta, []
    with precision(prec):
        return (gmpy2.sqrt(eps_sq) if eps_sq > 0 else mpfr(0)), units


def _rcup_sq(n, phi, delta, prec, timeout, stats):
    if n < 4:
        raise ValueError("rcup needs n >= 4; smaller budgets come from the base table")
    if not 0 < delta <= 0.5:
        raise ValueError("rcup needs 0 < delta <= 1/2")
    m = (n + 1) // 2 + 2
    with precision(prec):
        d2 = delta * delta
    d2f = float(d2)
    ev = _Evaluator(phi, m, prec)
    lists = []
    for k in (0, 1):
        c, s = phi.theta_trig(k, prec)
        lists.append((_scan(float(c), m, float(delta)), _scan(float(s), m, float(delta))))
    windows, total = _pair_windows(lists, d2f, MERGE_BUDGET)
    if stats is not None:
        stats.update(m=m, halves=sum(len(r[0]) + len(i[0]) for r, i in lists), pairs=total,
                     windows=len(windows), tested=0)
    tcache = {}
    for lo, hi in windows:
        items = []
        for k, (re, im) in enumerate(lists):
            for a0, b0, a1, b1 in _window_pairs(*re, *im, lo, hi).tolist():
                e = ev.eps(k, a0, b0, a1, b1)
                if e <= d2:
                    items.append((e, (k, a0, b0, a1, b1)))
        items.sort()
        for eps_sq, group in _tie_groups(items, ev, prec):
            winners = []
            for k, a0, b0, a1, b1 in group:
                key = (k, a0, b0, a1, b1)
                if key not in tcache:
                    x = x_from_halves(a0, b0, a1, b1)
                    if _t_formula(x, m, k) != n:
                        tcache[key] = INFINITY
                    else:
                        tcache[key] = min_t_count(x, m, k, timeout)
                        if stats is not None:
                            stats["tested"] += 1
                if tcache[key] == n:
                    winners.append(key)
            if winners:
                found = {}
                for k, a0, b0, a1, b1 in winners:
                    for u in all_unitaries(x_from_halves(a0, b0, a1, b1), m, k, timeout):
                        found.setdefault(u.key(), u)
                if not found:
                    raise ArithmeticError(f"T-count {n} predicted but no minimal unitary built")
                return eps_sq, [found[key] for key in sorted(found)]
    return d2, []


def _base_layers():
    by_t = defaultdict(list)
    for key, word in base_table().items():
        by_t[t_symbols(word)].append(key)
    return [np.array(sorted(by_t[t]), dtype=np.int64).reshape(-1, 10) for t in range(max(by_t) + 1)]


def _improves(units, prev: CupSolution, phi: Angle, eps_sq, prec: int) -> bool:
    """True when the new distance is strictly below the previous row's."""
    if abs(eps_sq - prev.eps_sq) > tie_threshold(prec):
        return eps_sq < prev.eps_sq
    hi_prec = escalated(prec)
    new = distance_sq(units[0], phi, hi_prec)
    old = distance_sq(prev.units[0][0], phi, hi_prec)
    return old - new > tie_threshold(hi_prec)


def iter_cup(
    phi: Angle,
    prec: int = DEFAULT_PREC,
    timeout: float | None = DEFAULT_TIMEOUT,
    with_circuits: bool = True,
):
    """Yield (CupSolution, info) for n = 0, 1, 2, ... without end.

    Budgets below 4 come from the base table; each later row runs the
    restricted search with the previous distance as threshold and keeps the
    previous answer unless strictly beaten.
    """
    layers = _base_layers()
    t0 = time.perf_counter()
    base = cup_table_from_layers(layers, phi, len(layers) - 1, with_circuits, prec)
    per_row = (time.perf_counter() - t0) * 1e3 / len(base)
    for row in base:
        yield row, {"millis": per_row}
    prev = base[-1]
    n = len(base)
    while True:
        t0 = time.perf_counter()
        info = {}
        row = None
        if prev.eps_sq > 0:
            with precision(prec):
                delta = gmpy2.sqrt(prev.eps_sq)
            eps_sq, units = _rcup_sq(n, phi, delta, prec, timeout, info)
            if units and _improves(units, prev, phi, eps_sq, prec):
                row = CupSolution(
                    n=n,
                    eps_sq=distance_sq(units[0], phi, prec),
                    tcount=n,
                    units=[(u, synthesize(u) if with_circuits else "") for u in units],
                )
        if row is None:
            row = CupSolution(n=n, eps_sq=prev.eps_sq, tcount=prev.tcount, units=list(prev.units))
        info["millis"] = (time.perf_counter() - t0) * 1e3
        yield row, info
        prev = row
        n += 1


def cup(
    phi: Angle,
    n_max: int,
    prec: int = DEFAULT_PREC,
    timeout: float | None = DEFAULT_TIMEOUT,
    with_circuits: bool = True,
    on_row: Callable[[CupSolution, dict], None] | None = None,
) -> list[CupSolution]:
    """CUP[n, phi] for n = 0..n_max; see :func:`iter_cup`."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    table = []
    for row, info in iter_cup(phi, prec, timeout, with_circuits):
        if row.n > n_max:
            break
        table.append(row)
        if on_row:
            on_row(row, info)
    return table
