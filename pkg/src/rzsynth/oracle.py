"""Brute-force reference: breadth-first enumeration of exact unitaries by T-count.

Layer t holds every phase-canonical unitary with T-count exactly t.  Layer
t + 1 comes from C T V for the 24 Cliffords C and V in layer t, minus what
already sits in layers t - 1 and t (T-count moves by at most one per T).
"""

from __future__ import annotations

import os

import gmpy2
import numpy as np
from gmpy2 import mpfr

from . import kernels
from .cliffordt import (
    BASE_TABLE_MAX_TCOUNT,
    GATES,
    ExactUnitary,
    clifford_group,
    key_to_text,
    synthesize,
)
from .highprec import DEFAULT_PREC, Angle, escalated, precision, tie_threshold
from .solution import CupSolution

__all__ = [
    "ORACLE_BOUND",
    "OracleBudgetExceeded",
    "enumerate_layers",
    "enumerate_upto_tcount",
    "build_base_table",
    "render_base_table",
    "cup_bruteforce",
    "cup_table_bruteforce",
    "cup_table_from_layers",
    "exact_distance_sq",
]

ORACLE_BOUND = int(os.environ.get("RZSYNTH_ORACLE_BOUND", "14"))
# double-precision screen slack on squared distances (errors are ~1e-16)
_SCREEN_SLACK = 1e-12


class OracleBudgetExceeded(ValueError):
    pass


# fixed odd multipliers for a 64-bit row hash; equal hashes are always confirmed exactly
_HASH_MULT = np.array(
    [0x9E3779B97F4A7C15, 0xC2B2AE3D27D4EB4F, 0x165667B19E3779F9, 0xD6E8FEB86659FD93,
     0xFF51AFD7ED558CCD, 0xC4CEB9FE1A85EC53, 0x94D049BB133111EB, 0xBF58476D1CE4E5B9,
     0x2545F4914F6CDD1D, 0x9FB21C651E98DF25],
    dtype=np.uint64,
)


def _mix(z):
    # splitmix64 finalizer
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _hash_rows(rows):
    h = np.zeros(len(rows), dtype=np.uint64)
    with np.errstate(over="ignore"):
        for col in range(10):
            h = _mix(h + rows[:, col].view(np.uint64) * _HASH_MULT[col])
    return h


def _sort_rows(rows):
    return rows[np.lexsort(rows.T[::-1])] if len(rows) else rows.reshape(0, 10)


def _dedupe(rows):
    """Distinct rows (order unspecified but deterministic) and their hashes."""
    h = _hash_rows(rows)
    order = np.argsort(h, kind="stable")
    h, rows = h[order], rows[order]
    same_h = h[1:] == h[:-1]
    same_r = (rows[1:] == rows[:-1]).all(axis=1)
    if (same_h & ~same_r).any():  # genuine collision: fall back to an exact sort
        rows = np.unique(rows, axis=0)
        return rows, _hash_rows(rows)
    keep = np.concatenate([[True], ~same_h])
    return rows[keep], h[keep]


def _drop_seen(rows, h, seen_rows, seen_h):
    order = np.argsort(seen_h, kind="stable")
    seen_h, seen_rows = seen_h[order], seen_rows[order]
    pos = np.searchsorted(seen_h, h)
    hit = pos < len(seen_h)
    hit[hit] = seen_h[pos[hit]] == h[hit]
    idx = np.nonzero(hit)[0]
    same = (seen_rows[pos[idx]] == rows[idx]).all(axis=1)
    for i in idx[~same]:  # hash collision: scan the whole equal-hash run
        a, b = np.searchsorted(seen_h, h[i], "left"), np.searchsorted(seen_h, h[i], "right")
        hit[i] = bool((seen_rows[a:b] == rows[i]).all(axis=1).any())
    return rows[~hit]


def _clifford_rows():
    return np.array(sorted(clifford_group()), dtype=np.int64)


def _ct_rows():
    t = GATES["T"]
    rows = [(ExactUnitary.from_key(k) @ t).as_tuple() for k in sorted(clifford_group())]
    return kernels.canonicalize(np.array(rows, dtype=np.int64))


_LAYERS: list[np.ndarray] = []


def enumerate_layers(n: int, bound: int | None = None, chunk: int | None = None) -> list[np.ndarray]:
    """Layers 0..n as sorted int64 arrays of phase-canonical keys (cached per process)."""
    bound = ORACLE_BOUND if bound is None else bound
    if n > bound:
        raise OracleBudgetExceeded(f"T-count {n} exceeds the oracle bound {bound}")
    if n < 0:
        raise ValueError("T-count must be non-negative")
    if chunk is None:
        chunk = 100_000 if kernels.BACKEND == "numba" else 10_000
    if not _LAYERS:
        _LAYERS.append(_clifford_rows())
    ct = _ct_rows()
    while len(_LAYERS) <= n:
        prev = _LAYERS[-1]
        older = _LAYERS[-2] if len(_LAYERS) > 1 else prev[:0]
        seen = np.concatenate([older, prev])
        seen_h = _hash_rows(seen)
        parts = []
        for start in range(0, len(prev), chunk):
            prods, h = _dedupe(kernels.product_canon(ct, prev[start:start + chunk]))
            parts.append(_drop_seen(prods, h, seen, seen_h))
        _LAYERS.append(_sort_rows(_dedupe(np.concatenate(parts))[0]))
    return _LAYERS[: n + 1]


def enumerate_upto_tcount(n: int, bound: int | None = None) -> set[tuple[int, ...]]:
    """Phase-canonical keys of all exact unitaries with T-count at most n."""
    out = set()
    for layer in enumerate_layers(n, bound):
        out.update(map(tuple, layer.tolist()))
    return out


def build_base_table(max_tcount: int = BASE_TABLE_MAX_TCOUNT) -> dict[tuple[int, ...], str]:
    """Key -> word with exactly T-count T symbols, for every unitary up to ``max_tcount``."""
    cliff = sorted(clifford_group().items())
    table = dict(cliff)
    ct = [(w + "T", ExactUnitary.from_key(k) @ GATES["T"]) for k, w in cliff]
    layer = [(w, ExactUnitary.from_key(k)) for k, w in cliff]
    for _ in range(max_tcount):
        nxt = []
        for cword, c in ct:
            for vword, v in layer:
                u = c @ v
                key = u.key()
                if key not in table:
                    table[key] = cword + vword
                    nxt.append((cword + vword, ExactUnitary.from_key(key)))
        layer = nxt
    return table


def render_base_table(table) -> str:
    lines = [
        "# phase-canonical key (x0..x3,y0..y3,k,m) and a T-optimal word",
        "# generated by rzsynth.oracle.build_base_table",
    ]
    for key in sorted(table):
        lines.append(f"{key_to_text(key)} {table[key]}")
    return "\n".join(lines) + "\n"


def exact_distance_sq(u: ExactUnitary, phi: Angle, prec: int = DEFAULT_PREC):
    """1 - |tr(U R_z(phi)^dagger)| / 2 from the full matrix trace, at ``prec`` bits."""
    # tr = (x e^{i phi/2} + conj(x) w^k e^{-i phi/2}) / sqrt2^m
    c, s = phi.theta_trig(0, prec + 32)  # (cos(phi/2), -sin(phi/2))
    d = u.x.conj().mul_omega(u.k)
    with precision(prec + 32):
        r = 1 / gmpy2.sqrt(mpfr(2))
        xr = u.x.c0 + (u.x.c1 - u.x.c3) * r
        xi = u.x.c2 + (u.x.c1 + u.x.c3) * r
        dr = d.c0 + (d.c1 - d.c3) * r
        di = d.c2 + (d.c1 + d.c3) * r
        # (xr + i xi)(c - i s) + (dr + i di)(c + i s)
        tr_re = xr * c + xi * s + dr * c - di * s
        tr_im = xi * c - xr * s + di * c + dr * s
        val = 1 - gmpy2.hypot(tr_re, tr_im) / (2 * gmpy2.sqrt(mpfr(2)) ** u.m)
    with precision(prec):
        return mpfr(val)


def _resolve(cands, phi, prec=DEFAULT_PREC):
    """Among (layer, key) candidates pick the exact minimum and its tie set."""
    vals = [(exact_distance_sq(ExactUnitary.from_key(k), phi, prec), t, k) for t, k in cands]
    best = min(v for v, _, _ in vals)
    thr = tie_threshold(prec)
    near = [(t, k) for v, t, k in vals if v - best <= thr]
    if len(near) > 1:
        hi_prec = escalated(prec)
        hi = [(exact_distance_sq(ExactUnitary.from_key(k), phi, hi_prec), t, k) for t, k in near]
        best_hi = min(v for v, _, _ in hi)
        thr_hi = tie_threshold(hi_prec)
        near = [(t, k) for v, t, k in hi if v - best_hi <= thr_hi]
        with precision(prec):
            best = mpfr(best_hi)
    return best, near


def cup_table_from_layers(
    layers, phi: Angle, n_max: int, with_circuits: bool = True, prec: int = DEFAULT_PREC
) -> list[CupSolution]:
    """CUP[n, phi] for n = 0..n_max given every unitary of T-count t in ``layers[t]``."""
    cos_t, sin_t = phi.theta_table()
    dists = [kernels.distance_sq(layer, cos_t, sin_t) for layer in layers[: n_max + 1]]
    table = []
    running = np.inf
    for n in range(n_max + 1):
        if len(dists[n]):
            running = min(running, float(dists[n].min()))
        cands = []
        for t in range(n + 1):
            idx = np.nonzero(dists[t] <= running + _SCREEN_SLACK)[0]
            cands.extend((t, tuple(layers[t][i].tolist())) for i in idx)
        best, near = _resolve(cands, phi, prec)
        tmin = min(t for t, _ in near)
        units = []
        for t, k in sorted(near):
            if t != tmin:
                continue
            u = ExactUnitary.from_key(k)
            units.append((u, synthesize(u) if with_circuits else ""))
        table.append(CupSolution(n=n, eps_sq=best, tcount=tmin, units=units))
    return table


def cup_table_bruteforce(
    phi: Angle,
    n_max: int,
    bound: int | None = None,
    with_circuits: bool = True,
    prec: int = DEFAULT_PREC,
) -> list[CupSolution]:
    """CUP[n, phi] for n = 0..n_max by scanning every unitary with T-count <= n_max."""
    return cup_table_from_layers(enumerate_layers(n_max, bound), phi, n_max, with_circuits, prec)


def cup_bruteforce(n: int, phi: Angle, bound: int | None = None, with_circuits: bool = True) -> CupSolution:
    """Exact CUP[n, phi] (distance and minimal unitaries) by exhaustive scan."""
    return cup_table_bruteforce(phi, n, bound, with_circuits)[-1]
