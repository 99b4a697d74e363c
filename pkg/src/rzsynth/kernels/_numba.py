"""numba-compiled kernels with the same contracts as the numpy path."""

import math

import numpy as np
from numba import njit

SQRT2 = math.sqrt(2.0)


@njit(cache=True)
def _rot_into(c0, c1, c2, c3, k, out, off):
    for _ in range(k % 8):
        c0, c1, c2, c3 = -c3, c0, c1, c2
    out[off] = c0
    out[off + 1] = c1
    out[off + 2] = c2
    out[off + 3] = c3


@njit(cache=True)
def _canon_row(row, out):
    # reduce by sqrt2 while both x and y allow it
    while row[9] > 0:
        ok = True
        for base in (0, 4):
            if (row[base] - row[base + 2]) % 2 != 0 or (row[base + 1] - row[base + 3]) % 2 != 0:
                ok = False
        if not ok:
            break
        for base in (0, 4):
            c0, c1, c2, c3 = row[base], row[base + 1], row[base + 2], row[base + 3]
            row[base] = (c1 - c3) // 2
            row[base + 1] = (c0 + c2) // 2
            row[base + 2] = (c1 + c3) // 2
            row[base + 3] = (c2 - c0) // 2
        row[9] -= 1
    best = np.empty(10, dtype=np.int64)
    cand = np.empty(10, dtype=np.int64)
    for g in range(8):
        _rot_into(row[0], row[1], row[2], row[3], g, cand, 0)
        _rot_into(row[4], row[5], row[6], row[7], g, cand, 4)
        cand[8] = (row[8] + 2 * g) % 8
        cand[9] = row[9]
        if g == 0:
            best[:] = cand
            continue
        for i in range(10):
            if cand[i] < best[i]:
                best[:] = cand
                break
            if cand[i] > best[i]:
                break
    out[:] = best


@njit(cache=True)
def canonicalize(rows):
    n = rows.shape[0]
    out = np.empty((n, 10), dtype=np.int64)
    tmp = np.empty(10, dtype=np.int64)
    for i in range(n):
        tmp[:] = rows[i]
        _canon_row(tmp, out[i])
    return out


@njit(cache=True)
def _zmul(a0, a1, a2, a3, b0, b1, b2, b3):
    return (
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
    )


@njit(cache=True)
def product_canon(left, right):
    nl, nr = left.shape[0], right.shape[0]
    out = np.empty((nl * nr, 10), dtype=np.int64)
    row = np.empty(10, dtype=np.int64)
    rot = np.empty(4, dtype=np.int64)
    for i in range(nl):
        x10, x11, x12, x13 = left[i, 0], left[i, 1], left[i, 2], left[i, 3]
        y10, y11, y12, y13 = left[i, 4], left[i, 5], left[i, 6], left[i, 7]
        k1 = left[i, 8]
        # conj(c) = (c0, -c3, -c2, -c1)
        cy0, cy1, cy2, cy3 = y10, -y13, -y12, -y11
        cx0, cx1, cx2, cx3 = x10, -x13, -x12, -x11
        for j in range(nr):
            x20, x21, x22, x23 = right[j, 0], right[j, 1], right[j, 2], right[j, 3]
            y20, y21, y22, y23 = right[j, 4], right[j, 5], right[j, 6], right[j, 7]
            p0, p1, p2, p3 = _zmul(x10, x11, x12, x13, x20, x21, x22, x23)
            q0, q1, q2, q3 = _zmul(cy0, cy1, cy2, cy3, y20, y21, y22, y23)
            _rot_into(q0, q1, q2, q3, k1, rot, 0)
            row[0] = p0 - rot[0]
            row[1] = p1 - rot[1]
            row[2] = p2 - rot[2]
            row[3] = p3 - rot[3]
            p0, p1, p2, p3 = _zmul(y10, y11, y12, y13, x20, x21, x22, x23)
            q0, q1, q2, q3 = _zmul(cx0, cx1, cx2, cx3, y20, y21, y22, y23)
            _rot_into(q0, q1, q2, q3, k1, rot, 0)
            row[4] = p0 + rot[0]
            row[5] = p1 + rot[1]
            row[6] = p2 + rot[2]
            row[7] = p3 + rot[3]
            row[8] = (k1 + right[j, 8]) % 8
            row[9] = left[i, 9] + right[j, 9]
            _canon_row(row, out[i * nr + j])
    return out


@njit(cache=True)
def distance_sq(rows, cos_t, sin_t):
    n = rows.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        re = rows[i, 0] + (rows[i, 1] - rows[i, 3]) / SQRT2
        im = rows[i, 2] + (rows[i, 1] + rows[i, 3]) / SQRT2
        k = rows[i, 8]
        proj = re * cos_t[k] + im * sin_t[k]
        out[i] = 1.0 - abs(proj) * 2.0 ** (-0.5 * rows[i, 9])
    return out


@njit(cache=True)
def _halves_count(target, m, tol, bmin, bmax, limit):
    total = 0
    for b in range(bmin, bmax + 1):
        v = target - b * SQRT2
        amin = math.ceil(v - tol)
        amax = math.floor(v + tol)
        for a in range(amin, amax + 1):
            if a * a + 2 * b * b <= limit:
                total += 1
    return total


@njit(cache=True)
def _halves_fill(target, m, tol, bmin, bmax, limit, aa, bb):
    i = 0
    for b in range(bmin, bmax + 1):
        v = target - b * SQRT2
        amin = math.ceil(v - tol)
        amax = math.floor(v + tol)
        for a in range(amin, amax + 1):
            if a * a + 2 * b * b <= limit:
                aa[i] = a
                bb[i] = b
                i += 1


def halves_scan(target, m, tol):
    r = math.sqrt(2.0**m)
    bmin, bmax = int(math.floor(-r)), int(math.ceil(r))
    limit = 1 << m
    total = _halves_count(float(target), m, float(tol), bmin, bmax, limit)
    aa = np.empty(total, dtype=np.int64)
    bb = np.empty(total, dtype=np.int64)
    _halves_fill(float(target), m, float(tol), bmin, bmax, limit, aa, bb)
    return aa, bb
