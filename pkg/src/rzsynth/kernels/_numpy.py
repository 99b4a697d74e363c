"""Vectorized numpy kernels.  Reference path; the numba versions must agree bit for bit.

Unitary rows are int64[10]: x0..x3, y0..y3, k, m for
U[x, y, k] / sqrt2**m with x = x0 + x1 w + x2 w^2 + x3 w^3.
"""

import numpy as np

SQRT2 = np.sqrt(2.0)


def _omega_power_matrices():
    # P[k] @ c gives the coefficients of w^k * c
    mats = np.zeros((8, 4, 4), dtype=np.int64)
    for k in range(8):
        for j in range(4):
            t = j + k
            sign = -1 if (t // 4) % 2 else 1
            mats[k, t % 4, j] = sign
    return mats


_OMEGA_POW = _omega_power_matrices()


def _zmul(a, b):
    a0, a1, a2, a3 = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    b0, b1, b2, b3 = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    return np.stack(
        [
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        ],
        axis=1,
    )


def _conj(a):
    return np.stack([a[:, 0], -a[:, 3], -a[:, 2], -a[:, 1]], axis=1)


def _rot(a, k):
    return np.einsum("nij,nj->ni", _OMEGA_POW[k % 8], a)


def _reduce_sqrt2(rows):
    x, y, m = rows[:, 0:4], rows[:, 4:8], rows[:, 9]
    while True:
        div = (
            (m > 0)
            & ((x[:, 0] - x[:, 2]) % 2 == 0)
            & ((x[:, 1] - x[:, 3]) % 2 == 0)
            & ((y[:, 0] - y[:, 2]) % 2 == 0)
            & ((y[:, 1] - y[:, 3]) % 2 == 0)
        )
        if not div.any():
            return rows
        for sl in (slice(0, 4), slice(4, 8)):
            c = rows[div, sl]
            rows[div, sl] = np.stack(
                [
                    (c[:, 1] - c[:, 3]) // 2,
                    (c[:, 0] + c[:, 2]) // 2,
                    (c[:, 1] + c[:, 3]) // 2,
                    (c[:, 2] - c[:, 0]) // 2,
                ],
                axis=1,
            )
        rows[div, 9] -= 1
        x, y, m = rows[:, 0:4], rows[:, 4:8], rows[:, 9]


def canonicalize(rows):
    """Reduce m and pick the lexicographically least phase multiple, row by row."""
    rows = _reduce_sqrt2(np.array(rows, dtype=np.int64, copy=True))
    n = rows.shape[0]
    variants = np.empty((n, 8, 10), dtype=np.int64)
    for g in range(8):
        variants[:, g, 0:4] = rows[:, 0:4] @ _OMEGA_POW[g].T
        variants[:, g, 4:8] = rows[:, 4:8] @ _OMEGA_POW[g].T
        variants[:, g, 8] = (rows[:, 8] + 2 * g) % 8
        variants[:, g, 9] = rows[:, 9]
    alive = np.ones((n, 8), dtype=bool)
    big = np.iinfo(np.int64).max
    for col in range(10):
        vals = np.where(alive, variants[:, :, col], big)
        alive &= vals == vals.min(axis=1)[:, None]
    pick = alive.argmax(axis=1)
    return variants[np.arange(n), pick]


def product_canon(left, right):
    """Canonical keys of left[i] @ right[j], laid out as out[i * len(right) + j]."""
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    nl, nr = left.shape[0], right.shape[0]
    L = np.repeat(left, nr, axis=0)
    R = np.tile(right, (nl, 1))
    x1, y1, k1 = L[:, 0:4], L[:, 4:8], L[:, 8]
    x2, y2 = R[:, 0:4], R[:, 4:8]
    x = _zmul(x1, x2) - _rot(_zmul(_conj(y1), y2), k1)
    y = _zmul(y1, x2) + _rot(_zmul(_conj(x1), y2), k1)
    out = np.empty((nl * nr, 10), dtype=np.int64)
    out[:, 0:4] = x
    out[:, 4:8] = y
    out[:, 8] = (k1 + R[:, 8]) % 8
    out[:, 9] = L[:, 9] + R[:, 9]
    return canonicalize(out)


def distance_sq(rows, cos_t, sin_t):
    """1 - |Re(x e^{-i theta_k})| / sqrt2^m per row, theta_k tabulated for k = 0..7."""
    rows = np.asarray(rows, dtype=np.int64)
    c = rows[:, 0:4].astype(np.float64)
    re = c[:, 0] + (c[:, 1] - c[:, 3]) / SQRT2
    im = c[:, 2] + (c[:, 1] + c[:, 3]) / SQRT2
    k = rows[:, 8]
    proj = re * cos_t[k] + im * sin_t[k]
    return 1.0 - np.abs(proj) * np.power(2.0, -0.5 * rows[:, 9])


def halves_scan(target, m, tol):
    """All (a, b) with a^2 + 2 b^2 <= 2^m and |target - (a + b sqrt2)| <= tol."""
    r = np.sqrt(2.0**m)
    b = np.arange(int(np.floor(-r)), int(np.ceil(r)) + 1, dtype=np.int64)
    v = target - b * SQRT2
    amin = np.ceil(v - tol).astype(np.int64)
    amax = np.floor(v + tol).astype(np.int64)
    counts = np.maximum(amax - amin + 1, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    bb = np.repeat(b, counts)
    starts = np.repeat(amin, counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    aa = starts + offsets
    keep = aa * aa + 2 * bb * bb <= (1 << m)
    return aa[keep], bb[keep]
