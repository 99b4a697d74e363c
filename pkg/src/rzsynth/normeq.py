"""The relative norm equation |y|^2 = A + B sqrt2 over Z[w] / Z[sqrt2].

Solvability and the full solution set come from factoring the right-hand
side in Z[sqrt2]: a unit, a power of sqrt2 (ramified), primes over rational
p = 8n +- 1 (split) and rational q = 8n +- 3 (inert).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from itertools import product

from .ring import ZOmega, ZSqrt2

__all__ = [
    "FactorizationTimeout",
    "DEFAULT_TIMEOUT",
    "is_probable_prime",
    "integer_factor",
    "sqrt_mod",
    "gcd_zsqrt2",
    "gcd_zomega",
    "normalize_totally_positive",
    "split_prime_zsqrt2",
    "cornacchia",
    "solve_prime_norm",
    "RhsFactorization",
    "factor_rhs",
    "is_solvable",
    "solve_all",
]

DEFAULT_TIMEOUT = 30.0
LAMBDA = ZSqrt2(1, 1)  # 1 + sqrt2
FUND_UNIT = ZSqrt2(-1, 1)  # sqrt2 - 1
_SQUARE_UNIT = ZSqrt2(3, 2)  # lambda^2, generates the totally positive units
RAMIFIED_ROOT = ZOmega(1, -1, 0, 0)  # 1 - w, |1 - w|^2 = sqrt2 (sqrt2 - 1)


class FactorizationTimeout(RuntimeError):
    pass


# ---------------------------------------------------------------- integers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, int(p**0.5) + 1))]


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2^64, 64 extra seeded rounds above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _MR_BASES):
        return False
    if n < 1 << 64:
        return True
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(64))


def _brent(n: int, rng: random.Random, deadline: float) -> int:
    """A nontrivial factor of the odd composite n (Pollard rho, Brent's cycle finding)."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            if time.monotonic() > deadline:
                raise FactorizationTimeout(f"could not factor {n} in time")
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def integer_factor(n: int, timeout: float | None = DEFAULT_TIMEOUT) -> list[int]:
    """Sorted prime factors of n with multiplicity."""
    if n < 1:
        raise ValueError("integer_factor needs n >= 1")
    deadline = time.monotonic() + (timeout if timeout is not None else math.inf)
    out = []
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out.append(p)
            n //= p
    stack = [n] if n > 1 else []
    rng = random.Random(n)
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out.append(m)
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _brent(m, rng, deadline)
        stack += [d, m // d]
    return sorted(out)


def sqrt_mod(a: int, p: int) -> int | None:
    """r with r^2 = a (mod p) by Tonelli-Shanks, or None for a non-residue."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def cornacchia(d: int, p: int) -> tuple[int, int] | None:
    """(x, y) with x^2 + d y^2 = p for a prime p, or None."""
    r = sqrt_mod(-d, p)
    if r is None:
        return None
    if 2 * r < p:
        r = p - r
    a, b = p, r
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    rest = p - b * b
    if rest % d:
        return None
    y = math.isqrt(rest // d)
    if y * y * d != rest:
        return None
    return b, y


# ---------------------------------------------------------------- Euclid

def _round_div(n: int, d: int) -> int:
    # nearest integer to n / d, d > 0
    return (2 * n + d) // (2 * d)


def _divmod_zsqrt2(a: ZSqrt2, b: ZSqrt2) -> tuple[ZSqrt2, ZSqrt2]:
    nb = b.norm()
    num = a * b.aut()
    if nb < 0:
        nb, num = -nb, -num
    q = ZSqrt2(_round_div(num.a, nb), _round_div(num.b, nb))
    r = a - q * b
    if abs(r.norm()) >= abs(b.norm()):
        raise ArithmeticError("Z[sqrt2] remainder did not shrink")
    return q, r


def gcd_zsqrt2(a, b) -> ZSqrt2:
    a, b = ZSqrt2.coerce(a), ZSqrt2.coerce(b)
    while b:
        a, b = b, _divmod_zsqrt2(a, b)[1]
    return a


def _divmod_zomega(a: ZOmega, b: ZOmega) -> tuple[ZOmega, ZOmega]:
    # a / b = a conj(b) Aut(|b|^2) / N(b)
    bb = b.abs_sq()
    nb = bb.norm()
    num = a * b.conj() * bb.aut().to_zomega()
    nearest = tuple(_round_div(c, nb) for c in num.coeffs)
    q = ZOmega(*nearest)
    r = a - q * b
    if abs(r.norm()) < nb:
        return q, r
    # coordinate rounding can miss; try the other corners of the cell
    best = None
    for corner in product(*((c // nb, -(-c // nb)) for c in num.coeffs)):
        q2 = ZOmega(*corner)
        r2 = a - q2 * b
        if best is None or r2.norm() < best[1].norm():
            best = (q2, r2)
    if best[1].norm() >= nb:
        raise ArithmeticError("Z[w] remainder did not shrink")
    return best


def gcd_zomega(a, b) -> ZOmega:
    a, b = ZOmega.coerce(a), ZOmega.coerce(b)
    while b:
        a, b = b, _divmod_zomega(a, b)[1]
    return a


# ---------------------------------------------------------------- primes

def normalize_totally_positive(x: ZSqrt2) -> ZSqrt2:
    """The associate of x that is totally positive with (a, b) lexicographically least.

    Elements of negative norm are first multiplied by 1 + sqrt2 (norm -1).
    """
    if x.norm() < 0:
        x = x * LAMBDA
    if x.sign() < 0:
        x = -x
    down = _SQUARE_UNIT.aut()
    while True:
        cands = [x, x * _SQUARE_UNIT, x * down]
        best = min(cands, key=lambda v: (v.a, v.b))
        if best == x:
            return x
        x = best


def split_prime_zsqrt2(p: int) -> ZSqrt2:
    """A totally positive prime of Z[sqrt2] with norm p, for p = +-1 (mod 8)."""
    if p % 8 not in (1, 7):
        raise ValueError(f"{p} does not split in Z[sqrt2]")
    r = sqrt_mod(2, p)
    g = gcd_zsqrt2(ZSqrt2(p), ZSqrt2(r, 1))
    if abs(g.norm()) != p:
        raise ArithmeticError(f"gcd did not split {p}")
    return normalize_totally_positive(g)


def _unit_log(u: ZSqrt2) -> int:
    """t with u = (1 + sqrt2)^t (u must be such a unit)."""
    # |a| is about lambda^|t| / 2, so a float estimate plus an exact check suffices
    mag = round(math.log(2 * max(abs(u.a), 1)) / math.log(1 + math.sqrt(2)))
    for t in sorted({mag - 1, mag, mag + 1, 1 - mag, -mag, -mag - 1}, key=abs):
        if LAMBDA**t == u:
            return t
    raise ArithmeticError(f"{u} is not a power of 1+sqrt2")


def _eighth_root_mod(p: int) -> int:
    # zeta with zeta^4 = -1 (mod p), p = 1 (mod 8)
    for c in range(2, p):
        z = pow(c, (p - 1) // 8, p)
        if pow(z, 4, p) == p - 1:
            return z
    raise ArithmeticError(f"no primitive 8th root of unity modulo {p}")


def solve_prime_norm(pi, kind: str) -> ZOmega | None:
    """One y with |y|^2 = pi, for a prime pi of Z[sqrt2] of the given kind.

    kind is 'split_8n1' (pi totally positive with norm p = 1 mod 8),
    'split_8n7' (never solvable), 'q_8n_minus_3' / 'q_8n_plus_3' (pi = rational
    inert q), or 'ramified' (pi = sqrt2 (sqrt2 - 1), the associate of sqrt2 that is a norm).
    """
    if kind == "ramified":
        return RAMIFIED_ROOT
    if kind == "split_8n7":
        return None
    if kind == "q_8n_minus_3":
        q = int(ZSqrt2.coerce(pi).a)
        xy = cornacchia(1, q)
        return None if xy is None else ZOmega(xy[0], 0, xy[1], 0)  # x + y i, i = w^2
    if kind == "q_8n_plus_3":
        q = int(ZSqrt2.coerce(pi).a)
        xy = cornacchia(2, q)
        return None if xy is None else ZOmega(xy[0], xy[1], 0, xy[1])  # x + y i sqrt2
    if kind != "split_8n1":
        raise ValueError(f"unknown prime kind {kind!r}")
    pi = ZSqrt2.coerce(pi)
    p = pi.norm()
    if p % 8 != 1 or not pi.is_totally_positive(strict=True):
        return None
    zeta = _eighth_root_mod(p)
    g = gcd_zomega(ZOmega(p), ZOmega(-zeta, 1))
    gg = g.abs_sq()
    if gg.exact_div(pi) is None:
        g = g.aut()
        gg = g.abs_sq()
    unit = gg.exact_div(pi)
    if unit is None or abs(unit.norm()) != 1:
        raise ArithmeticError(f"prime splitting failed for {pi}")
    t = _unit_log(unit)  # unit = lambda^t with t even (both sides totally positive)
    if t % 2:
        raise ArithmeticError("unit balance failed")
    y = g * (LAMBDA ** (-(t // 2))).to_zomega()
    if y.abs_sq() != pi:
        raise ArithmeticError(f"prime norm solution failed for {pi}")
    return y


# ---------------------------------------------------------------- rhs

@dataclass
class RhsFactorization:
    """rhs = (sqrt2 - 1)^l0 * sqrt2^k0 * prod p_j^k_j * prod q_j^l_j."""

    l0: int
    k0: int
    split: list[tuple[ZSqrt2, int]] = field(default_factory=list)
    inert: list[tuple[int, int]] = field(default_factory=list)

    def recompose(self) -> ZSqrt2:
        v = FUND_UNIT ** self.l0 * ZSqrt2(0, 1) ** self.k0
        for p, e in self.split:
            v = v * p**e
        for q, e in self.inert:
            v = v * ZSqrt2(q) ** e
        return v

    def is_solvable(self) -> bool:
        return all(e % 2 == 0 for p, e in self.split if p.norm() % 8 == 7)

    def render(self) -> str:
        parts = [f"(r2-1)^{self.l0}", f"r2^{self.k0}"]
        parts += [f"({p.render()})^{e}" for p, e in self.split]
        parts += [f"{q}^{e}" for q, e in self.inert]
        return " * ".join(parts)


def factor_rhs(rhs, timeout: float | None = DEFAULT_TIMEOUT) -> RhsFactorization:
    rhs = ZSqrt2.coerce(rhs)
    if not rhs or not rhs.is_totally_positive():
        raise ValueError(f"{rhs.render()} is not a nonzero totally positive element")
    rest = rhs
    k0 = 0
    while rest.is_div_sqrt2():
        rest = rest.div_sqrt2()
        k0 += 1
    split, inert = [], []
    primes = sorted(set(integer_factor(abs(rest.norm()), timeout))) if abs(rest.norm()) > 1 else []
    for p in primes:
        if p == 2:
            raise ArithmeticError("sqrt2 left after removing the ramified part")
        if p % 8 in (3, 5):
            e = 0
            while (r := rest.exact_div(ZSqrt2(p))) is not None:
                rest, e = r, e + 1
            inert.append((p, e))
            continue
        pi = split_prime_zsqrt2(p)
        for cand in (pi, normalize_totally_positive(pi.aut())):
            e = 0
            while (r := rest.exact_div(cand)) is not None:
                rest, e = r, e + 1
            if e:
                split.append((cand, e))
    if abs(rest.norm()) != 1:
        raise ArithmeticError(f"unit part {rest} left with non-unit norm")
    l0 = -_unit_log(rest)  # (sqrt2 - 1) = (1 + sqrt2)^-1
    fac = RhsFactorization(l0, k0, split, inert)
    if fac.recompose() != rhs:
        raise ArithmeticError(f"factorization of {rhs.render()} does not recompose")
    if (l0 + k0) % 2:
        raise ArithmeticError("unit parity l0 + k0 is odd for a totally positive rhs")
    return fac


def is_solvable(rhs, timeout: float | None = DEFAULT_TIMEOUT) -> bool:
    rhs = ZSqrt2.coerce(rhs)
    if not rhs.is_totally_positive():
        return False
    if not rhs:
        return True
    return factor_rhs(rhs, timeout).is_solvable()


def _choices(y: ZOmega, e: int) -> list[ZOmega]:
    yc = y.conj()
    return [y**a * yc ** (e - a) for a in range(e + 1)]


def solve_all(rhs, timeout: float | None = DEFAULT_TIMEOUT) -> list[ZOmega]:
    """Every y in Z[w] with y conj(y) = rhs (sorted by coefficients)."""
    rhs = ZSqrt2.coerce(rhs)
    if not rhs:
        return [ZOmega(0)]
    if not rhs.is_totally_positive():
        return []
    fac = factor_rhs(rhs, timeout)
    if not fac.is_solvable():
        return []
    # |1 - w|^(2 k0) = sqrt2^k0 (sqrt2 - 1)^k0; the leftover unit is an even power
    base = RAMIFIED_ROOT**fac.k0 * (FUND_UNIT ** ((fac.l0 - fac.k0) // 2)).to_zomega()
    factors = []
    for p, e in fac.split:
        if p.norm() % 8 == 7:
            factors.append([(p ** (e // 2)).to_zomega()])
        else:
            factors.append(_choices(solve_prime_norm(p, "split_8n1"), e))
    for q, e in fac.inert:
        kind = "q_8n_minus_3" if q % 8 == 5 else "q_8n_plus_3"
        factors.append(_choices(solve_prime_norm(ZSqrt2(q), kind), e))
    sols = set()
    for combo in product(*factors):
        y = base
        for f in combo:
            y = y * f
        for g in range(8):
            sols.add(y.mul_omega(g))
    out = sorted(sols, key=lambda v: v.coeffs)
    for y in out:
        if y.abs_sq() != rhs:
            raise ArithmeticError(f"solution {y.render()} fails the norm check")
    return out
