"""Multi-precision floats (gmpy2 mpfr) and target angles for R_z(phi)."""

from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

DEFAULT_PREC = 160
ESCALATED_PREC = 512
# values closer than 2^-(prec - TIE_GUARD_BITS) are re-checked at higher precision
TIE_GUARD_BITS = 30

__all__ = [
    "DEFAULT_PREC",
    "ESCALATED_PREC",
    "Angle",
    "parse_angle",
    "precision",
    "tie_threshold",
    "escalated",
    "hexfloat",
    "parse_hexfloat",
]


@contextmanager
def precision(bits: int):
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def escalated(prec: int) -> int:
    """Precision used to re-compare values that tie at ``prec``."""
    return max(ESCALATED_PREC, 2 * prec)


def tie_threshold(prec: int):
    return mpfr(2) ** (-(prec - TIE_GUARD_BITS))


def hexfloat(x, bits: int = 256) -> str:
    """Exact text form ``0x<mantissa>p<exp>`` after rounding x to ``bits`` (nearest-even)."""
    with precision(bits):
        y = mpfr(x)
    if y == 0:
        return "0x0p0"
    man, exp = y.as_mantissa_exp()
    sign = "-" if man < 0 else ""
    return f"{sign}0x{abs(int(man)):x}p{int(exp)}"


def parse_hexfloat(text: str, bits: int = 256):
    m = re.fullmatch(r"(-?)0x([0-9a-f]+)p(-?\d+)", text.strip())
    if not m:
        raise ValueError(f"bad hex float {text!r}")
    man = int(m.group(2), 16)
    if m.group(1):
        man = -man
    with precision(bits):
        return mpfr(man) * mpfr(2) ** int(m.group(3))


_RATIONAL_PI = re.compile(
    r"(?P<sign>[+-]?)(?P<num>\d+)?\*?pi(?:\*(?P<mul>\d+))?(?:/(?P<den>\d+))?"
)


@dataclass(frozen=True)
class Angle:
    """Rotation angle phi of R_z(phi): an exact rational multiple of pi, or decimal radians."""

    text: str
    pi_multiple: Fraction | None = None
    radians_literal: str | None = None
    _trig: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_pi_fraction(cls, q) -> Angle:
        q = Fraction(q)
        if q == 0:
            text = "0"
        elif q.denominator == 1:
            text = f"{q.numerator}pi" if q.numerator != 1 else "pi"
        else:
            num = "" if q.numerator == 1 else ("-" if q.numerator == -1 else f"{q.numerator}")
            text = f"{num}pi/{q.denominator}"
        return cls(text, pi_multiple=q)

    @classmethod
    def from_radians(cls, value) -> Angle:
        lit = str(value)
        return cls(f"rad:{lit}", radians_literal=lit)

    def radians(self, prec: int = DEFAULT_PREC):
        with precision(prec + 16):
            if self.pi_multiple is not None:
                q = self.pi_multiple
                return gmpy2.const_pi() * q.numerator / q.denominator
            return mpfr(self.radians_literal)

    def __float__(self):
        return float(self.radians(64))

    def theta_trig(self, k: int, prec: int = DEFAULT_PREC):
        """(cos theta_k, sin theta_k) with theta_k = pi k / 8 - phi / 2."""
        key = (k % 16, prec)
        hit = self._trig.get(key)
        if hit is not None:
            return hit
        with precision(prec + 16):
            if self.pi_multiple is not None:
                q = Fraction(k, 8) - self.pi_multiple / 2
                theta = gmpy2.const_pi() * q.numerator / q.denominator
            else:
                theta = gmpy2.const_pi() * k / 8 - mpfr(self.radians_literal) / 2
            c, s = gmpy2.cos(theta), gmpy2.sin(theta)
        with precision(prec):
            out = (mpfr(c), mpfr(s))
        self._trig[key] = out
        return out

    def theta_table(self, prec: int = DEFAULT_PREC):
        """Double-precision cos/sin of theta_k for k = 0..7 (for vectorized screens)."""
        import numpy as np

        cs = [self.theta_trig(k, prec) for k in range(8)]
        return (
            np.array([float(c) for c, _ in cs]),
            np.array([float(s) for _, s in cs]),
        )

    def __str__(self):
        return self.text


def parse_angle(text: str) -> Angle:
    """Parse ``pi/16``, ``2pi*17/1000``, ``3*pi/4``, ``0`` or ``rad:0.1``."""
    s = text.strip().replace(" ", "")
    if s.startswith("rad:"):
        lit = s[4:]
        try:
            float(lit)
            mpfr(lit)
        except ValueError:
            raise ValueError(f"bad radian literal {text!r}") from None
        return Angle(s, radians_literal=lit)
    if re.fullmatch(r"[+-]?\d+", s):
        if int(s) != 0:
            raise ValueError(f"bare integer angle {text!r}: use rad:{s} or a multiple of pi")
        return Angle.from_pi_fraction(0)
    m = _RATIONAL_PI.fullmatch(s)
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    q = Fraction(int(m.group("num") or 1) * int(m.group("mul") or 1), int(m.group("den") or 1))
    if m.group("sign") == "-":
        q = -q
    return Angle(s, pi_multiple=q)
