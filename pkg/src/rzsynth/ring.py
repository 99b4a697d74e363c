"""Exact arithmetic in the cyclotomic integers Z[w] (w = exp(i*pi/4)) and Z[sqrt2].

Both types are immutable and hashable.  Coefficients are Python ints, so
nothing ever overflows.
"""

from __future__ import annotations

import cmath
import math
import re

__all__ = [
    "ZSqrt2",
    "ZOmega",
    "BOTTOM",
    "Bottom",
    "sde",
    "InconsistentArithmetic",
]

SQRT2 = math.sqrt(2.0)
OMEGA = cmath.exp(1j * math.pi / 4)


class InconsistentArithmetic(ArithmeticError):
    """Raised when an exact identity that must hold fails (a bug guard)."""


class Bottom:
    """The value of sde(0).  Ordering comparisons with it are errors."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("BOTTOM")

    def _refuse(self, other):
        raise TypeError("sde BOTTOM (sde of zero) is not comparable")

    __lt__ = __le__ = __gt__ = __ge__ = _refuse


BOTTOM = Bottom()


def _sign_a_plus_b_sqrt2(a: int, b: int) -> int:
    # exact sign of a + b*sqrt(2)
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    d = a * a - 2 * b * b
    if a > 0:
        return 1 if d > 0 else -1
    return -1 if d > 0 else 1


class ZSqrt2:
    """a + b*sqrt(2) with integer a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, name, value):
        raise AttributeError("ZSqrt2 is immutable")

    @classmethod
    def coerce(cls, v) -> ZSqrt2:
        if isinstance(v, ZSqrt2):
            return v
        if isinstance(v, int):
            return cls(v, 0)
        raise TypeError(f"cannot coerce {type(v).__name__} to ZSqrt2")

    def __repr__(self):
        return f"ZSqrt2({self.a}, {self.b})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        """Text form ``a+b*r2`` (parseable by :meth:`parse`)."""
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*r2"
        return f"{self.a}{self.b:+d}*r2"

    @classmethod
    def parse(cls, text: str) -> ZSqrt2:
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Z[sqrt2] literal")
        a = b = 0
        pos = 0
        for m in _TERM_R2.finditer(s):
            if m.start() != pos or not m.group(0):
                raise ValueError(f"cannot parse Z[sqrt2] literal {text!r}")
            pos = m.end()
            coef, unit = m.group("coef"), m.group("unit")
            sign = -1 if m.group("sign") == "-" else 1
            if unit:
                c = int(coef.rstrip("*")) if coef else 1
                b += sign * c
            else:
                if not coef:
                    raise ValueError(f"cannot parse Z[sqrt2] literal {text!r}")
                a += sign * int(coef)
            if pos == len(s):
                break
        if pos != len(s):
            raise ValueError(f"cannot parse Z[sqrt2] literal {text!r}")
        return cls(a, b)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, ZSqrt2):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash(("ZSqrt2", self.a, self.b))

    def __add__(self, other):
        try:
            o = ZSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return ZSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return ZSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = ZSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return ZSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = ZSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return ZSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.unit_inverse() ** (-e)
        result, base = ZSqrt2(1, 0), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __float__(self):
        return self.a + self.b * SQRT2

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def aut(self) -> ZSqrt2:
        """sqrt2 -> -sqrt2."""
        return ZSqrt2(self.a, -self.b)

    def norm(self) -> int:
        return self.a * self.a - 2 * self.b * self.b

    def sign(self) -> int:
        return _sign_a_plus_b_sqrt2(self.a, self.b)

    def is_totally_positive(self, strict: bool = False) -> bool:
        s1, s2 = self.sign(), self.aut().sign()
        if strict:
            return s1 > 0 and s2 > 0
        return s1 >= 0 and s2 >= 0

    def unit_inverse(self) -> ZSqrt2:
        n = self.norm()
        if n == 1:
            return self.aut()
        if n == -1:
            return -self.aut()
        raise ZeroDivisionError(f"{self} is not a unit of Z[sqrt2]")

    def divides(self, other: ZSqrt2) -> bool:
        return other.exact_div(self) is not None

    def exact_div(self, d: ZSqrt2) -> ZSqrt2 | None:
        """self / d if it lies in Z[sqrt2], else None."""
        d = ZSqrt2.coerce(d)
        n = d.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[sqrt2]")
        num = self * d.aut()
        if num.a % n or num.b % n:
            return None
        return ZSqrt2(num.a // n, num.b // n)

    def is_div_sqrt2(self) -> bool:
        return self.a % 2 == 0

    def div_sqrt2(self) -> ZSqrt2:
        if self.a % 2:
            raise ValueError(f"{self} is not divisible by sqrt2")
        return ZSqrt2(self.b, self.a // 2)

    def mul_sqrt2(self) -> ZSqrt2:
        return ZSqrt2(2 * self.b, self.a)

    def to_zomega(self) -> ZOmega:
        # sqrt2 = w - w^3
        return ZOmega(self.a, self.b, 0, -self.b)


class ZOmega:
    """c0 + c1*w + c2*w^2 + c3*w^3 with w = exp(i*pi/4) and w^4 = -1."""

    __slots__ = ("c0", "c1", "c2", "c3")

    def __init__(self, c0: int = 0, c1: int = 0, c2: int = 0, c3: int = 0):
        object.__setattr__(self, "c0", int(c0))
        object.__setattr__(self, "c1", int(c1))
        object.__setattr__(self, "c2", int(c2))
        object.__setattr__(self, "c3", int(c3))

    def __setattr__(self, name, value):
        raise AttributeError("ZOmega is immutable")

    @classmethod
    def from_powers(cls, coeffs) -> ZOmega:
        """Build from any list of coefficients of w^0, w^1, ... (w^4 = -1 folded in)."""
        c = [0, 0, 0, 0]
        for j, v in enumerate(coeffs):
            q, r = divmod(j, 4)
            c[r] += -v if q % 2 else v
        return cls(*c)

    @classmethod
    def coerce(cls, v) -> ZOmega:
        if isinstance(v, ZOmega):
            return v
        if isinstance(v, int):
            return cls(v)
        if isinstance(v, ZSqrt2):
            return v.to_zomega()
        raise TypeError(f"cannot coerce {type(v).__name__} to ZOmega")

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"ZOmega({self.c0}, {self.c1}, {self.c2}, {self.c3})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        """Text form ``a0+a1*w+a2*w^2+a3*w^3`` (zero terms omitted)."""
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = ("", "w", "w^2", "w^3")[j]
            if not mono:
                term = f"{c:+d}"
            else:
                term = f"{c:+d}*{mono}"
            parts.append(term)
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    @classmethod
    def parse(cls, text: str) -> ZOmega:
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Z[w] literal")
        c = [0, 0, 0, 0]
        pos = 0
        for m in _TERM_W.finditer(s):
            if m.start() != pos or not m.group(0):
                raise ValueError(f"cannot parse Z[w] literal {text!r}")
            pos = m.end()
            coef, unit, power = m.group("coef"), m.group("unit"), m.group("pow")
            sign = -1 if m.group("sign") == "-" else 1
            if unit:
                j = int(power) if power else 1
                v = int(coef.rstrip("*")) if coef else 1
            else:
                if not coef:
                    raise ValueError(f"cannot parse Z[w] literal {text!r}")
                j, v = 0, int(coef)
            q, r = divmod(j, 4)
            c[r] += sign * (-v if q % 2 else v)
            if pos == len(s):
                break
        if pos != len(s):
            raise ValueError(f"cannot parse Z[w] literal {text!r}")
        return cls(*c)

    def __eq__(self, other):
        if isinstance(other, ZOmega):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, ZSqrt2)):
            return self == ZOmega.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(("ZOmega",) + self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        try:
            o = ZOmega.coerce(other)
        except TypeError:
            return NotImplemented
        return ZOmega(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)

    __radd__ = __add__

    def __neg__(self):
        return ZOmega(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        try:
            o = ZOmega.coerce(other)
        except TypeError:
            return NotImplemented
        return ZOmega(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = ZOmega.coerce(other)
        except TypeError:
            return NotImplemented
        a0, a1, a2, a3 = self.c0, self.c1, self.c2, self.c3
        b0, b1, b2, b3 = o.c0, o.c1, o.c2, o.c3
        return ZOmega(
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in Z[w]")
        result, base = ZOmega(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def mul_omega(self, k: int = 1) -> ZOmega:
        """Multiply by w**k (any integer k)."""
        c0, c1, c2, c3 = self.coeffs
        for _ in range(k % 8):
            c0, c1, c2, c3 = -c3, c0, c1, c2
        return ZOmega(c0, c1, c2, c3)

    def conj(self) -> ZOmega:
        # w -> w^-1 = -w^3
        return ZOmega(self.c0, -self.c3, -self.c2, -self.c1)

    def aut(self) -> ZOmega:
        # w -> -w
        return ZOmega(self.c0, -self.c1, self.c2, -self.c3)

    def abs_sq(self) -> ZSqrt2:
        """self * conj(self), returned as an element of Z[sqrt2]."""
        return (self * self.conj()).to_zsqrt2(
            error=InconsistentArithmetic
        )

    def norm(self) -> int:
        """Absolute norm to Z (product over all four embeddings)."""
        return self.abs_sq().norm()

    def to_zsqrt2(self, error=ValueError) -> ZSqrt2:
        """Checked downcast: fails loudly unless the value is in Z[sqrt2]."""
        if self.c2 != 0 or self.c1 != -self.c3:
            raise error(f"{self.render()} is not in Z[sqrt2]")
        return ZSqrt2(self.c0, self.c1)

    def is_real(self) -> bool:
        return self.c2 == 0 and self.c1 == -self.c3

    def is_div_sqrt2(self) -> bool:
        return (self.c0 - self.c2) % 2 == 0 and (self.c1 - self.c3) % 2 == 0

    def div_sqrt2(self) -> ZOmega:
        c0, c1, c2, c3 = self.coeffs
        if (c0 - c2) % 2 or (c1 - c3) % 2:
            raise ValueError(f"{self.render()} is not divisible by sqrt2")
        return ZOmega((c1 - c3) // 2, (c0 + c2) // 2, (c1 + c3) // 2, (c2 - c0) // 2)

    def mul_sqrt2(self) -> ZOmega:
        c0, c1, c2, c3 = self.coeffs
        return ZOmega(c1 - c3, c0 + c2, c1 + c3, c2 - c0)

    def to_complex(self) -> complex:
        r = 1 / SQRT2
        return complex(
            self.c0 + (self.c1 - self.c3) * r,
            (self.c1 + self.c3) * r + self.c2,
        )

    __complex__ = to_complex


_NUM = r"(?P<sign>[+-]?)(?P<coef>\d+\*?)?"
_TERM_R2 = re.compile(_NUM + r"(?P<unit>r2)?")
_TERM_W = re.compile(_NUM + r"(?P<unit>w(?:\^(?P<pow>\d+))?)?")


def sde(v, denom_exp: int = 0):
    """Smallest denominator exponent of v / sqrt2**denom_exp.

    ``v`` may be a ZSqrt2 (or int) or a ZOmega; the result is the least m with
    sqrt2**m * v / sqrt2**denom_exp in the base ring of ``v``, or BOTTOM for 0.
    """
    if isinstance(v, int):
        v = ZSqrt2(v)
    if not v:
        return BOTTOM
    t = 0
    while v.is_div_sqrt2():
        v = v.div_sqrt2()
        t += 1
    return denom_exp - t
