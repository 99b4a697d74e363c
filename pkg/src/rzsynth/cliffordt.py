"""Clifford+T gate words, exact unitaries U[x, y, k] / sqrt2**m, T-count and synthesis.

Word convention: a gate word reads left to right as the matrix product left
to right, so the *first* symbol is the *last* gate applied to a state.  This
is the algebraic order ``C1 T C2 T ...``; circuit diagrams draw the reverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .ring import BOTTOM, ZOmega, sde

__all__ = [
    "ExactUnitary",
    "GATES",
    "ALPHABET",
    "eval_circuit",
    "clifford_group",
    "tcount_unitary",
    "synthesize",
    "t_symbols",
    "base_table",
    "key_to_text",
    "key_from_text",
]

ALPHABET = "HTSXYZW"
BASE_TABLE_MAX_TCOUNT = 3
# T^j written with as few T symbols as possible (S = T^2, Z = T^4)
_T_POWER_WORDS = ("", "T", "S", "ST", "Z", "ZT", "ZS", "ZST")


@dataclass(frozen=True)
class ExactUnitary:
    """[[x, -conj(y) w^k], [y, conj(x) w^k]] / sqrt2**m, kept with m minimal.

    Build through :meth:`make` unless the arguments are known to be canonical.
    """

    x: ZOmega
    y: ZOmega
    k: int
    m: int

    @classmethod
    def make(cls, x, y, k: int, m: int, check: bool = True) -> ExactUnitary:
        x, y = ZOmega.coerce(x), ZOmega.coerce(y)
        while m > 0 and x.is_div_sqrt2() and y.is_div_sqrt2():
            x, y, m = x.div_sqrt2(), y.div_sqrt2(), m - 1
        if m < 0:
            raise ValueError("denominator exponent must be non-negative")
        u = cls(x, y, k % 8, m)
        if check and (x.abs_sq() + y.abs_sq()) != (1 << m):
            raise ValueError(f"not unitary: |x|^2+|y|^2 != 2^{m} for {u}")
        return u

    @classmethod
    def identity(cls) -> ExactUnitary:
        return cls(ZOmega(1), ZOmega(0), 0, 0)

    def __str__(self):
        return f"U[{self.x.render()}, {self.y.render()}, {self.k}]/sqrt2^{self.m}"

    def __matmul__(self, other: ExactUnitary) -> ExactUnitary:
        x1, y1, k1 = self.x, self.y, self.k
        x2, y2 = other.x, other.y
        x = x1 * x2 - (y1.conj() * y2).mul_omega(k1)
        y = y1 * x2 + (x1.conj() * y2).mul_omega(k1)
        return ExactUnitary.make(x, y, k1 + other.k, self.m + other.m, check=False)

    def adjoint(self) -> ExactUnitary:
        # U^dagger = [[x*, y*], [-y w^-k, x w^-k]]
        return ExactUnitary.make(
            self.x.conj(), -self.y.mul_omega(-self.k), -self.k, self.m, check=False
        )

    def mul_phase(self, g: int) -> ExactUnitary:
        """w**g times this unitary."""
        return ExactUnitary(self.x.mul_omega(g), self.y.mul_omega(g), (self.k + 2 * g) % 8, self.m)

    def sde(self):
        """sde(|x|^2) of the top-left entry (BOTTOM when x = 0)."""
        return sde(self.x.abs_sq(), 2 * self.m)

    def entries(self) -> tuple[ZOmega, ZOmega, ZOmega, ZOmega]:
        """Numerators (a, b, c, d) of [[a, b], [c, d]] / sqrt2**m."""
        return (
            self.x,
            -self.y.conj().mul_omega(self.k),
            self.y,
            self.x.conj().mul_omega(self.k),
        )

    def matrix(self) -> np.ndarray:
        scale = 2.0 ** (-self.m / 2)
        a, b, c, d = (complex(e) * scale for e in self.entries())
        return np.array([[a, b], [c, d]], dtype=complex)

    def as_tuple(self) -> tuple[int, ...]:
        return self.x.coeffs + self.y.coeffs + (self.k, self.m)

    def key(self) -> tuple[int, ...]:
        """Phase-canonical key: lexicographically least tuple among the 8 phases."""
        return min(self.mul_phase(g).as_tuple() for g in range(8))

    def canonical(self) -> ExactUnitary:
        return ExactUnitary.from_key(self.key())

    @classmethod
    def from_key(cls, key) -> ExactUnitary:
        key = tuple(int(v) for v in key)
        return cls(ZOmega(*key[0:4]), ZOmega(*key[4:8]), key[8] % 8, key[9])

    def phase_to(self, other: ExactUnitary) -> int | None:
        """g with other == w**g * self, or None if they differ beyond phase."""
        target = other.as_tuple()
        for g in range(8):
            if self.mul_phase(g).as_tuple() == target:
                return g
        return None


def _gate(x, y, k, m) -> ExactUnitary:
    return ExactUnitary.make(x, y, k, m)


GATES: dict[str, ExactUnitary] = {
    "H": _gate(1, 1, 4, 1),
    "T": _gate(1, 0, 1, 0),
    "S": _gate(1, 0, 2, 0),
    "X": _gate(0, 1, 4, 0),
    "Y": _gate(0, ZOmega(0, 0, 1, 0), 4, 0),
    "Z": _gate(1, 0, 4, 0),
    "W": _gate(ZOmega(0, 1, 0, 0), 0, 2, 0),
}


def eval_circuit(word: str) -> ExactUnitary:
    """Exact product of the gates in ``word`` (left symbol = left factor)."""
    u = ExactUnitary.identity()
    for ch in word:
        try:
            g = GATES[ch]
        except KeyError:
            raise ValueError(f"unknown gate symbol {ch!r} in {word!r}") from None
        u = u @ g
    return u


def t_symbols(word: str) -> int:
    return word.count("T")


def key_to_text(key) -> str:
    return ",".join(str(int(v)) for v in key)


def key_from_text(text: str) -> tuple[int, ...]:
    key = tuple(int(v) for v in text.split(","))
    if len(key) != 10:
        raise ValueError(f"bad unitary key {text!r}")
    return key


@lru_cache(maxsize=None)
def clifford_group() -> dict[tuple[int, ...], str]:
    """The 24 Clifford unitaries up to phase, as key -> shortest word over {H, S}."""
    words = {ExactUnitary.identity().key(): ""}
    frontier = [("", ExactUnitary.identity())]
    while frontier:
        nxt = []
        for word, u in frontier:
            for g in "HS":
                v = u @ GATES[g]
                key = v.key()
                if key not in words:
                    words[key] = word + g
                    nxt.append((word + g, v))
        frontier = nxt
    return words


@lru_cache(maxsize=None)
def base_table() -> dict[tuple[int, ...], str]:
    """Phase-canonical key -> T-optimal word, for every unitary with T-count <= 3."""
    text = resources.files("rzsynth.data").joinpath("base_table.txt").read_text()
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key_text, _, word = line.partition(" ")
        table[key_from_text(key_text)] = word.strip()
    return table


def _sde_raised(u: ExactUnitary, j: int, l: int):
    # sde of H T^j U T^l H, from its top-left entry (a + b w^l + c w^j + d w^(j+l)) / sqrt2^(m+2)
    a, b, c, d = u.entries()
    num = a + b.mul_omega(l) + c.mul_omega(j) + d.mul_omega(j + l)
    return sde(num.abs_sq(), 2 * (u.m + 2))


def tcount_unitary(u: ExactUnitary) -> int:
    """Minimal number of T gates implementing ``u`` up to global phase."""
    key = u.key()
    table = base_table()
    if key in table:
        return t_symbols(table[key])
    s = u.sde()
    if s is BOTTOM or s < 4:
        raise LookupError(f"{u} has sde {s} but is missing from the base table")
    # sde here counts powers of sqrt2 in |x|^2, so the raising step is +2
    for j in range(8):
        for l in range(8):
            if _sde_raised(u, j, l) == s + 2:
                return s - (j % 2) - (l % 2)
    raise ArithmeticError(f"no sde-raising pair (j, l) found for {u}")


def synthesize(u: ExactUnitary, exact_phase: bool = False) -> str:
    """A T-optimal word for ``u``.

    The word evaluates to ``u`` up to a global phase w**g; with ``exact_phase``
    the matching W**g prefix is added so the evaluation equals ``u`` exactly.
    """
    table = base_table()
    h = GATES["H"]
    powers = [ExactUnitary.identity()]
    for _ in range(7):
        powers.append(powers[-1] @ GATES["T"])

    prefix = []
    cur = u
    while cur.key() not in table:
        s = cur.sde()
        target = tcount_unitary(cur)
        step = None
        for j in range(8):
            v = h @ powers[j] @ cur
            vs = v.sde()
            if vs is BOTTOM or vs >= s:
                continue
            # cur = T^-j H v; keep the branch that stays on a T-optimal path
            if tcount_unitary(v) + (j % 2) == target:
                step = (j, v)
                break
        if step is None:
            raise ArithmeticError(f"exact synthesis stalled at {cur}")
        j, cur = step
        prefix.append(_T_POWER_WORDS[(8 - j) % 8] + "H")

    word = "".join(prefix) + table[cur.key()]
    g = eval_circuit(word).phase_to(u)
    if g is None:
        raise ArithmeticError(f"synthesized word does not reproduce {u}")
    return "W" * g + word if exact_phase else word
