from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2

from .cliffordt import ExactUnitary


@dataclass
class CupSolution:
    """Answer to the closest-unitaries problem for T-count budget ``n``.

    ``eps_sq`` is the squared distance (an mpfr); ``units`` holds the minimal
    T-count unitaries at that distance, one phase-canonical representative
    each, paired with a synthesized word.
    """

    n: int
    eps_sq: object
    tcount: int
    units: list[tuple[ExactUnitary, str]] = field(default_factory=list)

    @property
    def eps(self):
        return gmpy2.sqrt(self.eps_sq) if self.eps_sq > 0 else gmpy2.mpfr(0)

    def log2_inv_eps(self) -> float:
        if self.eps_sq <= 0:
            return float("inf")
        return float(-gmpy2.log2(self.eps_sq) / 2)

    def keys(self) -> list[tuple[int, ...]]:
        return sorted(u.key() for u, _ in self.units)
