"""Line-oriented solution cache.

One record per (angle, n, unitary), tab separated after a ``SQCT-CACHE v1``
header.  eps^2 is stored as an exact hex float so files diff bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cliffordt import ExactUnitary, eval_circuit, t_symbols
from .highprec import hexfloat, parse_hexfloat
from .ring import ZOmega
from .solution import CupSolution

HEADER = "SQCT-CACHE v1"
FORMAT_VERSION = 1
COLUMNS = ("angle", "n", "tcount", "k", "m", "x", "y", "eps2", "word", "version")


class CacheFormatError(ValueError):
    pass


@dataclass(frozen=True)
class CacheRecord:
    angle: str
    n: int
    tcount: int
    k: int
    m: int
    x: tuple[int, int, int, int]
    y: tuple[int, int, int, int]
    eps2: str
    word: str
    version: int = FORMAT_VERSION

    def unitary(self, check: bool = True) -> ExactUnitary:
        u = ExactUnitary(ZOmega(*self.x), ZOmega(*self.y), self.k, self.m)
        if check and u.x.abs_sq() + u.y.abs_sq() != (1 << u.m):
            raise CacheFormatError(f"record for {self.angle} n={self.n} is not unitary")
        return u

    def eps_sq(self):
        return parse_hexfloat(self.eps2)

    def render(self) -> str:
        fields = (
            self.angle,
            str(self.n),
            str(self.tcount),
            str(self.k),
            str(self.m),
            ",".join(map(str, self.x)),
            ",".join(map(str, self.y)),
            self.eps2,
            self.word,
            str(self.version),
        )
        return "\t".join(fields)

    @classmethod
    def parse(cls, line: str) -> CacheRecord:
        parts = line.rstrip("\n").split("\t")
        if len(parts) != len(COLUMNS):
            raise CacheFormatError(f"expected {len(COLUMNS)} fields, got {len(parts)}: {line!r}")
        try:
            x = tuple(int(v) for v in parts[5].split(","))
            y = tuple(int(v) for v in parts[6].split(","))
            rec = cls(
                angle=parts[0],
                n=int(parts[1]),
                tcount=int(parts[2]),
                k=int(parts[3]),
                m=int(parts[4]),
                x=x,
                y=y,
                eps2=parts[7],
                word=parts[8],
                version=int(parts[9]),
            )
        except ValueError as exc:
            raise CacheFormatError(f"bad cache record {line!r}: {exc}") from None
        if len(x) != 4 or len(y) != 4:
            raise CacheFormatError(f"bad coefficient list in {line!r}")
        if rec.version != FORMAT_VERSION:
            raise CacheFormatError(f"unsupported record version {rec.version}")
        return rec

    def check(self) -> list[str]:
        """Consistency problems of this record (empty when it is sound)."""
        problems = []
        try:
            u = self.unitary()
        except CacheFormatError as exc:
            return [str(exc)]
        try:
            got = eval_circuit(self.word)
        except ValueError as exc:
            return [str(exc)]
        if got.phase_to(u) is None:
            problems.append(f"word {self.word!r} does not evaluate to the stored unitary")
        if t_symbols(self.word) != self.tcount:
            problems.append(f"word has {t_symbols(self.word)} T gates, record says {self.tcount}")
        if self.tcount > self.n:
            problems.append(f"T-count {self.tcount} exceeds budget {self.n}")
        return problems


def records_from_solution(angle: str, sol: CupSolution) -> list[CacheRecord]:
    out = []
    for u, word in sol.units:
        out.append(
            CacheRecord(
                angle=angle,
                n=sol.n,
                tcount=sol.tcount,
                k=u.k,
                m=u.m,
                x=u.x.coeffs,
                y=u.y.coeffs,
                eps2=hexfloat(sol.eps_sq),
                word=word,
            )
        )
    return out


def render_cache(records) -> str:
    lines = [HEADER, "# " + "\t".join(COLUMNS)]
    lines += [r.render() for r in records]
    return "\n".join(lines) + "\n"


def parse_cache(text: str) -> list[CacheRecord]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise CacheFormatError(f"missing {HEADER!r} header")
    return [CacheRecord.parse(line) for line in lines[1:] if line and not line.startswith("#")]


def write_cache(path, records) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(render_cache(records))


def read_cache(path) -> list[CacheRecord]:
    with open(path, encoding="ascii") as fh:
        return parse_cache(fh.read())
