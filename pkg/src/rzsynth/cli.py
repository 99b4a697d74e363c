"""Command-line front end: ``rzsynth {approx,verify,batch,normeq,tcount}``.

Exit codes: 0 success, 1 verification mismatch or run failure, 2 bad input,
3 factorization timeout, 4 unsolvable norm equation.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import oracle
from .cache import CacheFormatError, read_cache, records_from_solution, write_cache
from .cliffordt import ALPHABET, ExactUnitary, eval_circuit, synthesize, tcount_unitary
from .highprec import DEFAULT_PREC, Angle, hexfloat, parse_angle, precision
from .normeq import DEFAULT_TIMEOUT, FactorizationTimeout, factor_rhs, solve_all
from .ring import ZOmega, ZSqrt2
from .search import cup, iter_cup

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_TIMEOUT, EXIT_UNSOLVABLE = 0, 1, 2, 3, 4
MAX_TCOUNT_DEFAULT = 200


class UsageError(ValueError):
    pass


def _angle(text: str) -> Angle:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _finest_eps(bits: int) -> float:
    # below this the double screen and the tie guard stop being meaningful
    return 2.0 ** -(bits / 2 - 20)


def _print_row(sol, out=sys.stdout):
    u, word = sol.units[0]
    print(
        f"n={sol.n} tcount={sol.tcount} log2(1/eps)={sol.log2_inv_eps():.5f} "
        f"solutions={len(sol.units)} circuit={word or '(identity)'}",
        file=out,
    )


# ---------------------------------------------------------------- approx

def cmd_approx(args) -> int:
    phi = _angle(args.angle)
    if args.precision is not None:
        if not 0 < args.precision < 1:
            raise UsageError("--precision must be in (0, 1)")
        if args.precision < _finest_eps(args.precision_bits):
            raise UsageError(
                f"--precision {args.precision} is finer than {args.precision_bits}-bit arithmetic "
                f"supports ({_finest_eps(args.precision_bits):.3g}); raise --precision-bits"
            )
    n_max = args.tcount_max if args.tcount_max is not None else MAX_TCOUNT_DEFAULT
    table = []
    for row, _ in iter_cup(phi, args.precision_bits, args.timeout):
        if row.n > n_max:
            break
        table.append(row)
        if args.verbose:
            _print_row(row)
        if args.precision is not None and row.eps <= args.precision:
            break
    best = table[-1]
    if args.out:
        records = [r for sol in table for r in records_from_solution(phi.text, sol)]
        write_cache(args.out, records)
    u, word = best.units[0]
    print(f"angle: {phi.text}")
    print(f"circuit: {word or '(identity)'}")
    print(f"tcount: {best.tcount}")
    print(f"log2(1/eps): {best.log2_inv_eps():.5f}")
    with precision(args.precision_bits):
        print(f"eps: {float(best.eps):.6e}")
    print(f"solutions at this distance: {len(best.units)}")
    if args.precision is not None and best.eps > args.precision:
        print(f"target precision not reached within T-count {n_max}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------- verify

def _verify_angles(k: int) -> list[Angle]:
    return [Angle.from_pi_fraction(Fraction(2 * j, 1000)) for j in range(1, k + 1)]


def _diff_rows(a, b, tol) -> str | None:
    if abs(a.eps_sq - b.eps_sq) > tol:
        return f"eps^2 {hexfloat(a.eps_sq)} vs {hexfloat(b.eps_sq)}"
    if a.tcount != b.tcount:
        return f"tcount {a.tcount} vs {b.tcount}"
    if a.keys() != b.keys():
        return f"solution sets differ ({len(a.units)} vs {len(b.units)} unitaries)"
    return None


def cmd_verify(args) -> int:
    bound = args.oracle_bound
    if args.max_tcount > bound:
        raise UsageError(f"--max-tcount {args.max_tcount} exceeds the oracle bound {bound}")
    tol = 2.0**-100
    if args.cache:
        return _verify_cache(args, bound, tol)
    for phi in _verify_angles(args.angles):
        ours = cup(phi, args.max_tcount, args.precision_bits, args.timeout, with_circuits=False)
        ref = oracle.cup_table_bruteforce(
            phi, args.max_tcount, bound, with_circuits=False, prec=args.precision_bits
        )
        for a, b in zip(ours, ref):
            why = _diff_rows(a, b, tol)
            if why:
                print(f"MISMATCH angle={phi.text} n={a.n}: {why}")
                return EXIT_MISMATCH
        print(f"ok angle={phi.text} n<={args.max_tcount}")
    return EXIT_OK


def _verify_cache(args, bound, tol) -> int:
    try:
        records = read_cache(args.cache)
    except (OSError, CacheFormatError) as exc:
        raise UsageError(str(exc)) from None
    groups: dict[tuple[str, int], list] = {}
    for rec in records:
        problems = rec.check()
        if problems:
            print(f"MISMATCH record angle={rec.angle} n={rec.n}: {problems[0]}")
            return EXIT_MISMATCH
        groups.setdefault((rec.angle, rec.n), []).append(rec)
    by_angle: dict[str, int] = {}
    for angle, n in groups:
        by_angle[angle] = max(by_angle.get(angle, -1), n)
    for angle, n_top in by_angle.items():
        phi = _angle(angle)
        n_top = min(n_top, args.max_tcount)
        ref = oracle.cup_table_bruteforce(phi, n_top, bound, with_circuits=False, prec=args.precision_bits)
        for row in ref:
            recs = groups.get((angle, row.n))
            if recs is None:
                continue
            eps_sq = recs[0].eps_sq()
            keys = sorted(r.unitary().key() for r in recs)
            if abs(eps_sq - row.eps_sq) > tol or keys != row.keys() or recs[0].tcount != row.tcount:
                print(f"MISMATCH cache angle={angle} n={row.n}: cached eps^2={recs[0].eps2} "
                      f"oracle eps^2={hexfloat(row.eps_sq)}")
                return EXIT_MISMATCH
        print(f"ok cache angle={angle} n<={n_top}")
    return EXIT_OK


# ---------------------------------------------------------------- batch

def _batch_angles(args) -> list[Angle]:
    kind = args.angle_set[0]
    rest = args.angle_set[1:]
    if kind == "thousandths":
        if rest:
            raise UsageError("thousandths takes no argument; use --sample")
        if args.sample is None:
            ks = range(1, 1001)
        else:
            if not 1 <= args.sample <= 1000:
                raise UsageError("--sample must be in 1..1000")
            step = 1000 // (args.sample + 1)
            ks = [step * j for j in range(1, args.sample + 1)]
        return [Angle.from_pi_fraction(Fraction(2 * k, 1000)) for k in ks]
    if kind == "qft":
        if len(rest) != 1 or not rest[0].isdigit():
            raise UsageError("usage: --angle-set qft K")
        return [Angle.from_pi_fraction(Fraction(1, 2**k)) for k in range(3, int(rest[0]) + 3)]
    if kind == "single":
        if len(rest) != 1:
            raise UsageError("usage: --angle-set single PHI")
        return [_angle(rest[0])]
    raise UsageError(f"unknown angle set {kind!r}")


def _batch_one(phi: Angle, n_max: int, prec: int, timeout):
    rows = []

    def keep(sol, info):
        rows.append((phi.text, sol.n, sol.log2_inv_eps(), len(sol.units), info["millis"]))

    cup(phi, n_max, prec, timeout, with_circuits=False, on_row=keep)
    return rows


def cmd_batch(args) -> int:
    angles = _batch_angles(args)
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    failed = 0
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["angle", "n", "log2_inv_eps", "num_solutions", "millis"])
        jobs = [(phi, args.tcount_max, args.precision_bits, args.timeout) for phi in angles]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                futures = [pool.submit(_batch_one, *job) for job in jobs]
                results = [_collect(f.result) for f in futures]
        else:
            results = [_collect(lambda job=job: _batch_one(*job)) for job in jobs]
        # single writer, angle order: identical output for any --jobs
        for phi, res in zip(angles, results):
            if isinstance(res, Exception):
                failed += 1
                print(f"angle {phi.text} failed: {res!r}", file=sys.stderr)
                continue
            for angle, n, lg, count, millis in res:
                lg_text = "inf" if math.isinf(lg) else f"{lg:.6f}"
                writer.writerow([angle, n, lg_text, count, f"{millis:.3f}"])
            fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    if failed:
        timeouts = any(isinstance(r, FactorizationTimeout) for r in results)
        return EXIT_TIMEOUT if timeouts else EXIT_MISMATCH
    return EXIT_OK


def _collect(fn):
    try:
        return fn()
    except Exception as exc:  # reported per angle, run continues
        return exc


# ---------------------------------------------------------------- normeq

def cmd_normeq(args) -> int:
    try:
        rhs = ZSqrt2.parse(args.rhs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"rhs: {rhs.render()}")
    if not rhs:
        print("solutions: 1")
        print("0")
        return EXIT_OK
    if not rhs.is_totally_positive():
        print("rhs is not totally positive: no solutions")
        return EXIT_UNSOLVABLE
    fac = factor_rhs(rhs, args.timeout)
    print(f"factorization: {fac.render()}")
    sols = solve_all(rhs, args.timeout)
    print(f"solutions: {len(sols)}")
    for y in sols:
        print(y.render())
    return EXIT_OK if sols else EXIT_UNSOLVABLE


# ---------------------------------------------------------------- tcount

def _parse_unitary(text: str) -> ExactUnitary:
    text = text.strip()
    if text == "" or set(text) <= set(ALPHABET):
        return eval_circuit(text)
    parts = [p.strip() for p in text.split(";")]
    if len(parts) != 4:
        raise UsageError("unitary must be a gate word or 'x;y;k;m' with x, y like 1+w-2*w^3")
    try:
        x, y = ZOmega.parse(parts[0]), ZOmega.parse(parts[1])
        k, m = int(parts[2]), int(parts[3])
        return ExactUnitary.make(x, y, k, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_tcount(args) -> int:
    u = _parse_unitary(args.unitary)
    print(f"unitary: {u}")
    print(f"sde: {u.sde()}")
    print(f"tcount: {tcount_unitary(u)}")
    print(f"circuit: {synthesize(u) or '(identity)'}")
    return EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rzsynth", description="T-optimal Clifford+T approximation of Z rotations.")
    p.add_argument("--precision-bits", type=int, default=DEFAULT_PREC,
                   help="mpfr significand bits (default %(default)s); eps down to "
                        "2^-(bits/2-20) is supported")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                   help="seconds allowed per integer factorization")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("approx", help="T-optimal approximations of R_z(angle)")
    a.add_argument("angle", help="pi/16, 2pi*17/1000, 3*pi/4, 0 or rad:0.1")
    a.add_argument("--tcount-max", type=int)
    a.add_argument("--precision", type=float, help="stop once eps <= this")
    a.add_argument("--out", help="write the CUP table as a cache file")
    a.add_argument("-v", "--verbose", action="store_true", help="print every row")
    a.set_defaults(func=cmd_approx)

    v = sub.add_parser("verify", help="compare against brute-force enumeration")
    v.add_argument("--max-tcount", type=int, default=8)
    v.add_argument("--angles", type=int, default=10, help="angles 2 pi j / 1000, j = 1..K")
    v.add_argument("--cache", help="check a cache file instead of running the search")
    v.add_argument("--oracle-bound", type=int, default=oracle.ORACLE_BOUND)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("batch", help="CUP tables for a family of angles, as CSV")
    b.add_argument("--angle-set", nargs="+", required=True,
                   metavar="SET", help="thousandths | qft K | single PHI")
    b.add_argument("--sample", type=int, help="evenly spaced subset of the thousandths")
    b.add_argument("--tcount-max", type=int, required=True)
    b.add_argument("--csv", help="output path (stdout if omitted)")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_batch)

    ne = sub.add_parser("normeq", help="solve |y|^2 = A + B sqrt2")
    ne.add_argument("rhs", help="A+B*r2")
    ne.set_defaults(func=cmd_normeq)

    t = sub.add_parser("tcount", help="T-count of an exact unitary")
    t.add_argument("unitary", help="gate word over HTSXYZW, or 'x;y;k;m'")
    t.set_defaults(func=cmd_tcount)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.precision_bits < 64:
        print("error: --precision-bits must be at least 64", file=sys.stderr)
        return EXIT_PARSE
    try:
        with precision(args.precision_bits):
            return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FactorizationTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
