import math
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from rzsynth import oracle
from rzsynth.cliffordt import ExactUnitary, eval_circuit, tcount_unitary
from rzsynth.highprec import Angle, parse_angle, precision
from rzsynth.ring import ZOmega
from rzsynth.search import (
    INFINITY,
    CandidateTuple,
    HalfRecord,
    _halves_of,
    all_unitaries,
    cup,
    distance,
    distance_sq,
    find_halves,
    merge_candidates,
    min_t_count,
    rcup,
    x_from_halves,
)

X_REF = ZOmega(3, 5, -3, -2)

# oracle tables frozen as (n, log2(1/eps), tcount, number of minimal unitaries)
ORACLE_333 = [
    (0, 2.443338179, 0, 1), (1, 3.423017438, 1, 1), (2, 3.423017438, 1, 1),
    (3, 3.423017438, 1, 1), (4, 3.423017438, 1, 1), (5, 3.423017438, 1, 1),
    (6, 3.423017438, 1, 1), (7, 4.006085479, 7, 4), (8, 4.196260124, 8, 4),
    (9, 4.196260124, 8, 4), (10, 5.129389766, 10, 8), (11, 5.529111497, 11, 8),
    (12, 5.529111497, 11, 8),
]
ORACLE_PI_16 = [(n, 3.849083297, 0, 1) for n in range(9)] + [
    (9, 4.900188749, 9, 4), (10, 5.849252659, 10, 4),
]


def test_distance_examples():
    assert distance(ExactUnitary.identity(), Angle.from_pi_fraction(0)) == 0
    assert distance(eval_circuit("T"), Angle.from_pi_fraction(Fraction(1, 4))) == 0
    d = distance(ExactUnitary.identity(), parse_angle("rad:0.1"))
    assert abs(float(d) - math.sqrt(1 - math.cos(0.05))) < 1e-15
    assert abs(-math.log2(float(d)) - 4.82208) < 1e-3


def test_find_halves_example():
    recs = find_halves(1, 2, 0.5)
    assert [(r.a, r.b) for r in recs] == [(1, 1), (2, 0), (0, 1), (1, 0)]
    want = [0.5 * (2 - 1 - math.sqrt(2)), 0.0, 0.5 * (2 - math.sqrt(2)), 0.5]
    assert [round(float(r.eps_part), 3) for r in recs] == [-0.207, 0.0, 0.293, 0.5]
    assert all(abs(float(r.eps_part) - w) < 1e-15 for r, w in zip(recs, want))


def test_find_halves_zero():
    recs = find_halves(0, 0, 0.5)
    assert [(r.a, r.b, float(r.eps_part)) for r in recs] == [(0, 0, 0.0)]


def _brute_halves(alpha, m, delta):
    """(definitely inside, near the boundary) sets from a 300-bit scan."""
    inside, edge = set(), set()
    lim = 2 ** ((m + 1) // 2)
    with precision(300):
        r2 = gmpy2.sqrt(mpfr(2))
        center, tol = mpfr(alpha) * r2**m, mpfr(delta) * r2 ** (m + 1)
        for a in range(-lim, lim + 1):
            for b in range(-lim, lim + 1):
                if a * a + 2 * b * b > 2**m:
                    continue
                margin = tol - abs(center - (a + b * r2))
                if abs(margin) < 2.0**-100:
                    edge.add((a, b))
                elif margin > 0:
                    inside.add((a, b))
    return inside, edge


@settings(max_examples=40)
@given(st.floats(-1, 1), st.integers(0, 9), st.floats(0.001, 0.5))
def test_find_halves_matches_brute_force(alpha, m, delta):
    recs = find_halves(alpha, m, delta)
    inside, edge = _brute_halves(alpha, m, delta)
    got = {(r.a, r.b) for r in recs}
    assert inside <= got <= inside | edge
    keys = [r.eps_part for r in recs]
    assert keys == sorted(keys)


def test_merge_degenerate():
    zero = [HalfRecord(mpfr(0), 0, 0)]
    out = merge_candidates(zero, zero, 0, (0, 1), 1)
    assert out == [CandidateTuple(0, 0, 0, 0, 0, 0)]


def test_merge_example_against_quadratic_scan():
    recs = find_halves(1, 2, 0.5)
    got = merge_candidates(recs, recs, 1, (0, 0.3), 1)
    with precision(160):
        want = sorted(
            (r.eps_part + i.eps_part, r.a, r.b, i.a, i.b, 1)
            for r in recs
            for i in recs
            if 0 <= r.eps_part + i.eps_part <= mpfr(0.3)
        )
    assert [tuple(c) for c in got] == want
    sums = sorted(round(float(c.eps), 3) for c in got)
    assert sums == [0.0, 0.086, 0.086, 0.293, 0.293, 0.293, 0.293]


def test_merge_clamps_to_delta():
    recs = find_halves(1, 2, 0.5)
    got = merge_candidates(recs, recs, 0, (0, 1), 0.1)
    assert all(0 <= c.eps <= 0.1 for c in got)


@settings(max_examples=30)
@given(st.floats(0, 2 * math.pi), st.integers(2, 7), st.sampled_from([0, 1]))
def test_merged_eps_is_squared_distance(phi_rad, m, k):
    # eps_re + eps_im = 1 - Re(x e^{-i theta_k}) / sqrt2^m, recomputed directly
    phi = parse_angle(f"rad:{phi_rad!r}")
    c, s = phi.theta_trig(k)
    recs_re, recs_im = find_halves(c, m, 0.3), find_halves(s, m, 0.3)
    for cand in merge_candidates(recs_re, recs_im, k, (0, 1), 0.09)[:50]:
        with precision(200):
            r2 = gmpy2.sqrt(mpfr(2))
            proj = (c * (cand.a0 + cand.b0 * r2) + s * (cand.a1 + cand.b1 * r2)) / r2**m
            direct = 1 - proj
        assert abs(cand.eps - direct) <= 2.0 ** -(160 - 20)


def test_x_from_halves_roundtrip():
    x = x_from_halves(1, 2, 3, 4)
    assert _halves_of(x) == (1, 2, 3, 4)
    assert abs(x.to_complex() - complex(1 + 2 * math.sqrt(2), 3 + 4 * math.sqrt(2))) < 1e-12


def test_min_t_count_examples():
    assert min_t_count(X_REF, 6, 0) == 10
    assert min_t_count(ZOmega(1), 0, 0) == INFINITY
    assert min_t_count(ZOmega(3), 4, 0) == INFINITY


def test_all_unitaries_worked_example():
    units = all_unitaries(X_REF, 6, 0)
    keys = {u.key() for u in units}
    good = ExactUnitary.make(X_REF, ZOmega(-2, 0, 2, -3), 0, 6)
    bad = ExactUnitary.make(X_REF, ZOmega(3, -2, 0, 2), 0, 6)
    assert good.key() in keys
    assert bad.key() not in keys
    assert tcount_unitary(bad) == 12
    for u in units:
        assert u.x.abs_sq() + u.y.abs_sq() == 1 << u.m
        assert tcount_unitary(u) == 10


def test_all_unitaries_identity():
    assert [u.key() for u in all_unitaries(ZOmega(1), 0, 0)] == [ExactUnitary.identity().key()]


def test_rcup_worked_example():
    phi = parse_angle("pi/16")
    eps9 = cup(phi, 9, with_circuits=False)[-1].eps
    eps, units = rcup(10, phi, eps9)
    assert eps < eps9
    xs = {tuple(u.x.mul_omega(g).coeffs) for u in units for g in range(8)}
    assert X_REF.coeffs in xs


def test_rcup_exact_angle_gives_delta():
    eps, units = rcup(6, Angle.from_pi_fraction(Fraction(1, 4)), 1e-6)
    assert units == [] and eps == mpfr(1e-6)


def test_rcup_rejects_bad_arguments():
    with pytest.raises(ValueError):
        rcup(3, parse_angle("pi/5"), 0.1)
    with pytest.raises(ValueError):
        rcup(5, parse_angle("pi/5"), 0.7)


def test_cup_exact_rotation():
    rows = cup(Angle.from_pi_fraction(Fraction(1, 4)), 8)
    assert rows[0].eps_sq > 0
    for row in rows[1:]:
        assert row.eps_sq == 0
        assert row.keys() == [eval_circuit("T").key()]
        assert row.units[0][1] == "T"


@pytest.mark.parametrize("text, frozen", [("2pi*333/1000", ORACLE_333), ("pi/16", ORACLE_PI_16)])
def test_cup_matches_frozen_oracle(text, frozen):
    rows = cup(parse_angle(text), len(frozen) - 1, with_circuits=False)
    got = [(r.n, round(r.log2_inv_eps(), 9), r.tcount, len(r.units)) for r in rows]
    assert got == frozen


def test_cup_rz01_reference_values():
    rows = cup(parse_angle("rad:0.1"), 22, with_circuits=False)
    lg = [r.log2_inv_eps() for r in rows]
    for n, want in [(0, 4.82208), (11, 5.45071), (14, 5.45071), (16, 6.89383), (22, 10.78285)]:
        assert abs(lg[n] - want) < 1e-3


@settings(max_examples=12)
@given(st.integers(1, 999))
def test_cup_equals_oracle(k):
    phi = Angle.from_pi_fraction(Fraction(2 * k, 1000))
    ours = cup(phi, 10, with_circuits=False)
    ref = oracle.cup_table_bruteforce(phi, 10, with_circuits=False)
    for a, b in zip(ours, ref):
        assert abs(a.eps_sq - b.eps_sq) <= 2.0**-100
        assert a.keys() == b.keys()
        assert a.tcount == b.tcount


@settings(max_examples=15)
@given(st.floats(0, 2 * math.pi))
def test_cup_monotone(phi_rad):
    rows = cup(parse_angle(f"rad:{phi_rad!r}"), 16, with_circuits=False)
    for a, b in zip(rows, rows[1:]):
        assert b.eps_sq <= a.eps_sq
        assert b.tcount >= a.tcount
    for row in rows:
        for u, _ in row.units:
            assert abs(distance_sq(u, parse_angle(f"rad:{phi_rad!r}")) - row.eps_sq) < 2.0**-100


def _search_form(u: ExactUnitary, m: int):
    # phase so that k is 0 or 1, then x scaled to denominator sqrt2^m
    for g in range(8):
        v = u.mul_phase(g)
        if v.k in (0, 1):
            x = v.x
            for _ in range(m - v.m):
                x = x.mul_sqrt2()
            return x, v.k
    raise AssertionError("no phase with k in {0, 1}")


@pytest.mark.parametrize("n", [6, 8, 9])
def test_candidate_completeness(n):
    # every unitary of T-count n within delta must appear among the merged halves
    phi = parse_angle("rad:1.234")
    delta = 0.25
    m = (n + 1) // 2 + 2
    layer = oracle.enumerate_layers(n)[n]
    halves = {}
    for k in (0, 1):
        c, s = phi.theta_trig(k)
        halves[k] = (find_halves(c, m, delta), find_halves(s, m, delta))
    hits = 0
    for row in layer.tolist():
        u = ExactUnitary.from_key(row)
        if distance_sq(u, phi) > delta**2:
            continue
        assert u.m <= m
        x, k = _search_form(u, m)
        found = False
        for sign in (1, -1):
            a0, b0, a1, b1 = _halves_of(x if sign == 1 else -x)
            re, im = halves[k]
            if (a0, b0) in {(r.a, r.b) for r in re} and (a1, b1) in {(r.a, r.b) for r in im}:
                cands = merge_candidates(re, im, k, (0, 1), delta**2)
                found = any((c.a0, c.b0, c.a1, c.b1) == (a0, b0, a1, b1) for c in cands)
            if found:
                break
        assert found, u
        hits += 1
    assert hits > 0
