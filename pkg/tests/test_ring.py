import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rzsynth.ring import BOTTOM, InconsistentArithmetic, ZOmega, ZSqrt2, sde
from strategies import zomega, zsqrt2

W = ZOmega(0, 1, 0, 0)
R2 = ZSqrt2(0, 1)


def test_omega_times_omega_cubed():
    assert W * ZOmega(0, 0, 0, 1) == ZOmega(-1)


def test_sqrt2_squared():
    s = ZOmega(0, 1, 0, -1)
    assert s * s == ZOmega(2)


def test_example_product():
    x = ZOmega(3, 5, -3, -2)
    prod = x * ZOmega(3, 2, 3, -5)
    assert prod == ZOmega(47, 12, 0, -12)
    assert abs(prod.to_complex() - (47 + 12 * math.sqrt(2))) < 1e-9


def test_conj_examples():
    assert W.conj() == ZOmega(0, 0, 0, -1)
    real = ZOmega(3, -2, 0, 2)
    assert real.conj() == real


def test_aut_examples():
    assert ZSqrt2(17, -12).aut() == ZSqrt2(17, 12)
    assert ZOmega(0, 0, 1, 0).aut() == ZOmega(0, 0, 1, 0)
    assert W.aut() == -W


def test_abs_sq_examples():
    assert ZOmega(3, 5, -3, -2).abs_sq() == ZSqrt2(47, 12)
    assert ZOmega(-2, 0, 2, -3).abs_sq() == ZSqrt2(17, -12)
    assert ZOmega(1, -1, 0, 0).abs_sq() == ZSqrt2(2, -1)
    assert ZSqrt2(47, 12) + ZSqrt2(17, -12) == ZSqrt2(64)


def test_norm_examples():
    assert ZSqrt2(15, -4).norm() == 193
    assert ZSqrt2(53, -16).norm() == 2297
    assert ZSqrt2(-1, 1).norm() == -1


def test_sde_examples():
    assert sde(1, 0) == 0
    assert sde(ZSqrt2(47, 12), 12) == 12
    assert sde(R2, 0) == -1
    assert sde(0) is BOTTOM
    assert sde(ZOmega(1, -1, 0, 0)) == 0
    assert sde(ZOmega(0, 1, 0, -1)) == -1


def test_bottom_refuses_comparison():
    with pytest.raises(TypeError):
        BOTTOM < 3


def test_checked_downcast():
    assert ZOmega(0, 1, 0, -1).to_zsqrt2() == R2
    with pytest.raises(ValueError):
        W.to_zsqrt2()


def test_render_examples():
    assert ZOmega(3, 5, -3, -2).render() == "3+5*w-3*w^2-2*w^3"
    assert ZSqrt2(1828037034, -1292617383).render() == "1828037034-1292617383*r2"
    assert ZOmega.parse("-w^3") == ZOmega(0, 0, 0, -1)
    assert ZSqrt2.parse("7") == ZSqrt2(7)


@pytest.mark.parametrize("text", ["", "1+", "3*q", "w^4x"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        ZOmega.parse(text)


@given(zomega, zomega)
def test_arith_matches_complex(u, v):
    for got, want in (
        ((u + v).to_complex(), u.to_complex() + v.to_complex()),
        ((u - v).to_complex(), u.to_complex() - v.to_complex()),
        ((u * v).to_complex(), u.to_complex() * v.to_complex()),
        ((-u).to_complex(), -u.to_complex()),
    ):
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want)) + 1e-3


@given(zomega, zomega)
def test_conj_aut_homomorphisms(u, v):
    assert u.conj().conj() == u
    assert u.aut().aut() == u
    assert u.conj().aut() == u.aut().conj()
    assert (u * v).conj() == u.conj() * v.conj()
    assert (u * v).aut() == u.aut() * v.aut()
    assert (u + v).aut() == u.aut() + v.aut()


@given(zsqrt2, zsqrt2)
def test_norm_multiplicative(v, w):
    assert (v * w).norm() == v.norm() * w.norm()
    assert v.aut().norm() == v.norm()


@given(zomega, zomega)
def test_abs_sq_multiplicative(u, v):
    assert (u * v).abs_sq() == u.abs_sq() * v.abs_sq()


@given(zsqrt2, zsqrt2)
def test_zsqrt2_embedding_is_homomorphism(v, w):
    assert (v * w).to_zomega() == v.to_zomega() * w.to_zomega()
    assert (v + w).to_zomega() == v.to_zomega() + w.to_zomega()


@given(zsqrt2, st.integers(0, 12), st.integers(-5, 20))
def test_sde_shift(v, k, e):
    if not v:
        return
    assert sde(R2**k * v, e) == sde(v, e) - k


@given(zomega, st.integers(0, 12))
def test_sde_shift_zomega(u, k):
    if not u:
        return
    s2 = ZOmega(0, 1, 0, -1)
    assert sde(s2**k * u, 3) == sde(u, 3) - k


@given(zomega)
def test_render_parse_roundtrip(u):
    assert ZOmega.parse(u.render()) == u


@given(zsqrt2)
def test_render_parse_roundtrip_zsqrt2(v):
    assert ZSqrt2.parse(v.render()) == v


def test_inconsistent_abs_sq_guard():
    assert issubclass(InconsistentArithmetic, ArithmeticError)
