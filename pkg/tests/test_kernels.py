import os
import subprocess
import sys

import numpy as np
import pytest

from rzsynth import kernels, oracle
from rzsynth.highprec import parse_angle
from rzsynth.kernels import _numpy, backends

BACKENDS = backends()


@pytest.fixture(scope="module")
def rows():
    return np.concatenate(oracle.enumerate_layers(6))


@pytest.mark.skipif("numba" not in BACKENDS, reason="numba not importable")
def test_backends_agree(rows):
    nb = BACKENDS["numba"]
    scrambled = rows.copy()
    scrambled[:, 8] = (scrambled[:, 8] + 3) % 8
    assert np.array_equal(nb.canonicalize(scrambled), _numpy.canonicalize(scrambled))
    ct = oracle._ct_rows()
    assert np.array_equal(nb.product_canon(ct, rows[:500]), _numpy.product_canon(ct, rows[:500]))
    cos_t, sin_t = parse_angle("rad:1.1").theta_table()
    assert np.array_equal(nb.distance_sq(rows, cos_t, sin_t), _numpy.distance_sq(rows, cos_t, sin_t))
    for target, m, tol in [(3.7, 9, 0.2), (-11.25, 14, 0.01), (0.0, 0, 0.7)]:
        a = nb.halves_scan(target, m, tol)
        b = _numpy.halves_scan(target, m, tol)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_canonicalize_is_idempotent(rows):
    assert np.array_equal(kernels.canonicalize(rows), rows)


def test_halves_scan_constraints():
    a, b = kernels.halves_scan(5.5, 8, 0.75)
    assert len(a)
    assert np.all(a * a + 2 * b * b <= 2**8)
    assert np.all(np.abs(5.5 - (a + b * np.sqrt(2))) <= 0.75 + 1e-12)


def test_env_flag_selects_numpy():
    code = "from rzsynth import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, RZSYNTH_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_reproduces_oracle_counts():
    code = (
        "from rzsynth import kernels, oracle;"
        "assert kernels.BACKEND == 'numpy';"
        "print([len(l) for l in oracle.enumerate_layers(6)])"
    )
    env = dict(os.environ, RZSYNTH_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == str([24] + [24 * 3 * 2 ** (n - 1) for n in range(1, 7)])
