"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so RZSYNTH_NO_NUMBA does not matter here.
Outputs are cross-checked before timing.
"""

import argparse
import time

import numpy as np

from rzsynth import oracle
from rzsynth.highprec import parse_angle
from rzsynth.kernels import _numpy, backends


def _best(fn, repeat):
    fn()  # warm-up, includes jit compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    layers = oracle.enumerate_layers(9)
    rows = np.concatenate(layers)
    left = layers[9][:4000]
    right = oracle._ct_rows()
    cos_t, sin_t = parse_angle("rad:0.1").theta_table()
    return {
        "canonicalize": lambda k: k.canonicalize(rows),
        "product_canon": lambda k: k.product_canon(left, right),
        "distance_sq": lambda k: k.distance_sq(rows, cos_t, sin_t),
        "halves_scan": lambda k: k.halves_scan(1234.5678, 30, 0.05),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    kern = backends()
    if "numba" not in kern:
        print("numba unavailable; only the numpy path can be timed")
    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name in kern) + f"{'speedup':>10}")
    for name, call in cases().items():
        ref = call(_numpy)
        for mod in kern.values():
            got = call(mod)
            pairs = zip(got, ref) if isinstance(ref, tuple) else [(got, ref)]
            for g, r in pairs:
                assert np.array_equal(g, r), f"{name}: backends disagree"
        times = {b: _best(lambda m=mod: call(m), args.repeat) for b, mod in kern.items()}
        speed = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        line = f"{name:<16}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
        print(line + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
