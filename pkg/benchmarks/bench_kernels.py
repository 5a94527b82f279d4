"""Time the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--repeat 5] [--number 2000]

Prints one row per kernel with the best per-call time of each backend and
the speedup. Exits quietly with a note when the extension is not built.
"""
import argparse
import sys
import timeit

import numpy as np

from quadlie import _backend, smallmat
from quadlie.models import raman, reduce


def cases():
    rng = np.random.default_rng(7)
    m3 = reduce(raman(0.6, 0.4, 0.3, 0.1)).exponent(1.0)
    big = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    c = np.poly(np.linalg.eigvals(m3))[1:]
    return {
        "cubic_roots": lambda k: k.cubic_roots(*c),
        "expm_taylor (3x3, norm ~1)": lambda k: k.expm_taylor(m3),
        "expm_taylor (3x3, norm ~8)": lambda k: k.expm_taylor(3 * big),
        "adjugate3": lambda k: k.adjugate3(big),
    }


def best(fn, kernels, repeat, number):
    return min(timeit.repeat(lambda: fn(kernels), repeat=repeat, number=number)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--number", type=int, default=2000)
    args = p.parse_args(argv)
    if "compiled" not in _backend.BACKENDS:
        print("compiled kernels not built; nothing to compare", file=sys.stderr)
        return 0
    pure, compiled = _backend.BACKENDS["pure"], _backend.BACKENDS["compiled"]
    print(f"{'kernel':<28}{'pure (us)':>12}{'compiled (us)':>15}{'speedup':>10}")
    for name, fn in cases().items():
        np.testing.assert_allclose(fn(pure), fn(compiled), rtol=1e-12, atol=1e-12)
        tp = best(fn, pure, args.repeat, args.number) * 1e6
        tc = best(fn, compiled, args.repeat, args.number) * 1e6
        print(f"{name:<28}{tp:>12.2f}{tc:>15.2f}{tp / tc:>9.1f}x")
    m = reduce(raman(0.6, 0.4, 0.3, 0.1)).exponent(0.9)
    n = max(1, args.number // 4)
    saved = smallmat.kernels
    try:
        for label, kern in (("pure", pure), ("compiled", compiled)):
            smallmat.kernels = kern
            t = min(timeit.repeat(lambda: smallmat.expm(m, method="series"),
                                  repeat=args.repeat, number=n)) / n
            print(f"{'smallmat.expm, ' + label:<28}{t * 1e6:>12.2f} us")
    finally:
        smallmat.kernels = saved
    return 0


if __name__ == "__main__":
    sys.exit(main())
