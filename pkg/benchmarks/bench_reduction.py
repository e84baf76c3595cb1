"""Compiled vs pure-Python kernels: column reduction and modular row reduction.

Usage: python3 benchmarks/bench_reduction.py [--repeat N] [--seed S]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mvnerve import _pykernels
from mvnerve.complex import FilteredComplex
from mvnerve.lowerbounds import generate_sphere_example
from mvnerve.persistence import FilteredChainComplex
from mvnerve.random_instances import flag_complex, monotone_births

try:
    from mvnerve import _kernels
except ImportError:
    _kernels = None


def columns(fcc):
    rows = [np.fromiter(c.keys(), dtype=np.int64, count=len(c)) for c in fcc.columns]
    coeffs = [np.fromiter(c.values(), dtype=np.int64, count=len(c)) for c in fcc.columns]
    return rows, coeffs


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def complexes(seed):
    rng = np.random.default_rng(seed)
    yield "sphere D=4", generate_sphere_example(4)[0]
    for n, prob in ((16, 0.5), (30, 0.5), (45, 0.45)):
        simplices = flag_complex(n, prob, 4, rng)
        yield f"flag n={n} p={prob}", FilteredComplex(monotone_births(simplices, rng, 0, 20))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the pure-Python timings are shown")
    print(f"{'case':30s} {'size':>8s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, cx in complexes(args.seed):
        for p in (2, 3):
            fcc = FilteredChainComplex.from_complex(cx, p)
            rows, coeffs = columns(fcc)
            py = best_of(lambda: _pykernels.reduce_columns(rows, coeffs, fcc.degrees, p, True), args.repeat)
            if _kernels is not None:
                c = best_of(lambda: _kernels.reduce_columns(rows, coeffs, fcc.degrees, p, True), args.repeat)
                assert np.array_equal(np.asarray(_kernels.reduce_columns(rows, coeffs, fcc.degrees, p, True)),
                                      np.asarray(_pykernels.reduce_columns(rows, coeffs, fcc.degrees, p, True)))
                print(f"{'reduce ' + name + f' F{p}':30s} {len(cx):8d} {py:10.4f} {c:11.4f} {py / c:7.1f}x")
            else:
                print(f"{'reduce ' + name + f' F{p}':30s} {len(cx):8d} {py:10.4f} {'-':>11s} {'-':>8s}")
    rng = np.random.default_rng(args.seed)
    for n in (40, 80, 160):
        for p in (2, 7):
            a = rng.integers(0, p, size=(n, n), dtype=np.int64)
            py = best_of(lambda: _pykernels.rref_inplace(a.copy(), p), args.repeat)
            if _kernels is not None:
                c = best_of(lambda: _kernels.rref_inplace(a.copy(), p), args.repeat)
                print(f"{f'rref {n}x{n} F{p}':30s} {n * n:8d} {py:10.4f} {c:11.4f} {py / c:7.1f}x")
            else:
                print(f"{f'rref {n}x{n} F{p}':30s} {n * n:8d} {py:10.4f} {'-':>11s} {'-':>8s}")


if __name__ == "__main__":
    main()
