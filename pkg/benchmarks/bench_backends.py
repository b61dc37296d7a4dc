#!/usr/bin/env python3
"""Benchmark the compiled integrand kernels against the NumPy fallback.

Times the two hot integrands on large node arrays and two end-to-end
oracle runs (one overlap integral, one kernel propagation) under each
available backend. Run from the repository root:

    python benchmarks/bench_backends.py
"""

import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import sgcoherence as sg
from sgcoherence import kernels


def _time(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_integrands(n=2_000_000):
    z = np.linspace(-1e-4, 1e-4, n)
    u = np.linspace(-2e-6, 2e-6, n)
    rows = []
    for name in sg.available_backends():
        sg.use_backend(name)
        t_overlap = _time(
            lambda: kernels.overlap_integrand(z, 199.7, 2.5e9, 2.6e-6, 8.5e13, 0.44, 1.0)
        )
        t_kernel = _time(
            lambda: kernels.kernel_integrand(u, -3.7e-5, 2.5e9, 4.3e17, 1.0 + 0.5j)
        )
        rows.append((name, t_overlap / n * 1e9, t_kernel / n * 1e9))
    return rows


def bench_oracles():
    params = sg.typical_params()
    spec_overlap = sg.QuadratureSpec()
    spec_kernel = sg.QuadratureSpec(abs_tol=1e-5)
    z = np.linspace(-3.5e-5, 3.5e-5, 41)
    rows = []
    for name in sg.available_backends():
        sg.use_backend(name)
        t_overlap = _time(lambda: sg.overlap_quadrature(params, 1.3e-5, spec_overlap), repeats=3)
        t_kernel = _time(
            lambda: sg.propagate_via_kernel(params, +1, z, 2e-9, spec_kernel), repeats=3
        )
        rows.append((name, t_overlap, t_kernel))
    return rows


def main():
    print(f"available backends: {', '.join(sg.available_backends())}")
    print()
    rows = bench_integrands()
    print(f"{'integrand evaluation':<24s} {'overlap ns/pt':>14s} {'kernel ns/pt':>14s}")
    for name, t_o, t_k in rows:
        print(f"{name:<24s} {t_o:>14.2f} {t_k:>14.2f}")
    if len(rows) == 2:
        print(f"{'speedup (python/cython)':<24s} {rows[1][1] / rows[0][1]:>14.2f} "
              f"{rows[1][2] / rows[0][2]:>14.2f}")
    print()
    rows = bench_oracles()
    print(f"{'end-to-end oracle':<24s} {'overlap s':>14s} {'kernel41pts s':>14s}")
    for name, t_o, t_k in rows:
        print(f"{name:<24s} {t_o:>14.4f} {t_k:>14.4f}")
    if len(rows) == 2:
        print(f"{'speedup (python/cython)':<24s} {rows[1][1] / rows[0][1]:>14.2f} "
              f"{rows[1][2] / rows[0][2]:>14.2f}")
    sg.use_backend(sg.available_backends()[0])


if __name__ == "__main__":
    main()
