"""Time the numba and numpy kernel backends on representative workloads.

    python benchmarks/bench_backends.py [--repeat 5]

The first numba call compiles (or loads the on-disk cache); it is run once
as warm-up and excluded from the timings.
"""
import argparse
import time

import numpy as np

from freezethaw import kernels


def workloads():
    n = 100
    k = np.arange(1, n + 2)
    energies = 2.0 * np.cos(k * np.pi / (n + 2))
    weights = np.ascontiguousarray(np.random.default_rng(0).normal(size=(n + 1, n + 1)))
    taus = np.arange(0, 408.0, 0.05)
    psi0 = np.zeros(n + 1, dtype=np.complex128)
    psi0[0] = 1.0
    grid = np.arange(0, 60.0, 0.05)
    xs = np.linspace(0.0, 200.0, 200_000)
    series = 1.5 + 0.5 * np.sin(np.linspace(0.0, 400.0, 20_000))
    rng = np.random.default_rng(1)
    d, e = rng.normal(size=400), rng.normal(size=399)
    return {
        "bessel_jn (2e5 points)": lambda m: m.bessel_jn(1, xs),
        "phase_sum (N=100, 8160 taus)": lambda m: m.phase_sum(energies, weights, taus),
        "rk4_chain (N=100, h=0.005)": lambda m: m.rk4_chain(1.0, psi0, grid, 0.005),
        "tql_implicit (400x400)": lambda m: m.tql_implicit(d.copy(), e.copy()),
        "window_stats (2e4 samples)": lambda m: m.window_stats(series, 40, 0.02),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = {"numpy": kernels.load_backend("numpy")}
    try:
        backends["numba"] = kernels.load_backend("numba")
    except ImportError:
        print("numba not importable; timing the numpy backend only")
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name in backends) + "   speed-up")
    for label, run in workloads().items():
        row = {}
        for name, mod in backends.items():
            run(mod)  # warm-up / compile
            row[name] = best_of(lambda: run(mod), args.repeat)
        cells = "".join(f"{row[name] * 1e3:10.2f}ms" for name in backends)
        ratio = f"{row['numpy'] / row['numba']:9.1f}x" if "numba" in row else ""
        print(f"{label:32s}{cells}{ratio}")


if __name__ == "__main__":
    main()
