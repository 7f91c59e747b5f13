"""Compare the compiled and numpy implementations of the Gaussian angular projection.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from schmidt2d import angular
from schmidt2d.angular import angular_kernel_all, build_radial_grid
from schmidt2d.models import GaussianPairState, normalize_state

CASES = [(64, 4), (96, 10), (128, 16), (256, 16)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = sorted(angular._BACKENDS)
    if "cython" not in backends:
        print("compiled extension not built; only the python backend is available")
    print(f"{'N':>5} {'m_max':>6} " + " ".join(f"{b + ' [ms]':>14}" for b in backends)
          + (f" {'speedup':>8}" if len(backends) == 2 else "") + f" {'max |diff|':>11}")
    for n, m_max in CASES:
        grid = build_radial_grid(n, 10.0)
        state = normalize_state(GaussianPairState(2.0, 1 / math.sqrt(2)), grid)
        times, results = {}, {}
        for b in backends:
            results[b] = angular_kernel_all(state, grid, m_max, backend=b)
            t = timeit.repeat(lambda: angular_kernel_all(state, grid, m_max, backend=b),
                              number=1, repeat=args.repeat)
            times[b] = 1e3 * min(t)
        diff = 0.0
        if len(backends) == 2:
            diff = max(float(np.max(np.abs(x.matrix - y.matrix)))
                       for x, y in zip(results["cython"], results["python"]))
        row = f"{n:>5} {m_max:>6} " + " ".join(f"{times[b]:>14.2f}" for b in backends)
        if len(backends) == 2:
            row += f" {times['python'] / times['cython']:>8.2f}"
        print(row + f" {diff:>11.1e}")


if __name__ == "__main__":
    main()
