"""Time the numba kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py --m 4 --n 6 --repeat 200

The first numba call (compile or cache load) is timed separately.
"""
import argparse
import time

import numpy as np

from geomeasure import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=4, help="tensor order")
    ap.add_argument("--n", type=int, default=6, help="dimension")
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--iters", type=int, default=200, help="power iterations per shopm_loop call")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba unavailable or disabled; nothing to compare")

    rng = np.random.default_rng(args.seed)
    m, n = args.m, args.n
    flat = rng.random(n ** m)
    x = rng.random(n)
    x /= np.linalg.norm(x)
    alpha = (m - 1) * float(np.linalg.norm(flat)) + 1e-6
    buf = np.empty(args.iters + 1)

    cases = {
        "contract_once": lambda k: (lambda: k(flat, n, m, x)),
        "contract_full": lambda k: (lambda: k(flat, n, m, x)),
        # tol 0 forces the full iteration count
        "shopm_loop": lambda k: (lambda: k(flat, n, m, x, alpha, 0.0, args.iters, buf)),
    }
    print(f"order {m}, dim {n}, {n ** m} entries, best of {args.repeat}")
    print(f"{'kernel':<15}{'numpy':>14}{'numba':>14}{'speedup':>10}{'1st call':>10}")
    for name, make in cases.items():
        py = make(getattr(_kernels, name + "_py"))
        nb = make(getattr(_kernels, name + "_nb"))
        t0 = time.perf_counter()
        nb()
        compile_s = time.perf_counter() - t0
        py_best = best_of(py, args.repeat)
        nb_best = best_of(nb, args.repeat)
        print(f"{name:<15}{py_best * 1e6:>11.1f} us{nb_best * 1e6:>11.1f} us"
              f"{py_best / nb_best:>9.1f}x{compile_s:>9.2f}s")


if __name__ == "__main__":
    main()
