"""Compare the compiled and numpy algebra kernels.

Usage::

    python benchmarks/bench_kernels.py [--n 100000] [--repeat 5]

Two workloads are timed for each backend: batched calls on ``(n, 4)`` stacks
and a loop of single-vector calls (the pattern used inside the Frenet code).
"""
import argparse
import timeit

import numpy as np

from semiquat.kernels import get_backend

SIGNS = np.array([-1.0, -1.0, 1.0, 1.0])
EPS = (-1.0, -1.0, 1.0)


def workloads(mod, a, b, c, d):
    return {
        "qmul": lambda: mod.qmul(a, b, EPS),
        "hdot": lambda: mod.hdot(a, b, SIGNS),
        "wedge4": lambda: mod.wedge4(a, b, c, SIGNS, 1.0),
        "det4": lambda: mod.det4(a, b, c, d),
    }


def single_loop(mod, a, b, c, count):
    def run():
        for i in range(count):
            mod.wedge4(a[i], b[i], c[i], SIGNS, 1.0)
            mod.hdot(a[i], b[i], SIGNS)
    return run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--single", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    a, b, c, d = (rng.normal(size=(args.n, 4)) for _ in range(4))
    backends = {"python": get_backend("python")}
    try:
        backends["cython"] = get_backend("cython")
    except ImportError:
        print("compiled extension not built; timing the numpy backend only")

    ref = workloads(backends["python"], a, b, c, d)
    print(f"{'kernel':<16}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    rows = list(ref) + ["single-vector"]
    for kernel in rows:
        times = {}
        for name, mod in backends.items():
            if kernel == "single-vector":
                fn = single_loop(mod, a, b, c, args.single)
            else:
                fn = workloads(mod, a, b, c, d)[kernel]
                diff = np.max(np.abs(np.asarray(fn()) - np.asarray(ref[kernel]())))
                assert diff < 1e-12, f"{kernel}: backends disagree by {diff}"
            times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        line = f"{kernel:<16}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times.values())
        if "cython" in times:
            line += f"{times['python'] / times['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
