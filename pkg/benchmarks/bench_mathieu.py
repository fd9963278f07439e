"""Time the compiled and pure-Python Mathieu kernels on the same spans.

Run with ``python3 benchmarks/bench_mathieu.py``.
"""

import argparse
import timeit

import numpy as np

from photoabsorb import _mathieu_py

try:
    from photoabsorb import _mathieu
except ImportError:
    _mathieu = None

CASES = [
    ("delta=0.5 nu=2.0 tau=15", (0.5, 2.0, 0.0, 15.0, 1e-9)),
    ("delta=0.1 nu=2.0 tau=20", (0.1, 2.0, 0.0, 20.0, 1e-11)),
    ("delta=0.5 nu=2.3 tau=100", (0.5, 2.3, 0.0, 100.0, 1e-9)),
]


def best_time(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    kernels = [("python", _mathieu_py.propagate)]
    if _mathieu is not None:
        kernels.insert(0, ("cython", _mathieu.propagate))
    else:
        print("compiled kernel not built; timing the fallback only")
    print(f"{'case':28s} {'backend':8s} {'steps':>7s} {'time [s]':>11s} {'x cython':>9s}")
    for label, case in CASES:
        ref = None  # time of the first (fastest expected) kernel
        results = {}
        for name, fn in kernels:
            out = fn(*case)
            results[name] = out
            t = best_time(fn, case, args.repeat)
            ref = ref or t
            print(f"{label:28s} {name:8s} {out[4]:7d} {t:11.3e} {t / ref:9.1f}")
        if len(results) == 2:
            diff = np.max(np.abs(np.subtract(results["cython"][:4], results["python"][:4])))
            print(f"{'':28s} max |difference| = {diff:.1e}")


if __name__ == "__main__":
    main()
