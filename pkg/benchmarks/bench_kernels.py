"""Compare the compiled loss kernels against the pure numpy fallback.

Run from the repo root:

    python3 benchmarks/bench_kernels.py [--sizes 1000x100,10000x200] [--repeat 30]

Prints per-call times for the fused value+gradient pass under both backends
and the max absolute deviation between them.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sparsepref._kernels import pure

try:
    from sparsepref._kernels import _core as compiled
except ImportError:
    compiled = None


def _time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(n, d, repeat, sigma=0.1):
    rng = np.random.default_rng(1234)
    X = np.ascontiguousarray(rng.standard_normal((n, d)))
    y = rng.integers(0, 2, n).astype(np.int8)
    theta = rng.standard_normal(d) / np.sqrt(d)
    grad_a = np.empty(d)
    grad_b = np.empty(d)
    print(f"n={n} d={d}")
    for kernel_id, name in ((0, "btl"), (1, "tm")):
        t_pure = _time_call(
            lambda: pure.nll_value_grad(X, y, theta, sigma, kernel_id, grad_a), repeat
        )
        line = f"  {name}: pure {t_pure * 1e3:8.3f} ms"
        if compiled is not None:
            t_comp = _time_call(
                lambda: compiled.nll_value_grad(X, y, theta, sigma, kernel_id, grad_b),
                repeat,
            )
            va = pure.nll_value_grad(X, y, theta, sigma, kernel_id, grad_a)
            vb = compiled.nll_value_grad(X, y, theta, sigma, kernel_id, grad_b)
            dev = max(abs(va - vb), float(np.max(np.abs(grad_a - grad_b))))
            line += (f"  compiled {t_comp * 1e3:8.3f} ms"
                     f"  speedup {t_pure / t_comp:5.2f}x  max dev {dev:.3e}")
        else:
            line += "  (compiled backend not built)"
        print(line)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000x50,10000x100,100000x100",
                    help="comma list of NxD problem sizes")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    for tok in args.sizes.split(","):
        n, d = (int(v) for v in tok.lower().split("x"))
        bench(n, d, args.repeat)


if __name__ == "__main__":
    main()
