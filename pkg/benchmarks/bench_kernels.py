"""Compare the compiled recurrence kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--reps 200] [--hidden 16 32] [--lengths 50 250 2000]

Reports the median wall time per call for the forward recurrence and the
BPTT backward pass, and checks that both backends agree.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from shlearn.nn import kernels


def _median_us(fn, reps: int) -> float:
    fn()
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return statistics.median(samples) / 1e3


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--hidden", type=int, nargs="+", default=[16, 32])
    ap.add_argument("--lengths", type=int, nargs="+", default=[50, 250, 2000])
    args = ap.parse_args(argv)

    compiled = kernels.compiled_backend
    py = kernels.python_backend
    if compiled is None:
        print("compiled backend not built; only the NumPy fallback is available")
    rng = np.random.default_rng(0)
    print(f"{'H':>3} {'T':>5} {'kernel':>8} {'numpy_us':>10} {'cython_us':>10} {'speedup':>8}")
    for H in args.hidden:
        for T in args.lengths:
            A = rng.normal(size=(T, H))
            Wh = rng.uniform(-0.25, 0.25, size=(H, H))
            Hs = py.rnn_forward(A, Wh)
            dHs = rng.normal(size=(T, H))
            cases = {
                "forward": (lambda m: m.rnn_forward(A, Wh)),
                "backward": (lambda m: m.rnn_backward(Hs, dHs, Wh)),
            }
            for kernel, call in cases.items():
                t_py = _median_us(lambda: call(py), args.reps)
                if compiled is None:
                    print(f"{H:>3} {T:>5} {kernel:>8} {t_py:>10.1f} {'-':>10} {'-':>8}")
                    continue
                a, b = call(py), call(compiled)
                for x, y in zip(a if isinstance(a, tuple) else (a,), b if isinstance(b, tuple) else (b,)):
                    np.testing.assert_allclose(x, y, rtol=1e-10, atol=1e-12)
                t_c = _median_us(lambda: call(compiled), args.reps)
                print(f"{H:>3} {T:>5} {kernel:>8} {t_py:>10.1f} {t_c:>10.1f} {t_py / t_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
