"""Compare the compiled Bessel kernels with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Prints the time per call
for each backend on the batched determinant entries (the hot path of the
eigenvalue scan) and on scalar kernel calls, plus the largest difference
between the two backends.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cone_zeta import _kernels_py

try:
    from cone_zeta import _kernels as _compiled
except ImportError:
    _compiled = None


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(n: int = 2000, repeat: int = 5) -> list[tuple[str, float, float | None, float | None]]:
    nus = (0.3, 0.5, 0.7)
    mus = np.linspace(0.01, 300.0, n)
    zs = np.linspace(0.01, 40.0, 200)
    cases = {
        "real_entries": lambda m: m.real_entries(nus, 1, 1.0, mus),
        "imag_entries": lambda m: m.imag_entries(nus, 1, 1.0, mus),
        "jnorm x200": lambda m: [m.jnorm(0.3, z) for z in zs],
        "wfun x200": lambda m: [m.wfun(z) for z in zs],
        "k0_scaled x200": lambda m: [m.k0_scaled(z) for z in zs],
    }
    rows = []
    for name, fn in cases.items():
        tp = _time(lambda: fn(_kernels_py), repeat)
        if _compiled is None:
            rows.append((name, tp, None, None))
            continue
        tc = _time(lambda: fn(_compiled), repeat)
        a, b = fn(_kernels_py), fn(_compiled)
        if isinstance(a, tuple):
            diff = max(float(np.max(np.abs(x - y))) for x, y in zip(a, b))
        else:
            diff = max(abs(x[0] - y[0]) for x, y in zip(a, b))
        rows.append((name, tp, tc, diff))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000, help="grid points for the batched entries")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print("%-16s %12s %12s %9s %12s" % ("case", "python [s]", "compiled [s]", "speedup", "max |diff|"))
    for name, tp, tc, diff in run(args.n, args.repeat):
        if tc is None:
            print("%-16s %12.4g %12s %9s %12s" % (name, tp, "n/a", "n/a", "n/a"))
        else:
            print("%-16s %12.4g %12.4g %9.1f %12.2e" % (name, tp, tc, tp / tc, diff))


if __name__ == "__main__":
    main()
