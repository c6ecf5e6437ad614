"""Compiled-vs-pure backend timings on the hot kernels.

Run:  python3 benchmarks/bench_backends.py [--steps N]

Times the coupled iterate and fused histogram kernels in both precisions.
The pure backend runs the same algorithms in Python, so expect a ratio of
a few thousand; the point is that both exist and agree bitwise (the parity
test suite checks the agreement, this script checks the price).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import chaoslab._purepy as pure
from chaoslab import arithmetic, coupling, maps

try:
    import chaoslab._kernels as compiled
except ImportError:
    compiled = None


def _system(dtype):
    spec = maps.make_map("tent")
    mode = arithmetic.BINARY64 if dtype == np.float64 else arithmetic.BINARY32
    cfg = coupling.CouplingConfig(p=3, eps1=1e-14 if dtype == np.float64
                                  else 1e-7)
    matrix = coupling.build_matrix(cfg, mode)
    x0 = np.array([0.330, 0.3387564, 0.3313534], dtype=dtype)
    return spec, matrix, x0


def _time(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def bench(mod, steps: int):
    rows = []
    for dtype, tag in ((np.float64, "f64"), (np.float32, "f32")):
        spec, matrix, x0 = _system(dtype)
        it = getattr(mod, f"iterate_coupled_{tag}")
        x = x0.copy()
        dt = _time(it, spec.map_id, dtype(spec.a), dtype(spec.l),
                   matrix.entries, x, steps)
        rows.append((f"iterate p=3 {tag}", steps, dt))
        hi = getattr(mod, f"hist_coupled_{tag}")
        counts = np.zeros(1000, dtype=np.int64)
        x = x0.copy()
        dt = _time(hi, spec.map_id, dtype(spec.a), dtype(spec.l),
                   matrix.entries, x, steps, 0, counts, 0)
        rows.append((f"hist   p=3 {tag}", steps, dt))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=None,
                    help="steps per kernel (defaults: 1e7 compiled, 1e5 pure)")
    args = ap.parse_args()

    results = {}
    if compiled is not None:
        n = args.steps or 10 ** 7
        results["compiled"] = bench(compiled, n)
    n = args.steps or 10 ** 5
    results["pure"] = bench(pure, n)

    print(f"{'kernel':<18} {'backend':<9} {'steps':>10} {'secs':>9} "
          f"{'steps/s':>12}")
    rates = {}
    for name, rows in results.items():
        for label, steps, dt in rows:
            rate = steps / dt
            rates[(label, name)] = rate
            print(f"{label:<18} {name:<9} {steps:>10} {dt:>9.3f} "
                  f"{rate:>12.3e}")
    if compiled is not None:
        print()
        for label in {k[0] for k in rates}:
            ratio = rates[(label, "compiled")] / rates[(label, "pure")]
            print(f"{label:<18} compiled/pure speedup: {ratio:,.0f}x")


if __name__ == "__main__":
    main()
