"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Kernel timings call each backend module directly.  The dynamics timing
swaps the backend in-process.  The sweep timing runs a full verification in
a subprocess with and without COASE_PURE_PYTHON=1; at that scale the
pure-Python Pareto oracle dominates, so both backends land close together.
"""

import argparse
import os
import subprocess
import sys
import timeit

from coase import Allocation, random_economy
from coase.kernels import backends

CASES = [(3, 3), (4, 4), (3, 6), (5, 6)]
SWEEP = ["-m", "coase.cli", "verify", "suboptimal", "--n", "3", "--m", "3", "--sample", "3000", "--seed", "7"]


def kernel_table(repeat):
    mods = backends()
    print(f"{'case':>10} {'kernel':>22} " + " ".join(f"{name:>12}" for name in mods) + "   speedup")
    for n, m in CASES:
        e = random_economy(n, m, 1234)
        allocs = [Allocation.from_code(c, n, m) for c in range(0, n**m, max(1, n**m // 25))]
        for kname in ("bilateral_trades", "improving_allocations"):
            times = {}
            for name, mod in mods.items():
                fn = getattr(mod, kname)
                t = timeit.timeit(lambda: [fn(e.rank_table, n, m, a.holdings) for a in allocs], number=repeat)
                times[name] = t / repeat
            cols = " ".join(f"{times[name] * 1e3:10.2f}ms" for name in mods)
            speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else "       -"
            print(f"{f'n={n} m={m}':>10} {kname:>22} {cols} {speed}")


def dynamics_table():
    """Ideal and bilateral runs on larger economies, swapping the backend in-process."""
    from coase import kernels
    from coase.dynamics import run_bilateral, run_ideal

    e = random_economy(5, 6, 77)
    starts = [Allocation.from_code(c, 5, 6) for c in range(0, 5**6, 5**6 // 8)]
    print("dynamics only (n=5, m=6, 8 initial allocations, no oracle):")
    saved = (kernels.bilateral_trades, kernels.improving_allocations, kernels.potential)
    times = {}
    try:
        for name, mod in backends().items():
            kernels.bilateral_trades = mod.bilateral_trades
            kernels.improving_allocations = mod.improving_allocations
            kernels.potential = mod.potential
            t = timeit.default_timer()
            for a in starts:
                run_bilateral(e, a)
                run_ideal(e, a)
            times[name] = timeit.default_timer() - t
            print(f"  {name:>6} backend  {times[name]:7.2f}s")
    finally:
        kernels.bilateral_trades, kernels.improving_allocations, kernels.potential = saved
    if "cython" in times:
        print(f"  speedup {times['python'] / times['cython']:.1f}x")


def sweep_time(pure):
    env = dict(os.environ)
    if pure:
        env["COASE_PURE_PYTHON"] = "1"
    t = timeit.default_timer()
    subprocess.run([sys.executable, *SWEEP], env=env, check=True, capture_output=True)
    return timeit.default_timer() - t


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    kernel_table(args.repeat)
    print()
    dynamics_table()
    print()
    print("end-to-end:", " ".join(SWEEP[2:]))
    pure = sweep_time(True)
    print(f"  python backend  {pure:7.2f}s")
    if "cython" in backends():
        fast = sweep_time(False)
        print(f"  cython backend  {fast:7.2f}s  ({pure / fast:.1f}x)")


if __name__ == "__main__":
    main()
