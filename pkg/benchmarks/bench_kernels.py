"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py --repeat 5
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from translog import kernels as K
from translog.fixtures import m2
from translog.model import Model
from translog.parser import parse_game
from translog.reference import Evaluator


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_cases(rng, n_rows, N):
    A = rng.integers(1, 1 << N, size=(n_rows, N), dtype=np.int64)
    B = rng.integers(1, 1 << N, size=(n_rows, N), dtype=np.int64)
    M = Model(3, ("x", "y")) if N == 9 else m2()
    merge = Evaluator(M).reference.merge_table({"x"}, {"y"})
    pairs = np.array([[i, i + 1] for i in range(0, N - 1, 2)], dtype=np.int64)
    masks = rng.integers(1, 1 << N, size=n_rows * 4, dtype=np.int64)
    return {
        "compose_all": lambda: K.compose_all(A, B),
        "union_all": lambda: K.union_all(A, B),
        "parallel_all": lambda: K.parallel_all(A, B, merge),
        "independent_mask": lambda: K.independent_mask(np.repeat(A, 50, axis=0), pairs),
        "or_product": lambda: K.or_product(masks, masks),
    }


def engine_cases():
    M = m2()
    star = parse_game("(#x + !y ; ?(R(x)))*", M)
    mixed = parse_game("(#x ; #y) + (#y || #x)", M)
    full = (1 << M.n_assignments) - 1

    def run_star():
        Evaluator(M).reference.strats(star, full, {})

    def run_mixed():
        Evaluator(M).reference.strats(mixed, full >> 1, {})

    return {"strategies, star game": run_star, "strategies, choice and par": run_mixed}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=300, help="rows per operand for pairwise kernels")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    backends = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    print(f"{'case':42s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for N in (4, 9):
        cases = kernel_cases(rng, args.rows, N)
        for name, fn in cases.items():
            row = {}
            for b in backends:
                with K.use_backend(b):
                    fn()  # compile / warm up
                    row[b] = best_of(fn, args.repeat)
            _print(f"{name} (N={N}, {args.rows} rows)", row, backends)
    for name, fn in engine_cases().items():
        row = {}
        for b in backends:
            with K.use_backend(b):
                fn()
                row[b] = best_of(fn, args.repeat)
        _print(name, row, backends)


def _print(name, row, backends):
    cells = " ".join(f"{row[b] * 1e3:9.2f}ms" for b in backends)
    speed = f"{row['numpy'] / row['numba']:8.1f}x" if "numba" in row else ""
    print(f"{name:42s} {cells} {speed}")


if __name__ == "__main__":
    main()
