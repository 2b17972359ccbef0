"""Numba kernels vs the vectorised numpy fallback.

Run: python benchmarks/bench_kernels.py [--batch 4000] [--runs 5]

Both implementations are imported directly, so the QUADHAM_BACKEND flag does
not matter here.  The numba functions are called once before timing so that
compilation (or cache loading) is excluded.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from quadham import kernels
from quadham._accel import HAS_NUMBA
from quadham.adjrep import gamma_to_adjoint


def random_adjoint_stack(batch: int, K: int, rng) -> np.ndarray:
    out = np.empty((batch, 2 * K, 2 * K), dtype=complex)
    for i in range(batch):
        g = rng.normal(size=(2 * K, 2 * K)) + 1j * rng.normal(size=(2 * K, 2 * K))
        out[i] = gamma_to_adjoint(0.5 * (g + g.T)).matrixH
    return out


def best_of(fn, arg, runs: int) -> float:
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn(arg)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=4000)
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not importable; nothing to compare")
        return

    rng = np.random.default_rng(args.seed)
    print(f"batch={args.batch} runs={args.runs} (best of)")
    print(f"{'kernel':<10} {'K':>2} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8} {'max diff':>10}")
    for K in (1, 2, 3):
        mats = random_adjoint_stack(args.batch, K, rng)
        coeffs = kernels._charpoly_np(mats)
        cases = [
            ("charpoly", kernels._charpoly_nb, kernels._charpoly_np, mats),
            ("roots", kernels._roots_nb, kernels._roots_np, np.ascontiguousarray(coeffs[:, 0::2])),
            ("expm", kernels._expm_nb, kernels._expm_np, np.ascontiguousarray(0.3j * mats)),
        ]
        for name, nb, npy, arg in cases:
            r_nb, r_np = nb(arg), npy(arg)  # warm-up and cross-check
            if name == "roots":
                # root order differs between methods; compare sorted roots
                a = np.sort_complex(r_nb[0])
                b = np.sort_complex(r_np[0])
                diff = float(np.abs(a - b).max())
            else:
                diff = float(np.abs(r_nb - r_np).max())
            t_nb = best_of(nb, arg, args.runs)
            t_np = best_of(npy, arg, args.runs)
            print(f"{name:<10} {K:>2} {1e3 * t_nb:>11.2f} {1e3 * t_np:>11.2f} {t_np / t_nb:>7.1f}x {diff:>10.2e}")


if __name__ == "__main__":
    main()
