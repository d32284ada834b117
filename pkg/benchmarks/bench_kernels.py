"""Compare the compiled and pure-Python RK4 kernels.

    python3 benchmarks/bench_kernels.py [--steps N] [--repeat R]

Both backends integrate the same random model from the same state; the
table reports the best wall time per run and the largest entrywise
difference between the two trajectories.
"""

import argparse
import time

import numpy as np

from lindspect import kernels


def random_problem(d, n_channels, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = 0.5 * (a + a.conj().T)
    jumps = (rng.standard_normal((n_channels, d, d)) + 1j * rng.standard_normal((n_channels, d, d))) / np.sqrt(d)
    rates = rng.uniform(0.1, 1.0, n_channels)
    heff = h - 0.5j * sum(g * j.conj().T @ j for g, j in zip(rates, jumps))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = b @ b.conj().T
    return heff, jumps, rates, rho / np.trace(rho).real


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("compiled", kernels.compiled_backend))
    else:
        print("compiled backend not built; only timing the Python kernel")

    print(f"{'d':>4} {'jumps':>5} " + " ".join(f"{n + ' [s]':>14}" for n, _ in backends) + f" {'speedup':>8} {'max diff':>10}")
    for d, k in [(2, 1), (4, 1), (8, 1), (8, 3), (16, 2), (32, 2)]:
        heff, jumps, rates, rho = random_problem(d, k)
        dt = 0.01 / max(1.0, np.abs(heff).sum(axis=1).max())
        results = []
        for _, be in backends:
            results.append(best_time(lambda: be.rk4_propagate(heff, jumps, rates, rho, dt, args.steps, args.steps), args.repeat))
        times = [t for t, _ in results]
        speedup = times[0] / times[-1] if len(times) > 1 else float("nan")
        diff = np.abs(results[0][1] - results[-1][1]).max()
        print(f"{d:>4} {k:>5} " + " ".join(f"{t:>14.4f}" for t in times) + f" {speedup:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
