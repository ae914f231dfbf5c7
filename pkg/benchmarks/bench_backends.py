"""Compare the compiled and pure-Python inner-loop backends.

Runs each workload in a subprocess with CHAOS_FORGE_BACKEND pinned, so
the numbers reflect exactly what a user of either backend sees.

    python3 benchmarks/bench_backends.py
"""

import argparse
import os
import subprocess
import sys
import time


def bench_poly_mul(reps: int = 200) -> float:
    from chaosforge.corpus import rng_from, random_polynomial

    rng = rng_from(1)
    P = random_polynomial(rng, 3, 6, n_terms=80)
    Q = random_polynomial(rng, 3, 6, n_terms=80)
    P * Q  # warm up
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(reps):
            P * Q
        best = min(best, time.perf_counter() - t0)
    return best


def bench_expectation(reps: int = 200) -> float:
    from chaosforge.gaussian_algebra import gaussian_expectation
    from chaosforge.corpus import rng_from, random_polynomial

    rng = rng_from(2)
    P = random_polynomial(rng, 4, 6, n_terms=60)
    big = P * P * P  # a few thousand monomials
    gaussian_expectation(big)
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(reps):
            gaussian_expectation(big)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_moment_oracle(cases: int = 60) -> float:
    """End to end: fourth moments of chaos products by the polynomial route."""
    from chaosforge.corpus import kernel_pair_corpus
    from chaosforge.gaussian_algebra import gaussian_expectation
    from chaosforge.wiener_chaos import multiple_integral, to_polynomial

    pairs = kernel_pair_corpus(3, cases)
    t0 = time.perf_counter()
    for f, g in pairs:
        R = to_polynomial(multiple_integral(f)) * to_polynomial(multiple_integral(g))
        power = R
        for _ in range(3):
            power = power * R
        gaussian_expectation(power)
    return time.perf_counter() - t0


WORKLOADS = {
    "poly-mul": bench_poly_mul,
    "expectation": bench_expectation,
    "moment-oracle": bench_moment_oracle,
}


def run_child(workload: str) -> int:
    from chaosforge.kernels import BACKEND

    seconds = WORKLOADS[workload]()
    print(f"RESULT {BACKEND} {seconds:.6f}")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workload", choices=sorted(WORKLOADS), help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.workload:
        return run_child(args.workload)

    timings: dict[tuple[str, str], float] = {}
    for backend in ("python", "compiled"):
        env = dict(os.environ, CHAOS_FORGE_BACKEND=backend)
        for name in WORKLOADS:
            proc = subprocess.run(
                [sys.executable, os.path.abspath(__file__), "--workload", name],
                env=env,
                capture_output=True,
                text=True,
            )
            if proc.returncode != 0:
                print(f"{name} [{backend}] failed:\n{proc.stderr}", file=sys.stderr)
                return 1
            tag, seconds = proc.stdout.split()[-2:]
            if tag != backend:
                print(f"{name}: wanted backend {backend}, got {tag}", file=sys.stderr)
                return 1
            timings[(name, backend)] = float(seconds)

    width = max(len(n) for n in WORKLOADS)
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  speedup")
    for name in WORKLOADS:
        py = timings[(name, "python")]
        cy = timings[(name, "compiled")]
        print(f"{name:<{width}}  {py:>9.4f}s  {cy:>9.4f}s  {py / cy:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
