"""
Benchmark script comparing the real-root counting backends of kac-roots.
Includes: Sturm chains, Descartes bisection, root isolation, a floating
companion-matrix baseline (numpy.roots), and the density quadrature.
"""
import os
import statistics
import sys
import time
from typing import Callable, List

# Ensure python/kac_roots package is discoverable
sys.path.insert(
    0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "python"))
)

import numpy as np

import kac_roots as kr

# Test configuration
DEGREES = (50, 100, 200)
NUM_POLYS = 20
NUM_RUNS = 3  # Multiple runs for statistical accuracy
MASTER_SEED = 2024


class BenchmarkResult:
    """Container for benchmark results with statistical analysis."""

    def __init__(self, name: str, degree: int, times: List[float]):
        self.name = name
        self.degree = degree
        self.times = times
        self.mean_time = statistics.mean(times)
        self.median_time = statistics.median(times)
        self.std_dev = statistics.stdev(times) if len(times) > 1 else 0
        self.polys_per_sec = NUM_POLYS / self.mean_time if self.mean_time > 0 else 0.0
        self.min_time = min(times)
        self.max_time = max(times)

    def __str__(self):
        return (
            f"{self.name:20} | n={self.degree:4d} | "
            f"Mean: {self.mean_time:7.3f}s | "
            f"Poly/s: {self.polys_per_sec:8.1f} | "
            f"±{self.std_dev:6.3f}s"
        )


def run_multiple_times(benchmark_func: Callable[[int], float], name: str, degree: int) -> BenchmarkResult:
    """Run a benchmark function multiple times and collect statistics."""
    times = []
    print(f"Running {name} at n={degree}...")

    for run in range(NUM_RUNS):
        try:
            elapsed = benchmark_func(degree)
            times.append(elapsed)
            print(f"  Run {run + 1}: {elapsed:.3f}s")
        except kr.KacRootsError as e:
            print(f"  Run {run + 1}: FAILED - {e}")
            times.append(float("inf"))

    return BenchmarkResult(name, degree, times)


def _polys(degree: int) -> List[kr.IntPolynomial]:
    spec = kr.EnsembleSpec(kr.Distribution.GAUSSIAN, degree, MASTER_SEED)
    return [kr.sample(spec, i) for i in range(NUM_POLYS)]


def bench_sturm(degree: int) -> float:
    """Benchmark exact counting with Sturm chains."""
    polys = _polys(degree)
    start = time.perf_counter()
    for p in polys:
        kr.count_roots(p)
    return time.perf_counter() - start


def bench_descartes(degree: int) -> float:
    """Benchmark exact counting with Descartes bisection."""
    polys = _polys(degree)
    start = time.perf_counter()
    for p in polys:
        kr.count_roots_descartes(p)
    return time.perf_counter() - start


def bench_isolation(degree: int) -> float:
    """Benchmark isolation to width 2**-80 in the default bulk window."""
    polys = _polys(degree)
    window = kr.BulkWindow(0.5, 4.0).root_range(degree)
    start = time.perf_counter()
    for p in polys:
        kr.isolate_roots(p, window)
    return time.perf_counter() - start


def bench_companion(degree: int) -> float:
    """Benchmark the floating-point companion-matrix baseline (not exact)."""
    polys = [np.array([float(c) for c in reversed(p.coeffs)]) for p in _polys(degree)]
    start = time.perf_counter()
    for coeffs in polys:
        roots = np.roots(coeffs)
        int(np.sum(np.abs(roots.imag) < 1e-9))
    return time.perf_counter() - start


def bench_quadrature(degree: int) -> float:
    """Benchmark the full-line density integral (NUM_POLYS repetitions)."""
    start = time.perf_counter()
    for _ in range(NUM_POLYS):
        kr.expected_roots(kr.DensityQuery.full_line(degree))
    return time.perf_counter() - start


def check_agreement(degree: int) -> int:
    """Count samples where the floating baseline disagrees with the exact count."""
    mismatches = 0
    for p in _polys(degree):
        exact = kr.count_roots(p)
        roots = np.roots([float(c) for c in reversed(p.coeffs)])
        if exact != int(np.sum(np.abs(roots.imag) < 1e-9)):
            mismatches += 1
    return mismatches


def print_comparison_table(results: List[BenchmarkResult]):
    """Print a formatted comparison table of benchmark results."""
    print(f"\n{'='*80}")
    print(f"BENCHMARK RESULTS - {NUM_POLYS} polynomials x {NUM_RUNS} runs")
    print(f"{'='*80}")
    print(f"{'Backend':20} | {'Degree':>6} | {'Mean Time':>10} | {'Poly/s':>8} | {'Std Dev':>8}")
    print(f"{'-'*80}")

    for degree in DEGREES:
        rows = sorted((r for r in results if r.degree == degree), key=lambda r: r.mean_time)
        for result in rows:
            print(
                f"{result.name:20} | {result.degree:6d} | {result.mean_time:9.3f}s | "
                f"{result.polys_per_sec:8.1f} | ±{result.std_dev:6.3f}s"
            )
        print(f"{'-'*80}")


def print_system_info():
    """Print system information for benchmark context."""
    import platform

    print(f"\n{'='*80}")
    print("SYSTEM INFORMATION")
    print(f"{'='*80}")
    print(f"Platform: {platform.system()} {platform.release()}")
    print(f"Python: {sys.version.split()[0]}")
    print(f"numpy: {np.__version__}")
    print(f"kac-roots: {kr.__version__}")
    print(f"Degrees: {', '.join(str(d) for d in DEGREES)}")
    print(f"Polynomials per run: {NUM_POLYS}")
    print(f"Number of runs: {NUM_RUNS}")


def main():
    """Run the backend benchmarks."""
    print("kac-roots Backend Benchmark Suite")
    results = []

    benchmarks = [
        (bench_sturm, "sturm (exact)"),
        (bench_descartes, "descartes (exact)"),
        (bench_isolation, "isolation (exact)"),
        (bench_companion, "numpy.roots (float)"),
        (bench_quadrature, "density quadrature"),
    ]

    for degree in DEGREES:
        for benchmark_func, name in benchmarks:
            results.append(run_multiple_times(benchmark_func, name, degree))

    print_comparison_table(results)

    print("\nFloating baseline disagreements with exact counts:")
    for degree in DEGREES:
        print(f"  n={degree}: {check_agreement(degree)} of {NUM_POLYS}")

    print_system_info()


if __name__ == "__main__":
    main()
