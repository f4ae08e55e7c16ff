"""
Comprehensive Test Suite for Performance Features

Benchmarks the hot paths with pytest-benchmark:
- Sampling
- Sturm and Descartes counting
- Root isolation
- Density evaluation and quadrature
- Parallel sample dispatch
"""

import pytest

import kac_roots as kr


class TestSamplingPerformance:
    """Benchmark polynomial sampling"""

    @pytest.fixture
    def spec(self):
        """A Gaussian ensemble of moderate degree"""
        return kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 200, 1)

    def test_sample(self, benchmark, spec):
        """Benchmark drawing one degree-200 polynomial"""
        p = benchmark(kr.sample, spec, 7)
        assert p.formal_degree == 200


class TestCountingPerformance:
    """Benchmark the exact counting backends"""

    @pytest.fixture
    def polynomial(self):
        """A degree-100 Gaussian sample"""
        return kr.sample(kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 100, 3), 0)

    def test_sturm(self, benchmark, polynomial):
        """Benchmark Sturm counting on the real line"""
        count = benchmark(kr.count_roots, polynomial)
        assert count == kr.count_roots_descartes(polynomial)

    def test_descartes(self, benchmark, polynomial):
        """Benchmark Descartes counting on the real line"""
        count = benchmark(kr.count_roots_descartes, polynomial)
        assert count == kr.count_roots(polynomial)

    def test_isolation(self, benchmark, polynomial):
        """Benchmark isolation in the bulk window"""
        window = kr.BulkWindow(0.5, 4.0).root_range(100)
        report = benchmark(kr.isolate_roots, polynomial, window)
        assert report.count == kr.count_roots(polynomial, window)


class TestDensityPerformance:
    """Benchmark density evaluation and quadrature"""

    def test_density_point(self, benchmark):
        """Benchmark one evaluation close to t = 1"""
        value = benchmark(kr.density, 1000, 0.999)
        assert value > 0

    def test_full_line(self, benchmark):
        """Benchmark the full-line integral at n = 1000"""
        result = benchmark(kr.expected_roots, kr.DensityQuery.full_line(1000))
        assert result.value == pytest.approx(kr.asymptotic_expectation(1000), abs=1e-4)


@pytest.mark.slow
class TestParallelPerformance:
    """Benchmark sample dispatch over worker processes"""

    @pytest.mark.parametrize("threads", [1, 4])
    def test_simulate(self, benchmark, threads):
        """Benchmark 200 samples at n = 60"""
        spec = kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 60, 5)
        records = benchmark.pedantic(kr.simulate, args=(spec, 200), kwargs={"threads": threads}, rounds=1)
        assert len(records) == 200
