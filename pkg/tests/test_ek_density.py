"""
Test Suite for the Edelman-Kostlan Density

The stable evaluator is checked against an extended-precision evaluation
of the textbook formula, and the quadrature against closed-form integrals.
"""

import math
import random

import mpmath
import pytest

import kac_roots as kr
from kac_roots.ek_density import DIRECT_SWITCH, SERIES_SWITCH

# The quoted expansion constant sits about 2.3e-6 above 0.6257358072.
CONSTANT_SLACK = 5e-6


def oracle_density(n, t, dps=60):
    """rho_n(t) from the unsimplified formula in extended precision."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        first = 1 / (t**2 - 1) ** 2
        second = (n + 1) ** 2 * t ** (2 * n) / (t ** (2 * n + 2) - 1) ** 2
        return float(mpmath.sqrt(first - second) / mpmath.pi)


class TestDensity:
    """Test pointwise density evaluation"""

    def test_origin(self):
        """Test rho_n(0) = 1/pi"""
        for n in (1, 2, 10, 1000):
            assert kr.density(n, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)

    @pytest.mark.parametrize("n", [2, 10, 100, 1000])
    def test_unit_point(self, n):
        """Test rho_n(1) = sqrt(n(n+2)/12)/pi"""
        expected = math.sqrt(n * (n + 2) / 12) / math.pi
        assert kr.density(n, 1.0) == pytest.approx(expected, rel=1e-10)
        assert kr.density(n, -1.0) == pytest.approx(expected, rel=1e-10)

    def test_degree_ten_value(self):
        """Test rho_10(1) = sqrt(10)/pi"""
        assert kr.density(10, 1.0) == pytest.approx(1.0065842420897408, rel=1e-12)

    def test_degree_one_is_cauchy(self):
        """Test rho_1(t) = 1/(pi (1 + t**2)) across all evaluation regions"""
        for t in (0.0, 0.3, 0.75, 0.99, 0.99995, 1.0, 1.00002, 1.3, 5.0, -2.5, 1e6):
            assert kr.density(1, t) == pytest.approx(1 / (math.pi * (1 + t * t)), rel=1e-12)

    @pytest.mark.parametrize("n", [2, 10, 100, 1000])
    def test_near_unit_oracle(self, n):
        """Test against extended precision at t = 1 +- 1e-7"""
        for t in (1 - 1e-7, 1 + 1e-7):
            assert kr.density(n, t) == pytest.approx(oracle_density(n, t), rel=1e-9)

    @pytest.mark.parametrize("n", [1, 5, 50, 500])
    def test_oracle_grid(self, n):
        """Test against extended precision on a spread of points"""
        for t in (0.1, 0.5, 0.9, 0.99, 0.999, 0.9999, 1.001, 1.5, 3.0, -0.7, -1.2):
            assert kr.density(n, t) == pytest.approx(oracle_density(n, t), rel=1e-9)

    def test_symmetry(self):
        """Test rho(t) = rho(-t) and rho(t) = rho(1/t)/t**2"""
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(1, 2000)
            t = rng.uniform(0.01, 0.999)
            assert kr.density(n, t) == kr.density(n, -t)
            assert kr.density(n, 1 / t) == pytest.approx(kr.density(n, t) * t * t, rel=1e-12)

    @pytest.mark.parametrize("n", [10, 100, 1000])
    def test_continuity_across_switches(self, n):
        """Test agreement of the evaluation forms on both sides of each switch"""
        series_edge = 1 - SERIES_SWITCH / (n + 1)
        direct_edge = math.exp(-DIRECT_SWITCH / (n + 1))
        for edge in (series_edge, direct_edge):
            inside = kr.density(n, edge + 1e-14)
            outside = kr.density(n, edge - 1e-14)
            assert inside == pytest.approx(outside, rel=1e-9)

    def test_nonnegative(self):
        """Test nonnegativity at random points"""
        rng = random.Random(13)
        for n in (3, 50, 1000):
            for _ in range(10**4):
                t = rng.uniform(-3, 3)
                assert kr.density(n, t) >= 0.0

    def test_domain_errors(self):
        """Test invalid degree and non-finite points"""
        with pytest.raises(kr.DomainError):
            kr.density(0, 0.5)
        with pytest.raises(kr.DomainError):
            kr.density(5, float("inf"))
        with pytest.raises(kr.DomainError):
            kr.density(5, float("nan"))


class TestDensityQuery:
    """Test query validation"""

    def test_full_line(self):
        """Test the full-line constructor"""
        q = kr.DensityQuery.full_line(10)
        assert q.is_full_line
        assert q.rel_tol == 1e-10

    def test_invalid(self):
        """Test reversed intervals, bad degree and bad tolerance"""
        with pytest.raises(kr.DomainError):
            kr.DensityQuery(10, 1.0, 0.0)
        with pytest.raises(kr.DomainError):
            kr.DensityQuery(0, 0.0, 1.0)
        with pytest.raises(kr.DomainError):
            kr.DensityQuery(10, 0.0, 1.0, rel_tol=0.0)


class TestExpectedRoots:
    """Test validated quadrature of the density"""

    def test_degree_one_full_line(self):
        """Test that the degree-1 density integrates to one root"""
        result = kr.expected_roots(kr.DensityQuery.full_line(1))
        assert result.value == pytest.approx(1.0, rel=1e-10)
        assert result.err_est <= 1e-10 * max(abs(result.value), 1)
        assert result.evaluations > 0

    def test_window_near_origin(self):
        """Test n = 200 on (-1/2, 1/2) against ln(3)/pi"""
        result = kr.expected_roots(kr.DensityQuery(200, -0.5, 0.5))
        assert result.value == pytest.approx(math.log(3) / math.pi, abs=1e-6)

    @pytest.mark.parametrize("n", [100, 1000, 10000])
    def test_matches_asymptotic(self, n):
        """Test the full-line integral against the expansion"""
        result = kr.expected_roots(kr.DensityQuery.full_line(n))
        tolerance = 10 / n**2 + 1e-6 + CONSTANT_SLACK
        assert abs(result.value - kr.asymptotic_expectation(n)) <= tolerance

    def test_degree_hundred_value(self):
        """Test the n = 100 expected count"""
        assert kr.expected_real_roots(100) == pytest.approx(3.56384, abs=2e-4)

    @pytest.mark.parametrize("big_t", [2.0, 10.0])
    def test_reciprocal_symmetry(self, big_t):
        """Test the integral over [1, T] equals the one over [1/T, 1]"""
        for n in (5, 100):
            outer = kr.expected_roots(kr.DensityQuery(n, 1.0, big_t)).value
            inner = kr.expected_roots(kr.DensityQuery(n, 1.0 / big_t, 1.0)).value
            assert outer == pytest.approx(inner, rel=1e-9)

    def test_split_consistency(self):
        """Test that splitting the interval changes the value by less than the error estimates"""
        n = 300
        whole = kr.expected_roots(kr.DensityQuery(n, -0.3, 2.5))
        left = kr.expected_roots(kr.DensityQuery(n, -0.3, 0.97))
        right = kr.expected_roots(kr.DensityQuery(n, 0.97, 2.5))
        slack = whole.err_est + left.err_est + right.err_est + 1e-14
        assert abs(whole.value - (left.value + right.value)) <= slack

    def test_infinite_endpoints(self):
        """Test half-infinite ranges against the symmetric decomposition"""
        n = 40
        total = kr.expected_roots(kr.DensityQuery.full_line(n)).value
        positive = kr.expected_roots(kr.DensityQuery(n, 0.0, math.inf)).value
        assert positive == pytest.approx(total / 2, rel=1e-9)
        tail = kr.expected_roots(kr.DensityQuery(n, -math.inf, -1.0)).value
        assert tail == pytest.approx(total / 4, rel=1e-9)

    def test_empty_interval(self):
        """Test a degenerate interval"""
        result = kr.expected_roots(kr.DensityQuery(10, 0.3, 0.3))
        assert result.value == 0.0
        assert result.evaluations == 0

    def test_tolerance_not_met(self):
        """Test ToleranceNotMet carries the best estimate"""
        config = kr.QuadratureConfig(rel_tol=1e-15, limit=1)
        with pytest.raises(kr.ToleranceNotMet) as info:
            kr.expected_roots(kr.DensityQuery(5000, 0.0, 1.0, rel_tol=1e-15), config)
        assert info.value.result.value > 0
        assert info.value.result.err_est >= 0
        assert "err_est" in str(info.value)


class TestAsymptotics:
    """Test closed-form expansions and bounds"""

    def test_asymptotic_expectation(self):
        """Test hand-evaluated expansions"""
        assert kr.asymptotic_expectation(100) == pytest.approx(3.563840, abs=1e-6)
        assert kr.asymptotic_expectation(10**4) == pytest.approx(6.489, abs=1e-3)
        with pytest.raises(kr.DomainError):
            kr.asymptotic_expectation(1)

    def test_offset_decreases_to_constant(self):
        """Test the offset over the log law decreases toward the constant"""
        offsets = [kr.asymptotic_expectation(n) - 2 / math.pi * math.log(n) for n in (10, 100, 1000)]
        assert offsets[0] > offsets[1] > offsets[2] > kr.KAC_CONSTANT

    def test_edge_bound(self):
        """Test the edge bound and its domain"""
        assert kr.edge_bound(math.exp(2 * math.pi)) == pytest.approx(2.0)
        assert kr.edge_bound(1 + 1e-12) == pytest.approx(1.0)
        with pytest.raises(kr.DomainError):
            kr.edge_bound(1.0)

    def test_edge_integral_below_bound(self):
        """Test the Gaussian count on [0, 1 - 1/C) at n = 1000, C = 100"""
        value = kr.expected_roots(kr.DensityQuery(1000, 0.0, 0.99)).value
        assert value <= kr.edge_bound(100)

    def test_maslova_variance(self):
        """Test the variance target at n = 200"""
        assert kr.maslova_variance(200) == pytest.approx(2.452, abs=1e-3)

    def test_bulk_expectation(self):
        """Test the bulk integral is the complement of the edge integral on [0, 1]"""
        n, cap = 500, 20.0
        bulk = kr.bulk_expectation(n, cap).value
        edge = kr.expected_roots(kr.DensityQuery(n, 0.0, 1 - 1 / cap)).value
        half = kr.expected_roots(kr.DensityQuery(n, 0.0, 1.0)).value
        assert bulk + edge == pytest.approx(half, rel=1e-9)
        with pytest.raises(kr.DomainError):
            kr.bulk_expectation(n, 0.5)
