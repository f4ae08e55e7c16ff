"""
Test Suite for Exact Real-Root Counting

Sturm chains, Descartes bisection and root isolation, checked against each
other, against hand computations and against a floating companion-matrix
oracle.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

import kac_roots as kr
from kac_roots.poly_core import sign_at


def random_polynomial(rng, max_degree=12, bound=9):
    while True:
        coeffs = [rng.randint(-bound, bound) for _ in range(rng.randint(1, max_degree + 1))]
        if any(coeffs):
            return kr.IntPolynomial(tuple(coeffs))


def assert_positive_multiple(poly, expected):
    """``poly`` equals ``expected`` times a positive constant."""
    a = [Fraction(c) for c in kr.IntPolynomial(poly.coeffs).trimmed().coeffs]
    b = [Fraction(c) for c in expected]
    assert len(a) == len(b)
    k = next(x / y for x, y in zip(a, b) if y != 0)
    assert k > 0
    assert a == [k * y for y in b]


class TestRootRange:
    """Test range construction and membership"""

    def test_default_is_half_open(self):
        """Test the (lo, hi] default"""
        r = kr.RootRange(0, 1)
        assert not r.contains(0)
        assert r.contains(1)
        assert str(r) == "(0, 1]"

    def test_infinite_endpoints(self):
        """Test that float infinities become open unbounded ends"""
        r = kr.RootRange(float("-inf"), float("inf"))
        assert r.lo is None and r.hi is None
        assert not r.hi_closed
        assert r.contains(Fraction(10**9))

    def test_empty_and_invalid(self):
        """Test empty ranges and reversed endpoints"""
        assert kr.RootRange.open(1, 1).is_empty
        assert not kr.RootRange.closed(1, 1).is_empty
        with pytest.raises(ValueError):
            kr.RootRange(2, 1)


class TestSturmChain:
    """Test Sturm chain construction"""

    def test_examples(self):
        """Test hand-computed chains up to positive constants"""
        chain = kr.sturm_chain(kr.poly(-1, 0, 1))
        assert len(chain.polys) == 3
        assert_positive_multiple(chain.polys[0], [-1, 0, 1])
        assert_positive_multiple(chain.polys[1], [0, 2])
        assert_positive_multiple(chain.polys[2], [1])

        chain = kr.sturm_chain(kr.poly(1, 0, 1))
        assert_positive_multiple(chain.polys[1], [0, 2])
        assert_positive_multiple(chain.polys[2], [-1])

        chain = kr.sturm_chain(kr.poly(0, 1))
        assert len(chain.polys) == 2
        assert_positive_multiple(chain.polys[1], [1])

    def test_degrees_decrease(self):
        """Test strictly decreasing degrees along random chains"""
        rng = random.Random(3)
        for _ in range(100):
            p = random_polynomial(rng)
            chain = kr.sturm_chain(kr.squarefree_part(p))
            degrees = chain.degrees
            assert all(a > b for a, b in zip(degrees, degrees[1:]))

    def test_zero_raises(self):
        """Test ZeroPolynomial for the zero polynomial"""
        with pytest.raises(kr.ZeroPolynomial):
            kr.sturm_chain(kr.poly(0, 0))


class TestCountRoots:
    """Test Sturm counting"""

    def test_examples(self):
        """Test hand-checked counts"""
        assert kr.count_roots(kr.poly(-1, 0, 1), kr.RootRange(-2, 2)) == 2
        assert kr.count_roots(kr.poly(1, 0, 1)) == 0
        assert kr.count_roots(kr.poly(1, 1, -1, -1)) == 2
        assert kr.count_roots(kr.poly(7)) == 0

    def test_endpoint_convention(self):
        """Test that a root at hi counts and a root at lo does not"""
        p = kr.poly(-1, 0, 1)
        assert kr.count_roots(p, kr.RootRange(1, 2)) == 0
        assert kr.count_roots(p, kr.RootRange(0, 1)) == 1
        assert kr.count_roots(p, kr.RootRange.closed(1, 2)) == 1
        assert kr.count_roots(p, kr.RootRange.open(-1, 1)) == 0
        assert kr.count_roots(p, kr.RootRange.closed(-1, 1)) == 2

    def test_rademacher_exclusion_zone(self):
        """Test that +-1 coefficient polynomials have no roots in (-1/2, 1/2)"""
        rng = random.Random(21)
        window = kr.RootRange.open(Fraction(-1, 2), Fraction(1, 2))
        for _ in range(200):
            p = kr.IntPolynomial(tuple(rng.choice((-1, 1)) for _ in range(rng.randint(2, 30))))
            assert kr.count_roots(p, window) == 0

    def test_scale_invariance(self):
        """Test that positive scaling leaves counts unchanged"""
        rng = random.Random(8)
        for _ in range(50):
            p = random_polynomial(rng)
            assert kr.count_roots(p.scaled(12345)) == kr.count_roots(p)
            assert kr.count_roots(kr.IntPolynomial(p.coeffs, 53)) == kr.count_roots(p)

    def test_additivity(self):
        """Test count(a, c] = count(a, b] + count(b, c] at a non-root b"""
        rng = random.Random(17)
        for _ in range(100):
            p = random_polynomial(rng)
            a, c = Fraction(-4), Fraction(4)
            b = Fraction(rng.randint(-63, 63), 16) + Fraction(1, 1024)
            if sign_at(kr.squarefree_part(p).coeffs, b) == 0:
                continue
            whole = kr.count_roots(p, kr.RootRange(a, c))
            parts = kr.count_roots(p, kr.RootRange(a, b)) + kr.count_roots(p, kr.RootRange(b, c))
            assert whole == parts

    def test_parity(self):
        """Test degree minus real count is even for squarefree inputs"""
        rng = random.Random(23)
        for _ in range(100):
            p = kr.squarefree_part(random_polynomial(rng))
            assert (p.effective_degree - kr.count_roots(p)) % 2 == 0

    def test_reversal_symmetry(self):
        """Test roots of x**d p(1/x) in (0, 1] match roots of p in [1, inf)"""
        rng = random.Random(29)
        for _ in range(100):
            p = random_polynomial(rng)
            rev = kr.reversed_polynomial(p)
            lhs = kr.count_roots(rev, kr.RootRange(0, 1))
            rhs = kr.count_roots(p, kr.RootRange(1, None, lo_closed=True))
            assert lhs == rhs

    def test_against_companion_matrix(self):
        """Test counts against numpy.roots on well separated random cubics"""
        rng = random.Random(31)
        checked = 0
        for _ in range(200):
            roots = sorted(Fraction(rng.randint(-40, 40), 8) for _ in range(3))
            if len(set(roots)) < 3:
                continue
            coeffs = [Fraction(1)]
            for r in roots:
                # multiply by (x - r)
                coeffs = [a - r * b for a, b in zip([Fraction(0)] + coeffs, coeffs + [Fraction(0)])]
            p = kr.IntPolynomial(tuple(int(c * 8**3) for c in coeffs))
            numeric = np.roots([float(c) for c in reversed(p.coeffs)])
            lo, hi = Fraction(-33, 16), Fraction(33, 16)
            real = [z.real for z in numeric if abs(z.imag) < 1e-9 and lo < z.real <= hi]
            assert kr.count_roots(p, kr.RootRange(lo, hi)) == len(real)
            checked += 1
        assert checked > 100


class TestDescartes:
    """Test the Descartes / VCA backend"""

    def test_examples(self):
        """Test hand-checked counts"""
        assert kr.count_roots_descartes(kr.poly(-1, 0, 1), kr.RootRange(-2, 2)) == 2
        assert kr.count_roots_descartes(kr.poly(0, -1, 0, 1), kr.RootRange(0, 2)) == 1
        assert kr.count_roots_descartes(kr.poly(1, 1, -1, -1)) == 2

    def test_closed_endpoints(self):
        """Test roots sitting exactly on closed and open endpoints"""
        p = kr.poly(-1, 0, 1)
        assert kr.count_roots_descartes(p, kr.RootRange.closed(-1, 1)) == 2
        assert kr.count_roots_descartes(p, kr.RootRange.open(-1, 1)) == 0
        assert kr.count_roots_descartes(p, kr.RootRange.closed(1, 1)) == 1

    def test_depth_cap(self):
        """Test InternalError when the bisection depth cap is hit"""
        p = kr.poly(3, -20, 32)  # (4x - 1)(8x - 3)
        with pytest.raises(kr.InternalError):
            kr.count_roots_descartes(p, kr.RootRange(0, 1), max_depth=1)

    def test_agrees_with_sturm(self):
        """Test backend equivalence on random small integer polynomials"""
        rng = random.Random(2024)
        ranges = [
            kr.RootRange.real_line(),
            kr.RootRange(-1, 1),
            kr.RootRange.closed(Fraction(-1, 2), Fraction(3, 2)),
            kr.RootRange.open(0, 2),
        ]
        for _ in range(2000):
            p = random_polynomial(rng)
            for r in ranges:
                assert kr.count_roots(p, r) == kr.count_roots_descartes(p, r)

    @pytest.mark.slow
    def test_agrees_with_sturm_full(self):
        """Test backend and isolation equivalence on 10**5 random polynomials"""
        rng = random.Random(100000)
        for _ in range(100000):
            p = random_polynomial(rng)
            sturm = kr.count_roots(p)
            assert sturm == kr.count_roots_descartes(p)
            assert sturm == kr.isolate_roots(p, width=Fraction(1, 2**10)).count


class TestIsolateRoots:
    """Test root isolation"""

    def test_sqrt_two(self):
        """Test an isolating interval for sqrt(2)"""
        p = kr.poly(-2, 0, 1)
        report = kr.isolate_roots(p, kr.RootRange(0, 2), width=Fraction(1, 2**20))
        assert report.count == 1
        iv = report.intervals[0]
        assert iv.width <= Fraction(1, 2**20)
        assert sign_at(p.coeffs, iv.lo) * sign_at(p.coeffs, iv.hi) < 0
        assert iv.lo ** 2 < 2 < iv.hi ** 2

    def test_two_roots(self):
        """Test intervals around -1 and 1"""
        report = kr.isolate_roots(kr.poly(-1, 0, 1), kr.RootRange(-2, 2), width=Fraction(1, 2**10))
        assert report.count == 2
        assert report.intervals[0].contains(-1)
        assert report.intervals[1].contains(1)
        assert not report.had_multiplicity

    def test_multiplicity_flag(self):
        """Test the repeated-root flag and distinct count"""
        report = kr.isolate_roots(kr.poly(1, 1, -1, -1))
        assert report.count == 2
        assert report.had_multiplicity

    def test_sorted_disjoint_and_matching_counts(self):
        """Test isolation against Sturm on random +-1 polynomials"""
        rng = random.Random(41)
        for _ in range(100):
            p = kr.IntPolynomial(tuple(rng.choice((-1, 1)) for _ in range(9)))
            report = kr.isolate_roots(p, width=Fraction(1, 2**30))
            assert report.count == kr.count_roots(p)
            for a, b in zip(report.intervals, report.intervals[1:]):
                assert a.hi < b.lo
            for iv in report.intervals:
                assert iv.width <= Fraction(1, 2**30)

    def test_invalid_width(self):
        """Test that the width must be positive"""
        with pytest.raises(ValueError):
            kr.isolate_roots(kr.poly(-1, 0, 1), width=0)

    def test_root_bound(self):
        """Test the Cauchy bound exceeds every root modulus"""
        rng = random.Random(43)
        for _ in range(100):
            p = random_polynomial(rng)
            if p.effective_degree == 0:
                continue
            bound = kr.root_bound(p.coeffs)
            for z in np.roots([float(c) for c in reversed(p.trimmed().coeffs)]):
                assert abs(z) < bound
