"""
Test Suite for Random Kac Polynomial Ensembles

Pins the generator algorithms with golden values and checks support,
determinism and moments of every coefficient law.
"""

import importlib.util
import json
import math
import random
from pathlib import Path

import pytest

import kac_roots as kr
from kac_roots.ensembles import (
    DYADIC_BITS,
    Xoshiro256StarStar,
    sample_seed,
    splitmix64,
)

GOLDEN = Path(__file__).parent / "data" / "golden_samples.json"


class TestGenerators:
    """Test SplitMix64 and xoshiro256** against reference outputs"""

    @pytest.fixture
    def golden(self):
        """Load the golden-value file"""
        with open(GOLDEN, encoding="utf-8") as fh:
            return json.load(fh)

    def test_splitmix64_reference(self):
        """Test the first SplitMix64 output from seed 0"""
        assert splitmix64(0, 1) == 0xE220A8397B1DCDAF

    def test_xoshiro_reference_state(self):
        """Test xoshiro256** from the state (1, 2, 3, 4)"""
        rng = Xoshiro256StarStar(0)
        rng._s0, rng._s1, rng._s2, rng._s3 = 1, 2, 3, 4
        assert rng.raw(4) == [11520, 0, 1509978240, 1215971899390074240]

    def test_raw_stream_golden(self, golden):
        """Test the raw 64-bit stream of sample 0 at master seed 0"""
        rng = Xoshiro256StarStar(sample_seed(golden["master_seed"], golden["index"]))
        assert rng.raw(len(golden["raw_u64"])) == golden["raw_u64"]

    @pytest.mark.parametrize("dist", ["gaussian", "rademacher", "uniform_pm1", "three_point"])
    def test_sample_golden(self, golden, dist):
        """Test the first coefficients of every ensemble bit-exactly"""
        spec = kr.EnsembleSpec(kr.Distribution(dist), golden["degree"], golden["master_seed"])
        p = kr.sample(spec, golden["index"])
        expected = golden["samples"][dist]
        assert p.scale_exp == expected["scale_exp"]
        assert list(p.coeffs[:8]) == expected["coeffs"]

    def test_u53_is_top_bits(self):
        """Test that 53-bit uniforms are the top bits of one output"""
        a = Xoshiro256StarStar(123)
        b = Xoshiro256StarStar(123)
        for _ in range(10):
            assert a.next_u53() == b.next_u64() >> 11


class TestDistribution:
    """Test the Distribution enum"""

    def test_parse_aliases(self):
        """Test names and aliases"""
        assert kr.Distribution.parse("bernoulli") is kr.Distribution.RADEMACHER
        assert kr.Distribution.parse("Normal") is kr.Distribution.GAUSSIAN
        assert kr.Distribution.parse("uniform-pm1") is kr.Distribution.UNIFORM_PM1
        with pytest.raises(ValueError):
            kr.Distribution.parse("cauchy")

    def test_properties(self):
        """Test variance, continuity and atoms at zero"""
        assert kr.Distribution.UNIFORM_PM1.variance == pytest.approx(1 / 3)
        assert kr.Distribution.THREE_POINT.variance == pytest.approx(2 / 3)
        assert kr.Distribution.GAUSSIAN.is_continuous
        assert not kr.Distribution.RADEMACHER.is_continuous
        assert kr.Distribution.THREE_POINT.can_vanish
        assert kr.Distribution.GAUSSIAN.scale_exp == DYADIC_BITS


class TestEnsembleSpec:
    """Test spec validation"""

    def test_bad_degree(self):
        """Test BadDegree for degree 0"""
        with pytest.raises(kr.BadDegree):
            kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 0)

    def test_string_dist_and_seed_mask(self):
        """Test that names are parsed and seeds reduced to 64 bits"""
        spec = kr.EnsembleSpec("rademacher", 5, 2**64 + 7)
        assert spec.dist is kr.Distribution.RADEMACHER
        assert spec.master_seed == 7
        assert spec.to_dict() == {"dist": "rademacher", "degree": 5, "master_seed": 7}
        assert spec.with_degree(9).degree == 9


class TestSample:
    """Test sampling"""

    def test_rademacher_support(self):
        """Test +-1 coefficients and scale 0"""
        spec = kr.EnsembleSpec(kr.Distribution.RADEMACHER, 3, 99)
        for i in range(50):
            p = kr.sample(spec, i)
            assert p.scale_exp == 0
            assert len(p.coeffs) == 4
            assert set(p.coeffs) <= {-1, 1}

    def test_three_point_support(self):
        """Test coefficients in {-1, 0, 1}"""
        spec = kr.EnsembleSpec(kr.Distribution.THREE_POINT, 20, 5)
        seen = set()
        for i in range(30):
            seen.update(kr.sample(spec, i).coeffs)
        assert seen == {-1, 0, 1}

    def test_uniform_range(self):
        """Test uniform coefficients lie in [-1, 1)"""
        spec = kr.EnsembleSpec(kr.Distribution.UNIFORM_PM1, 50, 1)
        for i in range(20):
            p = kr.sample(spec, i)
            assert all(-(2**DYADIC_BITS) <= c < 2**DYADIC_BITS for c in p.coeffs)

    def test_determinism(self):
        """Test identical polynomials for identical (spec, index)"""
        spec = kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 30, 42)
        assert kr.sample(spec, 17) == kr.sample(spec, 17)
        assert kr.sample(spec, 17) != kr.sample(spec, 18)

    def test_order_independence(self):
        """Test that sample i does not depend on which samples came before"""
        spec = kr.EnsembleSpec(kr.Distribution.UNIFORM_PM1, 10, 3)
        forward = [kr.sample(spec, i) for i in range(20)]
        shuffled = list(range(20))
        random.Random(0).shuffle(shuffled)
        for i in shuffled:
            assert kr.sample(spec, i) == forward[i]

    def test_negative_index(self):
        """Test that indices are nonnegative"""
        with pytest.raises(ValueError):
            kr.sample(kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 3), -1)

    def test_gaussian_moments(self):
        """Test pooled Gaussian coefficient mean and variance"""
        spec = kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 99, 2024)
        values = []
        for i in range(100):
            values.extend(math.ldexp(c, -DYADIC_BITS) for c in kr.sample(spec, i).coeffs)
        assert len(values) == 10**4
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
        assert abs(mean) <= 4 / math.sqrt(len(values))
        assert abs(var - 1) <= 0.1

    def test_uniform_scaling_leaves_counts(self):
        """Test scaling invariance of root counts on uniform samples"""
        spec = kr.EnsembleSpec(kr.Distribution.UNIFORM_PM1, 12, 8)
        for i in range(20):
            p = kr.sample(spec, i)
            assert kr.count_roots(p.scaled(3)) == kr.count_roots(p)


class TestTruncate:
    """Test truncation"""

    def test_examples(self):
        """Test truncation of 1 + x + x**2 + x**3"""
        p = kr.poly(1, 1, 1, 1)
        assert kr.truncate(p, 1).coeffs == (1, 1)
        assert kr.truncate(p, 3) == p

    def test_tail_difference(self):
        """Test that p - P_m vanishes below degree m + 1"""
        p = kr.sample(kr.EnsembleSpec(kr.Distribution.GAUSSIAN, 10, 1), 0)
        g = p - kr.truncate(p, 4)
        assert all(c == 0 for c in g.coeffs[:5])
        assert g.coeffs[5:] == p.coeffs[5:]
        assert kr.truncate(p, 4).scale_exp == p.scale_exp

    def test_bad_index(self):
        """Test BadDegree outside [0, n]"""
        p = kr.poly(1, 1, 1)
        with pytest.raises(kr.BadDegree):
            kr.truncate(p, 3)
        with pytest.raises(kr.BadDegree):
            kr.truncate(p, -1)


class TestGoldenScript:
    """Test the golden-value maintenance script"""

    @pytest.fixture
    def script(self):
        """Import scripts/update_golden.py as a module"""
        path = Path(__file__).parent.parent / "scripts" / "update_golden.py"
        spec = importlib.util.spec_from_file_location("update_golden", path)
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
        return module

    def test_check_current(self, script, capsys):
        """Test the stored file matches, with a plain status line"""
        assert script.check_golden(str(GOLDEN))
        out = capsys.readouterr().out
        assert out == f"{GOLDEN} matches the current generator\n"
        assert out.isascii()

    def test_check_stale(self, script, capsys, tmp_path):
        """Test a tampered file is reported per distribution on stderr"""
        data = json.loads(GOLDEN.read_text(encoding="utf-8"))
        data["samples"]["rademacher"]["coeffs"][0] *= -1
        stale = tmp_path / "golden.json"
        stale.write_text(json.dumps(data), encoding="utf-8")
        assert not script.check_golden(str(stale))
        captured = capsys.readouterr()
        assert captured.out == ""
        lines = captured.err.splitlines()
        assert lines[0] == f"{stale} does not match the current generator"
        assert len(lines) == 2 and lines[1].startswith("  rademacher: stored")
        assert captured.err.isascii()
