"""
Reproducible random Kac polynomials.

Sample ``i`` of an :class:`EnsembleSpec` is a pure function of
``(dist, degree, master_seed, i)``:

1. Per-sample seed: the ``(i + 1)``-th output of SplitMix64 started at
   ``master_seed``.  SplitMix64 is a counter-based generator, so this is an
   O(1) jump: ``mix64(master_seed + (i + 1) * GOLDEN_GAMMA)``.
2. Generator: xoshiro256** (Blackman and Vigna) whose four state words are
   the first four SplitMix64 outputs of the per-sample seed.
3. Coefficients are drawn in order ``0..n`` from 64-bit outputs; a 53-bit
   uniform is the top 53 bits of one output.

Nothing is shared between samples, so any partition of the index range
over workers produces the same polynomials.  Both algorithms are pinned by
the golden-value test in ``tests/data/golden_samples.json``.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from .errors import BadDegree
from .poly_core import IntPolynomial

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

# Continuous draws are 53-bit dyadics: coefficient c means c * 2**-53.
DYADIC_BITS = 53


def mix64(z: int) -> int:
    """SplitMix64 output function (Stafford variant 13)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int, k: int) -> int:
    """The ``k``-th output (``k >= 1``) of SplitMix64 started at ``seed``."""
    return mix64(seed + k * GOLDEN_GAMMA)


def sample_seed(master_seed: int, index: int) -> int:
    """64-bit generator seed for sample ``index``."""
    return splitmix64(master_seed & MASK64, index + 1)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """xoshiro256** 1.0, seeded from SplitMix64 as its authors recommend."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        seed &= MASK64
        self._s0 = splitmix64(seed, 1)
        self._s1 = splitmix64(seed, 2)
        self._s2 = splitmix64(seed, 3)
        self._s3 = splitmix64(seed, 4)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def next_u53(self) -> int:
        """Top 53 bits of the next output, uniform on ``[0, 2**53)``."""
        return self.next_u64() >> 11

    def raw(self, count: int) -> List[int]:
        return [self.next_u64() for _ in range(count)]


class Distribution(str, Enum):
    """Coefficient laws.  All are mean zero; only scale differs."""

    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    UNIFORM_PM1 = "uniform_pm1"
    THREE_POINT = "three_point"

    @property
    def variance(self) -> float:
        return {
            Distribution.GAUSSIAN: 1.0,
            Distribution.RADEMACHER: 1.0,
            Distribution.UNIFORM_PM1: 1.0 / 3.0,
            Distribution.THREE_POINT: 2.0 / 3.0,
        }[self]

    @property
    def is_continuous(self) -> bool:
        return self in (Distribution.GAUSSIAN, Distribution.UNIFORM_PM1)

    @property
    def scale_exp(self) -> int:
        return DYADIC_BITS if self.is_continuous else 0

    @property
    def can_vanish(self) -> bool:
        """Whether a single coefficient is zero with positive probability."""
        return self is Distribution.THREE_POINT

    @classmethod
    def parse(cls, name: str) -> "Distribution":
        key = name.strip().lower().replace("-", "_")
        aliases = {"bernoulli": "rademacher", "normal": "gaussian", "uniform": "uniform_pm1"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(d.value for d in cls)
            raise ValueError(f"unknown distribution {name!r} (choose from {choices})") from None


@dataclass(frozen=True)
class EnsembleSpec:
    """Coefficient law, degree and master seed of a random polynomial stream."""

    dist: Distribution
    degree: int
    master_seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.dist, Distribution):
            object.__setattr__(self, "dist", Distribution.parse(str(self.dist)))
        if self.degree < 1:
            raise BadDegree(f"degree must be >= 1, got {self.degree}")
        object.__setattr__(self, "master_seed", int(self.master_seed) & MASK64)

    def with_degree(self, degree: int) -> "EnsembleSpec":
        return EnsembleSpec(self.dist, degree, self.master_seed)

    def with_dist(self, dist: Distribution) -> "EnsembleSpec":
        return EnsembleSpec(dist, self.degree, self.master_seed)

    def to_dict(self) -> dict:
        return {"dist": self.dist.value, "degree": self.degree, "master_seed": self.master_seed}


def _gaussian_pair(rng: Xoshiro256StarStar) -> Tuple[float, float]:
    """Box-Muller on two 53-bit uniforms; ``u1`` lies in ``(0, 1]``."""
    u1 = math.ldexp(rng.next_u53() + 1, -DYADIC_BITS)
    u2 = math.ldexp(rng.next_u53(), -DYADIC_BITS)
    r = math.sqrt(-2.0 * math.log(u1))
    angle = math.tau * u2
    return r * math.cos(angle), r * math.sin(angle)


def _to_dyadic_int(z: float) -> int:
    return round(math.ldexp(z, DYADIC_BITS))


def _draw_coefficients(dist: Distribution, count: int, rng: Xoshiro256StarStar) -> List[int]:
    if dist is Distribution.RADEMACHER:
        return [1 if rng.next_u64() >> 63 else -1 for _ in range(count)]
    if dist is Distribution.THREE_POINT:
        # floor(3u) for a 53-bit u; bias is below 2**-53
        return [((rng.next_u53() * 3) >> DYADIC_BITS) - 1 for _ in range(count)]
    if dist is Distribution.UNIFORM_PM1:
        return [2 * rng.next_u53() - (1 << DYADIC_BITS) for _ in range(count)]
    coeffs: List[int] = []
    while len(coeffs) < count:
        z0, z1 = _gaussian_pair(rng)
        coeffs.append(_to_dyadic_int(z0))
        if len(coeffs) < count:
            coeffs.append(_to_dyadic_int(z1))
    return coeffs


def sample(spec: EnsembleSpec, index: int) -> IntPolynomial:
    """Polynomial number ``index`` of the stream defined by ``spec``."""
    if index < 0:
        raise ValueError(f"sample index must be nonnegative, got {index}")
    rng = Xoshiro256StarStar(sample_seed(spec.master_seed, index))
    coeffs = _draw_coefficients(spec.dist, spec.degree + 1, rng)
    return IntPolynomial(tuple(coeffs), spec.dist.scale_exp)


def truncate(p: IntPolynomial, m: int) -> IntPolynomial:
    """``P_m``: coefficients ``0..m`` kept, the rest dropped, same scale."""
    if not 0 <= m <= p.formal_degree:
        raise BadDegree(f"truncation index {m} outside [0, {p.formal_degree}]")
    return IntPolynomial(p.coeffs[: m + 1], p.scale_exp)
