"""
Expected number of real roots of Gaussian Kac polynomials.

The Edelman-Kostlan density of real roots of ``sum xi_i t**i`` (iid
standard normal ``xi_i``, degree ``n``) is::

    rho_n(t) = sqrt(1/(t**2 - 1)**2 - (n+1)**2 t**(2n) / (t**(2n+2) - 1)**2) / pi

Both terms blow up like ``(t - 1)**-2`` near ``|t| = 1`` while their
difference stays of order ``n**2``, so the radicand is evaluated in one of
three forms depending on where ``t`` lies (see :func:`density`).  The
density is even and satisfies ``rho(t) = rho(1/t) / t**2``, so every
integral reduces to integrals over subintervals of ``[0, 1]``.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

from scipy import integrate, special

from .config import QuadratureConfig
from .errors import DomainError, ToleranceNotMet

logger = logging.getLogger(__name__)

# constant term of the Gaussian expectation expansion
KAC_CONSTANT = 0.625738072

SERIES_SWITCH = 1e-4
DIRECT_SWITCH = 5.0
_SMALL_ARGUMENT = 0.5
_CSCH_TERMS = 14
_SERIES_TERMS = 4
_NEGATIVE_SLACK = 1e-12
_BREAKPOINT_OFFSETS = (1, 4, 16, 64, 256)


def _csch_series_coefficients(terms: int) -> Tuple[float, ...]:
    """Taylor coefficients ``a_k`` of ``1/sinh(x)**2 - 1/x**2 = sum a_k x**(2k-2)``."""
    b = special.bernoulli(2 * terms)
    coeffs = []
    for k in range(1, terms + 1):
        coeffs.append(-(2 * k - 1) * 2.0 ** (2 * k) * b[2 * k] / math.factorial(2 * k))
    return tuple(coeffs)


_CSCH_COEFFS = _csch_series_coefficients(_CSCH_TERMS)


def _csch2_minus_inv_sq(x: float) -> float:
    """``1/sinh(x)**2 - 1/x**2``: even, equal to -1/3 at the origin."""
    x = abs(x)
    if x < _SMALL_ARGUMENT:
        x2 = x * x
        acc = 0.0
        for a in reversed(_CSCH_COEFFS):
            acc = acc * x2 + a
        return acc
    em = math.expm1(-2.0 * x)
    return 4.0 * math.exp(-2.0 * x) / (em * em) - 1.0 / (x * x)


def _radicand(n: int, a: float) -> float:
    """``pi**2 * rho_n(a)**2`` for ``0 <= a <= 1``."""
    if a == 0.0:
        return 1.0
    big_n = n + 1
    # a - 1 is exact on [0.5, 1]
    h = math.log1p(a - 1.0) if a > 0.5 else math.log(a)
    if 1.0 - a < SERIES_SWITCH / big_n:
        n2 = float(big_n * big_n)
        h2 = h * h
        acc = 0.0
        for k in range(_SERIES_TERMS, 0, -1):
            acc = acc * h2 + _CSCH_COEFFS[k - 1] * (1.0 - n2**k)
        f = 0.25 * math.exp(-2.0 * h) * acc
    elif big_n * abs(h) <= DIRECT_SWITCH:
        f = 0.25 * math.exp(-2.0 * h) * (
            _csch2_minus_inv_sq(h) - big_n * big_n * _csch2_minus_inv_sq(big_n * h)
        )
    else:
        first = 1.0 / ((1.0 - a * a) ** 2)
        tail = math.exp(2.0 * big_n * h)
        log_second = 2.0 * math.log(big_n) + 2.0 * n * h - 2.0 * math.log1p(-tail)
        second = math.exp(log_second) if log_second > -745.0 else 0.0
        f = first - second
    if f < 0.0:
        if f < -_NEGATIVE_SLACK * big_n * big_n:
            raise DomainError(f"negative density radicand {f!r} at n={n}, t={a!r}")
        return 0.0
    return f


def density(n: int, t: float) -> float:
    """Edelman-Kostlan real-root density of the degree ``n`` Gaussian Kac polynomial.

    Near ``|t| = 1`` (within ``1e-4/(n+1)``) the radicand comes from its Taylor
    series in ``h = ln|t|``, whose value at ``h = 0`` is ``n(n+2)/12``.  For
    moderate ``(n+1)|h|`` it is rewritten through ``1/sinh**2`` so that the
    two poles cancel analytically, and far from the unit circle the second
    term is evaluated in log space and underflows to zero.
    """
    if n < 1:
        raise DomainError(f"degree must be >= 1, got {n}")
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"density needs a finite point, got {t!r}")
    a = abs(t)
    if a > 1.0:
        inv = 1.0 / a
        return math.sqrt(_radicand(n, inv)) / math.pi * inv * inv
    return math.sqrt(_radicand(n, a)) / math.pi


@dataclass(frozen=True)
class DensityQuery:
    """Degree, interval ``[lo, hi]`` (endpoints may be infinite) and tolerance."""

    degree: int
    lo: float
    hi: float
    rel_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise DomainError(f"degree must be >= 1, got {self.degree}")
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise DomainError("interval endpoints must not be NaN")
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def full_line(cls, degree: int, rel_tol: float = 1e-10) -> "DensityQuery":
        return cls(degree, -math.inf, math.inf, rel_tol)

    @property
    def is_full_line(self) -> bool:
        return self.lo == -math.inf and self.hi == math.inf


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    evaluations: int

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.err_est + other.err_est,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(self.value * factor, self.err_est * abs(factor), self.evaluations)

    def meets(self, rel_tol: float) -> bool:
        return self.err_est <= rel_tol * max(abs(self.value), 1.0)


_EMPTY = QuadResult(0.0, 0.0, 0)


def _positive_pieces(lo: float, hi: float) -> List[Tuple[float, float]]:
    """Subintervals of ``[0, 1]`` whose integrals add up to the one over ``[lo, hi]``, ``0 <= lo``."""
    pieces = []
    if lo < 1.0:
        pieces.append((lo, min(hi, 1.0)))
    if hi > 1.0:
        start = max(lo, 1.0)
        pieces.append((0.0 if hi == math.inf else 1.0 / hi, 1.0 / start))
    return [(c, d) for c, d in pieces if c < d]


def _unit_pieces(lo: float, hi: float) -> List[Tuple[float, float]]:
    pieces = []
    if hi > 0.0:
        pieces.extend(_positive_pieces(max(lo, 0.0), hi))
    if lo < 0.0:
        pieces.extend(_positive_pieces(max(-hi, 0.0), -lo))
    return pieces


def _integrate_unit(n: int, c: float, d: float, rel_tol: float, limit: int) -> Tuple[QuadResult, bool]:
    if not c < d:
        return _EMPTY, True
    points = sorted(
        {1.0 - k / (n + 1) for k in _BREAKPOINT_OFFSETS if c < 1.0 - k / (n + 1) < d}
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            lambda t: density(n, t),
            c,
            d,
            epsabs=rel_tol / 8.0,
            epsrel=rel_tol / 8.0,
            limit=limit,
            points=points or None,
            full_output=1,
        )
    value, abserr, info = out[0], out[1], out[2]
    converged = len(out) < 4
    if not converged:
        logger.warning("quadrature on [%r, %r] at n=%d: %s", c, d, n, str(out[3]).splitlines()[0])
    return QuadResult(float(value), float(abserr), int(info["neval"])), converged


def expected_roots(query: DensityQuery, config: Optional[QuadratureConfig] = None) -> QuadResult:
    """Expected number of real roots of the Gaussian Kac polynomial in ``[lo, hi]``.

    Raises :class:`ToleranceNotMet` carrying the best estimate when the
    combined error estimate exceeds ``rel_tol * max(|value|, 1)``.
    """
    limit = (config or QuadratureConfig()).limit
    rel_tol = query.rel_tol
    if query.is_full_line:
        piece, ok = _integrate_unit(query.degree, 0.0, 1.0, rel_tol, limit)
        result = piece.scaled(4.0)
    else:
        result = _EMPTY
        ok = True
        for c, d in _unit_pieces(query.lo, query.hi):
            piece, piece_ok = _integrate_unit(query.degree, c, d, rel_tol, limit)
            result = result + piece
            ok = ok and piece_ok
    if not (ok and result.meets(rel_tol)):
        raise ToleranceNotMet(result, rel_tol)
    logger.info(
        "expected roots n=%d on [%r, %r]: %r (err %.2g, %d evaluations)",
        query.degree,
        query.lo,
        query.hi,
        result.value,
        result.err_est,
        result.evaluations,
    )
    return result


def asymptotic_expectation(n: int) -> float:
    """``(2/pi) ln n + C + 2/(pi n)``, accurate to ``O(1/n**2)``."""
    if n < 2:
        raise DomainError(f"asymptotic expansion needs n >= 2, got {n}")
    return 2.0 / math.pi * math.log(n) + KAC_CONSTANT + 2.0 / (math.pi * n)


def maslova_variance(n: int) -> float:
    """Leading-order variance of the real root count, ``(4/pi)(1 - 2/pi) ln n``."""
    if n < 2:
        raise DomainError(f"variance asymptotics need n >= 2, got {n}")
    return 4.0 / math.pi * (1.0 - 2.0 / math.pi) * math.log(n)


def edge_bound(cap: float) -> float:
    """Upper bound ``ln C / (2 pi) + 1`` on the Gaussian count in ``[0, 1 - 1/C)``."""
    if not cap > 1.0:
        raise DomainError(f"edge bound needs C > 1, got {cap}")
    return math.log(cap) / (2.0 * math.pi) + 1.0


def bulk_expectation(
    n: int, cap: float, rel_tol: float = 1e-10, config: Optional[QuadratureConfig] = None
) -> QuadResult:
    """Gaussian expected count on ``[1 - 1/C, 1]``."""
    if not cap > 1.0:
        raise DomainError(f"bulk window needs C > 1, got {cap}")
    return expected_roots(DensityQuery(n, 1.0 - 1.0 / cap, 1.0, rel_tol), config)
