"""
Exact real-root counting and isolation.

Two independent backends count DISTINCT real roots of an integer polynomial:

* Sturm chains built from a primitive pseudo-remainder sequence, evaluated
  by sign variations at the range endpoints.
* Descartes' rule of signs with Vincent-Collins-Akritas bisection: the range
  is mapped onto (0, 1) and bisected until each piece has 0 or 1 sign
  variations after the Moebius map x -> 1/(x + 1).

Both reduce to the squarefree part first, so multiplicities never leak into
counts; :func:`isolate_roots` reports them through ``had_multiplicity``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import InternalError, ZeroPolynomial
from .poly_core import (
    DyadicInterval,
    IntPolynomial,
    Rational,
    _primitive,
    _strip,
    horner_homogeneous,
    pseudo_remainder_coeffs,
    sign_at,
    squarefree_coeffs,
    taylor_shift_coeffs,
)

logger = logging.getLogger(__name__)

# Refinement width used by the near-double-root diagnostics.
DEFAULT_WIDTH = Fraction(1, 1 << 80)

MAX_BISECTION_DEPTH = 4096

Endpoint = Optional[Union[Rational, float]]


def _endpoint(x: Endpoint) -> Optional[Fraction]:
    if x is None:
        return None
    if isinstance(x, float):
        if x == float("inf") or x == float("-inf"):
            return None
    return Fraction(x)


@dataclass(frozen=True)
class RootRange:
    """Interval of the real line; ``None`` endpoints mean -inf / +inf.

    The default closure is the half-open ``(lo, hi]`` convention: a root
    exactly at ``hi`` counts, a root exactly at ``lo`` does not.
    """

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    lo_closed: bool = False
    hi_closed: bool = True

    def __post_init__(self) -> None:
        lo, hi = _endpoint(self.lo), _endpoint(self.hi)
        if isinstance(self.lo, float) and self.lo == float("inf"):
            raise ValueError("lower endpoint cannot be +inf")
        if isinstance(self.hi, float) and self.hi == float("-inf"):
            raise ValueError("upper endpoint cannot be -inf")
        if lo is not None and hi is not None and lo > hi:
            raise ValueError(f"empty range: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_closed", bool(self.lo_closed) and lo is not None)
        object.__setattr__(self, "hi_closed", bool(self.hi_closed) and hi is not None)

    @classmethod
    def real_line(cls) -> "RootRange":
        return cls(None, None)

    @classmethod
    def half_open(cls, lo: Endpoint, hi: Endpoint) -> "RootRange":
        return cls(lo, hi, lo_closed=False, hi_closed=True)

    @classmethod
    def open(cls, lo: Endpoint, hi: Endpoint) -> "RootRange":
        return cls(lo, hi, lo_closed=False, hi_closed=False)

    @classmethod
    def closed(cls, lo: Endpoint, hi: Endpoint) -> "RootRange":
        return cls(lo, hi, lo_closed=True, hi_closed=True)

    @property
    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x: Rational) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo}, {hi}{']' if self.hi_closed else ')'}"


def sign_variations(values: Sequence[int]) -> int:
    """Number of strict sign changes after dropping zeros."""
    count = 0
    last = 0
    for v in values:
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


@dataclass(frozen=True)
class SturmChain:
    """Signed primitive pseudo-remainder sequence ``p, p', -rem, ...``."""

    polys: Tuple[IntPolynomial, ...]

    @property
    def degrees(self) -> List[int]:
        return [p.effective_degree for p in self.polys]

    def variations(self, q: Optional[Rational], at_minus_infinity: bool = False) -> int:
        """Sign variations at ``q``; ``None`` means +inf (or -inf when asked)."""
        if q is None:
            signs = []
            for p in self.polys:
                c = _strip(p.coeffs)
                lc = c[-1]
                if at_minus_infinity and (len(c) - 1) % 2:
                    lc = -lc
                signs.append(lc)
            return sign_variations(signs)
        q = Fraction(q)
        num, den = q.numerator, q.denominator
        return sign_variations(
            [horner_homogeneous(_strip(p.coeffs), num, den) for p in self.polys]
        )

    def count(self, rng: RootRange) -> int:
        """Distinct roots of the first chain element in ``rng``.

        Valid when the chain starts with a squarefree polynomial.
        """
        if rng.is_empty:
            return 0
        n = self.variations(rng.lo, at_minus_infinity=True) - self.variations(rng.hi)
        f = self.polys[0].coeffs
        if rng.lo_closed and sign_at(f, rng.lo) == 0:
            n += 1
        if rng.hi is not None and not rng.hi_closed and sign_at(f, rng.hi) == 0:
            n -= 1
        return n


def _sturm_chain_coeffs(f: List[int]) -> List[List[int]]:
    chain = [f]
    if len(f) == 1:
        return chain
    chain.append(_primitive([i * c for i, c in enumerate(f) if i > 0]))
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        r = pseudo_remainder_coeffs(a, b)
        if len(r) == 1 and r[0] == 0:
            break
        delta = len(a) - len(b) + 1
        # prem = lc(b)**delta * rem; keep the classical -rem orientation
        if b[-1] < 0 and delta % 2:
            nxt = r
        else:
            nxt = [-c for c in r]
        chain.append(_primitive(nxt))
    return chain


def sturm_chain(p: IntPolynomial) -> SturmChain:
    """Sturm chain of ``p``: primitive part, derivative, signed remainders."""
    f = _strip(p.coeffs)
    if len(f) == 1 and f[0] == 0:
        raise ZeroPolynomial("sturm_chain")
    chain = _sturm_chain_coeffs(_primitive(f))
    logger.debug("sturm chain of degree %d has %d elements", len(f) - 1, len(chain))
    return SturmChain(tuple(IntPolynomial(tuple(c)) for c in chain))


def _squarefree_or_raise(p: IntPolynomial, operation: str) -> Tuple[List[int], bool]:
    if p.is_zero:
        raise ZeroPolynomial(operation)
    return squarefree_coeffs(p.coeffs)


def squarefree_sturm_chain(p: IntPolynomial) -> Tuple[SturmChain, bool]:
    """Sturm chain of the squarefree part, plus the repeated-factor flag.

    The chain counts distinct roots of ``p`` on any number of ranges.
    """
    f, repeated = _squarefree_or_raise(p, "count_roots")
    chain = SturmChain(tuple(IntPolynomial(tuple(c)) for c in _sturm_chain_coeffs(f)))
    return chain, repeated


def count_roots(p: IntPolynomial, rng: Optional[RootRange] = None) -> int:
    """Distinct real roots of ``p`` in ``rng`` (default: the whole line), via Sturm."""
    rng = RootRange.real_line() if rng is None else rng
    chain, _ = squarefree_sturm_chain(p)
    if len(chain.polys) == 1:
        return 0
    return chain.count(rng)


def root_bound(coeffs: Sequence[int]) -> int:
    """Power of two strictly above the modulus of every complex root (Cauchy)."""
    f = _strip(coeffs)
    lc = abs(f[-1])
    biggest = max(abs(c) for c in f[:-1]) if len(f) > 1 else 0
    return 1 << (biggest // lc + 2).bit_length()


def _finite_range(f: Sequence[int], rng: RootRange) -> Tuple[Fraction, Fraction]:
    bound = Fraction(root_bound(f))
    lo = -bound if rng.lo is None else max(rng.lo, -bound)
    hi = bound if rng.hi is None else min(rng.hi, bound)
    return lo, hi


def _unit_transform(f: Sequence[int], lo: Fraction, hi: Fraction) -> List[int]:
    """Integer polynomial with the roots of ``f`` on (lo, hi) moved onto (0, 1)."""
    w = hi - lo
    q = lo.denominator * w.denominator
    a = lo.numerator * (q // lo.denominator)
    c = w.numerator * (q // w.denominator)
    d = len(f) - 1
    # q**d * f(y / q), then y = a + c*x
    h = [coef * q ** (d - i) for i, coef in enumerate(f)]
    h = taylor_shift_coeffs(h, a)
    power = 1
    for i in range(len(h)):
        h[i] *= power
        power *= c
    return _primitive(h)


def _descartes_variations(g: Sequence[int]) -> int:
    """Sign variations of ``(x + 1)**d * g(1 / (x + 1))``: bounds roots in (0, 1)."""
    return sign_variations(taylor_shift_coeffs(list(reversed(g)), 1))


def _halve(g: Sequence[int]) -> List[int]:
    """``2**d * g(x / 2)``: the left half of (0, 1) stretched onto (0, 1)."""
    d = len(g) - 1
    return [c << (d - i) for i, c in enumerate(g)]


@dataclass
class _Piece:
    poly: List[int]
    depth: int
    index: int


def _vca(
    g: List[int], max_depth: int = MAX_BISECTION_DEPTH
) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    """Bisection on (0, 1) for squarefree ``g``.

    Returns isolating dyadic sub-intervals ``(depth, index)`` meaning
    ``(index / 2**depth, (index + 1) / 2**depth)`` with exactly one root
    each, and exact roots found at bisection midpoints in the form
    ``(depth, numerator)`` meaning ``numerator / 2**depth``.
    """
    isolating: List[Tuple[int, int]] = []
    exact: List[Tuple[int, int]] = []
    stack = [_Piece(g, 0, 0)]
    deepest = 0
    while stack:
        piece = stack.pop()
        v = _descartes_variations(piece.poly)
        if v == 0:
            continue
        if v == 1:
            isolating.append((piece.depth, piece.index))
            continue
        if piece.depth >= max_depth:
            raise InternalError(
                f"Descartes bisection exceeded depth {max_depth} on a squarefree input"
            )
        left = _halve(piece.poly)
        right = taylor_shift_coeffs(left, 1)
        depth = piece.depth + 1
        deepest = max(deepest, depth)
        if right[0] == 0:
            exact.append((depth, 2 * piece.index + 1))
        stack.append(_Piece(_primitive(right), depth, 2 * piece.index + 1))
        stack.append(_Piece(_primitive(left), depth, 2 * piece.index))
    logger.debug(
        "vca: %d isolating pieces, %d exact midpoints, depth %d",
        len(isolating),
        len(exact),
        deepest,
    )
    return isolating, exact


def count_roots_descartes(
    p: IntPolynomial,
    rng: Optional[RootRange] = None,
    max_depth: int = MAX_BISECTION_DEPTH,
) -> int:
    """Same contract as :func:`count_roots`, computed by Descartes bisection."""
    rng = RootRange.real_line() if rng is None else rng
    f, _ = _squarefree_or_raise(p, "count_roots_descartes")
    if len(f) == 1 or rng.is_empty:
        return 0
    lo, hi = _finite_range(f, rng)
    n = 0
    if rng.lo_closed and rng.lo is not None and sign_at(f, rng.lo) == 0:
        n += 1
    if rng.hi_closed and rng.hi is not None and sign_at(f, rng.hi) == 0:
        n += 1
    if rng.lo is not None and rng.hi is not None and rng.lo == rng.hi:
        return min(n, 1)
    if lo >= hi:
        return n
    isolating, exact = _vca(_unit_transform(f, lo, hi), max_depth)
    return n + len(isolating) + len(exact)


@dataclass(frozen=True)
class RootReport:
    """Isolating intervals for the distinct real roots in a range."""

    intervals: Tuple[DyadicInterval, ...]
    had_multiplicity: bool = False

    @property
    def count(self) -> int:
        return len(self.intervals)

    def midpoints(self) -> List[Fraction]:
        return [iv.midpoint for iv in self.intervals]


def _side_sign(f: Sequence[int], df: Sequence[int], x: Fraction, right: bool) -> int:
    """Sign of ``f`` just to the right (or left) of ``x``, for simple roots."""
    s = sign_at(f, x)
    if s:
        return s
    s = sign_at(df, x)
    return s if right else -s


def _refine(
    f: Sequence[int], df: Sequence[int], lo: Fraction, hi: Fraction, width: Fraction
) -> Tuple[Fraction, Fraction]:
    """Bisect ``(lo, hi)``, holding one simple root, down to ``width``.

    Endpoints that are themselves roots (neighbouring exact roots) are
    bisected away so the closed result holds exactly one root.
    """
    s_lo = _side_sign(f, df, lo, right=True)
    lo_is_root = sign_at(f, lo) == 0
    hi_is_root = sign_at(f, hi) == 0
    while hi - lo > width or lo_is_root or hi_is_root:
        mid = (lo + hi) / 2
        s_mid = sign_at(f, mid)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo, lo_is_root = mid, False
        else:
            hi, hi_is_root = mid, False
    return lo, hi


def isolate_roots(
    p: IntPolynomial,
    rng: Optional[RootRange] = None,
    width: Rational = DEFAULT_WIDTH,
    max_depth: int = MAX_BISECTION_DEPTH,
) -> RootReport:
    """Disjoint dyadic intervals of width <= ``width``, one per distinct root in ``rng``."""
    rng = RootRange.real_line() if rng is None else rng
    width = Fraction(width)
    if width <= 0:
        raise ValueError("isolation width must be positive")
    f, repeated = _squarefree_or_raise(p, "isolate_roots")
    if len(f) == 1 or rng.is_empty:
        return RootReport((), repeated)
    df = [i * c for i, c in enumerate(f) if i > 0]
    found: List[Tuple[Fraction, Fraction]] = []
    for end, closed in ((rng.lo, rng.lo_closed), (rng.hi, rng.hi_closed)):
        if closed and end is not None and sign_at(f, end) == 0:
            if not found or found[-1][0] != end:
                found.append((end, end))
    lo, hi = _finite_range(f, rng)
    if lo < hi:
        span = hi - lo
        isolating, exact = _vca(_unit_transform(f, lo, hi), max_depth)
        for depth, num in exact:
            x = lo + span * Fraction(num, 1 << depth)
            found.append((x, x))
        for depth, index in isolating:
            a = lo + span * Fraction(index, 1 << depth)
            b = lo + span * Fraction(index + 1, 1 << depth)
            found.append(_refine(f, df, a, b, width))
    found.sort()
    return RootReport(tuple(DyadicInterval(a, b) for a, b in found), repeated)
