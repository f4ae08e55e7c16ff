"""
Exact integer polynomials.

An :class:`IntPolynomial` stores arbitrary-precision integer coefficients in
ascending order together with one shared dyadic scale, so the mathematical
polynomial is ``2**-scale_exp * sum(coeffs[i] * x**i)``.  Roots never depend
on ``scale_exp``; everything that counts or isolates roots works on the
integer coefficients alone.

The algebra here is deliberately small: evaluation, derivative, pseudo
remainders, gcd over the integers and the squarefree part.  That is all the
root counting backends in :mod:`kac_roots.root_count` need.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DomainError, ZeroPolynomial

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

# Mersenne prime used for the modular squarefree pre-check.
MODULAR_PRIME = (1 << 61) - 1


def _strip(coeffs: Sequence[int]) -> List[int]:
    """Drop trailing zero coefficients, keeping at least one entry."""
    end = len(coeffs)
    while end > 1 and coeffs[end - 1] == 0:
        end -= 1
    if end == 0:
        return [0]
    return list(coeffs[:end])


def _is_zero(coeffs: Sequence[int]) -> bool:
    return all(c == 0 for c in coeffs)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact integer coefficients and a global dyadic scale.

    ``coeffs[i]`` is the coefficient of ``x**i``; trailing zeros are allowed
    (the three-point ensemble can draw a zero leading coefficient).
    """

    coeffs: Tuple[int, ...]
    scale_exp: int = 0

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("an IntPolynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "scale_exp", int(self.scale_exp))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], scale_exp: int = 0) -> "IntPolynomial":
        return cls(tuple(coeffs), scale_exp)

    @property
    def formal_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return _is_zero(self.coeffs)

    @property
    def effective_degree(self) -> int:
        """Largest i with a nonzero coefficient."""
        if self.is_zero:
            raise ZeroPolynomial("effective_degree")
        return len(_strip(self.coeffs)) - 1

    @property
    def leading_coefficient(self) -> int:
        return _strip(self.coeffs)[-1]

    def trimmed(self) -> "IntPolynomial":
        """Same polynomial without trailing zero coefficients."""
        return IntPolynomial(tuple(_strip(self.coeffs)), self.scale_exp)

    def scaled(self, factor: int) -> "IntPolynomial":
        """Multiply every coefficient by the integer ``factor``."""
        return IntPolynomial(tuple(c * factor for c in self.coeffs), self.scale_exp)

    def value(self, q: Rational) -> Fraction:
        """Exact mathematical value ``2**-scale_exp * P(q)``."""
        v = eval_exact(self, q)
        if self.scale_exp >= 0:
            return v / (1 << self.scale_exp)
        return v * (1 << -self.scale_exp)

    def _aligned(self, other: "IntPolynomial") -> Tuple[List[int], List[int], int]:
        k = max(self.scale_exp, other.scale_exp)
        a = [c << (k - self.scale_exp) for c in self.coeffs]
        b = [c << (k - other.scale_exp) for c in other.coeffs]
        size = max(len(a), len(b))
        a += [0] * (size - len(a))
        b += [0] * (size - len(b))
        return a, b, k

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b, k = self._aligned(other)
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)), k)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b, k = self._aligned(other)
        return IntPolynomial(tuple(x - y for x, y in zip(a, b)), k)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs), self.scale_exp)

    def __repr__(self) -> str:
        return f"IntPolynomial(coeffs={list(self.coeffs)!r}, scale_exp={self.scale_exp})"


def is_dyadic(q: Fraction) -> bool:
    den = q.denominator
    return den & (den - 1) == 0


def to_dyadic(x: Union[int, float, str, Fraction]) -> Fraction:
    """Exact dyadic rational for ``x``.

    Floats (and decimal strings, which are parsed as floats) are dyadic by
    construction; rationals must already have a power-of-two denominator.
    """
    if isinstance(x, str):
        x = float(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"{x!r} is not a finite dyadic rational")
        return Fraction(x)
    q = Fraction(x)
    if not is_dyadic(q):
        raise DomainError(f"{q} is not a dyadic rational")
    return q


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval ``[lo, hi]`` with dyadic rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not (is_dyadic(lo) and is_dyadic(hi)):
            raise DomainError(f"interval endpoints must be dyadic: [{lo}, {hi}]")
        if lo > hi:
            raise DomainError(f"empty interval: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi


def horner_homogeneous(coeffs: Sequence[int], num: int, den: int) -> int:
    """Integer ``sum(c_i * num**i * den**(d - i))`` for ``d = len(coeffs) - 1``.

    Equals ``den**d * P(num / den)``; for ``den > 0`` it has the sign of
    ``P(num / den)``.
    """
    d = len(coeffs) - 1
    acc = coeffs[d]
    if den == 1:
        for i in range(d - 1, -1, -1):
            acc = acc * num + coeffs[i]
        return acc
    power = 1
    for i in range(d - 1, -1, -1):
        power *= den
        acc = acc * num + coeffs[i] * power
    return acc


def sign_at(coeffs: Sequence[int], q: Rational) -> int:
    """Sign (-1, 0, 1) of the integer polynomial ``coeffs`` at rational ``q``."""
    q = Fraction(q)
    value = horner_homogeneous(coeffs, q.numerator, q.denominator)
    return (value > 0) - (value < 0)


def eval_exact(p: IntPolynomial, q: Rational) -> Fraction:
    """Exact value of the unscaled integer part ``sum(coeffs[i] * q**i)``."""
    q = Fraction(q)
    den = q.denominator
    return Fraction(
        horner_homogeneous(p.coeffs, q.numerator, den), den ** p.formal_degree
    )


def derivative(p: IntPolynomial) -> IntPolynomial:
    """Formal derivative; ``scale_exp`` is preserved."""
    if len(p.coeffs) == 1:
        return IntPolynomial((0,), p.scale_exp)
    return IntPolynomial(
        tuple(i * c for i, c in enumerate(p.coeffs) if i > 0), p.scale_exp
    )


def content(p: IntPolynomial) -> int:
    """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
    return math.gcd(*p.coeffs)


def _primitive(coeffs: Sequence[int]) -> List[int]:
    """Divide by the positive content; the sign of every entry is kept."""
    g = math.gcd(*coeffs)
    if g <= 1:
        return list(coeffs)
    return [c // g for c in coeffs]


def primitive_part(p: IntPolynomial) -> IntPolynomial:
    """``p`` divided by its positive content, trailing zeros removed.

    The result has ``scale_exp = 0``: a positive rescaling never moves roots.
    """
    if p.is_zero:
        raise ZeroPolynomial("primitive_part")
    return IntPolynomial(tuple(_primitive(_strip(p.coeffs))))


def pseudo_remainder_coeffs(f: Sequence[int], g: Sequence[int]) -> List[int]:
    """Pseudo remainder ``lc(g)**(deg f - deg g + 1) * f  mod  g``.

    Both inputs must be stripped and ``g`` nonzero.
    """
    dg = len(g) - 1
    df = len(f) - 1
    if df < dg:
        return list(f)
    lc = g[-1]
    r = list(f)
    for k in range(df - dg, -1, -1):
        lead = r.pop()
        r = [c * lc for c in r]
        if lead:
            for j in range(dg):
                r[k + j] -= lead * g[j]
    return _strip(r)


def pseudo_remainder(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    if g.is_zero:
        raise ZeroPolynomial("pseudo_remainder")
    return IntPolynomial(
        tuple(pseudo_remainder_coeffs(_strip(f.coeffs), _strip(g.coeffs)))
    )


def gcd_coeffs(f: Sequence[int], g: Sequence[int]) -> List[int]:
    """Primitive gcd over the integers with positive leading coefficient.

    Uses the primitive pseudo-remainder sequence: every remainder is reduced
    to its primitive part to keep coefficient growth in check.
    """
    a = _primitive(_strip(f))
    b = _primitive(_strip(g))
    if _is_zero(a):
        a, b = b, a
    if _is_zero(a):
        raise ZeroPolynomial("gcd")
    if len(a) < len(b):
        a, b = b, a
    while not _is_zero(b):
        r = pseudo_remainder_coeffs(a, b)
        a, b = b, (_primitive(r) if not _is_zero(r) else [0])
    if a[-1] < 0:
        a = [-c for c in a]
    return a


def polynomial_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Primitive gcd of two integer polynomials (positive leading coefficient)."""
    return IntPolynomial(tuple(gcd_coeffs(f.coeffs, g.coeffs)))


def exact_quotient_coeffs(f: Sequence[int], g: Sequence[int]) -> List[int]:
    """Quotient ``f / g`` when ``g`` divides ``f`` exactly over the integers."""
    f = list(_strip(f))
    g = _strip(g)
    dg = len(g) - 1
    lc = g[-1]
    if len(f) - 1 < dg:
        raise DomainError("divisor degree exceeds dividend degree")
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        lead = f[k + dg]
        if lead % lc:
            raise DomainError("polynomial division is not exact")
        c = lead // lc
        q[k] = c
        if c:
            for j in range(dg + 1):
                f[k + j] -= c * g[j]
    if not _is_zero(f[:dg] or [0]):
        raise DomainError("polynomial division is not exact")
    return q


def _gcd_degree_mod(f: Sequence[int], g: Sequence[int], prime: int) -> int:
    """Degree of gcd(f mod prime, g mod prime); both reductions nonzero."""
    a = _strip([c % prime for c in f])
    b = _strip([c % prime for c in g])
    if len(a) < len(b):
        a, b = b, a
    while not (len(b) == 1 and b[0] == 0):
        inv = pow(b[-1], -1, prime)
        r = list(a)
        db = len(b) - 1
        for k in range(len(r) - 1 - db, -1, -1):
            lead = r[k + db] * inv % prime
            if lead:
                for j in range(db + 1):
                    r[k + j] = (r[k + j] - lead * b[j]) % prime
        a, b = b, _strip(r[:db] or [0])
    return len(a) - 1


def _squarefree_by_modular_check(f: Sequence[int]) -> Optional[bool]:
    """True when gcd(f, f') is certified constant modulo a large prime.

    ``None`` means the check is inconclusive and the exact path must run.
    A prime not dividing ``d * lc(f)`` keeps both degrees, so a constant
    modular gcd implies a constant gcd over the integers.
    """
    d = len(f) - 1
    if d <= 1:
        return True
    if (d * f[-1]) % MODULAR_PRIME == 0:
        return None
    df = [i * c for i, c in enumerate(f) if i > 0]
    if _gcd_degree_mod(f, df, MODULAR_PRIME) == 0:
        return True
    return None


def squarefree_coeffs(coeffs: Sequence[int]) -> Tuple[List[int], bool]:
    """Primitive squarefree part of ``coeffs`` and whether a repeated factor was removed."""
    f = _strip(coeffs)
    if _is_zero(f):
        raise ZeroPolynomial("squarefree_part")
    if _squarefree_by_modular_check(f):
        return _primitive(f), False
    df = [i * c for i, c in enumerate(f) if i > 0]
    g = gcd_coeffs(f, df)
    if len(g) == 1:
        return _primitive(f), False
    logger.debug("removing repeated factor of degree %d", len(g) - 1)
    return _primitive(exact_quotient_coeffs(f, g)), True


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    """Primitive ``p / gcd(p, p')``: the same distinct roots, all simple."""
    coeffs, _ = squarefree_coeffs(p.coeffs)
    return IntPolynomial(tuple(coeffs))


def has_multiple_roots(p: IntPolynomial) -> bool:
    """True when ``gcd(p, p')`` is nonconstant (some complex root repeats)."""
    _, repeated = squarefree_coeffs(p.coeffs)
    return repeated


def reversed_polynomial(p: IntPolynomial) -> IntPolynomial:
    """``x**d * p(1/x)`` for the effective degree ``d``."""
    return IntPolynomial(tuple(reversed(_strip(p.coeffs))), p.scale_exp)


def taylor_shift_coeffs(coeffs: Sequence[int], a: int) -> List[int]:
    """Coefficients of ``p(x + a)`` by repeated synthetic division."""
    c = list(coeffs)
    n = len(c)
    if a == 0 or n < 2:
        return c
    if a == 1:
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += c[j + 1]
    else:
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
    return c


def taylor_shift(p: IntPolynomial, a: int) -> IntPolynomial:
    return IntPolynomial(tuple(taylor_shift_coeffs(p.coeffs, a)), p.scale_exp)
