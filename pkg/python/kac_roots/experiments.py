"""
Monte Carlo experiments on random Kac polynomials.

Every experiment is a function of an :class:`EnsembleSpec`, a sample count
and a few settings.  Samples are processed independently (sample ``i`` is a
pure function of ``spec`` and ``i``) and results are collected in index
order, so the output does not depend on the number of worker processes.
"""

import csv
import functools
import io
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, TypeVar, Union

import numpy as np

from .config import IsolationConfig, QuadratureConfig
from .ek_density import DensityQuery, bulk_expectation, edge_bound, expected_roots, maslova_variance
from .ensembles import Distribution, EnsembleSpec, sample, truncate
from .errors import BadDegree, DomainError, ZeroPolynomial
from .poly_core import IntPolynomial, Rational, _strip, derivative, eval_exact, gcd_coeffs, to_dyadic
from .root_count import RootRange, count_roots, isolate_roots, squarefree_sturm_chain

logger = logging.getLogger(__name__)

T = TypeVar("T")

Z_95 = 1.96

CSV_COLUMNS = (
    "index",
    "degree",
    "dist",
    "roots_total",
    "roots_in_query",
    "min_abs_deriv",
    "min_gap",
    "had_multiplicity",
)

QueryRanges = Union[None, RootRange, Sequence[RootRange]]


@dataclass(frozen=True)
class SampleRecord:
    """Root statistics of one sampled polynomial."""

    index: int
    degree: int
    dist: str
    roots_total: int
    roots_in_query: int
    min_abs_deriv: Optional[float] = None
    min_gap: Optional[float] = None
    had_multiplicity: bool = False

    def to_row(self) -> List[str]:
        return [
            str(self.index),
            str(self.degree),
            self.dist,
            str(self.roots_total),
            str(self.roots_in_query),
            _format_optional(self.min_abs_deriv),
            _format_optional(self.min_gap),
            "true" if self.had_multiplicity else "false",
        ]

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "SampleRecord":
        try:
            return cls(
                index=int(row["index"]),
                degree=int(row["degree"]),
                dist=row["dist"],
                roots_total=int(row["roots_total"]),
                roots_in_query=int(row["roots_in_query"]),
                min_abs_deriv=_parse_optional(row["min_abs_deriv"]),
                min_gap=_parse_optional(row["min_gap"]),
                had_multiplicity=_parse_bool(row["had_multiplicity"]),
            )
        except KeyError as e:
            raise ValueError(f"missing CSV column {e.args[0]!r}") from None


def _format_optional(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def _parse_optional(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def _parse_bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"expected true or false, got {text!r}")
    return text == "true"


@dataclass(frozen=True)
class SummaryStats:
    samples: int
    mean: float
    variance: float
    ci_halfwidth: float
    extras: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_values(
        cls, values: Sequence[Union[int, float]], extras: Optional[Dict[str, float]] = None
    ) -> "SummaryStats":
        """Mean, unbiased variance and normal-approximation 95% half-width.

        Moment sums are accumulated exactly, so the result does not depend
        on the order of ``values``.
        """
        m = len(values)
        if m == 0:
            raise ValueError("cannot summarize an empty sample")
        s1 = sum(Fraction(v) for v in values)
        s2 = sum(Fraction(v) * Fraction(v) for v in values)
        mean = float(s1 / m)
        if m == 1:
            variance = 0.0
        else:
            variance = float((m * s2 - s1 * s1) / (m * (m - 1)))
        return cls(m, mean, variance, Z_95 * math.sqrt(variance / m), dict(extras or {}))

    def with_extras(self, **extras: float) -> "SummaryStats":
        merged = dict(self.extras)
        merged.update(extras)
        return SummaryStats(self.samples, self.mean, self.variance, self.ci_halfwidth, merged)

    def to_dict(self, spec: Optional[EnsembleSpec] = None) -> Dict[str, Any]:
        return {
            "spec": None if spec is None else spec.to_dict(),
            "M": self.samples,
            "mean": self.mean,
            "variance": self.variance,
            "ci_halfwidth": self.ci_halfwidth,
            "extras": dict(sorted(self.extras.items())),
        }


@dataclass(frozen=True)
class BulkWindow:
    """The window ``(1 - b0_inv, 1 - b1 ln(n) / n]`` next to ``t = 1``."""

    b0_inv: float = 0.2
    b1: float = 4.0

    def bounds(self, n: int) -> Tuple[float, float]:
        if n < 2:
            raise DomainError(f"bulk window needs n >= 2, got {n}")
        margin = self.b1 * math.log(n) / n
        if not 0.0 < margin < self.b0_inv < 1.0:
            raise DomainError(
                f"bulk window is empty at n={n}: need 0 < {margin:.4g} < {self.b0_inv} < 1"
            )
        return 1.0 - self.b0_inv, 1.0 - margin

    def root_range(self, n: int) -> RootRange:
        lo, hi = self.bounds(n)
        return RootRange.half_open(lo, hi)


@dataclass(frozen=True)
class RootDiagnostics:
    roots: int
    min_abs_deriv: Optional[float]
    min_gap: Optional[float]
    had_multiplicity: bool
    settled: bool = True


# Compensated Horner pre-filter.  Floating values with a rigorous error bound
# decide comparisons that are far from a tie; everything else goes exact.

UNIT_ROUNDOFF = 2.0 ** -53
_SPLITTER = 134217729.0  # 2**27 + 1
_TINY = 2.0 ** -1074
# relative accuracy at which a filtered |P'| is used instead of exact evaluation
FILTER_REL = 2.0 ** -40


def _gamma(k: int) -> float:
    ku = k * UNIT_ROUNDOFF
    return ku / (1.0 - ku)


def _two_sum(a: float, b: float) -> Tuple[float, float]:
    s = a + b
    z = s - a
    return s, (a - (s - z)) + (b - z)


def _split(a: float) -> Tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_product(a: float, b: float) -> Tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def compensated_horner(coeffs: Sequence[int], x: float) -> Optional[Tuple[float, float]]:
    """Value of ``sum(coeffs[i] * x**i)`` and a bound on its absolute error.

    Each integer coefficient is split into a double and a double residual,
    and Horner's rule runs with error-free transformations, so the result is
    as accurate as twice-working-precision Horner.  Returns ``None`` when a
    coefficient or an intermediate value does not fit in a double.
    """
    try:
        hi = np.array([float(c) for c in coeffs], dtype=np.float64)
        lo = np.array([float(c - int(h)) for c, h in zip(coeffs, hi)], dtype=np.float64)
    except OverflowError:
        return None
    n = len(coeffs) - 1
    s, c = float(hi[n]), float(lo[n])
    for i in range(n - 1, -1, -1):
        p, pi = _two_product(s, x)
        s, sigma = _two_sum(p, float(hi[i]))
        c = c * x + (pi + sigma + float(lo[i]))
    value = s + c
    magnitude = float(np.polyval(np.abs(hi[::-1]), abs(x)))
    if not (math.isfinite(value) and math.isfinite(magnitude)):
        return None
    g = _gamma(2 * n + 2)
    bound = 2.0 * (UNIT_ROUNDOFF * abs(value) + (g * g + UNIT_ROUNDOFF**2) * magnitude) + (4 * n + 4) * _TINY
    return value, bound


def _as_double(q: Fraction) -> Optional[float]:
    try:
        xf = float(q)
    except OverflowError:
        return None
    return xf if Fraction(xf) == q else None


def _abs_value_near(coeffs: Sequence[int], x: Fraction, lipschitz: Fraction) -> Tuple[Fraction, Fraction]:
    """``|p(x)|`` and an error bound, evaluated at the nearest double when that is accurate enough.

    ``lipschitz`` bounds ``|p'|`` between ``x`` and the nearest double.
    """
    try:
        xf = float(x)
    except OverflowError:
        xf = math.inf
    est = compensated_horner(coeffs, xf) if math.isfinite(xf) else None
    if est is not None:
        err = Fraction(est[1]) + lipschitz * abs(Fraction(xf) - x)
        value = abs(Fraction(est[0]))
        if err <= FILTER_REL * value:
            return value, err
    return abs(eval_exact(IntPolynomial(tuple(coeffs)), x)), Fraction(0)


def _abs_derivative_bound(coeffs: Sequence[int], radius: Fraction) -> Fraction:
    """Upper bound for ``|p'|`` on ``[-radius, radius]``."""
    bound = Fraction(0)
    power = Fraction(1)
    for i in range(1, len(coeffs)):
        bound += abs(i * coeffs[i]) * power
        power *= radius
    return bound


def _derivatives_at_roots(
    p: IntPolynomial,
    intervals: Sequence[Any],
    repeated: Optional[List[int]],
    isolation: IsolationConfig,
) -> Tuple[List[float], bool]:
    dp = derivative(p).coeffs
    settled = True
    values: List[float] = []
    for iv in intervals:
        if repeated is not None and count_roots(
            IntPolynomial(tuple(repeated)), RootRange.closed(iv.lo, iv.hi)
        ):
            values.append(0.0)
            continue
        # dyadic radius covering the interval and the nearest double to its midpoint
        radius = Fraction(float(max(abs(iv.lo), abs(iv.hi)))) * (1 + Fraction(1, 1 << 50))
        lipschitz = _abs_derivative_bound(dp, radius)
        value, eval_err = _abs_value_near(dp, iv.midpoint, lipschitz)
        err = lipschitz * iv.width / 2 + eval_err
        if err > Fraction(isolation.deriv_rel_accuracy) * value:
            settled = False
        values.append(math.ldexp(float(value), -p.scale_exp))
    return values, settled


def diagnose_polynomial(
    p: IntPolynomial, window: RootRange, isolation: Optional[IsolationConfig] = None
) -> RootDiagnostics:
    """Smallest ``|P'|`` over the roots in ``window`` and smallest gap between them.

    ``|P'|`` is taken at the midpoint of each isolating interval, on the
    mathematical scale ``2**-scale_exp``, and the interval is narrowed
    until ``max |P''|`` over it certifies the requested relative accuracy.
    At a repeated root the derivative is exactly 0.
    """
    isolation = isolation or IsolationConfig()
    if p.is_zero:
        raise ZeroPolynomial("diagnose_polynomial")
    width_exp = isolation.width_exp
    while True:
        report = isolate_roots(p, window, Fraction(1, 1 << width_exp), isolation.max_depth)
        repeated = None
        if report.had_multiplicity:
            f = _strip(p.coeffs)
            repeated = gcd_coeffs(f, [i * c for i, c in enumerate(f) if i > 0])
        derivs, settled = _derivatives_at_roots(p, report.intervals, repeated, isolation)
        if settled or width_exp - isolation.width_exp >= isolation.max_extra_bits:
            break
        width_exp += 64
        logger.debug("refining isolation to width 2**-%d for derivative accuracy", width_exp)
    if not settled:
        logger.warning(
            "derivative at a root not certified to relative accuracy %g", isolation.deriv_rel_accuracy
        )
    mids = report.midpoints()
    gaps = [float(b - a) for a, b in zip(mids, mids[1:])]
    return RootDiagnostics(
        roots=report.count,
        min_abs_deriv=min(derivs) if derivs else None,
        min_gap=min(gaps) if gaps else None,
        had_multiplicity=report.had_multiplicity,
        settled=settled,
    )


def _as_ranges(query: QueryRanges) -> Tuple[RootRange, ...]:
    if query is None:
        return ()
    if isinstance(query, RootRange):
        return (query,)
    return tuple(query)


def analyze_sample(
    spec: EnsembleSpec,
    index: int,
    query: QueryRanges = None,
    window: Optional[RootRange] = None,
    isolation: Optional[IsolationConfig] = None,
) -> SampleRecord:
    """Root counts of sample ``index``; ``query`` ranges are assumed disjoint."""
    p = sample(spec, index)
    if p.is_zero:
        logger.warning("sample %d of %s is the zero polynomial; recording no roots", index, spec.dist.value)
        return SampleRecord(index, spec.degree, spec.dist.value, 0, 0)
    chain, repeated = squarefree_sturm_chain(p)
    total = chain.count(RootRange.real_line())
    ranges = _as_ranges(query)
    in_query = sum(chain.count(r) for r in ranges) if ranges else total
    min_deriv = min_gap = None
    if window is not None:
        diag = diagnose_polynomial(p, window, isolation)
        min_deriv, min_gap = diag.min_abs_deriv, diag.min_gap
    return SampleRecord(
        index, spec.degree, spec.dist.value, total, in_query, min_deriv, min_gap, repeated
    )


def _parallel_map(func: Callable[[int], T], samples: int, threads: int) -> List[T]:
    """``[func(i) for i in range(samples)]``, spread over worker processes."""
    if samples < 0:
        raise ValueError(f"sample count must be nonnegative, got {samples}")
    if threads <= 1 or samples < 2:
        return [func(i) for i in range(samples)]
    chunksize = max(1, samples // (threads * 8))
    logger.debug("dispatching %d samples to %d workers in chunks of %d", samples, threads, chunksize)
    with Pool(processes=threads) as pool:
        return list(pool.imap(func, range(samples), chunksize=chunksize))


def simulate(
    spec: EnsembleSpec,
    samples: int,
    query: QueryRanges = None,
    window: Optional[RootRange] = None,
    isolation: Optional[IsolationConfig] = None,
    threads: int = 1,
) -> List[SampleRecord]:
    """Per-sample records for indices ``0..samples-1`` in index order."""
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    start = time.perf_counter()
    logger.info("simulating %s, M=%d, workers=%d", spec.to_dict(), samples, threads)
    worker = functools.partial(analyze_sample, spec, query=query, window=window, isolation=isolation)
    records = _parallel_map(worker, samples, threads)
    logger.info("finished %d samples in %.2fs", samples, time.perf_counter() - start)
    return records


def summarize_records(records: Sequence[SampleRecord], column: str = "roots_in_query") -> SummaryStats:
    """Summary of one integer column; extras count repeated-root samples."""
    values = [getattr(r, column) for r in records]
    multiplicity = sum(1 for r in records if r.had_multiplicity)
    return SummaryStats.from_values(values, {"had_multiplicity": float(multiplicity)})


def write_records_csv(records: Iterable[SampleRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.to_row())


def read_records_csv(source: Union[str, TextIO]) -> List[SampleRecord]:
    """Parse records written by :func:`write_records_csv` (a path or an open stream)."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return read_records_csv(fh)
    reader = csv.DictReader(source)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames!r}")
    return [SampleRecord.from_row(row) for row in reader]


def records_to_csv(records: Iterable[SampleRecord]) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf)
    return buf.getvalue()


def log_law(n: int) -> float:
    return 2.0 / math.pi * math.log(n)


def run_expectation(
    spec: EnsembleSpec, samples: int, interval: Optional[RootRange] = None, threads: int = 1
) -> SummaryStats:
    """Monte Carlo mean of the real root count on ``interval`` (default: the whole line)."""
    records = simulate(spec, samples, interval, threads=threads)
    summary = summarize_records(records)
    if spec.degree >= 2:
        summary = summary.with_extras(
            log_law=log_law(spec.degree), mean_minus_log_law=summary.mean - log_law(spec.degree)
        )
    return summary


EXCLUSION_ZONE = RootRange.open(Fraction(-1, 2), Fraction(1, 2))


@dataclass(frozen=True)
class GapRow:
    degree: int
    mean_gauss: float
    mean_rad: float
    gap: float
    ci_gauss: float
    ci_rad: float
    # Rademacher roots on (-1/2, 1/2) over all samples; always 0 for +-1 coefficients
    rad_near_zero: int = 0


def run_gap(
    degrees: Sequence[int], samples: int, master_seed: int = 0, threads: int = 1
) -> List[GapRow]:
    """Gaussian minus Rademacher mean real root count, per degree."""
    if not degrees:
        raise ValueError("need at least one degree")
    rows = []
    for n in degrees:
        gauss = summarize_records(
            simulate(EnsembleSpec(Distribution.GAUSSIAN, n, master_seed), samples, threads=threads)
        )
        rad_records = simulate(
            EnsembleSpec(Distribution.RADEMACHER, n, master_seed), samples, EXCLUSION_ZONE, threads=threads
        )
        rad = summarize_records(rad_records, column="roots_total")
        near_zero = sum(r.roots_in_query for r in rad_records)
        if near_zero:
            logger.warning("n=%d: %d rademacher roots on (-1/2, 1/2)", n, near_zero)
        rows.append(
            GapRow(n, gauss.mean, rad.mean, gauss.mean - rad.mean, gauss.ci_halfwidth, rad.ci_halfwidth, near_zero)
        )
        logger.info("n=%d gaussian=%.4f rademacher=%.4f gap=%.4f", n, gauss.mean, rad.mean, rows[-1].gap)
    return rows


def edge_ranges(cap: float, mirrored: bool = False) -> Tuple[RootRange, ...]:
    """``[0, 1 - 1/C)``, plus ``(-(1 - 1/C), 0)`` when mirrored."""
    if not cap > 1.0:
        raise DomainError(f"edge window needs C > 1, got {cap}")
    hi = 1.0 - 1.0 / cap
    ranges = [RootRange(0, hi, lo_closed=True, hi_closed=False)]
    if mirrored:
        ranges.append(RootRange.open(-hi, 0))
    return tuple(ranges)


def run_edge(
    spec: EnsembleSpec,
    samples: int,
    cap: float,
    mirrored: bool = False,
    threads: int = 1,
    quadrature: Optional[QuadratureConfig] = None,
) -> SummaryStats:
    """Mean count on the edge window next to the origin, against the Gaussian bound."""
    ranges = edge_ranges(cap, mirrored)
    summary = summarize_records(simulate(spec, samples, ranges, threads=threads))
    sides = 2.0 if mirrored else 1.0
    hi = 1.0 - 1.0 / cap
    reference = expected_roots(
        DensityQuery(spec.degree, 0.0, hi, (quadrature or QuadratureConfig()).rel_tol), quadrature
    )
    return summary.with_extras(
        cap=cap,
        edge_bound=sides * edge_bound(cap),
        slack_bound=sides * (edge_bound(cap) + 1.0),
        ek_integral=sides * reference.value,
    )


def run_bulk(
    spec: EnsembleSpec,
    samples: int,
    cap: float,
    threads: int = 1,
    quadrature: Optional[QuadratureConfig] = None,
) -> SummaryStats:
    """Mean count on ``(1 - 1/C, 1]`` against the Gaussian integral there."""
    if not cap > 1.0:
        raise DomainError(f"bulk window needs C > 1, got {cap}")
    window = RootRange.half_open(1.0 - 1.0 / cap, 1)
    summary = summarize_records(simulate(spec, samples, window, threads=threads))
    rel_tol = (quadrature or QuadratureConfig()).rel_tol
    reference = bulk_expectation(spec.degree, cap, rel_tol, quadrature)
    return summary.with_extras(ek_integral=reference.value, difference=summary.mean - reference.value)


def run_variance(spec: EnsembleSpec, samples: int, threads: int = 1) -> SummaryStats:
    """Sample variance of the total real root count against its log-law target."""
    if spec.dist.can_vanish:
        raise DomainError(f"variance law needs P(xi = 0) = 0; {spec.dist.value} has an atom at 0")
    summary = summarize_records(simulate(spec, samples, threads=threads), "roots_total")
    target = maslova_variance(spec.degree)
    return summary.with_extras(
        maslova_target=target, relative_error=abs(summary.variance - target) / target
    )


@dataclass(frozen=True)
class DoublesResult:
    records: List[SampleRecord]
    summary: SummaryStats
    violations: Dict[float, int]


def run_doubles(
    spec: EnsembleSpec,
    samples: int,
    window: BulkWindow = BulkWindow(),
    deriv_exponents: Sequence[float] = (8.0,),
    gap_exponent: float = 12.0,
    isolation: Optional[IsolationConfig] = None,
    threads: int = 1,
) -> DoublesResult:
    """Near-double roots in the bulk window.

    A sample violates threshold ``B`` when its smallest ``|P'|`` at a bulk
    root is at most ``n**-B`` or two bulk roots are within ``n**-gap_exponent``.
    """
    n = spec.degree
    rng = window.root_range(n)
    records = simulate(spec, samples, rng, window=rng, isolation=isolation, threads=threads)
    gap_cut = float(n) ** -gap_exponent
    close = [r.min_gap is not None and r.min_gap <= gap_cut for r in records]
    extras: Dict[str, float] = {"gap_violations": float(sum(close))}
    violations: Dict[float, int] = {}
    for b in deriv_exponents:
        cut = float(n) ** -b
        flat = [r.min_abs_deriv is not None and r.min_abs_deriv <= cut for r in records]
        either = sum(1 for f, c in zip(flat, close) if f or c)
        violations[b] = either
        extras[f"deriv_violations_B{b:g}"] = float(sum(flat))
        extras[f"violations_B{b:g}"] = float(either)
        extras[f"violation_fraction_B{b:g}"] = either / len(records)
    summary = summarize_records(records).with_extras(**extras)
    return DoublesResult(records, summary, violations)


@dataclass(frozen=True)
class SmallBallRow:
    gamma: float
    probability: float
    hits: int


def _smallball_hits(spec: EnsembleSpec, x: Fraction, gammas: Tuple[float, ...], index: int) -> Tuple[bool, ...]:
    """``|P(x)| <= gamma`` for each gamma; exact evaluation only for near ties."""
    p = sample(spec, index)
    xf = _as_double(x)
    est = compensated_horner(p.coeffs, xf) if xf is not None else None
    exact: Optional[Fraction] = None
    hits = []
    for gamma in gammas:
        if est is not None:
            # compare on the integer scale; the margin absorbs rounding in v +- bound
            v, bound = abs(est[0]), est[1]
            cut = math.ldexp(gamma, p.scale_exp)
            if v - bound > cut * (1 + 2.0**-50):
                hits.append(False)
                continue
            if v + bound < cut * (1 - 2.0**-50):
                hits.append(True)
                continue
        if exact is None:
            exact = abs(p.value(x))
        hits.append(exact <= Fraction(gamma))
    return tuple(hits)


def run_smallball(
    spec: EnsembleSpec,
    samples: int,
    x: Union[float, str, Rational],
    gammas: Sequence[float],
    threads: int = 1,
) -> List[SmallBallRow]:
    """Empirical ``P(|P(x)| <= gamma)`` at the dyadic point ``x``.

    Comparisons far from a tie are settled by compensated Horner; the rest use
    exact evaluation, so the hit counts are exact.
    """
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    point = to_dyadic(x)
    for gamma in gammas:
        if gamma < 0:
            raise DomainError(f"gamma must be nonnegative, got {gamma}")
    cuts = tuple(float(g) for g in gammas)
    per_sample = _parallel_map(functools.partial(_smallball_hits, spec, point, cuts), samples, threads)
    rows = []
    for j, gamma in enumerate(cuts):
        hits = sum(1 for h in per_sample if h[j])
        rows.append(SmallBallRow(gamma, hits / samples, hits))
    return rows


def smallball_slope(rows: Sequence[SmallBallRow]) -> float:
    """Least-squares slope of log-probability against log-gamma over positive entries."""
    usable = [(r.gamma, r.probability) for r in rows if r.probability > 0 and r.gamma > 0]
    if len(usable) < 2:
        raise DomainError("need two positive probabilities to fit a slope")
    xs = np.log([g for g, _ in usable])
    ys = np.log([p for _, p in usable])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def truncation_keep(n: int, r: float, bound_exp: float = 8.0) -> int:
    """Truncation degree ``m = ceil(4 B ln n / r)`` for the margin ``r``."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"margin r must lie in (0, 1), got {r}")
    return math.ceil(4.0 * bound_exp * math.log(n) / r)


def truncation_margin(n: int, m: int, bound_exp: float = 8.0) -> float:
    """Margin ``r = 4 B ln n / m`` matching the truncation degree ``m``."""
    if m < 1:
        raise BadDegree(f"truncation degree must be >= 1, got {m}")
    return 4.0 * bound_exp * math.log(n) / m


@dataclass(frozen=True)
class TruncationResult:
    keep: int
    mean_full: float
    mean_truncated: float
    difference: float
    paired: SummaryStats
    identical_fraction: float


def _count_or_zero(p: IntPolynomial, rng: RootRange) -> int:
    return 0 if p.is_zero else count_roots(p, rng)


def _paired_counts(spec: EnsembleSpec, keep: int, interval: RootRange, index: int) -> Tuple[int, int]:
    p = sample(spec, index)
    return _count_or_zero(p, interval), _count_or_zero(truncate(p, keep), interval)


def run_truncation(
    spec: EnsembleSpec, samples: int, keep: int, interval: RootRange, threads: int = 1
) -> TruncationResult:
    """Root counts of ``P_n`` and of its truncation ``P_m`` on the same interval."""
    if not 0 <= keep <= spec.degree:
        raise BadDegree(f"truncation degree {keep} outside [0, {spec.degree}]")
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    pairs = _parallel_map(functools.partial(_paired_counts, spec, keep, interval), samples, threads)
    diffs = [a - b for a, b in pairs]
    paired = SummaryStats.from_values(diffs)
    mean_full = SummaryStats.from_values([a for a, _ in pairs]).mean
    mean_trunc = SummaryStats.from_values([b for _, b in pairs]).mean
    identical = sum(1 for d in diffs if d == 0) / samples
    return TruncationResult(keep, mean_full, mean_trunc, abs(paired.mean), paired, identical)


JENSEN_GRID_FACTOR = 256


def jensen_bound(p: IntPolynomial, r: float, big_r: float, k: int = 0) -> float:
    """Jensen-type upper bound on the number of roots in ``[-r, r]``.

    ``k + log(M_k / |P^(k)(0)|) / log(R / r)`` with ``M_k`` the maximum of
    ``|P^(k)|`` over ``256 (d + 1)`` equally spaced points of ``|z| = R``.
    """
    if not 0.0 < r < big_r < 1.0:
        raise DomainError(f"need 0 < r < R < 1, got r={r}, R={big_r}")
    if k < 0:
        raise DomainError(f"derivative order must be nonnegative, got {k}")
    coeffs = list(p.coeffs)
    for _ in range(k):
        coeffs = [i * c for i, c in enumerate(coeffs) if i > 0] or [0]
    coeffs = _strip(coeffs)
    if coeffs[0] == 0:
        raise DomainError(f"the order-{k} derivative vanishes at 0")
    biggest = max(abs(c) for c in coeffs)
    normalized = np.array([c / biggest for c in coeffs], dtype=float)
    if len(coeffs) == 1:
        return float(k)
    points = JENSEN_GRID_FACTOR * len(coeffs)
    z = big_r * np.exp(2j * np.pi * np.arange(points) / points)
    peak = float(np.max(np.abs(np.polyval(normalized[::-1], z))))
    return k + math.log(peak / abs(normalized[0])) / math.log(big_r / r)


def _jensen_sample(spec: EnsembleSpec, r: float, big_r: float, k: int, index: int) -> Tuple[int, Optional[float]]:
    p = sample(spec, index)
    if p.is_zero:
        return 0, None
    count = count_roots(p, RootRange.closed(-r, r))
    try:
        return count, jensen_bound(p, r, big_r, k)
    except DomainError:
        return count, None


def run_jensen(
    spec: EnsembleSpec, samples: int, r: float, big_r: float, k: int = 0, threads: int = 1
) -> SummaryStats:
    """Exact counts on ``[-r, r]`` next to the Jensen bound; samples with ``P^(k)(0) = 0`` are skipped."""
    if not 0.0 < r < big_r < 1.0:
        raise DomainError(f"need 0 < r < R < 1, got r={r}, R={big_r}")
    results = _parallel_map(functools.partial(_jensen_sample, spec, r, big_r, k), samples, threads)
    kept = [(c, b) for c, b in results if b is not None]
    skipped = len(results) - len(kept)
    if skipped:
        logger.warning("skipped %d of %d samples with a vanishing order-%d coefficient", skipped, samples, k)
    if not kept:
        raise DomainError("every sample was skipped")
    summary = SummaryStats.from_values([c for c, _ in kept])
    below = sum(1 for c, b in kept if b < c)
    return summary.with_extras(
        mean_bound=sum(b for _, b in kept) / len(kept), violations=float(below), skipped=float(skipped)
    )
