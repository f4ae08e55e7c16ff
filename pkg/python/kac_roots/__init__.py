"""
kac-roots

Exact real-root statistics of random Kac polynomials, the Edelman-Kostlan
density of their real roots, and Monte Carlo experiments on both.
"""

__version__ = "0.1.0"

from .config import IsolationConfig, QuadratureConfig, RunConfig
from .ek_density import (
    KAC_CONSTANT,
    DensityQuery,
    QuadResult,
    asymptotic_expectation,
    bulk_expectation,
    density,
    edge_bound,
    expected_roots,
    maslova_variance,
)
from .ensembles import Distribution, EnsembleSpec, Xoshiro256StarStar, sample, truncate
from .errors import (
    BadDegree,
    ConfigError,
    DomainError,
    InternalError,
    KacRootsError,
    OutputError,
    ToleranceNotMet,
    ZeroPolynomial,
)
from .experiments import (
    BulkWindow,
    RootDiagnostics,
    SampleRecord,
    SummaryStats,
    analyze_sample,
    diagnose_polynomial,
    jensen_bound,
    read_records_csv,
    run_bulk,
    run_doubles,
    run_edge,
    run_expectation,
    run_gap,
    run_jensen,
    run_smallball,
    run_truncation,
    run_variance,
    simulate,
    smallball_slope,
    summarize_records,
    truncation_keep,
    truncation_margin,
    write_records_csv,
)
from .plotting import Series, emit_svg
from .poly_core import (
    DyadicInterval,
    IntPolynomial,
    content,
    derivative,
    eval_exact,
    has_multiple_roots,
    polynomial_gcd,
    primitive_part,
    pseudo_remainder,
    reversed_polynomial,
    squarefree_part,
    taylor_shift,
    to_dyadic,
)
from .root_count import (
    RootRange,
    RootReport,
    SturmChain,
    count_roots,
    count_roots_descartes,
    isolate_roots,
    root_bound,
    sturm_chain,
)


# Convenience functions for quick usage
def poly(*coeffs: int) -> IntPolynomial:
    """Integer polynomial from coefficients in ascending order: ``poly(-1, 0, 1)`` is x**2 - 1."""
    return IntPolynomial(tuple(coeffs))


def real_roots(p: IntPolynomial) -> int:
    """Distinct real roots of ``p`` on the whole line."""
    return count_roots(p)


def expected_real_roots(n: int, rel_tol: float = 1e-10) -> float:
    """Expected number of real roots of the degree ``n`` Gaussian Kac polynomial."""
    return expected_roots(DensityQuery.full_line(n, rel_tol)).value


__all__ = [
    # Polynomials
    "IntPolynomial",
    "DyadicInterval",
    "eval_exact",
    "derivative",
    "content",
    "primitive_part",
    "pseudo_remainder",
    "polynomial_gcd",
    "squarefree_part",
    "has_multiple_roots",
    "reversed_polynomial",
    "taylor_shift",
    "to_dyadic",
    # Root counting
    "RootRange",
    "RootReport",
    "SturmChain",
    "sturm_chain",
    "count_roots",
    "count_roots_descartes",
    "isolate_roots",
    "root_bound",
    # Ensembles
    "Distribution",
    "EnsembleSpec",
    "Xoshiro256StarStar",
    "sample",
    "truncate",
    # Density
    "KAC_CONSTANT",
    "DensityQuery",
    "QuadResult",
    "density",
    "expected_roots",
    "asymptotic_expectation",
    "maslova_variance",
    "edge_bound",
    "bulk_expectation",
    # Experiments
    "BulkWindow",
    "RootDiagnostics",
    "SampleRecord",
    "SummaryStats",
    "analyze_sample",
    "diagnose_polynomial",
    "simulate",
    "summarize_records",
    "read_records_csv",
    "write_records_csv",
    "run_expectation",
    "run_gap",
    "run_edge",
    "run_bulk",
    "run_variance",
    "run_doubles",
    "run_smallball",
    "smallball_slope",
    "run_truncation",
    "truncation_keep",
    "truncation_margin",
    "jensen_bound",
    "run_jensen",
    # Plotting
    "Series",
    "emit_svg",
    # Configuration
    "QuadratureConfig",
    "IsolationConfig",
    "RunConfig",
    # Errors
    "KacRootsError",
    "ZeroPolynomial",
    "BadDegree",
    "DomainError",
    "InternalError",
    "ConfigError",
    "OutputError",
    "ToleranceNotMet",
    # Convenience functions
    "poly",
    "real_roots",
    "expected_real_roots",
    "__version__",
]
