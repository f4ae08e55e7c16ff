"""
Exception hierarchy for kac-roots.

Every error raised by the library derives from :class:`KacRootsError` and
carries a single-line message, so the CLI can print it verbatim.
"""

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .ek_density import QuadResult


class KacRootsError(Exception):
    """Base class for all kac-roots errors."""


class ZeroPolynomial(KacRootsError):
    """The operation needs a polynomial that is not identically zero."""

    def __init__(self, operation: str = "operation"):
        super().__init__(f"{operation} is undefined for the zero polynomial")
        self.operation = operation


class BadDegree(KacRootsError):
    """A degree or truncation index is outside the allowed range."""


class DomainError(KacRootsError):
    """An argument lies outside the mathematical domain of a function."""


class InternalError(KacRootsError):
    """An internal invariant failed; indicates a bug, not bad input."""


class ConfigError(KacRootsError):
    """Invalid command-line flags or configuration file content."""

    def __init__(self, message: str, flag: Optional[str] = None):
        if flag is not None:
            message = f"{flag}: {message}"
        super().__init__(message)
        self.flag = flag


class OutputError(KacRootsError):
    """An output file could not be written."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"cannot write {path}: {reason}")
        self.path = path


class ToleranceNotMet(KacRootsError):
    """Quadrature stopped before reaching the requested tolerance.

    The best available estimate is kept on ``result`` together with its
    honest error estimate.
    """

    def __init__(self, result: "QuadResult", rel_tol: float):
        super().__init__(
            f"quadrature tolerance {rel_tol:g} not met: "
            f"value={result.value!r} err_est={result.err_est:.3g} "
            f"evaluations={result.evaluations}"
        )
        self.result = result
        self.rel_tol = rel_tol
