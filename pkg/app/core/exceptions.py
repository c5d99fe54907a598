"""Application exception hierarchy."""

from typing import List, Optional


class FanoFloerError(Exception):
    """Base exception for all fanofloer errors."""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class FieldArithmeticError(FanoFloerError):
    """Error in finite field arithmetic (GF(2^m) tower)."""

    def __init__(
        self,
        message: str,
        degree: int | None = None,
        details: dict | None = None,
    ):
        super().__init__(message, details)
        self.degree = degree


class MixedFieldError(FieldArithmeticError):
    """Operands live in different fields and no embedding was requested."""

    def __init__(
        self,
        message: str,
        left_degree: int | None = None,
        right_degree: int | None = None,
        details: dict | None = None,
    ):
        super().__init__(message, degree=left_degree, details=details)
        self.left_degree = left_degree
        self.right_degree = right_degree


class NovikovError(FanoFloerError):
    """Error in Novikov polynomial or matrix arithmetic."""


class InexactDivisionError(NovikovError):
    """Division that should be exact left a remainder.

    Raised by exact division; during elimination it means the elimination
    itself is broken, not the input.
    """

    def __init__(
        self,
        message: str,
        dividend: str | None = None,
        divisor: str | None = None,
        details: dict | None = None,
    ):
        super().__init__(message, details)
        self.dividend = dividend[:200] if dividend else None
        self.divisor = divisor[:200] if divisor else None


class PolytopeError(FanoFloerError):
    """Invalid polytope data, interior point or builtin name."""

    def __init__(
        self,
        message: str,
        facet: int | None = None,
        polytope: str | None = None,
        details: dict | None = None,
    ):
        super().__init__(message, details)
        self.facet = facet
        self.polytope = polytope


class LocalSystemError(FanoFloerError):
    """Invalid local system assignment (rho)."""


class NotCriticalError(FanoFloerError):
    """The product bound was requested at a rho that is not a critical point."""

    def __init__(
        self,
        message: str,
        nonzero_components: Optional[List[int]] = None,
        details: dict | None = None,
    ):
        super().__init__(message, details)
        self.nonzero_components = nonzero_components or []


class SearchBudgetExceeded(FanoFloerError):
    """Critical point search would exceed the configured candidate budget."""

    def __init__(
        self,
        message: str,
        layer: int,
        reports: Optional[list] = None,
        details: dict | None = None,
    ):
        super().__init__(message, details)
        self.layer = layer
        self.reports = reports or []


class SearchConsistencyError(FanoFloerError):
    """The vectorized critical point scan and the exact gradient disagree."""

    def __init__(self, message: str, rho: Optional[str] = None, details: dict | None = None):
        super().__init__(message, details)
        self.rho = rho


class ComplexIdentityError(FanoFloerError):
    """A structural identity of the Floer complex failed (delta^2 = o * id)."""


class InputParseError(FanoFloerError):
    """Error parsing a polytope or rho input file."""

    def __init__(
        self,
        message: str,
        path: str | None = None,
        line: int | None = None,
        field: str | None = None,
        details: dict | None = None,
    ):
        super().__init__(message, details)
        self.path = path
        self.line = line
        self.field = field

    def __str__(self) -> str:
        where = []
        if self.path:
            where.append(self.path)
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.field:
            where.append(f"field '{self.field}'")
        prefix = ", ".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message
