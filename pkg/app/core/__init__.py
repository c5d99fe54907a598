"""Core module - logging, exceptions, and application infrastructure."""

from app.core.logging import get_logger, job_context, setup_logging
from app.core.exceptions import (
    FanoFloerError,
    FieldArithmeticError,
    MixedFieldError,
    NovikovError,
    InexactDivisionError,
    PolytopeError,
    LocalSystemError,
    NotCriticalError,
    SearchBudgetExceeded,
    SearchConsistencyError,
    ComplexIdentityError,
    InputParseError,
)

__all__ = [
    "setup_logging",
    "job_context",
    "get_logger",
    "FanoFloerError",
    "FieldArithmeticError",
    "MixedFieldError",
    "NovikovError",
    "InexactDivisionError",
    "PolytopeError",
    "LocalSystemError",
    "NotCriticalError",
    "SearchBudgetExceeded",
    "SearchConsistencyError",
    "ComplexIdentityError",
    "InputParseError",
]
