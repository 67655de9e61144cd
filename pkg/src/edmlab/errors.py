"""Exception hierarchy shared by every module.

Each error carries a stable machine-readable ``code`` (used by the HTTP
service and the CLI's JSON output) and an optional ``field`` naming the
offending input field or design-matrix column.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    code = "error"

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message)
        self.field = field


class ValidationError(WorkbenchError):
    """Input violates a type invariant or an operation precondition."""

    code = "validation"


class ReferentialIntegrityError(ValidationError):
    code = "referential_integrity"


class UnsupportedDesignError(ValidationError):
    code = "unsupported_design"


class InsufficientDataError(ValidationError):
    code = "insufficient_data"


class FamilyDomainError(ValidationError):
    """Data falls outside the domain a model family can be fitted on."""

    code = "family_domain"


class CapacityError(ValidationError):
    code = "capacity"


class StorageError(ValidationError):
    code = "storage"


class NotFoundError(WorkbenchError):
    code = "not_found"


class NumericalError(WorkbenchError):
    code = "numerical"


class RankDeficientError(NumericalError):
    code = "rank_deficient"

    def __init__(self, message: str, *, column: int | None = None, field: str | None = None):
        super().__init__(message, field=field)
        self.column = column
