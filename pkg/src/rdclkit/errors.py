"""Error types shared across the workbench.

Every error carries a machine code (the wire-level ``code`` of the HTTP API)
and, where it makes sense, a document or graph path pointing at the offending
construct. Paths are sequences of keys and indices; ``format_path`` renders
them in the ``vdu[0].intCpd[1].internalIfRef`` style used in reports.
"""

from __future__ import annotations

from typing import Sequence

DocPath = tuple  # keys (str) and indices (int), root-first


def format_path(path: Sequence) -> str:
    """Render a document path: string keys joined by dots, indices bracketed."""
    out = ""
    for part in path:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out


class WorkbenchError(Exception):
    """Base error. ``code`` mirrors the module error names of the contract."""

    code = "Error"
    http_status = 400

    def __init__(self, message: str, *, path: Sequence = ()):
        self.message = message
        self.path: DocPath = tuple(path)
        super().__init__(message)

    def __str__(self) -> str:
        if self.path:
            return f"{self.message} (at {format_path(self.path)})"
        return self.message


# --- document loading -------------------------------------------------------

class DocumentSyntaxError(WorkbenchError):
    code = "SyntaxError"


class SchemaError(WorkbenchError):
    code = "SchemaError"


class ConstraintError(WorkbenchError):
    """Descriptor violates a semantic constraint (e.g. the nested-type rule)."""

    code = "ConstraintError"

    def __init__(self, message: str, *, path: Sequence = (), rule: str | None = None):
        super().__init__(message, path=path)
        self.rule = rule


# --- description models / registry ------------------------------------------

class DuplicateTypeError(WorkbenchError):
    code = "DuplicateType"
    http_status = 409


class NameClashError(WorkbenchError):
    code = "NameClash"
    http_status = 409


class IoError(WorkbenchError):
    code = "IoError"
    http_status = 500


class UnknownProjectTypeError(WorkbenchError):
    code = "UnknownProjectType"
    http_status = 404


# --- graph model --------------------------------------------------------------

class UnknownViewError(WorkbenchError):
    code = "UnknownView"
    http_status = 404


class UnknownIdError(WorkbenchError):
    code = "UnknownId"
    http_status = 404


class TypeViolationError(WorkbenchError):
    code = "TypeViolation"
    http_status = 409


class PropertyError(WorkbenchError):
    code = "PropertyError"
    http_status = 409


class NotExpandableError(WorkbenchError):
    code = "NotExpandable"
    http_status = 409


class MissingNestedDescriptorError(WorkbenchError):
    code = "MissingNestedDescriptor"
    http_status = 404


class NestedParseError(WorkbenchError):
    code = "NestedParseError"
    http_status = 409


class BoundaryBindingError(WorkbenchError):
    code = "BoundaryBindingError"
    http_status = 409

    def __init__(self, message: str, *, unmatched: Sequence[str] = (), path: Sequence = ()):
        super().__init__(message, path=path)
        self.unmatched = tuple(unmatched)


class AmbiguousBindingError(WorkbenchError):
    code = "AmbiguousBinding"
    http_status = 409


# --- plugins ------------------------------------------------------------------

class DuplicateNameError(WorkbenchError):
    code = "DuplicateName"


class UnresolvedElementError(WorkbenchError):
    code = "UnresolvedElement"


class DanglingReferenceError(WorkbenchError):
    code = "DanglingReference"


class IncompleteGraphError(WorkbenchError):
    code = "IncompleteGraph"
    http_status = 409


class DanglingRequirementError(WorkbenchError):
    code = "DanglingRequirement"


class NothingToConvertError(WorkbenchError):
    code = "NothingToConvert"
    http_status = 409


class UnsupportedOperationError(WorkbenchError):
    code = "UnsupportedOperation"
    http_status = 409


# --- validation engine ----------------------------------------------------------

class DuplicateRuleError(WorkbenchError):
    code = "DuplicateRule"
    http_status = 409


# --- project store ---------------------------------------------------------------

class DuplicateProjectError(WorkbenchError):
    code = "DuplicateProject"
    http_status = 409


class NotFoundError(WorkbenchError):
    code = "NotFound"
    http_status = 404


class IllegalPathError(WorkbenchError):
    code = "IllegalPath"


class FetchError(WorkbenchError):
    code = "FetchError"
    http_status = 502


class SizeExceededError(WorkbenchError):
    code = "SizeExceeded"
    http_status = 413


# --- agent / VIM -------------------------------------------------------------------

class ValidationRequiredError(WorkbenchError):
    code = "ValidationRequired"
    http_status = 409


class UnresolvedNetworkError(WorkbenchError):
    code = "UnresolvedNetwork"
    http_status = 409


class VimError(WorkbenchError):
    code = "VimError"
    http_status = 502


class RollbackError(WorkbenchError):
    code = "RollbackError"
    http_status = 502

    def __init__(self, message: str, *, leftovers: Sequence[str] = ()):
        super().__init__(message)
        self.leftovers = tuple(leftovers)


class BindError(WorkbenchError):
    code = "BindError"
    http_status = 500


class UnknownKeyWarning(UserWarning):
    """Unknown keys in documents warn, never fail."""
