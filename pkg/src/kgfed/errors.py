"""Exception hierarchy shared across the engine, loaders, and services."""

from __future__ import annotations


class KgError(Exception):
    """Base class for all kgfed errors."""

    code = "error"


class DuplicateTenantError(KgError):
    code = "duplicate-tenant"


class UnknownTenantError(KgError):
    code = "unknown-tenant"


class UnknownNodeError(KgError):
    code = "unknown-node"


class UnknownEndpointError(KgError):
    code = "unknown-endpoint"


class PropertyValueError(KgError):
    """Property value outside the supported type system."""

    code = "invalid-property-value"


class SnapshotFormatError(KgError):
    """Structural fault in a snapshot stream.

    ``line`` is 1-based; 0 means the fault is not tied to a line
    (e.g. the stream is not gzip at all).
    """

    code = "malformed-snapshot"

    def __init__(self, message: str, line: int = 0, fault: str = "malformed-record"):
        super().__init__(message)
        self.line = line
        self.fault = fault


class CypherSyntaxError(KgError):
    """Parse failure with a 1-based line:column position."""

    code = "syntax-error"

    def __init__(self, message: str, line: int, column: int, expected: tuple = ()):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = tuple(expected)

    def __str__(self) -> str:
        base = super().__str__()
        if self.expected:
            base += " (expected: %s)" % ", ".join(self.expected)
        return f"{self.line}:{self.column}: {base}"


class MissingParameterError(KgError):
    code = "missing-parameter"

    def __init__(self, name: str):
        super().__init__(f"missing query parameter ${name}")
        self.name = name


class SizeGuardExceeded(KgError):
    """Reference interpreter refused a graph above its size guard."""

    code = "size-guard-exceeded"


class MappingError(KgError):
    """Invalid ETL mapping configuration."""

    code = "invalid-mapping"


class EmptyKeyError(KgError):
    """Dedup registry refused an empty key value."""

    code = "empty-key"


class LoadError(KgError):
    """A load aborted: missing file, strict-mode malformed row, rejected batch."""

    code = "load-failed"


class ToolConfigError(KgError):
    """Invalid MCP domain tool definition."""

    code = "invalid-domain-config"

    def __init__(self, tool: str, reason: str):
        super().__init__(f"tool {tool!r}: {reason}")
        self.tool = tool
        self.reason = reason
