"""kgfed: embeddable property-graph engine with a Cypher-subset query
pipeline, portable snapshot federation, a dedup-registry ETL framework,
and a schema-driven MCP tool server."""

from .store import GraphStore, GraphSchema, Tenant
from .snapshot import export_snapshot, import_snapshot, validate_snapshot

__version__ = "0.1.0"

__all__ = [
    "GraphStore",
    "GraphSchema",
    "Tenant",
    "export_snapshot",
    "import_snapshot",
    "validate_snapshot",
    "__version__",
]
