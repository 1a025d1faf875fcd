"""Schema-driven MCP server: auto-generated and YAML-defined tools served
over newline-delimited JSON-RPC on stdio."""

from .catalog import ToolCatalog, ToolParam, ToolSpec, discover_tools, load_domain_config
from .server import McpServer, serve_stdio

__all__ = [
    "ToolCatalog",
    "ToolParam",
    "ToolSpec",
    "discover_tools",
    "load_domain_config",
    "McpServer",
    "serve_stdio",
]
