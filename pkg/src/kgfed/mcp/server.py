"""JSON-RPC 2.0 request handling over newline-delimited stdio.

Supported methods: initialize, tools/list, tools/call. Tool arguments are
bound as query parameters only; they never touch the statement text, so a
hostile argument cannot change a template's shape. Call results carry a
structured text block with columns and rows (capped at 200 rows). Tool
failures come back as JSON-RPC errors and the loop keeps serving.
"""

from __future__ import annotations

import json
import sys
from typing import Any, Dict, IO, List, Optional

from .. import __version__
from ..cypher import execute, parse
from ..cypher.planner import plan as build_plan
from ..errors import KgError
from ..store import Tenant
from .catalog import ToolCatalog, ToolParam, ToolSpec

PROTOCOL_VERSION = "2024-11-05"
ROW_CAP = 200

PARSE_ERROR = -32700
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603

_JSON_TYPES = {"string": "string", "int": "integer", "float": "number", "bool": "boolean"}


def _coerce(param: ToolParam, value: Any) -> Any:
    kind = param.type
    if kind == "string":
        if isinstance(value, str):
            return value
    elif kind == "int":
        if isinstance(value, bool):
            raise ValueError("expected integer, got boolean")
        if isinstance(value, int):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)  # JSON numbers may arrive as 25.0
    elif kind == "float":
        if isinstance(value, bool):
            raise ValueError("expected number, got boolean")
        if isinstance(value, (int, float)):
            return float(value)
    elif kind == "bool":
        if isinstance(value, bool):
            return value
    raise ValueError(f"expected {kind}, got {json.dumps(value)[:80]}")


class ToolError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class McpServer:
    def __init__(self, catalog: ToolCatalog, tenant: Tenant, name: str = "kgfed-mcp"):
        self.catalog = catalog
        self.tenant = tenant
        self.name = name

    # -- method implementations --

    def initialize(self) -> Dict[str, Any]:
        return {
            "protocolVersion": PROTOCOL_VERSION,
            "capabilities": {"tools": {}},
            "serverInfo": {"name": self.name, "version": __version__},
        }

    def tools_list(self) -> Dict[str, Any]:
        rendered = []
        for tool in self.catalog.tools:
            properties: Dict[str, Any] = {}
            required: List[str] = []
            for param in tool.params:
                entry: Dict[str, Any] = {"type": _JSON_TYPES[param.type]}
                if param.description:
                    entry["description"] = param.description
                if param.default is not None:
                    entry["default"] = param.default
                properties[param.name] = entry
                if param.required:
                    required.append(param.name)
            rendered.append(
                {
                    "name": tool.name,
                    "description": tool.description,
                    "inputSchema": {
                        "type": "object",
                        "properties": properties,
                        "required": required,
                    },
                }
            )
        return {"tools": rendered}

    def bind_arguments(self, tool: ToolSpec, arguments: Dict[str, Any]) -> Dict[str, Any]:
        bound: Dict[str, Any] = {}
        for param in tool.params:
            if param.name in arguments:
                try:
                    bound[param.name] = _coerce(param, arguments[param.name])
                except ValueError as exc:
                    raise ToolError(
                        INVALID_PARAMS, f"argument {param.name!r}: {exc}"
                    ) from None
            elif param.required:
                raise ToolError(INVALID_PARAMS, f"missing required argument {param.name!r}")
            else:
                bound[param.name] = param.default
        unknown = set(arguments) - {p.name for p in tool.params}
        if unknown:
            raise ToolError(INVALID_PARAMS, f"unknown arguments: {sorted(unknown)}")
        return bound

    def tools_call(self, name: str, arguments: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        tool = self.catalog.get(name)
        if tool is None:
            raise ToolError(INVALID_PARAMS, f"unknown tool: {name}")
        bound = self.bind_arguments(tool, arguments or {})
        try:
            ast = parse(tool.template)
            plan_ = build_plan(ast, self.tenant.schema())
            table = execute(self.tenant, plan_, bound)
        except KgError as exc:
            raise ToolError(INTERNAL_ERROR, f"{exc.code}: {exc}") from None
        doc = table.to_dict()
        rows = doc["rows"][:ROW_CAP]
        payload = {"columns": doc["columns"], "rows": rows, "row_count": len(rows)}
        return {
            "content": [
                {"type": "text", "text": json.dumps(payload, ensure_ascii=False)}
            ]
        }

    # -- request dispatch --

    def handle(self, message: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        msg_id = message.get("id")
        method = message.get("method")
        if msg_id is None:
            return None  # notification: nothing to answer
        try:
            if method == "initialize":
                result = self.initialize()
            elif method == "tools/list":
                result = self.tools_list()
            elif method == "tools/call":
                params = message.get("params") or {}
                result = self.tools_call(params.get("name", ""), params.get("arguments"))
            else:
                return _error(msg_id, METHOD_NOT_FOUND, f"method not found: {method}")
        except ToolError as exc:
            return _error(msg_id, exc.code, str(exc))
        return {"jsonrpc": "2.0", "id": msg_id, "result": result}


def _error(msg_id: Any, code: int, message: str) -> Dict[str, Any]:
    return {"jsonrpc": "2.0", "id": msg_id, "error": {"code": code, "message": message}}


def serve_stdio(
    catalog: ToolCatalog,
    tenant: Tenant,
    instream: Optional[IO[str]] = None,
    outstream: Optional[IO[str]] = None,
    name: str = "kgfed-mcp",
) -> None:
    """One JSON-RPC message per line until EOF. Malformed lines produce a
    parse-error response and the loop continues."""
    instream = instream if instream is not None else sys.stdin
    outstream = outstream if outstream is not None else sys.stdout
    server = McpServer(catalog, tenant, name)
    for line in instream:
        line = line.strip()
        if not line:
            continue
        try:
            message = json.loads(line)
        except ValueError:
            response: Optional[Dict[str, Any]] = _error(None, PARSE_ERROR, "parse error")
        else:
            if not isinstance(message, dict):
                response = _error(None, PARSE_ERROR, "request must be an object")
            else:
                response = server.handle(message)
        if response is not None:
            outstream.write(json.dumps(response, ensure_ascii=False) + "\n")
            outstream.flush()
