"""Tool catalog construction from a graph schema plus domain config.

Auto-generated per label L: search_<l> (CONTAINS on the display property),
get_<l> (exact match on the key property), count_<l>. Per edge type T:
find_<t>, returning endpoint display-property pairs. Domain tools come
from a YAML file and shadow autos on name collisions.

Display property: first present of name, title, term, else the key
property. Key property: explicit override, else the first property ending
in ``_id``, else ``name``, else the lexicographically first property.
Every template is a parameterized query; arguments are only ever bound as
query parameters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import yaml

from ..cypher import parse
from ..errors import CypherSyntaxError, ToolConfigError
from ..store import GraphSchema, LabelStats

PARAM_TYPES = ("string", "int", "float", "bool")

_PLACEHOLDER = re.compile(r"\$([A-Za-z_][A-Za-z0-9_]*)")


@dataclass(slots=True)
class ToolParam:
    name: str
    type: str = "string"
    required: bool = False
    default: Any = None
    description: str = ""


@dataclass(slots=True)
class ToolSpec:
    name: str
    description: str
    params: List[ToolParam]
    template: str
    origin: str  # auto-label | auto-edge | domain


@dataclass(slots=True)
class ToolCatalog:
    tools: List[ToolSpec]
    schema_fingerprint: str

    def get(self, name: str) -> Optional[ToolSpec]:
        for tool in self.tools:
            if tool.name == name:
                return tool
        return None

    def __len__(self) -> int:
        return len(self.tools)


def _slug(name: str) -> str:
    out = []
    for ch in name:
        out.append(ch.lower() if ch.isalnum() else "_")
    slug = "".join(out).strip("_")
    return slug or "x"


def display_property(entry: LabelStats, key: str) -> str:
    for candidate in ("name", "title", "term"):
        if candidate in entry.properties:
            return candidate
    return key


def key_property(entry: LabelStats, overrides: Dict[str, str]) -> str:
    if entry.name in overrides:
        return overrides[entry.name]
    id_props = sorted(p for p in entry.properties if p.endswith("_id"))
    if id_props:
        return id_props[0]
    if "name" in entry.properties:
        return "name"
    return entry.properties[0] if entry.properties else "name"


def _schema_fingerprint(schema: GraphSchema) -> str:
    parts = [f"{l.name}:{l.count}" for l in schema.labels]
    parts += [f"{e.name}:{e.count}" for e in schema.edge_types]
    return ";".join(parts)


def _label_tools(entry: LabelStats, overrides: Dict[str, str]) -> List[ToolSpec]:
    slug = _slug(entry.name)
    key = key_property(entry, overrides)
    display = display_property(entry, key)
    if display == key:
        returns = f"n.{key}"
    else:
        returns = f"n.{key}, n.{display}"
    return [
        ToolSpec(
            name=f"search_{slug}",
            description=f"Search {entry.name} nodes whose {display} contains the query text",
            params=[
                ToolParam("query", "string", required=True, description="substring to look for"),
                ToolParam("limit", "int", default=25, description="max rows"),
            ],
            template=(
                f"MATCH (n:{entry.name}) WHERE n.{display} CONTAINS $query "
                f"RETURN {returns} LIMIT $limit"
            ),
            origin="auto-label",
        ),
        ToolSpec(
            name=f"get_{slug}",
            description=f"Fetch one {entry.name} by exact {key}",
            params=[ToolParam("value", "string", required=True, description=f"{key} to match")],
            template=f"MATCH (n:{entry.name} {{{key}: $value}}) RETURN n",
            origin="auto-label",
        ),
        ToolSpec(
            name=f"count_{slug}",
            description=f"Count {entry.name} nodes",
            params=[],
            template=f"MATCH (n:{entry.name}) RETURN count(*) AS total",
            origin="auto-label",
        ),
    ]


def _edge_tool(
    etype: str,
    src_entry: Optional[LabelStats],
    dst_entry: Optional[LabelStats],
    overrides: Dict[str, str],
) -> ToolSpec:
    slug = _slug(etype)
    if src_entry is not None and dst_entry is not None:
        src_disp = display_property(src_entry, key_property(src_entry, overrides))
        dst_disp = display_property(dst_entry, key_property(dst_entry, overrides))
        template = (
            f"MATCH (a:{src_entry.name})-[:{etype}]->(b:{dst_entry.name}) "
            f"WHERE a.{src_disp} CONTAINS $from "
            f"RETURN a.{src_disp}, b.{dst_disp} LIMIT $limit"
        )
        description = (
            f"Find {etype} connections from {src_entry.name} to {dst_entry.name}"
        )
    else:  # edge type without resolvable endpoints (empty stats)
        template = f"MATCH (a)-[:{etype}]->(b) RETURN a, b LIMIT $limit"
        description = f"Find {etype} connections"
        return ToolSpec(
            name=f"find_{slug}",
            description=description,
            params=[ToolParam("limit", "int", default=25)],
            template=template,
            origin="auto-edge",
        )
    return ToolSpec(
        name=f"find_{slug}",
        description=description,
        params=[
            ToolParam("from", "string", default="", description="filter source display value (substring)"),
            ToolParam("limit", "int", default=25),
        ],
        template=template,
        origin="auto-edge",
    )


def load_domain_config(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        return yaml.safe_load(fh)


def _domain_tools(config: Dict[str, Any]) -> List[ToolSpec]:
    tools = []
    for raw in config.get("tools") or []:
        name = raw.get("name", "<unnamed>")
        params = []
        for p in raw.get("params") or []:
            ptype = p.get("type", "string")
            if ptype not in PARAM_TYPES:
                raise ToolConfigError(name, f"unknown param type {ptype!r}")
            required = bool(p.get("required", False))
            default = p.get("default")
            if required and default is not None:
                raise ToolConfigError(name, f"param {p['name']!r} is required but has a default")
            params.append(
                ToolParam(
                    name=p["name"],
                    type=ptype,
                    required=required,
                    default=default,
                    description=p.get("description", ""),
                )
            )
        template = raw.get("cypher", "")
        spec = ToolSpec(
            name=name,
            description=raw.get("description", ""),
            params=params,
            template=template,
            origin="domain",
        )
        _validate_tool(spec)
        tools.append(spec)
    return tools


def _validate_tool(spec: ToolSpec) -> None:
    placeholders = set(_PLACEHOLDER.findall(spec.template))
    declared = {p.name for p in spec.params}
    orphans = placeholders - declared
    if orphans:
        raise ToolConfigError(spec.name, f"template placeholders without params: {sorted(orphans)}")
    unused = declared - placeholders
    if unused:
        raise ToolConfigError(spec.name, f"params never used in template: {sorted(unused)}")
    try:
        parse(spec.template)
    except CypherSyntaxError as exc:
        raise ToolConfigError(spec.name, f"template does not parse: {exc}") from None


def discover_tools(
    schema: GraphSchema,
    domain_config: Optional[Dict[str, Any]] = None,
    key_overrides: Optional[Dict[str, str]] = None,
) -> ToolCatalog:
    """Build the catalog: 3 tools per label, 1 per edge type, plus domain
    tools (which shadow autos on name collision)."""
    overrides = key_overrides or {}
    tools: List[ToolSpec] = []
    by_label = {entry.name: entry for entry in schema.labels}
    for entry in schema.labels:
        tools.extend(_label_tools(entry, overrides))
    for et in schema.edge_types:
        tools.append(
            _edge_tool(et.name, by_label.get(et.src_label), by_label.get(et.dst_label), overrides)
        )
    for spec in tools:
        _validate_tool(spec)
    if domain_config:
        for spec in _domain_tools(domain_config):
            for i, existing in enumerate(tools):
                if existing.name == spec.name:
                    tools[i] = spec  # domain shadows auto, counted once
                    break
            else:
                tools.append(spec)
    return ToolCatalog(tools, _schema_fingerprint(schema))
