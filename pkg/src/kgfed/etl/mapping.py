"""Mapping configuration: how delimited source files become graph content.

YAML layout::

    nodes:
      - file: drugs.csv
        delimiter: ","
        label: Drug
        key: {column: drugbank_id, property: drugbank_id}
        properties:
          - {column: name, property: name, type: string}
          - {column: synonyms, property: synonyms, type: string_list, separator: "|"}
        index: [drugbank_id, name, synonyms]
        filter: {column: status, op: "=", value: approved}   # optional
    edges:
      - file: drug_gene.tsv
        delimiter: "\\t"
        type: INTERACTS_WITH_GENE
        src: {label: Drug, property: name, column: drug_name}
        dst: {label: Gene, property: gene_name, column: gene_name}
        properties:
          - {column: interaction_type, property: type, type: string}
        on_missing: skip          # skip | create | error
        filter: {column: score, op: ">=", value: 700}

Property types: string, int, float, bool, string_list (with separator).
Empty cells omit the property. Row filters support `=`, `>=` (numeric,
inclusive) and `contains`. Every endpoint lookup property must be indexed
by some node mapping.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import yaml

from ..errors import MappingError

PROPERTY_TYPES = ("string", "int", "float", "bool", "string_list")
FILTER_OPS = ("=", ">=", "contains")
MISSING_POLICIES = ("skip", "create", "error")


@dataclass(slots=True)
class PropertyColumn:
    column: str
    property: str
    type: str = "string"
    separator: str = "|"


@dataclass(slots=True)
class RowFilter:
    column: str
    op: str
    value: Any


@dataclass(slots=True)
class EndpointLookup:
    label: str
    property: str
    column: str


@dataclass(slots=True)
class NodeMapping:
    file: str
    delimiter: str
    label: str
    key_column: str
    key_property: str
    properties: List[PropertyColumn] = field(default_factory=list)
    index: List[str] = field(default_factory=list)
    filter: Optional[RowFilter] = None


@dataclass(slots=True)
class EdgeMapping:
    file: str
    delimiter: str
    etype: str
    src: EndpointLookup
    dst: EndpointLookup
    properties: List[PropertyColumn] = field(default_factory=list)
    on_missing: str = "skip"
    filter: Optional[RowFilter] = None


@dataclass(slots=True)
class MappingConfig:
    nodes: List[NodeMapping]
    edges: List[EdgeMapping]
    base_dir: str = "."

    def path_of(self, filename: str) -> str:
        return os.path.join(self.base_dir, filename)

    def indexed_properties(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {}
        for nm in self.nodes:
            bucket = out.setdefault(nm.label, [])
            for prop in nm.index:
                if prop not in bucket:
                    bucket.append(prop)
        return out


def _prop_columns(raw: Any, where: str) -> List[PropertyColumn]:
    out = []
    for entry in raw or []:
        ptype = entry.get("type", "string")
        if ptype not in PROPERTY_TYPES:
            raise MappingError(f"{where}: unknown property type {ptype!r}")
        out.append(
            PropertyColumn(
                column=entry["column"],
                property=entry.get("property", entry["column"]),
                type=ptype,
                separator=entry.get("separator", "|"),
            )
        )
    return out


def _row_filter(raw: Any, where: str) -> Optional[RowFilter]:
    if raw is None:
        return None
    op = raw.get("op")
    if op not in FILTER_OPS:
        raise MappingError(f"{where}: filter op must be one of {FILTER_OPS}, got {op!r}")
    return RowFilter(column=raw["column"], op=op, value=raw["value"])


def parse_mapping(doc: Dict[str, Any], base_dir: str = ".") -> MappingConfig:
    if not isinstance(doc, dict):
        raise MappingError("mapping config must be a YAML mapping")
    nodes = []
    for i, raw in enumerate(doc.get("nodes") or []):
        where = f"nodes[{i}]"
        try:
            key = raw["key"]
            nodes.append(
                NodeMapping(
                    file=raw["file"],
                    delimiter=raw.get("delimiter", ","),
                    label=raw["label"],
                    key_column=key["column"],
                    key_property=key.get("property", key["column"]),
                    properties=_prop_columns(raw.get("properties"), where),
                    index=list(raw.get("index") or []),
                    filter=_row_filter(raw.get("filter"), where),
                )
            )
        except KeyError as exc:
            raise MappingError(f"{where}: missing field {exc}") from None
    edges = []
    for i, raw in enumerate(doc.get("edges") or []):
        where = f"edges[{i}]"
        try:
            policy = raw.get("on_missing", "skip")
            if policy not in MISSING_POLICIES:
                raise MappingError(
                    f"{where}: on_missing must be one of {MISSING_POLICIES}, got {policy!r}"
                )
            edges.append(
                EdgeMapping(
                    file=raw["file"],
                    delimiter=raw.get("delimiter", ","),
                    etype=raw["type"],
                    src=EndpointLookup(**raw["src"]),
                    dst=EndpointLookup(**raw["dst"]),
                    properties=_prop_columns(raw.get("properties"), where),
                    on_missing=policy,
                    filter=_row_filter(raw.get("filter"), where),
                )
            )
        except KeyError as exc:
            raise MappingError(f"{where}: missing field {exc}") from None
    config = MappingConfig(nodes=nodes, edges=edges, base_dir=base_dir)
    _validate(config)
    return config


def _validate(config: MappingConfig) -> None:
    if not config.nodes and not config.edges:
        raise MappingError("mapping config declares no nodes and no edges")
    indexed = config.indexed_properties()
    for nm in config.nodes:
        if nm.key_property not in nm.index:
            raise MappingError(
                f"node mapping for {nm.label!r}: key property {nm.key_property!r} "
                "must be listed in its index"
            )
    for em in config.edges:
        for end, side in ((em.src, "src"), (em.dst, "dst")):
            if end.property not in indexed.get(end.label, ()):
                raise MappingError(
                    f"edge mapping {em.etype!r} {side}: lookup property "
                    f"{end.label}.{end.property} is not indexed by any node mapping"
                )


def load_mapping(path: str) -> MappingConfig:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    return parse_mapping(doc, base_dir=os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# Row iteration shared by both loaders
# ---------------------------------------------------------------------------

class RowFault(Exception):
    """A single malformed row (skippable unless strict)."""

    def __init__(self, filename: str, line: int, reason: str):
        super().__init__(f"{filename}:{line}: {reason}")
        self.filename = filename
        self.line = line
        self.reason = reason


def compile_filter(filter_: Optional[RowFilter], reader: "RowReader", filename: str):
    """Positional row-filter predicate, or None when the mapping has none.
    `>=` is numeric and inclusive; non-numeric cells raise RowFault."""
    if filter_ is None:
        return None
    pos = reader.pos(filter_.column)
    if filter_.op == "=":
        target = str(filter_.value)
        return lambda cells, line_no: cells[pos] == target
    if filter_.op == "contains":
        needle = str(filter_.value)
        return lambda cells, line_no: needle in cells[pos]
    threshold = float(filter_.value)

    def at_least(cells: List[str], line_no: int) -> bool:
        try:
            return float(cells[pos]) >= threshold
        except ValueError:
            raise RowFault(
                filename, line_no, f"filter column {filter_.column!r}: not numeric: {cells[pos]!r}"
            ) from None

    return at_least


def _convert(cell: str, spec: PropertyColumn, filename: str, line: int) -> Any:
    if spec.type == "string":
        return cell
    if spec.type == "int":
        try:
            return int(cell)
        except ValueError:
            raise RowFault(filename, line, f"column {spec.column!r}: not an integer: {cell!r}")
    if spec.type == "float":
        try:
            return float(cell)
        except ValueError:
            raise RowFault(filename, line, f"column {spec.column!r}: not a number: {cell!r}")
    if spec.type == "bool":
        low = cell.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise RowFault(filename, line, f"column {spec.column!r}: not a boolean: {cell!r}")
    # string_list
    return [el for el in cell.split(spec.separator) if el]


class RowReader:
    """Positional access over a delimited file with a header row.

    ``pos(column)`` resolves a column index once; iteration yields
    (line_no, cells) with wrong-width rows delivered as RowFault values
    (the caller decides whether to skip or abort). Raises MappingError
    when a declared column is absent from the header.
    """

    def __init__(self, path: str, delimiter: str, columns: List[str]):
        self.filename = os.path.basename(path)
        if not os.path.exists(path):
            raise MappingError(f"source file missing: {path}")
        self._fh = open(path, "r", encoding="utf-8", newline="")
        self._reader = csv.reader(self._fh, delimiter=delimiter)
        try:
            header = next(self._reader)
        except StopIteration:
            self._fh.close()
            raise MappingError(f"{self.filename}: empty file (no header)") from None
        self._positions = {name: i for i, name in enumerate(header)}
        for col in columns:
            if col not in self._positions:
                self._fh.close()
                raise MappingError(
                    f"{self.filename}: column {col!r} not in header {header}"
                )
        self._width = len(header)

    def pos(self, column: str) -> int:
        return self._positions[column]

    def __iter__(self):
        width = self._width
        filename = self.filename
        try:
            for line_no, cells in enumerate(self._reader, start=2):
                if len(cells) != width:
                    yield line_no, RowFault(
                        filename, line_no, f"expected {width} cells, found {len(cells)}"
                    )
                    continue
                yield line_no, cells
        finally:
            self._fh.close()


def property_plan(
    specs: List[PropertyColumn], reader: "RowReader"
) -> List[Tuple[int, str, str, PropertyColumn]]:
    """Pre-resolved (cell position, property name, type, spec) tuples."""
    return [(reader.pos(s.column), s.property, s.type, s) for s in specs]
