"""Native bulk loader: mapping-driven ingestion through direct store calls.

No query-language involvement anywhere on this path. The whole load runs
under the tenant's write lock: node mappings first (deduplicated through
the registry), then edge mappings with endpoint lookups against the
property indexes declared by the node mappings.

Malformed rows are skipped and counted unless ``strict`` is set, in which
case the load aborts on the first fault. Endpoint lookups that return
several nodes create one edge per (src, dst) pair, mirroring what a
MATCH + CREATE statement would do.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ..errors import LoadError
from ..snapshot import bulk_gc_relief
from ..store import Tenant
from .mapping import (
    EdgeMapping,
    MappingConfig,
    NodeMapping,
    RowFault,
    RowReader,
    _convert,
    compile_filter,
    property_plan,
)
from .registry import DedupRegistry

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class FileStats:
    nodes_created: int = 0
    nodes_deduped: int = 0
    edges_created: int = 0
    rows_filtered: int = 0
    rows_malformed: int = 0
    endpoints_missing: int = 0

    def to_dict(self) -> Dict[str, int]:
        return {
            "nodes_created": self.nodes_created,
            "nodes_deduped": self.nodes_deduped,
            "edges_created": self.edges_created,
            "rows_filtered": self.rows_filtered,
            "rows_malformed": self.rows_malformed,
            "endpoints_missing": self.endpoints_missing,
        }


@dataclass(slots=True)
class LoadStats:
    nodes_created: int = 0
    nodes_deduped: int = 0
    edges_created: int = 0
    rows_skipped: int = 0
    duration_ms: float = 0.0
    files: Dict[str, FileStats] = field(default_factory=dict)
    requests: int = 0  # HTTP loader only

    def file(self, name: str) -> FileStats:
        stats = self.files.get(name)
        if stats is None:
            stats = FileStats()
            self.files[name] = stats
        return stats

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes_created": self.nodes_created,
            "nodes_deduped": self.nodes_deduped,
            "edges_created": self.edges_created,
            "rows_skipped": self.rows_skipped,
            "duration_ms": self.duration_ms,
            "requests": self.requests,
            "files": {k: v.to_dict() for k, v in self.files.items()},
        }


def _fault(stats: LoadStats, fstats: FileStats, fault: RowFault, strict: bool) -> None:
    if strict:
        raise LoadError(str(fault))
    logger.debug("skipping malformed row: %s", fault)
    fstats.rows_malformed += 1
    stats.rows_skipped += 1


def load_native(
    tenant: Tenant,
    mapping: MappingConfig,
    registry: Optional[DedupRegistry] = None,
    strict: bool = False,
) -> LoadStats:
    registry = registry if registry is not None else DedupRegistry()
    stats = LoadStats()
    started = time.perf_counter()
    with tenant.lock.write(), bulk_gc_relief():
        for nm in mapping.nodes:
            _load_nodes(tenant, nm, mapping, registry, stats, strict)
        for em in mapping.edges:
            _load_edges(tenant, em, mapping, registry, stats, strict)
    stats.duration_ms = (time.perf_counter() - started) * 1000.0
    return stats


def _node_columns(nm: NodeMapping) -> list:
    columns = [nm.key_column] + [p.column for p in nm.properties]
    if nm.filter is not None:
        columns.append(nm.filter.column)
    return columns


def _edge_columns(em: EdgeMapping) -> list:
    columns = [em.src.column, em.dst.column] + [p.column for p in em.properties]
    if em.filter is not None:
        columns.append(em.filter.column)
    return columns


def _load_nodes(
    tenant: Tenant,
    nm: NodeMapping,
    mapping: MappingConfig,
    registry: DedupRegistry,
    stats: LoadStats,
    strict: bool,
) -> None:
    for prop in nm.index:
        tenant._declare_index(nm.label, prop)
    fstats = stats.file(nm.file)
    reader = RowReader(mapping.path_of(nm.file), nm.delimiter, _node_columns(nm))
    key_pos = reader.pos(nm.key_column)
    plan = property_plan(nm.properties, reader)
    passes = compile_filter(nm.filter, reader, nm.file)
    get_or_create = registry.get_or_create
    label, key_property = nm.label, nm.key_property
    for line_no, cells in reader:
        if isinstance(cells, RowFault):
            _fault(stats, fstats, cells, strict)
            continue
        try:
            if passes is not None and not passes(cells, line_no):
                fstats.rows_filtered += 1
                stats.rows_skipped += 1
                continue
            key_value = cells[key_pos]
            if not key_value:
                raise RowFault(nm.file, line_no, f"empty key column {nm.key_column!r}")
            props: Dict[str, Any] = {key_property: key_value}
            for pos, pname, ptype, spec in plan:
                cell = cells[pos]
                if cell == "":
                    continue  # empty cell: property omitted
                props[pname] = cell if ptype == "string" else _convert(cell, spec, nm.file, line_no)
        except RowFault as fault:
            _fault(stats, fstats, fault, strict)
            continue
        _, created = get_or_create(tenant, label, key_property, key_value, props)
        if created:
            stats.nodes_created += 1
            fstats.nodes_created += 1
        else:
            stats.nodes_deduped += 1
            fstats.nodes_deduped += 1


def _load_edges(
    tenant: Tenant,
    em: EdgeMapping,
    mapping: MappingConfig,
    registry: DedupRegistry,
    stats: LoadStats,
    strict: bool,
) -> None:
    fstats = stats.file(em.file)
    reader = RowReader(mapping.path_of(em.file), em.delimiter, _edge_columns(em))
    src_pos, dst_pos = reader.pos(em.src.column), reader.pos(em.dst.column)
    plan = property_plan(em.properties, reader)
    passes = compile_filter(em.filter, reader, em.file)
    lookup = tenant._lookup_ids
    create_edge = tenant._create_edge
    src_label, src_prop = em.src.label, em.src.property
    dst_label, dst_prop = em.dst.label, em.dst.property
    etype = em.etype
    for line_no, cells in reader:
        if isinstance(cells, RowFault):
            _fault(stats, fstats, cells, strict)
            continue
        try:
            if passes is not None and not passes(cells, line_no):
                fstats.rows_filtered += 1
                stats.rows_skipped += 1
                continue
            props: Dict[str, Any] = {}
            for pos, pname, ptype, spec in plan:
                cell = cells[pos]
                if cell == "":
                    continue
                props[pname] = cell if ptype == "string" else _convert(cell, spec, em.file, line_no)
        except RowFault as fault:
            _fault(stats, fstats, fault, strict)
            continue
        src_ids = lookup(src_label, src_prop, cells[src_pos])
        if not src_ids:
            src_ids = _handle_missing(
                tenant, registry, em, em.src, cells[src_pos], stats, fstats, line_no, strict
            )
            if src_ids is None:
                continue
        dst_ids = lookup(dst_label, dst_prop, cells[dst_pos])
        if not dst_ids:
            dst_ids = _handle_missing(
                tenant, registry, em, em.dst, cells[dst_pos], stats, fstats, line_no, strict
            )
            if dst_ids is None:
                continue
        if len(src_ids) == 1 and len(dst_ids) == 1:
            create_edge(src_ids[0], dst_ids[0], etype, props)
            stats.edges_created += 1
            fstats.edges_created += 1
        else:
            for src in sorted(src_ids):
                for dst in sorted(dst_ids):
                    create_edge(src, dst, etype, props)
                    stats.edges_created += 1
                    fstats.edges_created += 1


def _handle_missing(tenant, registry, em, end, value, stats, fstats, line_no, strict):
    if em.on_missing == "create":
        if not value:
            _fault(
                stats,
                fstats,
                RowFault(em.file, line_no, f"empty lookup column {end.column!r}"),
                strict,
            )
            return None
        nid, created = registry.get_or_create(
            tenant, end.label, end.property, value, {end.property: value}
        )
        if created:
            stats.nodes_created += 1
            fstats.nodes_created += 1
        return [nid]
    if em.on_missing == "error":
        raise LoadError(
            f"{em.file}:{line_no}: no {end.label} node with {end.property}={value!r}"
        )
    fstats.endpoints_missing += 1
    stats.rows_skipped += 1
    return None
