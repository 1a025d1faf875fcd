"""Batched loader over the HTTP query API.

Nodes go in as multi-CREATE statements, ``batch_size`` entities per
request, every value bound as a query parameter (never spliced into the
statement text). Deduplication happens client-side through the registry's
key tracking; index declarations from the mapping are pushed to the server
before the data so edge creation runs as MATCH-by-indexed-key + CREATE.

Edges are grouped the same way; a MATCH miss anywhere makes a whole
statement create nothing (cartesian semantics), in which case the loader
falls back to replaying that batch one edge per request, applying the
mapping's on-missing-endpoint policy. A partial or inflated creation count
means an endpoint key matched several nodes; the load aborts, reporting
the batch index, because an append-only server cannot roll the batch back.

Property and label names from the mapping are emitted into statement text
and therefore must be identifier-shaped; values never are.
"""

from __future__ import annotations

import logging
import time
from typing import Any, Dict, List, Optional, Tuple

import httpx

from ..errors import LoadError
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
from .native_loader import LoadStats, _edge_columns, _fault, _node_columns
from .registry import DedupRegistry

logger = logging.getLogger(__name__)

DEFAULT_BATCH = 100


class _Endpoint:
    def __init__(self, base_url: str, tenant: str, client: Optional[httpx.Client] = None):
        self.base_url = base_url.rstrip("/")
        self.tenant = tenant
        self.client = client or httpx.Client(timeout=60.0)

    def query(self, text: str, params: Dict[str, Any], batch_index: int) -> Tuple[int, int]:
        try:
            resp = self.client.post(
                f"{self.base_url}/api/query",
                json={"tenant": self.tenant, "query": text, "params": params},
            )
        except httpx.HTTPError as exc:
            raise LoadError(f"endpoint unreachable: {exc}") from None
        if resp.status_code != 200:
            raise LoadError(
                f"server rejected batch {batch_index}: "
                f"HTTP {resp.status_code}: {resp.text[:300]}"
            )
        rows = resp.json().get("rows") or [[0, 0]]
        return rows[0][0], rows[0][1]

    def declare_indexes(self, label: str, properties: List[str]) -> None:
        try:
            resp = self.client.post(
                f"{self.base_url}/api/schema/index",
                json={"tenant": self.tenant, "label": label, "properties": properties},
            )
        except httpx.HTTPError as exc:
            raise LoadError(f"endpoint unreachable: {exc}") from None
        if resp.status_code != 200:
            raise LoadError(f"index declaration failed: HTTP {resp.status_code}")


def load_cypher(
    endpoint: str,
    mapping: MappingConfig,
    registry: Optional[DedupRegistry] = None,
    batch_size: int = DEFAULT_BATCH,
    tenant: str = "default",
    strict: bool = False,
    client: Optional[httpx.Client] = None,
) -> LoadStats:
    if not (1 <= batch_size <= 1000):
        raise LoadError(f"batch_size must be in [1, 1000], got {batch_size}")
    registry = registry if registry is not None else DedupRegistry()
    api = _Endpoint(endpoint, tenant, client)
    stats = LoadStats()
    started = time.perf_counter()
    for nm in mapping.nodes:
        _load_nodes(api, nm, mapping, registry, stats, batch_size, strict)
    for em in mapping.edges:
        _load_edges(api, em, mapping, stats, batch_size, strict)
    stats.duration_ms = (time.perf_counter() - started) * 1000.0
    return stats


def _load_nodes(api, nm: NodeMapping, mapping, registry, stats, batch_size, strict) -> None:
    if nm.index:
        api.declare_indexes(nm.label, list(nm.index))
    fstats = stats.file(nm.file)
    reader = RowReader(mapping.path_of(nm.file), nm.delimiter, _node_columns(nm))
    key_pos = reader.pos(nm.key_column)
    plan = property_plan(nm.properties, reader)
    passes = compile_filter(nm.filter, reader, nm.file)
    batch: List[Dict[str, Any]] = []
    batch_index = 0

    def flush() -> None:
        nonlocal batch_index
        if not batch:
            return
        parts = []
        params: Dict[str, Any] = {}
        for i, props in enumerate(batch):
            bindings = []
            for j, (key, value) in enumerate(props.items()):
                pname = f"n{i}_{j}"
                params[pname] = value
                bindings.append(f"{key}: ${pname}")
            parts.append("(:%s {%s})" % (nm.label, ", ".join(bindings)))
        created, _ = api.query("CREATE " + ", ".join(parts), params, batch_index)
        if created != len(batch):
            raise LoadError(
                f"server created {created} of {len(batch)} nodes in batch {batch_index}"
            )
        stats.nodes_created += created
        fstats.nodes_created += created
        stats.requests += 1
        batch_index += 1
        batch.clear()

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
            props: Dict[str, Any] = {nm.key_property: key_value}
            for pos, pname, ptype, spec in plan:
                cell = cells[pos]
                if cell == "":
                    continue
                props[pname] = cell if ptype == "string" else _convert(cell, spec, nm.file, line_no)
        except RowFault as fault:
            _fault(stats, fstats, fault, strict)
            continue
        if registry.contains(nm.label, nm.key_property, key_value):
            stats.nodes_deduped += 1
            fstats.nodes_deduped += 1
            continue
        registry.register(nm.label, nm.key_property, key_value)
        batch.append(props)
        if len(batch) >= batch_size:
            flush()
    flush()


def _load_edges(api, em: EdgeMapping, mapping, stats, batch_size, strict) -> None:
    fstats = stats.file(em.file)
    reader = RowReader(mapping.path_of(em.file), em.delimiter, _edge_columns(em))
    src_pos, dst_pos = reader.pos(em.src.column), reader.pos(em.dst.column)
    plan = property_plan(em.properties, reader)
    passes = compile_filter(em.filter, reader, em.file)
    batch: List[Tuple[str, str, Dict[str, Any]]] = []  # (src value, dst value, props)
    batch_index = 0

    def replay(edges: List[Tuple[str, str, Dict[str, Any]]], index: int) -> int:
        """One MATCH+CREATE per edge; applies the on-missing policy."""
        created_total = 0
        for src_value, dst_value, props in edges:
            text, params = _edge_statement([(src_value, dst_value, props)], em)
            _, created = api.query(text, params, index)
            stats.requests += 1
            if created >= 1:
                created_total += created
                continue
            if em.on_missing == "error":
                raise LoadError(
                    f"{em.file}: no match for {em.src.label}.{em.src.property}="
                    f"{src_value!r} -> {em.dst.label}.{em.dst.property}={dst_value!r}"
                )
            if em.on_missing == "skip":
                fstats.endpoints_missing += 1
                stats.rows_skipped += 1
                continue
            # create: fill in whichever endpoint is missing, then retry
            for end, value in ((em.src, src_value), (em.dst, dst_value)):
                count_q = f"MATCH (n:{end.label} {{{end.property}: $v}}) RETURN count(*)"
                resp = api.client.post(
                    f"{api.base_url}/api/query",
                    json={"tenant": api.tenant, "query": count_q, "params": {"v": value}},
                )
                stats.requests += 1
                if resp.status_code != 200:
                    raise LoadError(f"endpoint lookup failed: HTTP {resp.status_code}")
                if resp.json()["rows"][0][0] == 0:
                    create_q = f"CREATE (:{end.label} {{{end.property}: $v}})"
                    api.query(create_q, {"v": value}, index)
                    stats.requests += 1
                    stats.nodes_created += 1
                    fstats.nodes_created += 1
            text, params = _edge_statement([(src_value, dst_value, props)], em)
            _, created = api.query(text, params, index)
            stats.requests += 1
            if created < 1:
                raise LoadError(f"edge creation failed after endpoint fill in batch {index}")
            created_total += created
        return created_total

    def flush() -> None:
        nonlocal batch_index
        if not batch:
            return
        text, params = _edge_statement(batch, em)
        _, created = api.query(text, params, batch_index)
        stats.requests += 1
        if created == len(batch):
            stats.edges_created += created
            fstats.edges_created += created
        elif created == 0:
            made = replay(list(batch), batch_index)
            stats.edges_created += made
            fstats.edges_created += made
        else:
            # partial or multiplied counts mean ambiguous endpoint keys;
            # append-only semantics make that unrecoverable mid-load
            raise LoadError(
                f"server created {created} of {len(batch)} edges in batch "
                f"{batch_index}; ambiguous endpoint keys"
            )
        batch_index += 1
        batch.clear()

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
        batch.append((cells[src_pos], cells[dst_pos], props))
        if len(batch) >= batch_size:
            flush()
    flush()


def _edge_statement(
    edges: List[Tuple[str, str, Dict[str, Any]]], em: EdgeMapping
) -> Tuple[str, Dict[str, Any]]:
    matches = []
    creates = []
    params: Dict[str, Any] = {}
    for i, (src_value, dst_value, props) in enumerate(edges):
        params[f"s{i}"] = src_value
        params[f"d{i}"] = dst_value
        matches.append(f"(a{i}:{em.src.label} {{{em.src.property}: $s{i}}})")
        matches.append(f"(b{i}:{em.dst.label} {{{em.dst.property}: $d{i}}})")
        bindings = []
        for j, (key, value) in enumerate(props.items()):
            pname = f"e{i}_{j}"
            params[pname] = value
            bindings.append(f"{key}: ${pname}")
        prop_txt = " {%s}" % ", ".join(bindings) if bindings else ""
        creates.append(f"(a{i})-[:{em.etype}{prop_txt}]->(b{i})")
    text = "MATCH " + ", ".join(matches) + " CREATE " + ", ".join(creates)
    return text, params
