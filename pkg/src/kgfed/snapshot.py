"""Portable tenant snapshots: gzip streams of UTF-8 JSON lines.

Layout (one record per ``\\n``-terminated line):

    line 1: {"t":"h","v":1,"tenant":"<name>","nodes":N,"edges":M,"exported_at":"<ISO8601Z>"}
    node:   {"t":"n","id":<uint>,"l":["Label",...],"p":{"k":<value>,...}}
    edge:   {"t":"e","id":<uint>,"s":<src-old-id>,"d":<dst-old-id>,"y":"TYPE","p":{...}}

All node records precede all edge records. Property keys inside "p" are
serialized in lexicographic order and the gzip mtime is pinned to 0, so
exporting the same tenant twice is byte-identical except for the
``exported_at`` header field.

Import appends: every snapshot node receives a fresh tenant id and edges
are remapped through the old->new map, so importing a snapshot twice
yields two disjoint copies. Ids found in the file are never trusted as
final ids. Memory during import is bounded by the id map, not file size.
"""

from __future__ import annotations

import gc
import gzip
import io
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, BinaryIO, Dict, Iterable, List, Optional, Tuple

from .errors import PropertyValueError, SnapshotFormatError
from .store import Tenant, validate_properties

FORMAT_VERSION = 1
GZIP_LEVEL = 6


@dataclass(slots=True)
class SnapshotHeader:
    version: int
    tenant: str
    nodes: int
    edges: int
    exported_at: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "tenant": self.tenant,
            "nodes": self.nodes,
            "edges": self.edges,
            "exported_at": self.exported_at,
        }


@dataclass(slots=True)
class ImportStats:
    nodes_imported: int
    edges_imported: int
    id_map_size: int
    duration_ms: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes_imported": self.nodes_imported,
            "edges_imported": self.edges_imported,
            "id_map_size": self.id_map_size,
            "duration_ms": self.duration_ms,
        }


@dataclass(slots=True)
class Fault:
    line: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}@line {self.line}: {self.message}"


@dataclass(slots=True)
class ValidationReport:
    faults: List[Fault]

    @property
    def ok(self) -> bool:
        return not self.faults


@contextmanager
def bulk_gc_relief():
    """Keep generational GC from re-scanning the whole resident heap while
    a bulk ingest allocates millions of small objects. Freeze/unfreeze does
    not nest; bulk paths are not reentrant."""
    gc.freeze()
    try:
        yield
    finally:
        gc.unfreeze()


def default_index_policy(prop_keys: Iterable[str]) -> List[str]:
    """Index policy used when an import carries no explicit config:
    identifier-style keys plus display name and synonym list."""
    return [
        k
        for k in sorted(prop_keys)
        if k.endswith("_id") or k.endswith("_name") or k in ("name", "synonyms")
    ]


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace(
        "+00:00", "Z"
    )


def export_snapshot(tenant: Tenant, sink: BinaryIO) -> SnapshotHeader:
    """Stream the tenant to ``sink`` as a snapshot; returns the header written.

    Holds the tenant read lock for the duration. Records are ordered by id,
    nodes first, so repeated exports are deterministic.
    """
    dumps = json.dumps
    with tenant.lock.read():
        header = SnapshotHeader(
            version=FORMAT_VERSION,
            tenant=tenant.name,
            nodes=tenant.node_count,
            edges=tenant.edge_count,
            exported_at=_utc_now_iso(),
        )
        # mtime pinned for byte-stable output across exports
        with gzip.GzipFile(
            fileobj=sink, mode="wb", compresslevel=GZIP_LEVEL, mtime=0
        ) as gz:
            head = {
                "t": "h",
                "v": header.version,
                "tenant": header.tenant,
                "nodes": header.nodes,
                "edges": header.edges,
                "exported_at": header.exported_at,
            }
            gz.write(dumps(head, ensure_ascii=False, separators=(",", ":")).encode())
            gz.write(b"\n")
            for nid in tenant.node_ids():
                node = tenant.get_node(nid)
                rec = {
                    "t": "n",
                    "id": node.id,
                    "l": list(node.labels),
                    "p": {k: node.properties[k] for k in sorted(node.properties)},
                }
                gz.write(
                    dumps(rec, ensure_ascii=False, separators=(",", ":")).encode()
                )
                gz.write(b"\n")
            for eid in tenant.edge_ids():
                edge = tenant.get_edge(eid)
                rec = {
                    "t": "e",
                    "id": edge.id,
                    "s": edge.src,
                    "d": edge.dst,
                    "y": edge.etype,
                    "p": {k: edge.properties[k] for k in sorted(edge.properties)},
                }
                gz.write(
                    dumps(rec, ensure_ascii=False, separators=(",", ":")).encode()
                )
                gz.write(b"\n")
    return header


# ---------------------------------------------------------------------------
# Record decoding (shared by import and validate)
# ---------------------------------------------------------------------------

def _is_uint(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def _decode_line(raw: str, line_no: int) -> Tuple[str, Dict[str, Any]]:
    try:
        obj = json.loads(raw)
    except ValueError as exc:
        raise SnapshotFormatError(f"invalid JSON: {exc}", line_no) from None
    if not isinstance(obj, dict):
        raise SnapshotFormatError("record is not a JSON object", line_no)
    kind = obj.get("t")
    if kind == "h":
        if obj.get("v") != FORMAT_VERSION:
            raise SnapshotFormatError(
                f"unsupported format version {obj.get('v')!r}",
                line_no,
                fault="unsupported-version",
            )
        if not isinstance(obj.get("tenant"), str):
            raise SnapshotFormatError("header missing tenant name", line_no)
        if not (_is_uint(obj.get("nodes")) and _is_uint(obj.get("edges"))):
            raise SnapshotFormatError("header counts must be non-negative", line_no)
        if not isinstance(obj.get("exported_at"), str):
            raise SnapshotFormatError("header missing exported_at", line_no)
        return "h", obj
    if kind == "n":
        if not _is_uint(obj.get("id")):
            raise SnapshotFormatError("node record needs a non-negative id", line_no)
        labels = obj.get("l")
        if (
            not isinstance(labels, list)
            or not labels
            or any(not isinstance(x, str) or not x for x in labels)
        ):
            raise SnapshotFormatError("node labels must be non-empty strings", line_no)
        props = obj.get("p")
        if not isinstance(props, dict):
            raise SnapshotFormatError("node record needs a property object", line_no)
        try:
            validate_properties(props)
        except PropertyValueError as exc:
            raise SnapshotFormatError(str(exc), line_no) from None
        return "n", obj
    if kind == "e":
        if not _is_uint(obj.get("id")):
            raise SnapshotFormatError("edge record needs a non-negative id", line_no)
        if not (_is_uint(obj.get("s")) and _is_uint(obj.get("d"))):
            raise SnapshotFormatError("edge endpoints must be node ids", line_no)
        if not isinstance(obj.get("y"), str) or not obj["y"]:
            raise SnapshotFormatError("edge record needs a type", line_no)
        props = obj.get("p")
        if not isinstance(props, dict):
            raise SnapshotFormatError("edge record needs a property object", line_no)
        try:
            validate_properties(props)
        except PropertyValueError as exc:
            raise SnapshotFormatError(str(exc), line_no) from None
        return "e", obj
    raise SnapshotFormatError(f"unknown record type {kind!r}", line_no)


def _open_stream(source: BinaryIO) -> io.TextIOWrapper:
    gz = gzip.GzipFile(fileobj=source, mode="rb")
    return io.TextIOWrapper(gz, encoding="utf-8")


def _scan(source: BinaryIO):
    """Yield (line_no, kind, record) over a snapshot stream, checking
    structural rules; raises SnapshotFormatError on the first fault."""
    header: Optional[Dict[str, Any]] = None
    nodes_seen = 0
    edges_seen = 0
    seen_ids: Dict[int, bool] = {}
    line_no = 0
    try:
        stream = _open_stream(source)
        for line_no, raw in enumerate(stream, start=1):
            raw = raw.rstrip("\n")
            if not raw:
                raise SnapshotFormatError("blank line", line_no)
            kind, obj = _decode_line(raw, line_no)
            if line_no == 1:
                if kind != "h":
                    raise SnapshotFormatError(
                        "first record must be the header", line_no
                    )
                header = obj
                yield line_no, kind, obj
                continue
            if kind == "h":
                raise SnapshotFormatError("unexpected second header", line_no)
            if header is None:
                raise SnapshotFormatError("records before header", line_no)
            if kind == "n":
                if edges_seen:
                    raise SnapshotFormatError(
                        "node record after edge records",
                        line_no,
                        fault="edge-before-nodes",
                    )
                if obj["id"] in seen_ids:
                    raise SnapshotFormatError(
                        f"duplicate node id {obj['id']}", line_no
                    )
                seen_ids[obj["id"]] = True
                nodes_seen += 1
            else:
                for end in (obj["s"], obj["d"]):
                    if end not in seen_ids:
                        raise SnapshotFormatError(
                            f"edge references unknown node id {end}",
                            line_no,
                            fault="dangling-edge-reference",
                        )
                edges_seen += 1
            yield line_no, kind, obj
    except (OSError, EOFError, UnicodeDecodeError) as exc:
        raise SnapshotFormatError(f"not a readable gzip stream: {exc}", line_no) from None
    if header is None:
        raise SnapshotFormatError("empty snapshot: header missing", 0)
    if nodes_seen != header["nodes"] or edges_seen != header["edges"]:
        raise SnapshotFormatError(
            "header declares %d nodes/%d edges, found %d/%d"
            % (header["nodes"], header["edges"], nodes_seen, edges_seen),
            line_no,
            fault="header-count-mismatch",
        )


# ---------------------------------------------------------------------------
# Import / validate
# ---------------------------------------------------------------------------

def import_snapshot(
    tenant: Tenant,
    source: BinaryIO,
    index_config: Optional[Dict[str, List[str]]] = None,
) -> ImportStats:
    """Append a snapshot into ``tenant`` under its exclusive write lock.

    Every imported node gets a new tenant id; edges follow through the
    old->new map. ``index_config`` maps label -> properties to index; when
    absent, :func:`default_index_policy` applies per node. Seekable sources
    are structurally validated in a first pass so a malformed file does not
    leave a partial append.
    """
    validated = False
    if source.seekable():
        report = validate_snapshot(source)
        if not report.ok:
            first = report.faults[0]
            raise SnapshotFormatError(first.message, first.line, fault=first.code)
        source.seek(0)
        validated = True
    started = time.perf_counter()
    id_map: Dict[int, int] = {}
    nodes_imported = 0
    edges_imported = 0
    policy_cache: Dict[Tuple[str, ...], List[str]] = {}

    def indexed_for(labels: List[str], props: Dict[str, Any]) -> Iterable[str]:
        if index_config is not None:
            return [p for label in labels for p in index_config.get(label, ())]
        shape = tuple(props)
        cached = policy_cache.get(shape)
        if cached is None:
            cached = default_index_policy(props)
            policy_cache[shape] = cached
        return cached

    with tenant.lock.write(), bulk_gc_relief():
        if validated:
            # structure and values already checked: decode leanly and hand
            # record ownership straight to the store on the second pass
            loads = json.loads
            create_node = tenant._create_node
            create_edge = tenant._create_edge
            stream = _open_stream(source)
            stream.readline()  # header
            for raw in stream:
                obj = loads(raw)
                if obj["t"] == "n":
                    labels = obj["l"]
                    props = obj["p"]
                    id_map[obj["id"]] = create_node(
                        labels, props, indexed_for(labels, props), trusted=True
                    )
                    nodes_imported += 1
                else:
                    create_edge(
                        id_map[obj["s"]], id_map[obj["d"]], obj["y"], obj["p"],
                        trusted=True,
                    )
                    edges_imported += 1
        else:
            for _line_no, kind, obj in _scan(source):
                if kind == "n":
                    labels = obj["l"]
                    props = obj["p"]
                    id_map[obj["id"]] = tenant._create_node(
                        labels, props, indexed_for(labels, props)
                    )
                    nodes_imported += 1
                elif kind == "e":
                    tenant._create_edge(
                        id_map[obj["s"]], id_map[obj["d"]], obj["y"], obj["p"]
                    )
                    edges_imported += 1
    duration_ms = (time.perf_counter() - started) * 1000.0
    return ImportStats(nodes_imported, edges_imported, len(id_map), duration_ms)


def validate_snapshot(source: BinaryIO) -> ValidationReport:
    """Read-only structural check that reports every fault it can reach.

    Faults that make further reading meaningless (broken gzip framing,
    missing header) terminate the scan; record-level faults are collected
    and the scan continues.
    """
    faults: List[Fault] = []
    header: Optional[Dict[str, Any]] = None
    nodes_seen = 0
    edges_seen = 0
    seen_ids: Dict[int, bool] = {}
    line_no = 0
    try:
        stream = _open_stream(source)
        for line_no, raw in enumerate(stream, start=1):
            raw = raw.rstrip("\n")
            try:
                if not raw:
                    raise SnapshotFormatError("blank line", line_no)
                kind, obj = _decode_line(raw, line_no)
            except SnapshotFormatError as exc:
                faults.append(Fault(exc.line, exc.fault, str(exc)))
                continue
            if kind == "h":
                if line_no != 1 or header is not None:
                    faults.append(
                        Fault(line_no, "malformed-record", "unexpected header record")
                    )
                else:
                    header = obj
                continue
            if header is None and line_no == 1:
                faults.append(
                    Fault(line_no, "malformed-record", "first record must be the header")
                )
            if kind == "n":
                if edges_seen:
                    faults.append(
                        Fault(line_no, "edge-before-nodes", "node record after edge records")
                    )
                if obj["id"] in seen_ids:
                    faults.append(
                        Fault(line_no, "malformed-record", f"duplicate node id {obj['id']}")
                    )
                seen_ids[obj["id"]] = True
                nodes_seen += 1
            else:
                for end in (obj["s"], obj["d"]):
                    if end not in seen_ids:
                        faults.append(
                            Fault(
                                line_no,
                                "dangling-edge-reference",
                                f"edge references unknown node id {end}",
                            )
                        )
                edges_seen += 1
    except (OSError, EOFError, UnicodeDecodeError) as exc:
        faults.append(Fault(line_no, "malformed-snapshot", f"not a readable gzip stream: {exc}"))
        return ValidationReport(faults)
    if header is None:
        faults.append(Fault(0, "malformed-snapshot", "header missing"))
    elif nodes_seen != header["nodes"] or edges_seen != header["edges"]:
        faults.append(
            Fault(
                line_no,
                "header-count-mismatch",
                "header declares %d nodes/%d edges, found %d/%d"
                % (header["nodes"], header["edges"], nodes_seen, edges_seen),
            )
        )
    return ValidationReport(faults)


def read_header(source: BinaryIO) -> SnapshotHeader:
    """Decode just the header line of a snapshot."""
    stream = _open_stream(source)
    raw = stream.readline().rstrip("\n")
    if not raw:
        raise SnapshotFormatError("empty snapshot: header missing", 0)
    kind, obj = _decode_line(raw, 1)
    if kind != "h":
        raise SnapshotFormatError("first record must be the header", 1)
    return SnapshotHeader(
        version=obj["v"],
        tenant=obj["tenant"],
        nodes=obj["nodes"],
        edges=obj["edges"],
        exported_at=obj["exported_at"],
    )
