"""In-memory multi-tenant property-graph storage.

Each tenant owns its nodes, edges, adjacency lists, a label index, and
exact-match property indexes, plus live schema statistics. Supported
property values: str, int (64-bit signed), float (finite), bool, and
lists of non-empty strings. String-list properties are indexed one entry
per element so that any element can be used for exact lookup.

Concurrency: per tenant, many concurrent readers or one exclusive writer.
The writer thread may re-enter its own lock, so bulk paths can hold the
write lock once and call the underscored internals directly.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

from .errors import (
    DuplicateTenantError,
    PropertyValueError,
    UnknownEndpointError,
    UnknownNodeError,
    UnknownTenantError,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


# ---------------------------------------------------------------------------
# Property values
# ---------------------------------------------------------------------------

def validate_property_value(key: str, value: Any) -> None:
    """Reject values outside the five supported property types."""
    if isinstance(value, str):
        return
    if isinstance(value, bool):  # must precede int: bool is an int subclass
        return
    if isinstance(value, int):
        if not (INT64_MIN <= value <= INT64_MAX):
            raise PropertyValueError(f"property {key!r}: integer out of 64-bit range")
        return
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise PropertyValueError(f"property {key!r}: non-finite float")
        return
    if isinstance(value, list):
        for el in value:
            if not isinstance(el, str) or not el:
                raise PropertyValueError(
                    f"property {key!r}: list elements must be non-empty strings"
                )
        return
    raise PropertyValueError(
        f"property {key!r}: unsupported type {type(value).__name__}"
    )


def validate_properties(properties: Dict[str, Any]) -> None:
    for key, value in properties.items():
        if not isinstance(key, str) or not key:
            raise PropertyValueError("property names must be non-empty strings")
        validate_property_value(key, value)


def values_equal(a: Any, b: Any) -> bool:
    """Equality under the property type system.

    Integers and floats compare numerically; bool never equals a number;
    no other cross-type equality. Lists compare elementwise.
    """
    a_bool, b_bool = isinstance(a, bool), isinstance(b, bool)
    if a_bool or b_bool:
        return a_bool and b_bool and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    return False


def property_matches(stored: Any, query: Any) -> bool:
    """Match rule for lookups: when exactly one side is a string-list, any
    element may equal the other side (symmetric, like `=` in queries);
    list-to-list comparison stays exact."""
    if isinstance(stored, list) and not isinstance(query, list):
        return any(values_equal(el, query) for el in stored)
    if isinstance(query, list) and not isinstance(stored, list):
        return any(values_equal(el, stored) for el in query)
    return values_equal(stored, query)


def _index_key(value: Any) -> Tuple[str, Any]:
    # Tagged so bool entries never collide with int/float entries
    # (hash(True) == hash(1)); int and float deliberately share a slot
    # because `=` compares them numerically.
    if isinstance(value, bool):
        return ("b", value)
    if isinstance(value, str):
        return ("s", value)
    return ("n", value)


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class Node:
    id: int
    labels: Tuple[str, ...]  # sorted, at least one
    properties: Dict[str, Any]


@dataclass(slots=True)
class Edge:
    id: int
    src: int
    dst: int
    etype: str
    properties: Dict[str, Any]


@dataclass(slots=True)
class LabelStats:
    name: str
    count: int
    properties: List[str]
    indexed: List[str]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "count": self.count,
            "properties": self.properties,
            "indexed": self.indexed,
        }


@dataclass(slots=True)
class EdgeTypeStats:
    name: str
    count: int
    src_label: Optional[str]
    dst_label: Optional[str]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "count": self.count,
            "src_label": self.src_label,
            "dst_label": self.dst_label,
        }


@dataclass(slots=True)
class GraphSchema:
    labels: List[LabelStats]
    edge_types: List[EdgeTypeStats]

    def label(self, name: str) -> Optional[LabelStats]:
        for entry in self.labels:
            if entry.name == name:
                return entry
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "labels": [entry.to_dict() for entry in self.labels],
            "edge_types": [entry.to_dict() for entry in self.edge_types],
        }


# ---------------------------------------------------------------------------
# Reader-writer lock
# ---------------------------------------------------------------------------

class RWLock:
    """Many readers or one writer; the writing thread may re-enter."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writer: Optional[int] = None
        self._writer_depth = 0

    @contextmanager
    def read(self):
        me = threading.get_ident()
        with self._cond:
            if self._writer == me:
                self._writer_depth += 1
                nested = True
            else:
                while self._writer is not None:
                    self._cond.wait()
                self._readers += 1
                nested = False
        try:
            yield
        finally:
            with self._cond:
                if nested:
                    self._writer_depth -= 1
                else:
                    self._readers -= 1
                    if self._readers == 0:
                        self._cond.notify_all()

    @contextmanager
    def write(self):
        me = threading.get_ident()
        with self._cond:
            if self._writer == me:
                self._writer_depth += 1
            else:
                while self._writer is not None or self._readers > 0:
                    self._cond.wait()
                self._writer = me
                self._writer_depth = 1
        try:
            yield
        finally:
            with self._cond:
                self._writer_depth -= 1
                if self._writer_depth == 0:
                    self._writer = None
                    self._cond.notify_all()


# ---------------------------------------------------------------------------
# Tenant
# ---------------------------------------------------------------------------

class Tenant:
    """A named, isolated graph. Node and edge ids are never reused."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.lock = RWLock()
        self._nodes: Dict[int, Node] = {}
        self._edges: Dict[int, Edge] = {}
        self._out: Dict[int, List[int]] = {}
        self._in: Dict[int, List[int]] = {}
        self._next_node_id = 0
        self._next_edge_id = 0
        # label -> node ids in creation (= ascending) order
        self._label_index: Dict[str, List[int]] = {}
        # (label, property) -> index key -> node ids, ascending
        self._prop_index: Dict[Tuple[str, str], Dict[Tuple[str, Any], List[int]]] = {}
        # label -> set of indexed property names
        self._index_decls: Dict[str, Set[str]] = {}
        # live schema statistics
        self._label_counts: Dict[str, int] = {}
        self._label_props: Dict[str, Set[str]] = {}
        self._etype_counts: Dict[str, int] = {}
        self._etype_endpoints: Dict[str, Dict[Tuple[str, str], int]] = {}

    # -- unlocked internals (callers hold the write/read lock) --------------

    def _create_node(
        self,
        labels: Iterable[str],
        properties: Dict[str, Any],
        indexed: Iterable[str] = (),
        *,
        trusted: bool = False,
    ) -> int:
        """``trusted`` hands over ownership of ``properties`` and skips value
        validation; only for bulk paths that already validated the payload."""
        if isinstance(labels, (list, tuple)) and len(labels) == 1:
            labels_t = (labels[0],)
        else:
            labels_t = tuple(sorted(set(labels)))
        if not labels_t or any(not isinstance(l, str) or not l for l in labels_t):
            raise PropertyValueError("nodes require at least one non-empty label")
        if not trusted:
            validate_properties(properties)
            properties = dict(properties)
        nid = self._next_node_id
        self._next_node_id = nid + 1
        node = Node(nid, labels_t, properties)
        self._nodes[nid] = node
        self._out[nid] = []
        self._in[nid] = []
        for label in labels_t:
            # declare before the node joins the label index, so backfill
            # covers pre-existing nodes only and this node is indexed once
            if indexed:
                decls = self._index_decls.get(label, ())
                for prop in indexed:
                    if prop not in decls:
                        self._declare_index(label, prop, backfill=True)
            bucket = self._label_index.get(label)
            if bucket is None:
                self._label_index[label] = [nid]
                self._label_counts[label] = 1
                self._label_props[label] = set(node.properties)
            else:
                bucket.append(nid)
                self._label_counts[label] += 1
                self._label_props[label].update(node.properties)
            for prop in self._index_decls.get(label, ()):
                value = node.properties.get(prop)
                if value is not None:
                    self._index_insert(label, prop, value, nid)
        return nid

    def _merge_properties(self, nid: int, properties: Dict[str, Any]) -> None:
        """Set only the keys absent on the node (first writer wins)."""
        node = self._nodes[nid]
        existing = node.properties
        for key, value in properties.items():
            if key in existing:
                continue
            validate_property_value(key, value)
            existing[key] = value
            for label in node.labels:
                self._label_props[label].add(key)
                if key in self._index_decls.get(label, ()):
                    self._index_insert(label, key, value, nid)

    def _declare_index(self, label: str, prop: str, backfill: bool = True) -> None:
        decls = self._index_decls.setdefault(label, set())
        if prop in decls:
            return
        decls.add(prop)
        self._prop_index.setdefault((label, prop), {})
        if backfill:
            nodes = self._nodes
            for nid in self._label_index.get(label, ()):
                value = nodes[nid].properties.get(prop)
                if value is not None:
                    self._index_insert(label, prop, value, nid)

    def _index_insert(self, label: str, prop: str, value: Any, nid: int) -> None:
        index = self._prop_index[(label, prop)]
        if isinstance(value, list):
            # dedupe repeated elements so a node enters each bucket once
            for el in dict.fromkeys(value):
                index.setdefault(("s", el), []).append(nid)
        else:
            index.setdefault(_index_key(value), []).append(nid)

    def _create_edge(
        self,
        src: int,
        dst: int,
        etype: str,
        properties: Dict[str, Any],
        *,
        trusted: bool = False,
    ) -> int:
        nodes = self._nodes
        src_node = nodes.get(src)
        if src_node is None:
            raise UnknownEndpointError(f"edge source node {src} does not exist")
        dst_node = nodes.get(dst)
        if dst_node is None:
            raise UnknownEndpointError(f"edge target node {dst} does not exist")
        if not isinstance(etype, str) or not etype:
            raise PropertyValueError("edge type must be a non-empty string")
        if not trusted:
            validate_properties(properties)
            properties = dict(properties)
        eid = self._next_edge_id
        self._next_edge_id = eid + 1
        self._edges[eid] = Edge(eid, src, dst, etype, properties)
        self._out[src].append(eid)
        self._in[dst].append(eid)
        self._etype_counts[etype] = self._etype_counts.get(etype, 0) + 1
        pair = (src_node.labels[0], dst_node.labels[0])
        pairs = self._etype_endpoints.setdefault(etype, {})
        pairs[pair] = pairs.get(pair, 0) + 1
        return eid

    def _nodes_by_label_prop(self, label: str, prop: str, value: Any) -> Set[int]:
        return set(self._lookup_ids(label, prop, value))

    def _lookup_ids(self, label: str, prop: str, value: Any) -> List[int]:
        """Node ids for (label, prop, value), without the defensive set copy;
        bulk paths use this directly. May contain duplicates only if a node
        carries the same indexed list element twice."""
        if prop in self._index_decls.get(label, ()) and not isinstance(value, list):
            bucket = self._prop_index[(label, prop)].get(_index_key(value))
            return bucket if bucket else []
        # fallback: label scan + filter
        nodes = self._nodes
        result = []
        for nid in self._label_index.get(label, ()):
            stored = nodes[nid].properties.get(prop)
            if stored is not None and property_matches(stored, value):
                result.append(nid)
        return result

    def _neighbors(
        self, nid: int, direction: str = "both", etype: Optional[str] = None
    ) -> List[Tuple[int, int]]:
        if nid not in self._nodes:
            raise UnknownNodeError(f"node {nid} does not exist")
        if direction not in ("out", "in", "both"):
            raise ValueError(f"direction must be out/in/both, got {direction!r}")
        edges = self._edges
        eids: Iterable[int]
        if direction == "out":
            eids = self._out[nid]
        elif direction == "in":
            eids = self._in[nid]
        else:
            # self-loop edges sit in both adjacency lists; dedupe by edge id
            merged = set(self._out[nid])
            merged.update(self._in[nid])
            eids = sorted(merged)
        result = []
        for eid in eids:
            edge = edges[eid]
            if etype is not None and edge.etype != etype:
                continue
            other = edge.dst if edge.src == nid else edge.src
            if direction == "out":
                other = edge.dst
            elif direction == "in":
                other = edge.src
            result.append((eid, other))
        return result

    def _schema(self) -> GraphSchema:
        labels = []
        for name in sorted(self._label_counts):
            labels.append(
                LabelStats(
                    name=name,
                    count=self._label_counts[name],
                    properties=sorted(self._label_props[name]),
                    indexed=sorted(self._index_decls.get(name, ())),
                )
            )
        edge_types = []
        for name in sorted(self._etype_counts):
            pairs = self._etype_endpoints.get(name, {})
            src_label = dst_label = None
            if pairs:
                # dominant endpoint pair; ties broken lexicographically
                best = max(sorted(pairs), key=lambda p: pairs[p])
                src_label, dst_label = best
            edge_types.append(
                EdgeTypeStats(name, self._etype_counts[name], src_label, dst_label)
            )
        return GraphSchema(labels, edge_types)

    # -- locked public API ---------------------------------------------------

    def create_node(
        self,
        labels: Iterable[str],
        properties: Optional[Dict[str, Any]] = None,
        indexed: Iterable[str] = (),
    ) -> int:
        with self.lock.write():
            return self._create_node(labels, properties or {}, indexed)

    def create_edge(
        self,
        src: int,
        dst: int,
        etype: str,
        properties: Optional[Dict[str, Any]] = None,
    ) -> int:
        with self.lock.write():
            return self._create_edge(src, dst, etype, properties or {})

    def declare_index(self, label: str, prop: str) -> None:
        with self.lock.write():
            self._declare_index(label, prop)

    def nodes_by_label_prop(self, label: str, prop: str, value: Any) -> Set[int]:
        with self.lock.read():
            return self._nodes_by_label_prop(label, prop, value)

    def neighbors(
        self, nid: int, direction: str = "both", etype: Optional[str] = None
    ) -> List[Tuple[int, int]]:
        with self.lock.read():
            return self._neighbors(nid, direction, etype)

    def schema(self) -> GraphSchema:
        with self.lock.read():
            return self._schema()

    def get_node(self, nid: int) -> Node:
        node = self._nodes.get(nid)
        if node is None:
            raise UnknownNodeError(f"node {nid} does not exist")
        return node

    def get_edge(self, eid: int) -> Edge:
        return self._edges[eid]

    def has_node(self, nid: int) -> bool:
        return nid in self._nodes

    def node_ids(self) -> Iterable[int]:
        return self._nodes.keys()

    def edge_ids(self) -> Iterable[int]:
        return self._edges.keys()

    def label_node_ids(self, label: str) -> List[int]:
        return self._label_index.get(label, [])

    def indexed_properties(self, label: str) -> Set[str]:
        return set(self._index_decls.get(label, ()))

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)


# ---------------------------------------------------------------------------
# Multi-tenant registry
# ---------------------------------------------------------------------------

class GraphStore:
    """Registry of named tenants. Creation and listing are serialized."""

    def __init__(self) -> None:
        self._tenants: Dict[str, Tenant] = {}
        self._lock = threading.Lock()

    def create_tenant(self, name: str) -> Tenant:
        if not isinstance(name, str) or not name:
            raise PropertyValueError("tenant name must be a non-empty string")
        with self._lock:
            if name in self._tenants:
                raise DuplicateTenantError(f"tenant {name!r} already exists")
            tenant = Tenant(name)
            self._tenants[name] = tenant
            return tenant

    def get_tenant(self, name: str) -> Tenant:
        with self._lock:
            tenant = self._tenants.get(name)
        if tenant is None:
            raise UnknownTenantError(f"tenant {name!r} does not exist")
        return tenant

    def has_tenant(self, name: str) -> bool:
        with self._lock:
            return name in self._tenants

    def ensure_tenant(self, name: str) -> Tenant:
        with self._lock:
            tenant = self._tenants.get(name)
            if tenant is None:
                tenant = Tenant(name)
                self._tenants[name] = tenant
            return tenant

    def list_tenants(self) -> List[str]:
        with self._lock:
            return sorted(self._tenants)

    def __len__(self) -> int:
        with self._lock:
            return len(self._tenants)
