"""Content-based graph equality, independent of node/edge id numbering.

Two graphs are considered isomorphic here when the multiset of node
content tuples (labels, properties) and the multiset of edge content
tuples (src tuple, type, dst tuple, properties) coincide. Intended for
test-sized graphs (canonical sort, <= ~10k nodes).
"""

from __future__ import annotations

from typing import Any, Tuple

from .store import Tenant


def _prop_key(value: Any) -> Tuple:
    if isinstance(value, bool):
        return ("bool", value)
    if isinstance(value, int):
        return ("int", value)
    if isinstance(value, float):
        return ("float", value)
    if isinstance(value, str):
        return ("str", value)
    return ("list", tuple(value))


def node_content_key(labels: Tuple[str, ...], properties: dict) -> Tuple:
    props = tuple(sorted((k, _prop_key(v)) for k, v in properties.items()))
    return (tuple(labels), props)


def canonical_form(tenant: Tenant) -> Tuple[list, list]:
    """Sorted node and edge content tuples for the whole tenant."""
    node_keys = {}
    for nid in tenant.node_ids():
        node = tenant.get_node(nid)
        node_keys[nid] = node_content_key(node.labels, node.properties)
    nodes = sorted(node_keys.values())
    edges = []
    for eid in tenant.edge_ids():
        edge = tenant.get_edge(eid)
        props = tuple(sorted((k, _prop_key(v)) for k, v in edge.properties.items()))
        edges.append((node_keys[edge.src], edge.etype, node_keys[edge.dst], props))
    edges.sort()
    return nodes, edges


def isomorphic(a: Tenant, b: Tenant) -> bool:
    return canonical_form(a) == canonical_form(b)
