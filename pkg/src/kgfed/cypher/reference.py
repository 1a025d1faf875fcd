"""Brute-force interpreter used as the conformance oracle in tests.

Evaluates the AST by exhaustive pattern enumeration: node candidates come
from full node scans and every relationship hop re-scans the whole edge
table. No indexes, no join operators, no planner. Guarded to graphs of
at most 5,000 nodes.
"""

from __future__ import annotations

import time
from typing import Any, Dict, Iterator, List, Optional, Tuple

from ..errors import MissingParameterError, SizeGuardExceeded
from ..store import Tenant
from .ast import (
    Literal,
    Param,
    PatternPath,
    PropRef,
    Query,
    VarRef,
)
from .executor import ResultTable
from .values import (
    NodeVal,
    apply_comparison,
    canon_sort_key,
    eq_compare,
    group_key,
    row_sort_key,
)

MAX_NODES = 5000


def _resolve(value, params: Dict[str, Any]) -> Any:
    if isinstance(value, Literal):
        return value.value
    if isinstance(value, Param):
        return params[value.name]
    return value


def _node_matches(tenant: Tenant, pat, nid: int, params: Dict[str, Any]) -> bool:
    node = tenant.get_node(nid)
    if pat.label is not None and pat.label not in node.labels:
        return False
    for key, val in pat.props.items():
        stored = node.properties.get(key)
        if stored is None or not eq_compare(stored, _resolve(val, params)):
            return False
    return True


def _hops(tenant: Tenant, cur: int, etype: str, direction: str) -> Iterator[int]:
    """Every edge traversal from ``cur``, found by scanning all edges."""
    for eid in tenant.edge_ids():
        edge = tenant.get_edge(eid)
        if edge.etype != etype:
            continue
        if direction == "out":
            if edge.src == cur:
                yield edge.dst
        elif direction == "in":
            if edge.dst == cur:
                yield edge.src
        else:
            if edge.src == cur:
                yield edge.dst
            elif edge.dst == cur:
                yield edge.src


def _enum_path(tenant: Tenant, path: PatternPath, params: Dict[str, Any]) -> List[Dict[str, int]]:
    nodes, rels = path.nodes, path.rels
    out: List[Dict[str, int]] = []

    def assign(var_map: Dict[str, int], var: str, nid: int) -> Optional[Dict[str, int]]:
        seen = var_map.get(var)
        if seen is not None:
            return var_map if seen == nid else None
        new = dict(var_map)
        new[var] = nid
        return new

    def extend(pos: int, cur: int, var_map: Dict[str, int]) -> None:
        if pos == len(rels):
            out.append(var_map)
            return
        rel = rels[pos]
        target = nodes[pos + 1]
        if not rel.var_length:
            for nxt in _hops(tenant, cur, rel.etype, rel.direction):
                if not _node_matches(tenant, target, nxt, params):
                    continue
                new_map = assign(var_map, target.var, nxt)
                if new_map is not None:
                    extend(pos + 1, nxt, new_map)
        else:
            visited = {cur}

            def walk(node: int, depth: int) -> None:
                if rel.min_len <= depth:
                    if _node_matches(tenant, target, node, params):
                        new_map = assign(var_map, target.var, node)
                        if new_map is not None:
                            extend(pos + 1, node, new_map)
                if depth == rel.max_len:
                    return
                for nxt in _hops(tenant, node, rel.etype, rel.direction):
                    if nxt not in visited:
                        visited.add(nxt)
                        walk(nxt, depth + 1)
                        visited.discard(nxt)

            for first in _hops(tenant, cur, rel.etype, rel.direction):
                if first in visited:
                    continue
                visited.add(first)
                walk(first, 1)
                visited.discard(first)

    for nid in tenant.node_ids():
        if _node_matches(tenant, nodes[0], nid, params):
            extend(0, nid, {nodes[0].var: nid})
    return out


def _merge_paths(
    tenant: Tenant, paths: List[PatternPath], params: Dict[str, Any]
) -> List[Dict[str, int]]:
    rows: List[Dict[str, int]] = [{}]
    for path in paths:
        assignments = _enum_path(tenant, path, params)
        merged = []
        for row in rows:
            for asst in assignments:
                ok = True
                for var, nid in asst.items():
                    if var in row and row[var] != nid:
                        ok = False
                        break
                if ok:
                    combined = dict(row)
                    combined.update(asst)
                    merged.append(combined)
        rows = merged
        if not rows:
            break
    return rows


def _operand(tenant: Tenant, row: Dict[str, int], operand, params: Dict[str, Any]) -> Any:
    if isinstance(operand, PropRef):
        return tenant.get_node(row[operand.var]).properties.get(operand.key)
    return _resolve(operand, params)


def _eval_expr(tenant: Tenant, expr, row: Dict[str, int]) -> Any:
    if isinstance(expr, PropRef):
        return tenant.get_node(row[expr.var]).properties.get(expr.key)
    node = tenant.get_node(row[expr.name])
    return NodeVal(node.id, node.labels, node.properties)


def reference_execute(
    tenant: Tenant, query: Query, params: Optional[Dict[str, Any]] = None
) -> ResultTable:
    params = params or {}
    for name in sorted(query.params):
        if name not in params:
            raise MissingParameterError(name)
    if tenant.node_count > MAX_NODES:
        raise SizeGuardExceeded(
            f"reference interpreter is limited to {MAX_NODES} nodes"
        )
    started = time.perf_counter()
    if query.is_create:
        rows = _reference_create(tenant, query, params)
        columns = ["nodes_created", "edges_created"]
    else:
        with tenant.lock.read():
            rows = _reference_read(tenant, query, params)
        columns = [item.column_name for item in query.returns]
    latency = (time.perf_counter() - started) * 1000.0
    return ResultTable(columns, rows, latency)


def _reference_read(tenant: Tenant, query: Query, params: Dict[str, Any]) -> List[Tuple]:
    bindings = _merge_paths(tenant, query.matches, params)
    if query.where:
        kept = []
        for row in bindings:
            ok = True
            for cmp_ in query.where:
                left = _operand(tenant, row, cmp_.left, params)
                right = _operand(tenant, row, cmp_.right, params)
                if not apply_comparison(cmp_.op, left, right):
                    ok = False
                    break
            if ok:
                kept.append(row)
        bindings = kept

    returns = query.returns
    aggregating = any(item.is_aggregate for item in returns)
    if aggregating:
        group_items = [(i, item) for i, item in enumerate(returns) if not item.is_aggregate]
        count_items = [(i, item) for i, item in enumerate(returns) if item.is_aggregate]
        groups: Dict[Tuple, List] = {}
        for row in bindings:
            gvals = [_eval_expr(tenant, item.expr, row) for _, item in group_items]
            key = tuple(group_key(v) for v in gvals)
            entry = groups.setdefault(key, [gvals, [0] * len(count_items)])
            for pos, (_, item) in enumerate(count_items):
                arg = item.expr.arg
                if arg == "*":
                    entry[1][pos] += 1
                elif isinstance(arg, VarRef):
                    entry[1][pos] += 1
                elif _operand(tenant, row, arg, params) is not None:
                    entry[1][pos] += 1
        if not group_items and not groups:
            groups[()] = [[], [0] * len(count_items)]
        out: List[Tuple] = []
        for gvals, counts in groups.values():
            record: List[Any] = [None] * len(returns)
            for pos, (i, _) in enumerate(group_items):
                record[i] = gvals[pos]
            for pos, (i, _) in enumerate(count_items):
                record[i] = counts[pos]
            out.append(tuple(record))
        out.sort(key=row_sort_key)
        if query.order_by is not None:
            col = _order_column(query)
            out.sort(
                key=lambda row: canon_sort_key(row[col]),
                reverse=not query.order_by.ascending,
            )
        if query.limit is not None:
            out = out[: _limit_value(query, params)]
        return out

    pairs = [
        (tuple(_eval_expr(tenant, item.expr, row) for item in returns), row)
        for row in bindings
    ]
    if query.order_by is not None:
        order_expr = query.order_by.expr
        if isinstance(order_expr, VarRef):
            for item in returns:
                if item.alias == order_expr.name:
                    order_expr = item.expr
                    break
        pairs.sort(key=lambda pr: row_sort_key(pr[0]))
        pairs.sort(
            key=lambda pr: canon_sort_key(_eval_expr(tenant, order_expr, pr[1])),
            reverse=not query.order_by.ascending,
        )
    rows = [pr[0] for pr in pairs]
    if query.limit is not None:
        rows = rows[: _limit_value(query, params)]
    return rows


def _order_column(query: Query) -> int:
    target = query.order_by.expr
    for idx, item in enumerate(query.returns):
        if isinstance(target, VarRef) and item.alias == target.name:
            return idx
        if target.text() == item.expr.text() or target.text() == item.column_name:
            return idx
    raise ValueError("ORDER BY must reference a returned column")


def _limit_value(query: Query, params: Dict[str, Any]) -> int:
    if isinstance(query.limit, Param):
        return params[query.limit.name]
    return query.limit


def _reference_create(tenant: Tenant, query: Query, params: Dict[str, Any]) -> List[Tuple]:
    with tenant.lock.write():
        if query.matches:
            bindings = _merge_paths(tenant, query.matches, params)
            if query.where:
                bindings = [
                    row
                    for row in bindings
                    if all(
                        apply_comparison(
                            cmp_.op,
                            _operand(tenant, row, cmp_.left, params),
                            _operand(tenant, row, cmp_.right, params),
                        )
                        for cmp_ in query.where
                    )
                ]
        else:
            bindings = [{}]
        nodes_created = 0
        edges_created = 0
        for row in bindings:
            scope = dict(row)
            for path in query.creates:
                for node in path.nodes:
                    if node.var not in scope:
                        props = {k: _resolve(v, params) for k, v in node.props.items()}
                        scope[node.var] = tenant._create_node([node.label], props)
                        nodes_created += 1
                for i, rel in enumerate(path.rels):
                    left = scope[path.nodes[i].var]
                    right = scope[path.nodes[i + 1].var]
                    src, dst = (left, right) if rel.direction == "out" else (right, left)
                    props = {k: _resolve(v, params) for k, v in rel.props.items()}
                    tenant._create_edge(src, dst, rel.etype, props)
                    edges_created += 1
    return [(nodes_created, edges_created)]
