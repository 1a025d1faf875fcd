"""Operator-tree interpreter for planned queries.

Read queries hold the tenant read lock for their duration; CREATE holds
the write lock. Rows flow as {var: node_id} bindings through the pattern
tree; projection, ordering (ties broken by full-row canonical order),
and LIMIT are applied at the top. Bag semantics throughout: duplicates
are preserved unless aggregated.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import islice
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

from ..errors import KgError, MissingParameterError
from ..store import Tenant
from .ast import Literal, Param, PatternPath, PropRef, VarRef
from .parser import parse
from .planner import (
    Aggregate,
    CartesianProduct,
    CreateEdges,
    ExpandAll,
    Filter,
    HashJoin,
    IndexSeek,
    LabelCheck,
    Limit,
    Plan,
    Project,
    PropCheck,
    ScanByLabel,
    Sort,
    plan as build_plan,
    explain_plan,
)
from .values import (
    NodeVal,
    apply_comparison,
    eq_compare,
    group_key,
    join_build_keys,
    join_probe_keys,
    row_sort_key,
    canon_sort_key,
)


class ExecutionError(KgError):
    code = "execution-error"


@dataclass(slots=True)
class ResultTable:
    columns: List[str]
    rows: List[Tuple]
    latency_ms: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "columns": self.columns,
            "rows": [[_jsonable(v) for v in row] for row in self.rows],
            "latency_ms": self.latency_ms,
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, NodeVal):
        return value.to_json()
    return value


# ---------------------------------------------------------------------------
# Runtime context
# ---------------------------------------------------------------------------

class _Ctx:
    __slots__ = ("tenant", "params")

    def __init__(self, tenant: Tenant, params: Dict[str, Any]):
        self.tenant = tenant
        self.params = params

    def resolve(self, value) -> Any:
        if isinstance(value, Literal):
            return value.value
        if isinstance(value, Param):
            return self.params[value.name]
        return value

    def prop_of(self, row: Dict[str, int], ref: PropRef) -> Any:
        node = self.tenant.get_node(row[ref.var])
        return node.properties.get(ref.key)

    def operand(self, row: Dict[str, int], operand) -> Any:
        if isinstance(operand, PropRef):
            return self.prop_of(row, operand)
        return self.resolve(operand)

    def node_val(self, nid: int) -> NodeVal:
        node = self.tenant.get_node(nid)
        return NodeVal(node.id, node.labels, node.properties)


# ---------------------------------------------------------------------------
# Pattern-tree iteration
# ---------------------------------------------------------------------------

def _tree_rows(op: Any, ctx: _Ctx) -> Iterator[Dict[str, int]]:
    if isinstance(op, ScanByLabel):
        if op.label is None:
            ids: Iterable[int] = ctx.tenant.node_ids()
        else:
            ids = ctx.tenant.label_node_ids(op.label)
        var = op.var
        for nid in ids:
            yield {var: nid}
    elif isinstance(op, IndexSeek):
        value = ctx.resolve(op.value)
        var = op.var
        for nid in sorted(ctx.tenant._nodes_by_label_prop(op.label, op.prop, value)):
            yield {var: nid}
    elif isinstance(op, ExpandAll):
        yield from _expand(op, ctx)
    elif isinstance(op, Filter):
        preds = op.preds
        for row in _tree_rows(op.child, ctx):
            if all(_eval_pred(p, row, ctx) for p in preds):
                yield row
    elif isinstance(op, HashJoin):
        yield from _hash_join(op, ctx)
    elif isinstance(op, CartesianProduct):
        # cartesian chains are left-deep; flatten them iteratively so wide
        # multi-pattern statements neither recurse deeply nor re-copy rows
        # once per level
        factors = []
        node = op
        while isinstance(node, CartesianProduct):
            factors.append(node.right)
            node = node.left
        factors.append(node)
        factors.reverse()
        first = _tree_rows(factors[0], ctx)
        rest = [list(_tree_rows(f, ctx)) for f in factors[1:]]
        if any(not rows for rows in rest):
            return
        from itertools import product

        for combo in product(first, *rest):
            merged: Dict[str, int] = {}
            for part in combo:
                merged.update(part)
            yield merged
    else:  # pragma: no cover
        raise AssertionError(f"unexpected operator {type(op).__name__}")


def _expand(op: ExpandAll, ctx: _Ctx) -> Iterator[Dict[str, int]]:
    tenant = ctx.tenant
    src_var, dst_var = op.src_var, op.dst_var
    etype, direction = op.etype, op.direction
    if not op.var_length:
        for row in _tree_rows(op.child, ctx):
            src = row[src_var]
            bound = row.get(dst_var)
            for _eid, other in tenant._neighbors(src, direction, etype):
                if bound is not None:
                    if other == bound:
                        yield row
                else:
                    new = dict(row)
                    new[dst_var] = other
                    yield new
    else:
        lo, hi = op.min_len, op.max_len
        for row in _tree_rows(op.child, ctx):
            src = row[src_var]
            bound = row.get(dst_var)
            # all simple paths (no repeated node) of length lo..hi
            stack_visited = {src}

            def walk(current: int, depth: int) -> Iterator[int]:
                if depth >= lo:
                    yield current
                if depth == hi:
                    return
                for _eid, other in tenant._neighbors(current, direction, etype):
                    if other not in stack_visited:
                        stack_visited.add(other)
                        yield from walk(other, depth + 1)
                        stack_visited.discard(other)

            for _eid, first in tenant._neighbors(src, direction, etype):
                if first in stack_visited:
                    continue
                stack_visited.add(first)
                for end in walk(first, 1):
                    if bound is not None:
                        if end == bound:
                            yield row
                    else:
                        new = dict(row)
                        new[dst_var] = end
                        yield new
                stack_visited.discard(first)


def _eval_pred(pred, row: Dict[str, int], ctx: _Ctx) -> bool:
    if isinstance(pred, LabelCheck):
        return pred.label in ctx.tenant.get_node(row[pred.var]).labels
    if isinstance(pred, PropCheck):
        stored = ctx.tenant.get_node(row[pred.var]).properties.get(pred.key)
        if stored is None:
            return False
        return eq_compare(stored, ctx.resolve(pred.value))
    # Comparison
    left = ctx.operand(row, pred.left)
    right = ctx.operand(row, pred.right)
    return apply_comparison(pred.op, left, right)


def _hash_join(op: HashJoin, ctx: _Ctx) -> Iterator[Dict[str, int]]:
    table: Dict[Any, List[Dict[str, int]]] = {}
    right_key = op.right_key
    for rrow in _tree_rows(op.right, ctx):
        value = ctx.prop_of(rrow, right_key)
        for key in join_build_keys(value):
            table.setdefault(key, []).append(rrow)
    if not table:
        return
    left_key = op.left_key
    for lrow in _tree_rows(op.left, ctx):
        value = ctx.prop_of(lrow, left_key)
        for key in join_probe_keys(value):
            bucket = table.get(key)
            if bucket:
                for rrow in bucket:
                    merged = dict(lrow)
                    merged.update(rrow)
                    yield merged


# ---------------------------------------------------------------------------
# Projection / aggregation / ordering
# ---------------------------------------------------------------------------

def _eval_item_expr(expr, row: Dict[str, int], ctx: _Ctx) -> Any:
    if isinstance(expr, PropRef):
        return ctx.prop_of(row, expr)
    if isinstance(expr, VarRef):
        return ctx.node_val(row[expr.name])
    raise AssertionError("aggregates are evaluated by Aggregate")


def _project_row(items, row: Dict[str, int], ctx: _Ctx) -> Tuple:
    return tuple(_eval_item_expr(item.expr, row, ctx) for item in items)


def _aggregate_rows(op: Aggregate, rows: Iterable[Dict[str, int]], ctx: _Ctx) -> List[Tuple]:
    returns = op.returns
    group_idx, count_idx = op.group_idx, op.count_idx
    groups: Dict[Tuple, List] = {}
    for row in rows:
        gvals = [_eval_item_expr(returns[i].expr, row, ctx) for i in group_idx]
        key = tuple(group_key(v) for v in gvals)
        entry = groups.get(key)
        if entry is None:
            entry = [gvals, [0] * len(count_idx)]
            groups[key] = entry
        counts = entry[1]
        for pos, i in enumerate(count_idx):
            arg = returns[i].expr.arg
            if arg == "*":
                counts[pos] += 1
            elif isinstance(arg, VarRef):
                if row.get(arg.name) is not None:
                    counts[pos] += 1
            else:  # PropRef: count rows where the property is present
                if ctx.prop_of(row, arg) is not None:
                    counts[pos] += 1
    if not group_idx and not groups:
        groups[()] = [[], [0] * len(count_idx)]
    out = []
    for gvals, counts in groups.values():
        record: List[Any] = [None] * len(returns)
        for pos, i in enumerate(group_idx):
            record[i] = gvals[pos]
        for pos, i in enumerate(count_idx):
            record[i] = counts[pos]
        out.append(tuple(record))
    return out


def _resolve_limit(value, ctx: _Ctx) -> int:
    if isinstance(value, Param):
        raw = ctx.params[value.name]
        if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
            raise ExecutionError("LIMIT parameter must be a non-negative integer")
        return raw
    return value


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def execute(tenant: Tenant, plan_: Plan, params: Optional[Dict[str, Any]] = None) -> ResultTable:
    """Run a plan. Raises MissingParameterError before touching the graph
    if any referenced $parameter is absent."""
    params = params or {}
    for name in sorted(plan_.params):
        if name not in params:
            raise MissingParameterError(name)
    started = time.perf_counter()
    ctx = _Ctx(tenant, params)
    if plan_.is_create:
        with tenant.lock.write():
            rows = _run_create(plan_.root, ctx)
    else:
        with tenant.lock.read():
            rows = _run_read(plan_.root, ctx)
    latency = (time.perf_counter() - started) * 1000.0
    return ResultTable(list(plan_.columns), rows, latency)


def _run_read(root: Any, ctx: _Ctx) -> List[Tuple]:
    # top of the plan is Project(Limit?(Sort?(tree))) for plain queries and
    # Limit?(Sort?(Aggregate(tree))) for aggregating ones
    limit_op: Optional[Limit] = None
    sort_op: Optional[Sort] = None
    op = root
    if isinstance(op, Project):
        items = op.items
        op = op.child
        if isinstance(op, Limit):
            limit_op = op
            op = op.child
        if isinstance(op, Sort):
            sort_op = op
            op = op.child
        bindings = _tree_rows(op, ctx)
        if sort_op is None:
            if limit_op is not None:
                bindings = islice(bindings, _resolve_limit(limit_op.count, ctx))
            return [_project_row(items, row, ctx) for row in bindings]
        order = sort_op.order_by
        pairs = [(_project_row(items, row, ctx), row) for row in bindings]
        pairs.sort(key=lambda pr: row_sort_key(pr[0]))
        pairs.sort(
            key=lambda pr: canon_sort_key(_eval_item_expr(order.expr, pr[1], ctx)),
            reverse=not order.ascending,
        )
        rows = [pr[0] for pr in pairs]
        if limit_op is not None:
            rows = rows[: _resolve_limit(limit_op.count, ctx)]
        return rows
    # aggregate pipeline
    if isinstance(op, Limit):
        limit_op = op
        op = op.child
    if isinstance(op, Sort):
        sort_op = op
        op = op.child
    assert isinstance(op, Aggregate)
    out = _aggregate_rows(op, _tree_rows(op.child, ctx), ctx)
    out.sort(key=row_sort_key)
    if sort_op is not None:
        col = sort_op.column
        out.sort(
            key=lambda row: canon_sort_key(row[col]),
            reverse=not sort_op.order_by.ascending,
        )
    if limit_op is not None:
        out = out[: _resolve_limit(limit_op.count, ctx)]
    return out


def _run_create(root: CreateEdges, ctx: _Ctx) -> List[Tuple]:
    nodes_op = root.child
    paths: List[PatternPath] = root.paths
    tenant = ctx.tenant
    if nodes_op.child is None:
        binding_rows: List[Dict[str, int]] = [{}]
    else:
        # materialize: MATCH sees the pre-CREATE graph
        binding_rows = list(_tree_rows(nodes_op.child, ctx))
    nodes_created = 0
    edges_created = 0
    for row in binding_rows:
        scope = dict(row)
        for path in paths:
            for node in path.nodes:
                if node.var not in scope:
                    props = {k: ctx.resolve(v) for k, v in node.props.items()}
                    scope[node.var] = tenant._create_node([node.label], props)
                    nodes_created += 1
            for i, rel in enumerate(path.rels):
                left = scope[path.nodes[i].var]
                right = scope[path.nodes[i + 1].var]
                src, dst = (left, right) if rel.direction == "out" else (right, left)
                props = {k: ctx.resolve(v) for k, v in rel.props.items()}
                tenant._create_edge(src, dst, rel.etype, props)
                edges_created += 1
    return [(nodes_created, edges_created)]


def execute_text(
    tenant: Tenant, text: str, params: Optional[Dict[str, Any]] = None
) -> ResultTable:
    """parse -> plan -> execute convenience."""
    started = time.perf_counter()
    query = parse(text)
    plan_ = build_plan(query, tenant.schema())
    table = execute(tenant, plan_, params)
    table.latency_ms = (time.perf_counter() - started) * 1000.0
    return table


def explain(tenant: Tenant, text: str) -> str:
    """Indented operator tree for a query, without executing it."""
    query = parse(text)
    plan_ = build_plan(query, tenant.schema())
    return explain_plan(plan_)
