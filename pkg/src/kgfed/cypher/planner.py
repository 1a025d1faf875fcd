"""Physical planning: pattern graphs to an operator tree.

Planning rules:

- a node pattern with an equality on an indexed property (inline map or
  WHERE clause) becomes an IndexSeek leaf;
- a WHERE equality between properties of variables from two different
  connected components becomes a HashJoin on that equality, never a
  filtered cartesian product;
- remaining cross-component combinations become CartesianProduct, with
  leftover predicates in a Filter on top.

Unknown labels plan as empty scans (0 estimate), not errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Set, Tuple, Union

from ..errors import CypherSyntaxError
from ..store import GraphSchema
from .ast import (
    Comparison,
    CountExpr,
    Literal,
    NodePattern,
    OrderBy,
    Param,
    PatternPath,
    PropRef,
    Query,
    ReturnItem,
    VarRef,
)


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class ScanByLabel:
    var: str
    label: Optional[str]  # None scans every node
    est: int = 0


@dataclass(slots=True)
class IndexSeek:
    var: str
    label: str
    prop: str
    value: Union[Literal, Param]
    est: int = 1


@dataclass(slots=True)
class ExpandAll:
    child: Any
    src_var: str
    dst_var: str
    etype: str
    direction: str
    min_len: int = 1
    max_len: int = 1
    var_length: bool = False
    est: int = 0


@dataclass(slots=True)
class LabelCheck:
    var: str
    label: str


@dataclass(slots=True)
class PropCheck:
    var: str
    key: str
    value: Union[Literal, Param]


Predicate = Union[LabelCheck, PropCheck, Comparison]


@dataclass(slots=True)
class Filter:
    child: Any
    preds: List[Predicate]


@dataclass(slots=True)
class HashJoin:
    left: Any
    right: Any
    left_key: PropRef
    right_key: PropRef


@dataclass(slots=True)
class CartesianProduct:
    left: Any
    right: Any


@dataclass(slots=True)
class Aggregate:
    child: Any
    returns: List[ReturnItem]        # full RETURN list, in order
    group_idx: List[int]             # indexes of non-aggregate items
    count_idx: List[int]


@dataclass(slots=True)
class Sort:
    child: Any
    order_by: OrderBy
    column: Optional[int] = None     # aggregate output column, when applicable


@dataclass(slots=True)
class Limit:
    child: Any
    count: Union[int, Param]


@dataclass(slots=True)
class Project:
    child: Any
    items: List[ReturnItem]


@dataclass(slots=True)
class CreateNodes:
    child: Any                       # None for a single empty binding
    paths: List[PatternPath]


@dataclass(slots=True)
class CreateEdges:
    child: CreateNodes
    paths: List[PatternPath]


@dataclass(slots=True)
class Plan:
    root: Any
    columns: List[str]
    params: Set[str] = field(default_factory=set)
    is_create: bool = False


# ---------------------------------------------------------------------------
# Planning
# ---------------------------------------------------------------------------

def _label_est(schema: GraphSchema, label: Optional[str]) -> int:
    if label is None:
        return sum(entry.count for entry in schema.labels)
    entry = schema.label(label)
    return entry.count if entry else 0


def _etype_est(schema: GraphSchema, etype: str) -> int:
    for entry in schema.edge_types:
        if entry.name == etype:
            return entry.count
    return 0


def _indexed_props(schema: GraphSchema, label: Optional[str]) -> Set[str]:
    if label is None:
        return set()
    entry = schema.label(label)
    return set(entry.indexed) if entry else set()


def _group_components(paths: Sequence[PatternPath]) -> List[List[int]]:
    """Indexes of paths grouped by shared variables, in query order."""
    comps: List[Tuple[Set[str], List[int]]] = []
    for idx, path in enumerate(paths):
        vars_ = path.variables()
        merged: Tuple[Set[str], List[int]] = (set(vars_), [idx])
        rest = []
        for cvars, cidx in comps:
            if cvars & vars_:
                merged = (merged[0] | cvars, sorted(merged[1] + cidx))
            else:
                rest.append((cvars, cidx))
        rest.append(merged)
        comps = rest
    comps.sort(key=lambda c: c[1][0])
    return [cidx for _, cidx in comps]


class _ComponentPlanner:
    def __init__(self, schema: GraphSchema, where: List[Comparison], consumed: Set[int]):
        self.schema = schema
        self.where = where
        self.consumed = consumed

    def plan(self, paths: List[PatternPath]) -> Tuple[Any, Set[str]]:
        bound: Set[str] = set()
        preds: List[Predicate] = []
        remaining = list(paths)
        first = remaining.pop(0)
        tree = self._plan_path(first, bound, preds, root=True)
        while remaining:
            for i, path in enumerate(remaining):
                if path.variables() & bound:
                    remaining.pop(i)
                    tree = self._plan_path(path, bound, preds, root=False, child=tree)
                    break
            else:  # disconnected inside a component cannot happen
                raise AssertionError("component paths do not connect")
        # single-component predicates fold into this component's filter
        for cmp_ in self.where:
            if id(cmp_) in self.consumed:
                continue
            vars_ = cmp_.variables()
            if vars_ and vars_ <= bound:
                preds.append(cmp_)
                self.consumed.add(id(cmp_))
        if preds:
            tree = Filter(tree, preds)
        return tree, bound

    # -- helpers --

    def _seek_for(self, node: NodePattern):
        """(prop, value, consumed_cmp|None) for an indexed equality, or None."""
        if node.label is None:
            return None
        indexed = _indexed_props(self.schema, node.label)
        if not indexed:
            return None
        for key, value in node.props.items():
            if key in indexed:
                return key, value, None
        for cmp_ in self.where:
            if id(cmp_) in self.consumed or cmp_.op != "=":
                continue
            for ref, other in ((cmp_.left, cmp_.right), (cmp_.right, cmp_.left)):
                if (
                    isinstance(ref, PropRef)
                    and ref.var == node.var
                    and ref.key in indexed
                    and isinstance(other, (Literal, Param))
                ):
                    return ref.key, other, cmp_
        return None

    def _plan_path(
        self,
        path: PatternPath,
        bound: Set[str],
        preds: List[Predicate],
        root: bool,
        child: Any = None,
    ) -> Any:
        nodes, rels = path.nodes, path.rels
        start_idx = 0
        if root:
            seek_idx = None
            label_idx = None
            seek = None
            for idx, node in enumerate(nodes):
                found = self._seek_for(node)
                if found and seek_idx is None:
                    seek_idx, seek = idx, found
                if node.label is not None and label_idx is None:
                    label_idx = idx
            if seek_idx is not None:
                start_idx = seek_idx
                prop, value, cmp_ = seek
                node = nodes[start_idx]
                tree = IndexSeek(node.var, node.label, prop, value, est=1)
                if cmp_ is not None:
                    self.consumed.add(id(cmp_))
                for key, val in node.props.items():
                    if cmp_ is None and key == prop:
                        continue  # consumed by the seek
                    preds.append(PropCheck(node.var, key, val))
            else:
                start_idx = label_idx if label_idx is not None else 0
                node = nodes[start_idx]
                tree = ScanByLabel(node.var, node.label, _label_est(self.schema, node.label))
                for key, val in node.props.items():
                    preds.append(PropCheck(node.var, key, val))
            bound.add(nodes[start_idx].var)
        else:
            for idx, node in enumerate(nodes):
                if node.var in bound:
                    start_idx = idx
                    break
            tree = child
            self._node_checks(nodes[start_idx], preds)
        # expand right then left of the start position
        for i in range(start_idx, len(rels)):
            rel = rels[i]
            src, dst = nodes[i], nodes[i + 1]
            tree = ExpandAll(
                tree,
                src.var,
                dst.var,
                rel.etype,
                rel.direction,
                rel.min_len,
                rel.max_len,
                rel.var_length,
                est=_etype_est(self.schema, rel.etype),
            )
            self._node_checks(dst, preds)
            bound.add(dst.var)
        for i in range(start_idx - 1, -1, -1):
            rel = rels[i]
            src, dst = nodes[i + 1], nodes[i]  # walking left: flip direction
            direction = {"out": "in", "in": "out", "both": "both"}[rel.direction]
            tree = ExpandAll(
                tree,
                src.var,
                dst.var,
                rel.etype,
                direction,
                rel.min_len,
                rel.max_len,
                rel.var_length,
                est=_etype_est(self.schema, rel.etype),
            )
            self._node_checks(dst, preds)
            bound.add(dst.var)
        return tree

    def _node_checks(self, node: NodePattern, preds: List[Predicate]) -> None:
        if node.label is not None:
            preds.append(LabelCheck(node.var, node.label))
        for key, val in node.props.items():
            preds.append(PropCheck(node.var, key, val))


def _plan_match_tree(
    matches: List[PatternPath], where: List[Comparison], schema: GraphSchema
) -> Any:
    consumed: Set[int] = set()
    groups = _group_components(matches)
    planner = _ComponentPlanner(schema, where, consumed)
    components: List[Tuple[Any, Set[str]]] = []
    for idxs in groups:
        components.append(planner.plan([matches[i] for i in idxs]))

    # join components on cross-component property equalities
    progress = True
    while len(components) > 1 and progress:
        progress = False
        for cmp_ in where:
            if id(cmp_) in consumed or cmp_.op != "=":
                continue
            if not (isinstance(cmp_.left, PropRef) and isinstance(cmp_.right, PropRef)):
                continue
            li = ri = None
            for pos, (_, vars_) in enumerate(components):
                if cmp_.left.var in vars_:
                    li = pos
                if cmp_.right.var in vars_:
                    ri = pos
            if li is None or ri is None or li == ri:
                continue
            left, right = components[li], components[ri]
            joined = (
                HashJoin(left[0], right[0], cmp_.left, cmp_.right),
                left[1] | right[1],
            )
            consumed.add(id(cmp_))
            components = [
                c for pos, c in enumerate(components) if pos not in (li, ri)
            ]
            components.insert(min(li, ri), joined)
            progress = True
            break
    while len(components) > 1:
        left, right = components[0], components[1]
        components[0:2] = [(CartesianProduct(left[0], right[0]), left[1] | right[1])]

    root = components[0][0]
    leftovers = [c for c in where if id(c) not in consumed]
    if leftovers:
        root = Filter(root, list(leftovers))
    return root


def plan(query: Query, schema: GraphSchema) -> Plan:
    """Build the physical plan for a parsed query against a schema."""
    if query.is_create:
        return _plan_create(query, schema)
    root = _plan_match_tree(query.matches, query.where, schema)
    columns = [item.column_name for item in query.returns]
    has_aggregate = any(item.is_aggregate for item in query.returns)
    if has_aggregate:
        group_idx = [i for i, item in enumerate(query.returns) if not item.is_aggregate]
        count_idx = [i for i, item in enumerate(query.returns) if item.is_aggregate]
        root = Aggregate(root, list(query.returns), group_idx, count_idx)
        if query.order_by is not None:
            root = Sort(root, query.order_by, _aggregate_sort_column(query))
        if query.limit is not None:
            root = Limit(root, query.limit)
    else:
        if query.order_by is not None:
            root = Sort(root, _resolve_order_alias(query), None)
        if query.limit is not None:
            root = Limit(root, query.limit)
        root = Project(root, list(query.returns))
    return Plan(root, columns, set(query.params), is_create=False)


def _aggregate_sort_column(query: Query) -> int:
    target = query.order_by.expr
    for idx, item in enumerate(query.returns):
        if isinstance(target, VarRef) and item.alias == target.name:
            return idx
        if target.text() == item.expr.text() or target.text() == item.column_name:
            return idx
    raise CypherSyntaxError(
        "ORDER BY must reference a returned column in aggregated queries", 0, 0
    )


def _resolve_order_alias(query: Query) -> OrderBy:
    order = query.order_by
    if isinstance(order.expr, VarRef):
        for item in query.returns:
            if item.alias == order.expr.name and not isinstance(item.expr, CountExpr):
                return OrderBy(item.expr, order.ascending)
    return order


def _plan_create(query: Query, schema: GraphSchema) -> Plan:
    child = None
    if query.matches:
        child = _plan_match_tree(query.matches, query.where, schema)
    nodes_op = CreateNodes(child, query.creates)
    root = CreateEdges(nodes_op, query.creates)
    return Plan(
        root,
        ["nodes_created", "edges_created"],
        set(query.params),
        is_create=True,
    )


# ---------------------------------------------------------------------------
# EXPLAIN rendering
# ---------------------------------------------------------------------------

def _fmt_value(value: Union[Literal, Param]) -> str:
    if isinstance(value, Param):
        return f"${value.name}"
    if isinstance(value.value, str):
        return "'%s'" % value.value.replace("'", "\\'")
    return repr(value.value)


def _fmt_pred(pred: Predicate) -> str:
    if isinstance(pred, LabelCheck):
        return f"{_show_var(pred.var)}:{pred.label}"
    if isinstance(pred, PropCheck):
        return f"{_show_var(pred.var)}.{pred.key} = {_fmt_value(pred.value)}"
    left = pred.left.text() if isinstance(pred.left, PropRef) else _fmt_value(pred.left)
    right = pred.right.text() if isinstance(pred.right, PropRef) else _fmt_value(pred.right)
    op = "STARTS WITH" if pred.op == "STARTS_WITH" else pred.op
    return f"{left} {op} {right}"


def _fmt_item(item: ReturnItem) -> str:
    text = item.expr.text()
    return f"{text} AS {item.alias}" if item.alias else text


def _show_var(var: str) -> str:
    return "" if var.startswith("\x00") else var


def _rel_glyph(op: ExpandAll) -> str:
    hops = f"*{op.min_len}..{op.max_len}" if op.var_length else ""
    core = f"[:{op.etype}{hops}]"
    src, dst = _show_var(op.src_var), _show_var(op.dst_var)
    if op.direction == "out":
        return f"({src})-{core}->({dst})"
    if op.direction == "in":
        return f"({src})<-{core}-({dst})"
    return f"({src})-{core}-({dst})"


def explain_plan(plan_: Plan) -> str:
    lines: List[str] = []

    def emit(op: Any, depth: int) -> None:
        pad = "  " * depth
        if isinstance(op, ScanByLabel):
            label = op.label if op.label is not None else "*"
            lines.append(f"{pad}ScanByLabel({label})→{op.est} est.")
        elif isinstance(op, IndexSeek):
            lines.append(
                f"{pad}IndexSeek({op.label}.{op.prop}) {_fmt_value(op.value)} →{op.est} est."
            )
        elif isinstance(op, ExpandAll):
            lines.append(f"{pad}ExpandAll({_rel_glyph(op)})→{op.est} est.")
            emit(op.child, depth + 1)
        elif isinstance(op, Filter):
            lines.append(f"{pad}Filter({' AND '.join(_fmt_pred(p) for p in op.preds)})")
            emit(op.child, depth + 1)
        elif isinstance(op, HashJoin):
            lines.append(
                f"{pad}HashJoin({op.left_key.text()} = {op.right_key.text()})"
            )
            emit(op.left, depth + 1)
            emit(op.right, depth + 1)
        elif isinstance(op, CartesianProduct):
            lines.append(f"{pad}CartesianProduct")
            emit(op.left, depth + 1)
            emit(op.right, depth + 1)
        elif isinstance(op, Aggregate):
            groups = ", ".join(_fmt_item(op.returns[i]) for i in op.group_idx)
            counts = ", ".join(_fmt_item(op.returns[i]) for i in op.count_idx)
            lines.append(f"{pad}Aggregate(group=[{groups}], count=[{counts}])")
            emit(op.child, depth + 1)
        elif isinstance(op, Sort):
            direction = "ASC" if op.order_by.ascending else "DESC"
            lines.append(f"{pad}Sort({op.order_by.expr.text()} {direction})")
            emit(op.child, depth + 1)
        elif isinstance(op, Limit):
            count = op.count if isinstance(op.count, int) else f"${op.count.name}"
            lines.append(f"{pad}Limit({count})")
            emit(op.child, depth + 1)
        elif isinstance(op, Project):
            lines.append(f"{pad}Project({', '.join(_fmt_item(i) for i in op.items)})")
            emit(op.child, depth + 1)
        elif isinstance(op, CreateEdges):
            n_edges = sum(len(p.rels) for p in op.paths)
            lines.append(f"{pad}CreateEdges({n_edges})")
            emit(op.child, depth + 1)
        elif isinstance(op, CreateNodes):
            n_nodes = sum(len(p.nodes) for p in op.paths)
            lines.append(f"{pad}CreateNodes({n_nodes})")
            if op.child is not None:
                emit(op.child, depth + 1)
        else:  # pragma: no cover
            lines.append(f"{pad}{type(op).__name__}")

    emit(plan_.root, 0)
    return "\n".join(lines)


def collect_operators(plan_: Plan) -> List[Any]:
    """Flat operator list, for plan-shape assertions."""
    out: List[Any] = []

    def walk(op: Any) -> None:
        if op is None:
            return
        out.append(op)
        for attr in ("child", "left", "right"):
            if hasattr(op, attr):
                walk(getattr(op, attr))

    walk(plan_.root)
    return out
