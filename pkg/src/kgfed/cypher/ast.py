"""Query AST produced by the parser and consumed by planner/executors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Set, Union


# -- operands ----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Literal:
    value: Any  # str | int | float | bool


@dataclass(frozen=True, slots=True)
class Param:
    name: str


@dataclass(frozen=True, slots=True)
class PropRef:
    var: str
    key: str

    def text(self) -> str:
        return f"{self.var}.{self.key}"


@dataclass(frozen=True, slots=True)
class VarRef:
    name: str

    def text(self) -> str:
        return self.name


Operand = Union[Literal, Param, PropRef]


# -- patterns ----------------------------------------------------------------

@dataclass(slots=True)
class NodePattern:
    var: Optional[str]          # None for anonymous nodes until parser names them
    label: Optional[str]
    props: dict                 # key -> Literal | Param
    anonymous: bool = False
    line: int = 0
    column: int = 0


@dataclass(slots=True)
class RelPattern:
    etype: str
    direction: str              # "out" | "in" | "both"
    min_len: int = 1
    max_len: int = 1
    var_length: bool = False
    props: dict = field(default_factory=dict)  # CREATE patterns only
    line: int = 0
    column: int = 0


@dataclass(slots=True)
class PatternPath:
    """Alternating chain: node, rel, node, rel, node ..."""

    nodes: List[NodePattern]
    rels: List[RelPattern]

    def variables(self) -> Set[str]:
        return {n.var for n in self.nodes if n.var is not None}


# -- where / return ----------------------------------------------------------

@dataclass(slots=True)
class Comparison:
    left: Operand
    op: str                     # = <> < <= > >= CONTAINS STARTS_WITH
    right: Operand
    line: int = 0
    column: int = 0

    def variables(self) -> Set[str]:
        out = set()
        for side in (self.left, self.right):
            if isinstance(side, PropRef):
                out.add(side.var)
        return out


@dataclass(slots=True)
class CountExpr:
    arg: Union[str, VarRef, PropRef]  # "*" or a reference

    def text(self) -> str:
        if self.arg == "*":
            return "count(*)"
        return f"count({self.arg.text()})"


@dataclass(slots=True)
class ReturnItem:
    expr: Union[PropRef, VarRef, CountExpr]
    alias: Optional[str] = None
    line: int = 0
    column: int = 0

    @property
    def is_aggregate(self) -> bool:
        return isinstance(self.expr, CountExpr)

    @property
    def column_name(self) -> str:
        return self.alias if self.alias is not None else self.expr.text()


@dataclass(slots=True)
class OrderBy:
    expr: Union[PropRef, VarRef, CountExpr]
    ascending: bool = True


# -- query -------------------------------------------------------------------

@dataclass(slots=True)
class Query:
    matches: List[PatternPath] = field(default_factory=list)
    where: List[Comparison] = field(default_factory=list)
    returns: List[ReturnItem] = field(default_factory=list)
    order_by: Optional[OrderBy] = None
    limit: Optional[Union[int, Param]] = None
    creates: List[PatternPath] = field(default_factory=list)
    params: Set[str] = field(default_factory=set)

    @property
    def is_create(self) -> bool:
        return bool(self.creates)

    def match_variables(self) -> Set[str]:
        out: Set[str] = set()
        for path in self.matches:
            out.update(path.variables())
        return out
