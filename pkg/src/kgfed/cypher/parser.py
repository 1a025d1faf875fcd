"""Hand-rolled lexer and recursive-descent parser for the query subset.

Keywords are case-insensitive; ``--`` and ``//`` start line comments
outside string literals; strings are single-quoted with ``\\'`` escapes.
Errors carry 1-based line:column plus the token set that was expected.
"""

from __future__ import annotations

from typing import Any, List, Set, Union

from ..errors import CypherSyntaxError
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
    RelPattern,
    ReturnItem,
    VarRef,
)

KEYWORDS = {
    "MATCH",
    "WHERE",
    "RETURN",
    "ORDER",
    "BY",
    "ASC",
    "DESC",
    "LIMIT",
    "CREATE",
    "AND",
    "CONTAINS",
    "STARTS",
    "WITH",
    "COUNT",
    "AS",
    "TRUE",
    "FALSE",
}

MAX_VAR_LENGTH = 8

_PUNCT_2 = {"<=", ">=", "<>", ".."}
_PUNCT_1 = set("()[]{}:,.<>=*-")


class Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind: str, value: Any, line: int, column: int):
        self.kind = kind  # KW IDENT STRING INT FLOAT PARAM PUNCT EOF
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Token({self.kind},{self.value!r}@{self.line}:{self.column})"


def _error(message: str, line: int, column: int, expected=()) -> CypherSyntaxError:
    return CypherSyntaxError(message, line, column, expected)


class UnboundVariableError(CypherSyntaxError):
    code = "unbound-variable"


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        two = text[i : i + 2]
        if two == "--" or two == "//":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "'":
            start_line, start_col = line, col
            i += 1
            col += 1
            out = []
            closed = False
            while i < n:
                c = text[i]
                if c == "\\" and i + 1 < n:
                    nxt = text[i + 1]
                    out.append({"'": "'", "\\": "\\", "n": "\n", "t": "\t"}.get(nxt, nxt))
                    i += 2
                    col += 2
                    continue
                if c == "'":
                    i += 1
                    col += 1
                    closed = True
                    break
                if c == "\n":
                    break
                out.append(c)
                i += 1
                col += 1
            if not closed:
                raise _error("unterminated string literal", start_line, start_col, ("'",))
            tokens.append(Token("STRING", "".join(out), start_line, start_col))
            continue
        if ch == "$":
            start_col = col
            i += 1
            col += 1
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i:
                raise _error("expected parameter name after '$'", line, start_col, ("identifier",))
            tokens.append(Token("PARAM", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            start_col = col
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            # a '..' after digits belongs to a length range, not a float
            if j < n and text[j] == "." and not (j + 1 < n and text[j + 1] == "."):
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            raw = text[i:j]
            tokens.append(
                Token("FLOAT" if is_float else "INT", float(raw) if is_float else int(raw), line, start_col)
            )
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            start_col = col
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            upper = word.upper()
            if upper in KEYWORDS:
                tokens.append(Token("KW", upper, line, start_col))
            else:
                tokens.append(Token("IDENT", word, line, start_col))
            col += j - i
            i = j
            continue
        if two in _PUNCT_2:
            tokens.append(Token("PUNCT", two, line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT_1:
            tokens.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        raise _error(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", None, line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.anon_count = 0
        self.params: Set[str] = set()

    # -- token helpers --

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.value == value

    def at_kw(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "KW" and tok.value == value

    def expect_punct(self, value: str) -> Token:
        if not self.at_punct(value):
            tok = self.peek()
            raise _error(f"expected {value!r}", tok.line, tok.column, (value,))
        return self.advance()

    def expect_kw(self, value: str) -> Token:
        if not self.at_kw(value):
            tok = self.peek()
            raise _error(f"expected {value}", tok.line, tok.column, (value,))
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise _error(f"expected {what}", tok.line, tok.column, ("identifier",))
        return self.advance()

    def fail(self, message: str, expected=()):
        tok = self.peek()
        raise _error(message, tok.line, tok.column, expected)

    # -- grammar --

    def parse_query(self) -> Query:
        query = Query()
        if not (self.at_kw("MATCH") or self.at_kw("CREATE")):
            self.fail("query must start with MATCH or CREATE", ("MATCH", "CREATE"))
        while self.at_kw("MATCH"):
            self.advance()
            query.matches.append(self.parse_pattern(create=False))
            while self.at_punct(","):
                self.advance()
                query.matches.append(self.parse_pattern(create=False))
        if self.at_kw("CREATE"):
            self.advance()
            query.creates.append(self.parse_pattern(create=True))
            while self.at_punct(","):
                self.advance()
                query.creates.append(self.parse_pattern(create=True))
            self.expect_eof()
            self.check_create(query)
            query.params = self.params
            return query
        if not query.matches:
            self.fail("query must start with MATCH or CREATE", ("MATCH", "CREATE"))
        if self.at_kw("WHERE"):
            self.advance()
            query.where.append(self.parse_comparison())
            while self.at_kw("AND"):
                self.advance()
                query.where.append(self.parse_comparison())
        self.expect_kw("RETURN")
        query.returns.append(self.parse_return_item())
        while self.at_punct(","):
            self.advance()
            query.returns.append(self.parse_return_item())
        if self.at_kw("ORDER"):
            self.advance()
            self.expect_kw("BY")
            expr = self.parse_value_expr("ORDER BY expression")
            ascending = True
            if self.at_kw("ASC"):
                self.advance()
            elif self.at_kw("DESC"):
                self.advance()
                ascending = False
            query.order_by = OrderBy(expr, ascending)
        if self.at_kw("LIMIT"):
            self.advance()
            tok = self.peek()
            if tok.kind == "INT":
                self.advance()
                query.limit = tok.value
            elif tok.kind == "PARAM":
                self.advance()
                self.params.add(tok.value)
                query.limit = Param(tok.value)
            else:
                self.fail("LIMIT expects a non-negative integer or parameter", ("integer", "$param"))
        self.expect_eof()
        self.check_read(query)
        query.params = self.params
        return query

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.kind != "EOF":
            shown = tok.value if tok.value is not None else tok.kind
            raise _error(f"unexpected {shown!r}", tok.line, tok.column, ("end of query",))

    # -- patterns --

    def parse_pattern(self, create: bool) -> PatternPath:
        nodes = [self.parse_node_pattern()]
        rels: List[RelPattern] = []
        while self.at_punct("-") or self.at_punct("<"):
            rels.append(self.parse_rel_pattern(create))
            nodes.append(self.parse_node_pattern())
        return PatternPath(nodes, rels)

    def parse_node_pattern(self) -> NodePattern:
        open_tok = self.expect_punct("(")
        var = None
        anonymous = False
        if self.peek().kind == "IDENT":
            var = self.advance().value
        label = None
        if self.at_punct(":"):
            self.advance()
            label = self.expect_ident("label name").value
        props = {}
        if self.at_punct("{"):
            props = self.parse_prop_map()
        self.expect_punct(")")
        if var is None:
            # NUL prefix keeps generated names out of the identifier space
            var = f"\x00anon{self.anon_count}"
            self.anon_count += 1
            anonymous = True
        return NodePattern(var, label, props, anonymous, open_tok.line, open_tok.column)

    def parse_rel_pattern(self, create: bool) -> RelPattern:
        start = self.peek()
        incoming = False
        if self.at_punct("<"):
            self.advance()
            incoming = True
        self.expect_punct("-")
        self.expect_punct("[")
        self.expect_punct(":")
        etype = self.expect_ident("relationship type").value
        min_len, max_len, var_length = 1, 1, False
        if self.at_punct("*"):
            star = self.advance()
            lo = self.peek()
            if lo.kind != "INT":
                self.fail("expected lower bound after '*'", ("integer",))
            self.advance()
            self.expect_punct("..")
            hi = self.peek()
            if hi.kind != "INT":
                self.fail("expected upper bound after '..'", ("integer",))
            self.advance()
            min_len, max_len, var_length = lo.value, hi.value, True
            if min_len < 1 or max_len < min_len:
                raise _error(
                    f"invalid length bounds *{min_len}..{max_len}", star.line, star.column
                )
            if max_len > MAX_VAR_LENGTH:
                raise _error(
                    f"length bound {max_len} exceeds the maximum of {MAX_VAR_LENGTH}",
                    star.line,
                    star.column,
                )
        props = {}
        if self.at_punct("{"):
            if not create:
                self.fail("relationship properties are only supported in CREATE")
            props = self.parse_prop_map()
        self.expect_punct("]")
        if incoming:
            self.expect_punct("-")
            direction = "in"
        else:
            self.expect_punct("-")
            if self.at_punct(">"):
                self.advance()
                direction = "out"
            else:
                direction = "both"
        return RelPattern(etype, direction, min_len, max_len, var_length, props, start.line, start.column)

    def parse_prop_map(self) -> dict:
        self.expect_punct("{")
        props = {}
        while True:
            key_tok = self.peek()
            if key_tok.kind != "IDENT":
                self.fail("expected property name", ("identifier",))
            self.advance()
            self.expect_punct(":")
            props[key_tok.value] = self.parse_literal_or_param()
            if self.at_punct(","):
                self.advance()
                continue
            break
        self.expect_punct("}")
        return props

    def parse_literal_or_param(self) -> Union[Literal, Param]:
        tok = self.peek()
        if tok.kind == "STRING":
            self.advance()
            return Literal(tok.value)
        if tok.kind in ("INT", "FLOAT"):
            self.advance()
            return Literal(tok.value)
        if tok.kind == "PUNCT" and tok.value == "-" and self.peek(1).kind in ("INT", "FLOAT"):
            self.advance()
            num = self.advance()
            return Literal(-num.value)
        if tok.kind == "KW" and tok.value in ("TRUE", "FALSE"):
            self.advance()
            return Literal(tok.value == "TRUE")
        if tok.kind == "PARAM":
            self.advance()
            self.params.add(tok.value)
            return Param(tok.value)
        self.fail("expected a literal or parameter", ("string", "number", "true", "false", "$param"))

    # -- where --

    def parse_operand(self):
        tok = self.peek()
        if tok.kind == "IDENT":
            self.advance()
            self.expect_punct(".")
            key = self.expect_ident("property name").value
            return PropRef(tok.value, key)
        return self.parse_literal_or_param()

    def parse_comparison(self) -> Comparison:
        start = self.peek()
        left = self.parse_operand()
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.value in ("=", "<>", "<", "<=", ">", ">="):
            self.advance()
            op = tok.value
        elif tok.kind == "KW" and tok.value == "CONTAINS":
            self.advance()
            op = "CONTAINS"
        elif tok.kind == "KW" and tok.value == "STARTS":
            self.advance()
            self.expect_kw("WITH")
            op = "STARTS_WITH"
        else:
            self.fail(
                "expected a comparison operator",
                ("=", "<>", "<", "<=", ">", ">=", "CONTAINS", "STARTS WITH"),
            )
        right = self.parse_operand()
        return Comparison(left, op, right, start.line, start.column)

    # -- return --

    def parse_value_expr(self, what: str):
        tok = self.peek()
        if tok.kind == "KW" and tok.value == "COUNT":
            self.advance()
            self.expect_punct("(")
            inner: Union[str, VarRef, PropRef]
            if self.at_punct("*"):
                self.advance()
                inner = "*"
            else:
                name = self.expect_ident("variable").value
                if self.at_punct("."):
                    self.advance()
                    key = self.expect_ident("property name").value
                    inner = PropRef(name, key)
                else:
                    inner = VarRef(name)
            self.expect_punct(")")
            return CountExpr(inner)
        if tok.kind == "IDENT":
            self.advance()
            if self.at_punct("."):
                self.advance()
                key = self.expect_ident("property name").value
                return PropRef(tok.value, key)
            return VarRef(tok.value)
        self.fail(f"expected {what}", ("identifier", "COUNT"))

    def parse_return_item(self) -> ReturnItem:
        start = self.peek()
        expr = self.parse_value_expr("a return item")
        alias = None
        if self.at_kw("AS"):
            self.advance()
            alias = self.expect_ident("alias").value
        return ReturnItem(expr, alias, start.line, start.column)

    # -- semantic checks --

    def check_read(self, query: Query) -> None:
        declared = query.match_variables()
        for cmp_ in query.where:
            for side in (cmp_.left, cmp_.right):
                if isinstance(side, PropRef) and side.var not in declared:
                    raise UnboundVariableError(
                        f"unbound variable {side.var!r} in WHERE", cmp_.line, cmp_.column
                    )
        aliases = {item.alias for item in query.returns if item.alias}
        for item in query.returns:
            self._check_expr_bound(item.expr, declared, set(), item.line, item.column)
        if query.order_by is not None:
            self._check_expr_bound(query.order_by.expr, declared, aliases, 0, 0)

    def _check_expr_bound(self, expr, declared: Set[str], aliases: Set[str], line: int, column: int) -> None:
        if isinstance(expr, PropRef):
            if expr.var not in declared:
                raise UnboundVariableError(f"unbound variable {expr.var!r}", line, column)
        elif isinstance(expr, VarRef):
            if expr.name not in declared and expr.name not in aliases:
                raise UnboundVariableError(f"unbound variable {expr.name!r}", line, column)
        elif isinstance(expr, CountExpr) and expr.arg != "*":
            self._check_expr_bound(expr.arg, declared, set(), line, column)

    def check_create(self, query: Query) -> None:
        bound = query.match_variables()
        created: Set[str] = set()
        for path in query.creates:
            for rel in path.rels:
                if rel.direction == "both":
                    raise _error(
                        "CREATE relationships must be directed", rel.line, rel.column
                    )
                if rel.var_length:
                    raise _error(
                        "CREATE relationships cannot be variable-length", rel.line, rel.column
                    )
            for node in path.nodes:
                if node.var in bound or node.var in created:
                    if node.label is not None or node.props:
                        raise _error(
                            f"variable {node.var!r} is already bound; "
                            "it cannot take a label or properties here",
                            node.line,
                            node.column,
                        )
                else:
                    if node.label is None:
                        raise _error(
                            "CREATE nodes require a label", node.line, node.column
                        )
                    if not node.anonymous:
                        created.add(node.var)


def parse(text: str) -> Query:
    """Parse query text into an AST; raises CypherSyntaxError on failure."""
    if not isinstance(text, str) or not text.strip():
        raise CypherSyntaxError("empty query", 1, 1, ("MATCH", "CREATE"))
    return _Parser(text).parse_query()
