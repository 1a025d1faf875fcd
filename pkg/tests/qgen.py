"""Random graph and query generation for differential conformance tests.

Queries are generated only from the supported grammar. LIMIT is emitted
only together with ORDER BY, because without a total order the engines
may legitimately pick different rows.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from kgfed.cypher.values import canon_sort_key
from kgfed.store import Tenant

LABELS = ["A", "B", "C"]
ETYPES = ["R", "S", "T"]
PROPS = ["p", "q", "r"]
STRINGS = ["u", "v", "w", "uv"]
# floats chosen to avoid int/float collisions so group representatives
# cannot differ between engines
FLOATS = [0.5, 1.5, 2.5]
INTS = [0, 1, 2, 3]
LISTS = [["u"], ["v", "w"], ["u", "w"]]


def random_value(rng: random.Random):
    kind = rng.randrange(5)
    if kind == 0:
        return rng.choice(INTS)
    if kind == 1:
        return rng.choice(FLOATS)
    if kind == 2:
        return rng.choice(STRINGS)
    if kind == 3:
        return rng.random() < 0.5
    return list(rng.choice(LISTS))


def random_graph(rng: random.Random, max_nodes: int = 100) -> Tenant:
    tenant = Tenant("fuzz")
    n = rng.randint(0, max_nodes)
    indexed: List[Tuple[str, str]] = []
    for label in LABELS:
        for prop in PROPS:
            if rng.random() < 0.4:
                indexed.append((label, prop))
    with tenant.lock.write():
        for label, prop in indexed:
            tenant._declare_index(label, prop)
        for _ in range(n):
            labels = [rng.choice(LABELS)]
            if rng.random() < 0.15:
                labels.append(rng.choice(LABELS))
            props = {}
            for prop in PROPS:
                if rng.random() < 0.6:
                    props[prop] = random_value(rng)
            tenant._create_node(labels, props)
        if n:
            for _ in range(rng.randint(0, 3 * n)):
                src = rng.randrange(n)
                dst = rng.randrange(n)  # self-loops included
                props = {"w": rng.choice(INTS)} if rng.random() < 0.5 else {}
                tenant._create_edge(src, dst, rng.choice(ETYPES), props)
    return tenant


def _literal_text(value, params: Dict[str, object], rng: random.Random) -> str:
    if isinstance(value, list) or rng.random() < 0.2:
        name = f"p{len(params)}"
        params[name] = value
        return f"${name}"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return "'%s'" % value
    return repr(value)


class _QueryBuilder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.params: Dict[str, object] = {}
        self.vars: List[str] = []
        self.var_count = 0

    def fresh_var(self) -> str:
        name = f"v{self.var_count}"
        self.var_count += 1
        self.vars.append(name)
        return name

    def node_pattern(self, allow_reuse: bool) -> Tuple[str, str]:
        rng = self.rng
        if allow_reuse and self.vars and rng.random() < 0.2:
            var = rng.choice(self.vars)
            # re-occurrence: mostly bare, sometimes with an extra label check
            if rng.random() < 0.3:
                return f"({var}:{rng.choice(LABELS)})", var
            return f"({var})", var
        var = self.fresh_var()
        parts = var
        if rng.random() < 0.75:
            label = rng.choice(LABELS + ["Zed"])  # sometimes unknown label
            parts += f":{label}"
        if rng.random() < 0.3:
            prop = rng.choice(PROPS)
            value = random_value(rng)
            parts += " {%s: %s}" % (prop, _literal_text(value, self.params, rng))
        return f"({parts})", var

    def rel_pattern(self) -> str:
        rng = self.rng
        etype = rng.choice(ETYPES)
        hops = ""
        if rng.random() < 0.18:
            lo = rng.randint(1, 2)
            hi = rng.randint(lo, 3)
            hops = f"*{lo}..{hi}"
        core = f"[:{etype}{hops}]"
        roll = rng.random()
        if roll < 0.45:
            return f"-{core}->"
        if roll < 0.75:
            return f"<-{core}-"
        return f"-{core}-"

    def pattern(self, first: bool) -> str:
        rng = self.rng
        n_nodes = rng.randint(1, 3)
        text, _ = self.node_pattern(allow_reuse=not first)
        for _ in range(n_nodes - 1):
            node, _ = self.node_pattern(allow_reuse=True)
            text += self.rel_pattern() + node
        return text

    def comparison(self) -> str:
        rng = self.rng
        left = f"{rng.choice(self.vars)}.{rng.choice(PROPS)}"
        op = rng.choice(["=", "=", "<>", "<", "<=", ">", ">=", "CONTAINS", "STARTS WITH"])
        if rng.random() < 0.5:
            right = f"{rng.choice(self.vars)}.{rng.choice(PROPS)}"
        else:
            right = _literal_text(random_value(rng), self.params, rng)
        return f"{left} {op} {right}"

    def build(self) -> Tuple[str, Dict[str, object]]:
        rng = self.rng
        n_patterns = rng.randint(1, 3)
        patterns = [self.pattern(first=(i == 0)) for i in range(n_patterns)]
        text = "MATCH " + ", ".join(patterns[:1])
        for extra in patterns[1:]:
            if rng.random() < 0.5:
                text += ", " + extra
            else:
                text += " MATCH " + extra
        clauses = []
        n_where = rng.choice([0, 0, 1, 1, 2, 3])
        for _ in range(n_where):
            clauses.append(self.comparison())
        if clauses:
            text += " WHERE " + " AND ".join(clauses)

        aggregate = rng.random() < 0.3
        items = []
        aliases = []
        n_items = rng.randint(1, 3)
        for i in range(n_items):
            roll = rng.random()
            if aggregate and i == n_items - 1:
                arg = rng.choice(["*", rng.choice(self.vars), f"{rng.choice(self.vars)}.{rng.choice(PROPS)}"])
                expr = f"count({arg})"
            elif roll < 0.6:
                expr = f"{rng.choice(self.vars)}.{rng.choice(PROPS)}"
            else:
                expr = rng.choice(self.vars)
            if rng.random() < 0.4:
                alias = f"a{i}"
                items.append(f"{expr} AS {alias}")
                aliases.append((alias, expr))
            else:
                items.append(expr)
                aliases.append((None, expr))
        text += " RETURN " + ", ".join(items)

        if rng.random() < 0.45:
            alias, expr = rng.choice(aliases)
            target = alias if alias else expr
            text += f" ORDER BY {target}"
            if rng.random() < 0.5:
                text += rng.choice([" ASC", " DESC"])
            if rng.random() < 0.6:
                text += f" LIMIT {rng.randint(0, 5)}"
        return text, self.params


def random_query(rng: random.Random) -> Tuple[str, Dict[str, object]]:
    return _QueryBuilder(rng).build()


def random_join_query(rng: random.Random) -> Tuple[str, Dict[str, object]]:
    """Two disjoint patterns linked by a cross-pattern property equality,
    so the planner must produce a HashJoin."""
    builder = _QueryBuilder(rng)
    left = builder.pattern(first=True)
    left_vars = list(builder.vars)
    builder.vars = []
    right = builder.pattern(first=True)
    right_vars = list(builder.vars)
    builder.vars = left_vars + right_vars
    lv, rv = rng.choice(left_vars), rng.choice(right_vars)
    cross = f"{lv}.{rng.choice(PROPS)} = {rv}.{rng.choice(PROPS)}"
    clauses = [cross]
    if rng.random() < 0.4:
        clauses.append(builder.comparison())
    returns = f"{lv}.{rng.choice(PROPS)}, {rv}.{rng.choice(PROPS)}"
    text = f"MATCH {left} MATCH {right} WHERE {' AND '.join(clauses)} RETURN {returns}"
    return text, builder.params


def random_create_query(rng: random.Random) -> Tuple[str, Dict[str, object]]:
    builder = _QueryBuilder(rng)
    text = ""
    if rng.random() < 0.5:
        text = "MATCH " + builder.pattern(first=True) + " "
    creates = []
    scope_vars = []
    for _ in range(rng.randint(1, 2)):
        var = builder.fresh_var()
        scope_vars.append(var)
        label = rng.choice(LABELS)
        prop_txt = ""
        if rng.random() < 0.7:
            prop = rng.choice(PROPS)
            prop_txt = " {%s: %s}" % (prop, _literal_text(random_value(rng), builder.params, rng))
        node = f"({var}:{label}{prop_txt})"
        if builder.vars[:-1] and rng.random() < 0.6:
            anchor = rng.choice(builder.vars[:-1])
            etype = rng.choice(ETYPES)
            arrow = rng.choice([f"-[:{etype}]->", f"<-[:{etype}]-"])
            creates.append(f"({anchor}){arrow}{node}")
        else:
            creates.append(node)
    text += "CREATE " + ", ".join(creates)
    return text, builder.params


def result_bag(table) -> List[Tuple]:
    return sorted(tuple(canon_sort_key(v) for v in row) for row in table.rows)


def result_sequence(table) -> List[Tuple]:
    return [tuple(canon_sort_key(v) for v in row) for row in table.rows]
