"""Value semantics shared by the executor and the reference interpreter.

These rules are definitional for the query language (both execution paths
must implement the same ones):

- ``=`` compares int and float numerically; bool never equals a number.
- ``=`` between a string-list property and a scalar matches on any element.
- Ordering comparisons apply within numbers and within strings; any other
  combination (and any comparison against a missing value) is false.
- CONTAINS / STARTS WITH apply to strings only.
- Sort keys impose a total order across mixed types:
  null < bool < number < string < list < node, with int before float on
  exact numeric ties so output is engine-independent.
"""

from __future__ import annotations

from typing import Any, Tuple

from ..store import values_equal


class NodeVal:
    """A whole-node projection value (graph identity + content snapshot)."""

    __slots__ = ("id", "labels", "properties")

    def __init__(self, id: int, labels: Tuple[str, ...], properties: dict):
        self.id = id
        self.labels = labels
        self.properties = properties

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "labels": list(self.labels),
            "properties": self.properties,
        }

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"NodeVal({self.id})"


def eq_compare(a: Any, b: Any) -> bool:
    if a is None or b is None:
        return False
    if isinstance(a, list) and not isinstance(b, list):
        return any(values_equal(el, b) for el in a)
    if isinstance(b, list) and not isinstance(a, list):
        return any(values_equal(el, a) for el in b)
    return values_equal(a, b)


def _comparable(a: Any, b: Any) -> bool:
    a_bool, b_bool = isinstance(a, bool), isinstance(b, bool)
    if a_bool or b_bool:
        return a_bool and b_bool
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return True
    return isinstance(a, str) and isinstance(b, str)


def apply_comparison(op: str, a: Any, b: Any) -> bool:
    """Three-valued leniency collapsed to false: missing values and type
    mismatches never satisfy a predicate."""
    if a is None or b is None:
        return False
    if op == "=":
        return eq_compare(a, b)
    if op == "<>":
        if isinstance(a, list) or isinstance(b, list):
            return isinstance(a, list) and isinstance(b, list) and not values_equal(a, b)
        return _comparable(a, b) and not values_equal(a, b)
    if op == "CONTAINS":
        return isinstance(a, str) and isinstance(b, str) and b in a
    if op == "STARTS_WITH":
        return isinstance(a, str) and isinstance(b, str) and a.startswith(b)
    # < <= > >= : numbers with numbers, strings with strings; bools are not ordered
    if isinstance(a, bool) or isinstance(b, bool):
        return False
    ok = (isinstance(a, (int, float)) and isinstance(b, (int, float))) or (
        isinstance(a, str) and isinstance(b, str)
    )
    if not ok:
        return False
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(f"unknown operator {op!r}")


def canon_sort_key(value: Any) -> Tuple:
    """Total order over result values for ORDER BY and tie-breaking."""
    if value is None:
        return (0,)
    if isinstance(value, bool):
        return (1, value)
    if isinstance(value, int):
        return (2, value, 0)
    if isinstance(value, float):
        return (2, value, 1)
    if isinstance(value, str):
        return (3, value)
    if isinstance(value, list):
        return (4, tuple(canon_sort_key(el) for el in value))
    if isinstance(value, NodeVal):
        return (5, value.id)
    return (6, repr(value))


def row_sort_key(row: Tuple) -> Tuple:
    return tuple(canon_sort_key(v) for v in row)


def group_key(value: Any) -> Any:
    """Hashable grouping key; numerically equal int/float share a group."""
    if value is None:
        return ("null",)
    if isinstance(value, bool):
        return ("b", value)
    if isinstance(value, (int, float)):
        return ("n", value)
    if isinstance(value, str):
        return ("s", value)
    if isinstance(value, list):
        return ("l", tuple(value))
    if isinstance(value, NodeVal):
        return ("node", value.id)
    return ("x", repr(value))


def join_build_keys(value: Any) -> list:
    """Hash keys a build-side value is registered under (see probe keys)."""
    if value is None:
        return []
    if isinstance(value, list):
        keys = [("l", tuple(value))]
        keys.extend(("le", el) for el in set(value))
        return keys
    return [_scalar_key(value)]


def join_probe_keys(value: Any) -> list:
    """Hash keys a probe-side value looks up. String probes also check
    list-element entries; list probes also check scalar-string entries, so
    hash-join matching is exactly eq_compare with no false pairs. (List
    elements are always strings, so numeric probes never match them.)"""
    if value is None:
        return []
    if isinstance(value, list):
        keys = [("l", tuple(value))]
        keys.extend(("s", el) for el in set(value))
        return keys
    key = _scalar_key(value)
    if key[0] == "s":
        return [key, ("le", value)]
    return [key]


def _scalar_key(value: Any):
    if isinstance(value, bool):
        return ("b", value)
    if isinstance(value, (int, float)):
        return ("n", value)
    return ("s", value)
