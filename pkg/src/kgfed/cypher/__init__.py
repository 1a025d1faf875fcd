"""Cypher-subset query pipeline: parse -> plan -> execute.

The grammar covers read queries (MATCH/WHERE/RETURN/ORDER BY/LIMIT with
count() aggregation and bounded variable-length relationships) and write
queries ((MATCH)* CREATE). Cross-pattern property equalities plan as hash
joins; equality lookups on indexed properties plan as index seeks.
"""

from .parser import parse
from .planner import plan
from .executor import execute, execute_text, explain, ResultTable
from .reference import reference_execute

__all__ = [
    "parse",
    "plan",
    "execute",
    "execute_text",
    "explain",
    "reference_execute",
    "ResultTable",
]
