"""Cross-source deduplication registry.

Maps (label, key property, key value) to the node id created for that
entity, so an entity loaded in one phase is never re-created when a later
phase encounters the same key. Properties supplied on later calls merge
only for keys absent on the node (first writer wins).

The registry is confined to a single load job and assumes its callers
hold the tenant write lock (both loaders do).
"""

from __future__ import annotations

from typing import Any, Dict, Iterable, Optional, Tuple

from ..errors import EmptyKeyError
from ..store import Tenant


class DedupRegistry:
    def __init__(self) -> None:
        self._ids: Dict[Tuple[str, str, Any], int] = {}
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def lookups(self) -> int:
        return self.hits + self.misses

    def get_or_create(
        self,
        tenant: Tenant,
        label: str,
        key_property: str,
        key_value: Any,
        properties: Optional[Dict[str, Any]] = None,
        indexed: Iterable[str] = (),
    ) -> Tuple[int, bool]:
        """Return (node id, created). Creates and indexes on first sight."""
        if key_value is None or key_value == "":
            raise EmptyKeyError(f"empty key for {label}.{key_property}")
        key = (label, key_property, key_value)
        nid = self._ids.get(key)
        if nid is not None:
            self.hits += 1
            if properties:
                tenant._merge_properties(nid, properties)
            return nid, False
        self.misses += 1
        props = dict(properties or {})
        props.setdefault(key_property, key_value)
        nid = tenant._create_node([label], props, indexed)
        self._ids[key] = nid
        return nid, True

    # -- key tracking without node creation (HTTP loader) --

    def contains(self, label: str, key_property: str, key_value: Any) -> bool:
        return (label, key_property, key_value) in self._ids

    def register(self, label: str, key_property: str, key_value: Any, nid: int = -1) -> None:
        if key_value is None or key_value == "":
            raise EmptyKeyError(f"empty key for {label}.{key_property}")
        self._ids[(label, key_property, key_value)] = nid
