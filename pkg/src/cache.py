"""
Memoization cache for the recursive classifiers.

Results are stored per canonical key together with a representative graph.
A hit on an isomorphic (but differently labeled) graph transports the stored
certificate through the isomorphism, so callers always receive a result in
their own labels.
"""
import logging
import threading
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Optional, Tuple

from graph_core import CanonicalForm, Graph, canonical_form, isomorphism

logger = logging.getLogger(__name__)


@dataclass
class CacheEntry:
    """A cached result with the graph it was computed for."""
    graph: Graph
    order: Optional[Tuple[int, ...]]
    result: Any


def transport(result: Any, mapping: Dict[int, int]) -> Any:
    """Relabel a cached result through a vertex map (values without labels pass through)."""
    if all(k == v for k, v in mapping.items()):
        return result
    relabel = getattr(result, "relabel", None)
    return relabel(mapping) if relabel is not None else result


class ClassificationCache:
    """Thread-safe map from (kind, canonical key) to verified results."""

    def __init__(self, max_entries: int = 250_000):
        """
        Initialize the cache.

        Args:
            max_entries: Entry count at which the cache is flushed
        """
        self.max_entries = max_entries
        self._lock = threading.Lock()
        self._buckets: Dict[Tuple[str, Hashable], List[CacheEntry]] = {}
        self._values: Dict[Tuple[str, Hashable], Any] = {}
        self._size = 0
        self.hits = 0
        self.misses = 0

    def lookup(self, kind: str, graph: Graph, form: Optional[CanonicalForm] = None) -> Optional[Any]:
        """
        Find a cached result for a graph isomorphic to the given one.

        Args:
            kind: Result family, e.g. "contractible" or "sphere"
            graph: Graph being classified
            form: Precomputed canonical form of graph

        Returns:
            The cached result relabeled into graph's labels, or None
        """
        form = form or canonical_form(graph)
        with self._lock:
            bucket = list(self._buckets.get((kind, form.key), ()))

        for entry in bucket:
            mapping = self._match(entry, graph, form)
            if mapping is not None:
                with self._lock:
                    self.hits += 1
                return transport(entry.result, mapping)

        with self._lock:
            self.misses += 1
        return None

    def store(self, kind: str, graph: Graph, result: Any, form: Optional[CanonicalForm] = None) -> None:
        """Record a result for a graph."""
        form = form or canonical_form(graph)
        with self._lock:
            if self._size >= self.max_entries:
                logger.warning(f"Classification cache reached {self._size} entries, flushing")
                self._buckets.clear()
                self._values.clear()
                self._size = 0
            bucket = self._buckets.setdefault((kind, form.key), [])
            if any(entry.graph == graph for entry in bucket):
                return
            bucket.append(CacheEntry(graph, form.order, result))
            self._size += 1

    def get_value(self, kind: str, key: Hashable) -> Optional[Any]:
        """Fetch a label-free value (e.g. a dimension) stored under an exact key."""
        with self._lock:
            return self._values.get((kind, key))

    def put_value(self, kind: str, key: Hashable, value: Any) -> None:
        with self._lock:
            self._values[(kind, key)] = value

    def clear(self) -> None:
        with self._lock:
            self._buckets.clear()
            self._values.clear()
            self._size = 0
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return self._size + len(self._values)

    @staticmethod
    def _match(entry: CacheEntry, graph: Graph, form: CanonicalForm) -> Optional[Dict[int, int]]:
        if entry.graph == graph:
            return {v: v for v in graph.vertices}
        if entry.order is not None and form.order is not None:
            return dict(zip(entry.order, form.order))
        # Hashed keys may collide, verify with an explicit isomorphism
        mapping = isomorphism(entry.graph, graph)
        if mapping is None:
            logger.debug(f"Canonical hash collision between {entry.graph!r} and {graph!r}")
        return mapping
