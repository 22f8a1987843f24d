"""
Finite simple graphs and the basic operations every other module builds on.

Graphs are immutable. Vertices are non-negative integers and every iteration
order (vertices, edges, cliques, components) is sorted so that certificates
built on top of these operations replay byte-for-byte.
"""
import logging
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from errors import GraphInputError

logger = logging.getLogger(__name__)

# Exact canonical labeling is used up to this many vertices
EXACT_CANONICAL_LIMIT = 12
# Individualization-refinement leaves explored before falling back to hashing
CANONICAL_LEAF_LIMIT = 50000
WL_ITERATIONS = 4

Rational = Fraction
Edge = Tuple[int, int]


class Simplex(tuple):
    """
    A complete subgraph given as a strictly increasing vertex tuple.

    Simplex compares and hashes like the plain tuple of its vertices, so it
    can be used interchangeably with tuples as a dictionary key.
    """

    def __new__(cls, vertices: Iterable[int] = ()):
        ordered = tuple(sorted(vertices))
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise GraphInputError(f"Simplex has repeated vertex {a}")
        return super().__new__(cls, ordered)

    @classmethod
    def of(cls, host: "Graph", vertices: Iterable[int]) -> "Simplex":
        """
        Build a simplex and check it against a host graph.

        Raises:
            GraphInputError: If a vertex is unknown or two vertices are not adjacent
        """
        simplex = cls(vertices)
        for v in simplex:
            host.require_vertex(v)
        for u, v in combinations(simplex, 2):
            if not host.has_edge(u, v):
                raise GraphInputError(f"Vertices {u} and {v} of {tuple(simplex)} are not adjacent")
        return simplex

    @property
    def dimension(self) -> int:
        return len(self) - 1

    def faces(self) -> List["Simplex"]:
        """Codimension-one faces in lexicographic order."""
        if len(self) <= 1:
            return []
        return sorted(Simplex(face) for face in combinations(self, len(self) - 1))

    def is_face_of(self, other: Sequence[int]) -> bool:
        return set(self).issubset(other)

    def __repr__(self) -> str:
        return f"Simplex{tuple(self)}"


class Graph:
    """Immutable finite simple graph on non-negative integer labels."""

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Sequence[int]] = ()):
        """
        Build a graph.

        Args:
            vertices: Vertex labels
            edges: Pairs of declared vertex labels

        Raises:
            GraphInputError: On self-loops, undeclared endpoints or bad labels
        """
        labels = set()
        for v in vertices:
            labels.add(_check_label(v))

        adjacency: Dict[int, set] = {v: set() for v in labels}
        for edge in edges:
            if len(edge) != 2:
                raise GraphInputError(f"Edge {edge!r} must have exactly two endpoints")
            u, v = _check_label(edge[0]), _check_label(edge[1])
            if u == v:
                raise GraphInputError(f"Self-loop at vertex {u}")
            if u not in adjacency or v not in adjacency:
                raise GraphInputError(f"Edge ({u}, {v}) references an undeclared vertex")
            adjacency[u].add(v)
            adjacency[v].add(u)

        self._vertices: Tuple[int, ...] = tuple(sorted(labels))
        self._adj: Dict[int, FrozenSet[int]] = {v: frozenset(adjacency[v]) for v in self._vertices}

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> "Graph":
        """Build a graph whose vertex set is the given vertices plus all edge endpoints."""
        edges = [tuple(e) for e in edges]
        labels = set(vertices)
        for edge in edges:
            labels.update(edge)
        return cls(labels, edges)

    # Basic accessors

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self._vertices

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted((u, v) for u in self._vertices for v in self._adj[u] if u < v))

    def neighbors(self, x: int) -> FrozenSet[int]:
        self.require_vertex(x)
        return self._adj[x]

    def degree(self, x: int) -> int:
        return len(self.neighbors(x))

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def has_vertex(self, x: int) -> bool:
        return x in self._adj

    def require_vertex(self, x: int) -> None:
        if x not in self._adj:
            raise GraphInputError(f"Unknown vertex {x!r}")

    def is_empty(self) -> bool:
        return not self._vertices

    def __contains__(self, x: object) -> bool:
        return x in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._vertices)

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self._vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph(v={len(self._vertices)}, e={len(self.edges)})"

    # Derived graphs

    def induced(self, vertices: Iterable[int]) -> "Graph":
        keep = set(vertices)
        for v in keep:
            self.require_vertex(v)
        return Graph(keep, ((u, v) for u, v in self.edges if u in keep and v in keep))

    def remove_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(vertices)
        for v in drop:
            self.require_vertex(v)
        return self.induced(v for v in self._vertices if v not in drop)

    def add_vertex(self, label: int, neighbors: Iterable[int] = ()) -> "Graph":
        """
        Return a copy with a new vertex joined to the given neighbors.

        Raises:
            GraphInputError: If the label already exists or a neighbor is unknown
        """
        label = _check_label(label)
        if label in self._adj:
            raise GraphInputError(f"Vertex label {label} already in use")
        neighbors = list(neighbors)
        for v in neighbors:
            self.require_vertex(v)
        return Graph(self._vertices + (label,), list(self.edges) + [(label, v) for v in neighbors])

    def relabel(self, mapping: Dict[int, int]) -> "Graph":
        """Return the image of the graph under an injective vertex map."""
        image = [mapping[v] for v in self._vertices]
        if len(set(image)) != len(image):
            raise GraphInputError("Relabeling is not injective")
        return Graph(image, ((mapping[u], mapping[v]) for u, v in self.edges))

    def compact(self, offset: int = 0) -> Tuple["Graph", Dict[int, int]]:
        """Relabel vertices to offset, offset+1, ... in sorted order."""
        mapping = {v: offset + i for i, v in enumerate(self._vertices)}
        return self.relabel(mapping), mapping

    def is_subgraph_of(self, other: "Graph") -> bool:
        return all(v in other for v in self._vertices) and all(other.has_edge(u, v) for u, v in self.edges)

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view; shared, do not mutate."""
        g = nx.Graph()
        g.add_nodes_from(self._vertices)
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def _clique_list(self) -> Tuple[Simplex, ...]:
        found = set()
        for maximal in nx.find_cliques(self.nx_graph):
            maximal = sorted(maximal)
            for size in range(1, len(maximal) + 1):
                found.update(combinations(maximal, size))
        return tuple(Simplex(c) for c in sorted(found, key=lambda c: (len(c), c)))


def _check_label(v: object) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise GraphInputError(f"Vertex label {v!r} is not an integer")
    if v < 0:
        raise GraphInputError(f"Vertex label {v} is negative")
    return v


def induced_subgraph(G: Graph, W: Iterable[int]) -> Graph:
    """
    Subgraph generated by W: all edges of G between members of W.

    Raises:
        GraphInputError: If W contains an unknown vertex
    """
    return G.induced(W)


def unit_sphere(G: Graph, x: int) -> Graph:
    """Subgraph generated by the neighbors of x (x excluded)."""
    return G.induced(G.neighbors(x))


def unit_ball(G: Graph, x: int) -> Graph:
    """Subgraph generated by x and its neighbors."""
    return G.induced(G.neighbors(x) | {x})


def cliques(G: Graph, max_dim: Optional[int] = None) -> List[Simplex]:
    """
    All complete subgraphs of G, grouped by dimension then lexicographic.

    Maximal cliques come from networkx's pivoting search; every face of a
    maximal clique is then added.

    Args:
        G: Host graph
        max_dim: Largest simplex dimension to report (all if None)

    Returns:
        List of simplices, each exactly once
    """
    found = G._clique_list
    if max_dim is None:
        return list(found)
    return [s for s in found if s.dimension <= max_dim]


def f_vector(G: Graph, max_dim: Optional[int] = None) -> List[int]:
    """Number of k-dimensional simplices for k = 0, 1, ..."""
    counts: List[int] = []
    for s in cliques(G, max_dim):
        while len(counts) <= s.dimension:
            counts.append(0)
        counts[s.dimension] += 1
    return counts


def euler_characteristic(G: Graph) -> int:
    """Sum over k of (-1)^k times the number of k-simplices."""
    return sum((-1) ** k * count for k, count in enumerate(f_vector(G)))


def connected_components(G: Graph) -> List[FrozenSet[int]]:
    """Vertex sets of the connected components, ordered by smallest member."""
    components = [frozenset(c) for c in nx.connected_components(G.nx_graph)]
    return sorted(components, key=min)


def is_connected(G: Graph) -> bool:
    return len(G) > 0 and nx.is_connected(G.nx_graph)


def disjoint_union(H: Graph, K: Graph) -> Tuple[Graph, Dict[int, int], Dict[int, int]]:
    """
    Disjoint union with H relabeled to 0..|H|-1 and K placed after it.

    Returns:
        (union, map from H labels, map from K labels)
    """
    h_map = {v: i for i, v in enumerate(H.vertices)}
    k_map = {v: len(H) + i for i, v in enumerate(K.vertices)}
    edges = [(h_map[u], h_map[v]) for u, v in H.edges] + [(k_map[u], k_map[v]) for u, v in K.edges]
    return Graph(list(h_map.values()) + list(k_map.values()), edges), h_map, k_map


def isomorphism(G: Graph, H: Graph) -> Optional[Dict[int, int]]:
    """A vertex map G -> H that is a graph isomorphism, or None."""
    if len(G) != len(H) or len(G.edges) != len(H.edges):
        return None
    matcher = GraphMatcher(G.nx_graph, H.nx_graph)
    if not matcher.is_isomorphic():
        return None
    return dict(matcher.mapping)


def is_isomorphic(G: Graph, H: Graph) -> bool:
    return isomorphism(G, H) is not None


# Canonical labeling


class CanonicalForm(NamedTuple):
    """Canonical key plus the vertex order realizing it (None when hashed)."""
    key: tuple
    order: Optional[Tuple[int, ...]]


def _refine(G: Graph, cells: List[List[int]]) -> List[List[int]]:
    """Refine an ordered partition until it is equitable."""
    while True:
        cell_of = {v: i for i, cell in enumerate(cells) for v in cell}
        signatures = {}
        for v in cell_of:
            counts = [0] * len(cells)
            for w in G.neighbors(v):
                counts[cell_of[w]] += 1
            signatures[v] = (cell_of[v], tuple(counts))

        refined: List[List[int]] = []
        for v in sorted(cell_of, key=lambda u: (signatures[u], u)):
            if refined and signatures[refined[-1][0]] == signatures[v]:
                refined[-1].append(v)
            else:
                refined.append([v])
        if len(refined) == len(cells):
            return refined
        cells = refined


def _twin_classes(G: Graph, cell: List[int]) -> List[List[int]]:
    """Group a cell by twinship with each group's first vertex."""
    classes: List[List[int]] = []
    for v in cell:
        for group in classes:
            w = group[0]
            # swapping v and w is an automorphism
            if G.neighbors(w) - {v} == G.neighbors(v) - {w}:
                group.append(v)
                break
        else:
            classes.append([v])
    return classes


class _LeafLimit(Exception):
    pass


def _exact_form(G: Graph) -> CanonicalForm:
    best: List[Optional[tuple]] = [None, None]
    leaves = [0]

    def search(cells: List[List[int]]) -> None:
        cells = _refine(G, cells)
        target = None
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = i
        if target is None:
            leaves[0] += 1
            if leaves[0] > CANONICAL_LEAF_LIMIT:
                raise _LeafLimit()
            order = tuple(cell[0] for cell in cells)
            position = {v: i for i, v in enumerate(order)}
            code = tuple(sorted((min(position[u], position[v]), max(position[u], position[v])) for u, v in G.edges))
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            return
        cell = cells[target]
        # Twins are interchanged by an automorphism, one branch per class suffices
        for group in _twin_classes(G, cell):
            v = group[0]
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(G.vertices)])
    return CanonicalForm(("exact", len(G), best[0]), best[1])


def _hashed_form(G: Graph) -> CanonicalForm:
    wl = nx.weisfeiler_lehman_graph_hash(G.nx_graph, iterations=WL_ITERATIONS)
    degrees = tuple(sorted(len(G.neighbors(v)) for v in G.vertices))
    return CanonicalForm(("wl", len(G), len(G.edges), wl, degrees), None)


def canonical_form(G: Graph) -> CanonicalForm:
    """
    Canonical key and, for small graphs, a canonical vertex order.

    Up to EXACT_CANONICAL_LIMIT vertices the key is an exact canonical code
    obtained by individualization-refinement, and two graphs get the same key
    iff they are isomorphic. Larger graphs get a Weisfeiler-Lehman hash key
    which is relabeling invariant but may collide.
    """
    if len(G) == 0:
        return CanonicalForm(("exact", 0, ()), ())
    if len(G) <= EXACT_CANONICAL_LIMIT:
        try:
            return _exact_form(G)
        except _LeafLimit:
            logger.warning(f"Canonical labeling leaf limit hit on {G!r}, falling back to hashing")
    return _hashed_form(G)


def canonical_key(G: Graph) -> tuple:
    """Opaque relabeling-invariant key suitable for memoization."""
    return canonical_form(G).key
