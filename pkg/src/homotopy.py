"""
Homotopy steps on graphs and simple homotopy deformations of hypersurfaces
and curves.

A hypersurface is a set of (k-1)-simplices deformed through k-simplices
("carriers"): a step swaps the hypersurface facets inside a carrier t for
the remaining facets of t, i.e. takes the symmetric difference with the
boundary of t. Codimension-one spheres of a d-graph use k = d; curves use
k = 2 in any host.
"""
import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from classify import is_contractible, is_geometric, is_sphere
from enhance import EnhancedGraph, enhanced
from errors import CertificateError, GraphInputError, PreconditionError, ResourceLimitError
from graph_core import Graph, Simplex, cliques, unit_sphere

logger = logging.getLogger(__name__)

DEFAULT_TRACE_BUDGET = 100_000

STEP_DEFORM = "deform"
STEP_REDUCE = "reduce"
STEP_EXTEND = "extend"


# Curves


@dataclass(frozen=True)
class Curve:
    """
    A closed or open vertex sequence in a graph.

    A closed curve lists each vertex once per visit without repeating the
    start at the end. Length 0 and 1 curves are rejected; the empty curve
    exists only as an empty hypersurface, the end state of a contraction.
    """
    vertices: Tuple[int, ...]
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 2:
            raise GraphInputError(f"A curve needs at least two vertices, got {len(self.vertices)}")
        if self.closed and len(self.vertices) < 3:
            raise GraphInputError("A closed curve needs at least three vertices")
        for t in range(len(self.vertices) - (0 if self.closed else 1)):
            if self.vertices[t] == self.at(t + 1):
                raise GraphInputError(f"Curve stays at vertex {self.vertices[t]} between steps {t} and {t + 1}")

    @classmethod
    def in_graph(cls, G: Graph, vertices: Sequence[int], closed: bool = True) -> "Curve":
        """Build a curve and check every step is an edge of G."""
        curve = cls(tuple(vertices), closed)
        curve.validate(G)
        return curve

    def validate(self, G: Graph) -> None:
        """
        Raises:
            GraphInputError: If a vertex is unknown or a step is not an edge
        """
        for v in self.vertices:
            G.require_vertex(v)
        for u, v in self.steps():
            if not G.has_edge(u, v):
                raise GraphInputError(f"Curve step {u}-{v} is not an edge")

    @property
    def simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def at(self, t: int) -> Optional[int]:
        """Vertex at position t, cyclic for closed curves, None off an open curve."""
        if self.closed:
            return self.vertices[t % len(self.vertices)]
        if 0 <= t < len(self.vertices):
            return self.vertices[t]
        return None

    def steps(self) -> List[Tuple[int, int]]:
        count = len(self.vertices) if self.closed else len(self.vertices) - 1
        return [(self.vertices[t], self.at(t + 1)) for t in range(count)]

    def edges(self) -> FrozenSet[Simplex]:
        return frozenset(Simplex(step) for step in self.steps())

    def as_hypersurface(self) -> "Hypersurface":
        """Edge set of a simple curve, deformable through triangles."""
        if not self.simple:
            raise PreconditionError("Only simple curves have a facet-set view")
        return Hypersurface(2, self.edges())

    def to_dict(self) -> Dict[str, Any]:
        return {"vertices": list(self.vertices), "closed": self.closed}


def curve_from_edges(edges: Iterable[Sequence[int]], start: Optional[int] = None) -> Curve:
    """
    Recover a simple curve from its edge set.

    A closed curve is walked from `start` (default: smallest vertex) towards
    its smaller neighbor; an open curve from `start` (default: smaller end).

    Raises:
        GraphInputError: If the edges do not form one simple path or cycle
    """
    adjacency: Dict[int, List[int]] = {}
    edge_list = [tuple(e) for e in edges]
    for u, v in edge_list:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    if not adjacency:
        raise GraphInputError("No edges to build a curve from")

    degrees = {v: len(ns) for v, ns in adjacency.items()}
    ends = sorted(v for v, deg in degrees.items() if deg == 1)
    if any(deg > 2 for deg in degrees.values()) or len(ends) not in (0, 2):
        raise GraphInputError("Edges do not form a simple path or cycle")
    closed = not ends

    if start is None:
        start = ends[0] if ends else min(adjacency)
    if start not in adjacency or (not closed and start not in ends):
        raise GraphInputError(f"Cannot start the curve at {start}")

    walk = [start]
    previous, current = None, start
    while not (closed and len(walk) == len(adjacency)):
        options = sorted(w for w in adjacency[current] if w != previous)
        if not options or options[0] == start:
            break
        previous, current = current, options[0]
        walk.append(current)
    if len(walk) != len(adjacency):
        raise GraphInputError("Edges form more than one component")
    return Curve(tuple(walk), closed)


def lift_curve(E: EnhancedGraph, C: Curve) -> Curve:
    """The curve through vertex- and edge-simplices of G1 that follows C."""
    lifted: List[int] = []
    for u, v in C.steps():
        lifted.append(E.vertex((u,)))
        lifted.append(E.vertex((u, v)))
    if not C.closed:
        lifted.append(E.vertex((C.vertices[-1],)))
    return Curve(tuple(lifted), C.closed)


# Hypersurfaces and traces


@dataclass(frozen=True)
class Hypersurface:
    """
    A set of (k-1)-simplices deformed through k-simplices.

    Attributes:
        dimension: Carrier dimension k (host dimension d for codimension-one
            spheres, 2 for curves)
        facets: The (k-1)-simplices
    """
    dimension: int
    facets: FrozenSet[Simplex] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "facets", frozenset(Simplex(f) for f in self.facets))
        for facet in self.facets:
            if facet.dimension != self.dimension - 1:
                raise GraphInputError(f"Facet {tuple(facet)} is not a {self.dimension - 1}-simplex")

    def __len__(self) -> int:
        return len(self.facets)

    def is_empty(self) -> bool:
        return not self.facets

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for facet in self.facets for v in facet)

    def graph(self, host: Graph) -> Graph:
        """The subgraph of host generated by the facet vertices."""
        return host.induced(self.vertices)

    def sorted_facets(self) -> List[Simplex]:
        return sorted(self.facets)

    def faces(self) -> Set[Simplex]:
        """Every non-empty face of every facet."""
        found: Set[Simplex] = set()
        for facet in self.facets:
            for size in range(1, len(facet) + 1):
                found.update(Simplex(c) for c in itertools.combinations(facet, size))
        return found

    def euler_characteristic(self) -> int:
        return sum((-1) ** face.dimension for face in self.faces())

    def ridge_counts(self) -> Dict[Simplex, int]:
        counts: Dict[Simplex, int] = {}
        for facet in self.facets:
            for ridge in facet.faces():
                counts[ridge] = counts.get(ridge, 0) + 1
        return counts

    def is_closed_pseudomanifold(self) -> bool:
        """Every codimension-one face of the facets lies in exactly two facets."""
        return all(count == 2 for count in self.ridge_counts().values())

    def vertex_links_connected(self) -> bool:
        """Links of vertices are connected (checked when facets have dimension >= 2)."""
        if self.dimension - 1 < 2:
            return True
        for v in self.vertices:
            link = [Simplex(w for w in facet if w != v) for facet in self.facets if v in facet]
            by_ridge: Dict[Simplex, List[int]] = {}
            for i, simplex in enumerate(link):
                for ridge in simplex.faces():
                    by_ridge.setdefault(ridge, []).append(i)
            seen, frontier = {0}, [0]
            while frontier:
                i = frontier.pop()
                for ridge in link[i].faces():
                    for j in by_ridge[ridge]:
                        if j not in seen:
                            seen.add(j)
                            frontier.append(j)
            if len(seen) != len(link):
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {"dimension": self.dimension, "facets": [list(f) for f in self.sorted_facets()]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Hypersurface":
        return cls(int(data["dimension"]), frozenset(Simplex(f) for f in data["facets"]))


@dataclass(frozen=True)
class DeformationStep:
    """
    One recorded step.

    deform steps carry the carrier simplex and the facets removed/added;
    reduce and extend steps carry the vertex (and, for extend, its
    neighbors).
    """
    kind: str
    carrier: Optional[Simplex] = None
    removed: FrozenSet[Simplex] = frozenset()
    added: FrozenSet[Simplex] = frozenset()
    vertex: Optional[int] = None
    neighbors: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == STEP_DEFORM:
            return {
                "kind": self.kind,
                "carrier": list(self.carrier),
                "removed": [list(f) for f in sorted(self.removed)],
                "added": [list(f) for f in sorted(self.added)],
            }
        data: Dict[str, Any] = {"kind": self.kind, "vertex": self.vertex}
        if self.kind == STEP_EXTEND:
            data["neighbors"] = list(self.neighbors)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeformationStep":
        kind = data["kind"]
        if kind == STEP_DEFORM:
            return cls(
                kind,
                Simplex(data["carrier"]),
                frozenset(Simplex(f) for f in data["removed"]),
                frozenset(Simplex(f) for f in data["added"]),
            )
        if kind not in (STEP_REDUCE, STEP_EXTEND):
            raise GraphInputError(f"Unknown step kind '{kind}'")
        return cls(kind, vertex=int(data["vertex"]), neighbors=tuple(int(v) for v in data.get("neighbors", ())))


@dataclass(frozen=True)
class DeformationTrace:
    """Ordered deformation steps starting from an initial hypersurface."""
    initial: Hypersurface
    steps: Tuple[DeformationStep, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    def states(self, host: Optional[Graph] = None) -> List[Hypersurface]:
        """
        Replay the trace and return every intermediate hypersurface.

        Raises:
            CertificateError: At the first step that does not replay
        """
        current = self.initial
        states = [current]
        for i, step in enumerate(self.steps):
            try:
                current = _apply_recorded(host, current, step)
            except (GraphInputError, PreconditionError) as e:
                raise CertificateError(f"Trace step {i} does not replay: {e}", step=f"steps[{i}]") from e
            states.append(current)
        return states

    def replay(self, host: Optional[Graph] = None) -> Hypersurface:
        return self.states(host)[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {"initial": self.initial.to_dict(), "steps": [s.to_dict() for s in self.steps]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DeformationTrace":
        return cls(Hypersurface.from_dict(data["initial"]), tuple(DeformationStep.from_dict(s) for s in data["steps"]))


def _apply_recorded(host: Optional[Graph], H: Hypersurface, step: DeformationStep) -> Hypersurface:
    if step.kind != STEP_DEFORM:
        raise PreconditionError(f"Hypersurface traces only hold deform steps, got '{step.kind}'")
    if host is not None:
        Simplex.of(host, step.carrier)
    result, recorded = _deform(H, step.carrier)
    if recorded.removed != step.removed or recorded.added != step.added:
        raise PreconditionError(f"Recorded facets do not match the hypersurface inside {tuple(step.carrier)}")
    return result


def _deform(H: Hypersurface, t: Simplex, Y: Optional[Iterable[Iterable[int]]] = None) -> Tuple[Hypersurface, DeformationStep]:
    if t.dimension != H.dimension:
        raise PreconditionError(f"Carrier {tuple(t)} is not a {H.dimension}-simplex")
    boundary_t = frozenset(t.faces())
    inside = H.facets & boundary_t
    if Y is not None and frozenset(Simplex(f) for f in Y) != inside:
        raise PreconditionError(f"Y must be exactly the hypersurface facets inside {tuple(t)}")
    if not inside:
        raise PreconditionError(f"No hypersurface facet lies in {tuple(t)}")
    if inside == boundary_t and H.facets != boundary_t:
        raise PreconditionError(f"Deleting all of the boundary of {tuple(t)} is only allowed when it is the whole hypersurface")
    added = boundary_t - inside
    step = DeformationStep(STEP_DEFORM, t, inside, added)
    return Hypersurface(H.dimension, (H.facets - inside) | added), step


def deform_hypersurface(G: Graph, H: Hypersurface, t: Iterable[int], Y: Optional[Iterable[Iterable[int]]] = None) -> Hypersurface:
    """
    Simple homotopy deformation of H through the simplex t.

    The facets Y of H inside t are replaced by the other facets of t. If H
    is the boundary of t, the result is the empty hypersurface.

    Args:
        G: Host graph
        H: Hypersurface of (k-1)-simplices
        t: A k-simplex of G
        Y: Facets to replace; must equal the facets of H inside t (computed if None)

    Raises:
        PreconditionError: If t is not a k-simplex, Y is empty or Y is wrong
    """
    carrier = Simplex.of(G, t)
    return _deform(H, carrier, Y)[0]


def deformation_step(G: Graph, H: Hypersurface, t: Iterable[int]) -> Tuple[Hypersurface, DeformationStep]:
    """deform_hypersurface plus the step record."""
    return _deform(H, Simplex.of(G, t))


# Graph homotopy steps


def reduce_step(G: Graph, x: int, budget: Optional[int] = None) -> Graph:
    """
    Homotopy reduction: remove a vertex whose unit sphere is contractible.

    Raises:
        PreconditionError: If the unit sphere of x is not contractible
    """
    sphere_cert = is_contractible(unit_sphere(G, x), budget)
    if not sphere_cert:
        raise PreconditionError(f"Unit sphere of {x} is not contractible: {sphere_cert.reason}")
    return G.remove_vertices([x])


def extend_step(G: Graph, W: Iterable[int], label: int, budget: Optional[int] = None) -> Graph:
    """
    Homotopy extension: add a vertex joined to a contractible subgraph.

    Raises:
        PreconditionError: If W does not generate a contractible graph
        GraphInputError: If label is already used
    """
    W = sorted(set(W))
    if label in G:
        raise GraphInputError(f"Vertex label {label} already in use")
    cert = is_contractible(G.induced(W), budget)
    if not cert:
        raise PreconditionError(f"Subgraph generated by {W} is not contractible: {cert.reason}")
    return G.add_vertex(label, W)


def homotopy_deform(G: Graph, steps: Iterable[DeformationStep], budget: Optional[int] = None) -> Graph:
    """Apply a sequence of reduce/extend steps."""
    current = G
    for step in steps:
        if step.kind == STEP_REDUCE:
            current = reduce_step(current, step.vertex, budget)
        elif step.kind == STEP_EXTEND:
            current = extend_step(current, step.neighbors, step.vertex, budget)
        else:
            raise PreconditionError(f"homotopy_deform takes reduce/extend steps, got '{step.kind}'")
    return current


def hypersurface_from_subgraph(G: Graph, H: Graph, check: bool = True) -> Hypersurface:
    """
    Facet-set view of a (d-1)-sphere H inside a geometric d-graph G.

    Raises:
        PreconditionError: If G is not geometric or H is not a (d-1)-sphere subgraph
    """
    if not H.is_subgraph_of(G):
        raise PreconditionError("H is not a subgraph of G")
    verdict = is_geometric(G)
    if not verdict:
        raise PreconditionError(f"Host is not geometric: {verdict.describe()}")
    d = verdict.dimension
    if check:
        cert = is_sphere(H)
        if not cert or cert.dimension != d - 1:
            raise PreconditionError(f"H is not a {d - 1}-sphere")
    return Hypersurface(d, frozenset(s for s in cliques(H) if s.dimension == d - 1))


# Curve contraction


def _degrees(edges: Iterable[Simplex]) -> Dict[int, int]:
    degrees: Dict[int, int] = {}
    for u, v in edges:
        degrees[u] = degrees.get(u, 0) + 1
        degrees[v] = degrees.get(v, 0) + 1
    return degrees


def _is_connected_edge_set(edges: FrozenSet[Simplex]) -> bool:
    adjacency: Dict[int, List[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    start = next(iter(adjacency))
    seen, frontier = {start}, [start]
    while frontier:
        for w in adjacency[frontier.pop()]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(adjacency)


def is_simple_closed(edges: FrozenSet[Simplex]) -> bool:
    """Edge set of a single simple closed curve."""
    if len(edges) < 3:
        return False
    return all(d == 2 for d in _degrees(edges).values()) and _is_connected_edge_set(edges)


def is_simple_path(edges: FrozenSet[Simplex], ends: Tuple[int, int]) -> bool:
    """Edge set of a single simple path between the two given ends."""
    if not edges:
        return False
    degrees = _degrees(edges)
    if {v for v, d in degrees.items() if d == 1} != set(ends):
        return False
    return all(d in (1, 2) for d in degrees.values()) and _is_connected_edge_set(edges)


def _triangles_by_edge(G: Graph) -> Dict[Simplex, List[Simplex]]:
    by_edge: Dict[Simplex, List[Simplex]] = {}
    for t in cliques(G, 2):
        if t.dimension == 2:
            for e in t.faces():
                by_edge.setdefault(e, []).append(t)
    return by_edge


def _smaller_side(G: Graph, edges: FrozenSet[Simplex], by_edge: Dict[Simplex, List[Simplex]]) -> Optional[FrozenSet[Simplex]]:
    """Triangles on the smaller side of a simple closed curve in a 2-sphere."""
    triangles = sorted({t for ts in by_edge.values() for t in ts})
    sides: List[Set[Simplex]] = []
    assigned: Set[Simplex] = set()
    for root in triangles:
        if root in assigned:
            continue
        side, frontier = {root}, [root]
        while frontier:
            t = frontier.pop()
            for e in t.faces():
                if e in edges:
                    continue
                for other in by_edge[e]:
                    if other not in side:
                        side.add(other)
                        frontier.append(other)
        assigned |= side
        sides.append(side)
    if len(sides) != 2:
        return None
    return frozenset(min(sides, key=lambda s: (len(s), min(s))))


def contract_curve(G: Graph, C: Curve, enhance_first: bool = False, budget: Optional[int] = None) -> DeformationTrace:
    """
    Deform a simple closed curve in a sphere to the empty curve.

    Each step swaps the curve edges inside a triangle for the other edges of
    that triangle, keeping a simple closed curve until the curve is the
    boundary of one triangle, which is then deleted. In a 2-sphere the
    search only flips triangles out of the smaller side of the curve, so
    every step shrinks that side by one triangle. In higher dimensions the
    search is best-first on curve length.

    Args:
        G: A d-sphere, d > 1
        C: Simple closed curve in G
        enhance_first: Lift G and C to the enhanced graph G1 and contract there
        budget: Maximum number of expanded search states

    Returns:
        DeformationTrace ending at the empty hypersurface (in G1 labels when
        enhance_first is set)

    Raises:
        PreconditionError: If G is not a sphere of dimension > 1 or C is not simple and closed
        ResourceLimitError: If the search budget is exhausted
    """
    if not C.closed or not C.simple:
        raise PreconditionError("contract_curve needs a simple closed curve")
    C.validate(G)
    if enhance_first:
        E = enhanced(G)
        G, C = E.enhanced, lift_curve(E, C)

    cert = is_sphere(G)
    if not cert or cert.dimension < 2:
        raise PreconditionError("contract_curve needs a sphere of dimension at least 2")

    limit = DEFAULT_TRACE_BUDGET if budget is None else budget
    by_edge = _triangles_by_edge(G)
    start = C.as_hypersurface()
    region = _smaller_side(G, start.facets, by_edge) if cert.dimension == 2 else None

    def score(state: FrozenSet[Simplex], side: Optional[FrozenSet[Simplex]]) -> Tuple[int, int, Tuple[Simplex, ...]]:
        primary = len(side) if side is not None else len(state)
        return primary, len(state), tuple(sorted(state))

    counter = itertools.count()
    heap = [(score(start.facets, region), next(counter), start.facets, region)]
    parents: Dict[FrozenSet[Simplex], Tuple[Optional[FrozenSet[Simplex]], Optional[DeformationStep]]] = {start.facets: (None, None)}
    expanded = 0
    while heap:
        _, _, state, side = heapq.heappop(heap)
        expanded += 1
        if expanded > limit:
            raise ResourceLimitError(f"contract_curve exhausted its budget of {limit} states", explored=expanded)

        current = Hypersurface(2, state)
        carriers = sorted({t for e in state for t in by_edge.get(e, ())})
        for t in carriers:
            if side is not None and t not in side:
                continue
            try:
                result, step = _deform(current, t)
            except PreconditionError:
                continue
            if result.is_empty():
                parents[result.facets] = (state, step)
                trace = _rebuild_trace(start, parents, result.facets)
                logger.info(f"Contracted curve of length {len(C)} in {len(trace)} steps ({expanded} states expanded)")
                return trace
            if result.facets in parents or not is_simple_closed(result.facets):
                continue
            parents[result.facets] = (state, step)
            new_side = side - {t} if side is not None else None
            heapq.heappush(heap, (score(result.facets, new_side), next(counter), result.facets, new_side))

    raise ResourceLimitError(f"contract_curve found no deformation after {expanded} states", explored=expanded)


def _rebuild_trace(start: Hypersurface, parents, final: FrozenSet[Simplex]) -> DeformationTrace:
    steps: List[DeformationStep] = []
    state = final
    while True:
        previous, step = parents[state]
        if previous is None:
            break
        steps.append(step)
        state = previous
    return DeformationTrace(start, tuple(reversed(steps)))


def is_trivial(G: Graph, C: Curve, budget: Optional[int] = None) -> bool:
    """A simple closed curve is trivial when it deforms to the empty curve."""
    trace = contract_curve(G, C, budget=budget)
    return trace.replay(G).is_empty()


def random_deformation_trace(G: Graph, C: Curve, seed: int = 0, steps: int = 1) -> DeformationTrace:
    """
    Random simple homotopy deformation of a simple curve.

    Each step picks uniformly (numpy PCG64) among the triangles whose
    deformation keeps a simple curve: closed curves stay simple closed,
    open curves stay simple paths between the same ends. The curve never
    becomes empty.

    Raises:
        PreconditionError: If C is not simple or no valid step exists
    """
    C.validate(G)
    rng = np.random.Generator(np.random.PCG64(seed))
    by_edge = _triangles_by_edge(G)
    start = C.as_hypersurface()
    ends = None if C.closed else (C.vertices[0], C.vertices[-1])

    current = start
    recorded: List[DeformationStep] = []
    for _ in range(steps):
        options = []
        for t in sorted({t for e in current.facets for t in by_edge.get(e, ())}):
            try:
                result, step = _deform(current, t)
            except PreconditionError:
                continue
            keeps_shape = is_simple_closed(result.facets) if ends is None else is_simple_path(result.facets, ends)
            if keeps_shape:
                options.append((result, step))
        if not options:
            raise PreconditionError("No deformation step keeps the curve simple")
        current, step = options[int(rng.integers(len(options)))]
        recorded.append(step)
    return DeformationTrace(start, tuple(recorded))
