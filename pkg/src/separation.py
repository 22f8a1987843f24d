"""
Intersection numbers, Jordan-Brouwer separation and Schoenflies ball
certification.

By default everything runs in the enhanced picture: H1 is embedded in G1
even when H is only a subgraph of G, so the separation of G1 by H1 is
always defined. Direct mode separates G by H and requires H to be embedded.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from classify import BallCertificate, Orientation, is_ball, is_sphere, orient, permutation_sign
from embed import is_embedded
from enhance import EnhancedGraph, enhanced, lift_subgraph
from errors import (
    MalformedGeometryError,
    PreconditionError,
    ResourceLimitError,
    TheoremViolationError,
)
from graph_core import Graph, Simplex, cliques, connected_components, euler_characteristic
from homotopy import Curve, DeformationStep, DeformationTrace, Hypersurface, STEP_DEFORM, curve_from_edges

logger = logging.getLogger(__name__)

SCHOENFLIES_WORKERS = 2


# Separation


@dataclass(frozen=True)
class SeparationResult:
    """
    The two sides of a sphere H in a sphere G.

    A and B are generated by inner_a (resp. inner_b) together with the sphere,
    so A meets B exactly in the sphere. In enhanced mode host and sphere are
    G1 and H1 and `enhancement` holds the simplex map.
    """
    A: Graph
    B: Graph
    inner_a: FrozenSet[int]
    inner_b: FrozenSet[int]
    sphere: Graph
    host: Graph
    enhanced: bool
    enhancement: Optional[EnhancedGraph] = None

    def side_of(self, v: int) -> Optional[str]:
        if v in self.inner_a:
            return "A"
        if v in self.inner_b:
            return "B"
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "enhanced": self.enhanced,
            "inner_a": sorted(self.inner_a),
            "inner_b": sorted(self.inner_b),
            "sphere_vertices": list(self.sphere.vertices),
        }


def _check_sphere_pair(H: Graph, G: Graph) -> int:
    if not H.is_subgraph_of(G):
        raise PreconditionError("H is not a subgraph of G")
    host = is_sphere(G)
    if not host:
        raise PreconditionError(f"G is not a sphere: {host.reason}")
    sub = is_sphere(H)
    if not sub or sub.dimension != host.dimension - 1:
        raise PreconditionError(f"H is not a {host.dimension - 1}-sphere")
    return host.dimension


def separate(H: Graph, G: Graph, enhanced_mode: bool = True, check_preconditions: bool = True) -> SeparationResult:
    """
    Split a d-sphere G along a (d-1)-sphere subgraph H.

    Args:
        H: (d-1)-sphere subgraph of G
        G: d-sphere
        enhanced_mode: Separate G1 by H1 (default) instead of G by H
        check_preconditions: Verify the sphere pair (and embedding in direct mode)

    Returns:
        SeparationResult with sides ordered by smallest inner vertex

    Raises:
        PreconditionError: If the inputs are not a sphere pair, or H is not
            embedded in direct mode
        TheoremViolationError: If the complement does not have exactly two components
    """
    if check_preconditions:
        _check_sphere_pair(H, G)

    enhancement = None
    if enhanced_mode:
        enhancement = enhanced(G)
        host, sphere = enhancement.enhanced, lift_subgraph(enhancement, H)
    else:
        if check_preconditions:
            report = is_embedded(H, G, check_preconditions=False)
            if not report:
                raise PreconditionError(f"Direct separation needs an embedded sphere: {report.reason}")
        host, sphere = G, H

    components = connected_components(host.remove_vertices(sphere.vertices))
    if len(components) != 2:
        raise TheoremViolationError(
            f"Complement of the sphere has {len(components)} components, expected 2",
            components=[sorted(c) for c in components],
        )
    inner_a, inner_b = components
    A = host.induced(inner_a | set(sphere.vertices))
    B = host.induced(inner_b | set(sphere.vertices))
    logger.info(f"Separated {host!r} into sides of {len(inner_a)} and {len(inner_b)} inner vertices")
    return SeparationResult(A, B, inner_a, inner_b, sphere, host, enhanced_mode, enhancement)


# Intersection numbers


@dataclass(frozen=True)
class IntersectionEvent:
    """A maximal visit of the curve to H1, from index start to end."""
    start: int
    end: int
    entry: int
    exit: int
    incoming: int
    outgoing: int

    @property
    def raw(self) -> int:
        return self.incoming + self.outgoing

    @property
    def signed(self) -> int:
        return (2 * self.incoming - 1) + (2 * self.outgoing - 1)

    @property
    def crossing(self) -> bool:
        return self.raw == 1


@dataclass(frozen=True)
class IntersectionCount:
    """
    Intersection number of a curve with a sphere.

    total sums incoming + outgoing per event (1 for a crossing, 0 or 2 for a
    touch-down); signed_total sums the signed contributions (0 for a
    crossing, +2 or -2 for a touch-down).
    """
    total: int
    signed_total: int
    events: Tuple[IntersectionEvent, ...]
    curve_orientation: int
    sphere_orientation: Optional[Orientation] = None

    @property
    def parity(self) -> int:
        return self.total % 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "signed_total": self.signed_total,
            "curve_orientation": self.curve_orientation,
            "events": [
                {
                    "start": e.start, "end": e.end, "entry": e.entry, "exit": e.exit,
                    "incoming": e.incoming, "outgoing": e.outgoing,
                }
                for e in self.events
            ],
        }


class IntersectionContext:
    """
    Everything intersection_number needs about a sphere pair, computed once.

    Holds G1, H1, an orientation of each, the top simplices of H1 at every
    H1 vertex, and (lazily) the enhanced separation used as parity oracle.
    """

    def __init__(self, H: Graph, G: Graph, check_preconditions: bool = True):
        if check_preconditions:
            self.dimension = _check_sphere_pair(H, G)
        else:
            self.dimension = is_sphere(G).dimension
        self.base_sphere = H
        self.base_host = G
        self.enhancement = enhanced(G)
        self.host = self.enhancement.enhanced
        self.sphere = lift_subgraph(self.enhancement, H)

        host_orientation = orient(self.host)
        sphere_orientation = orient(self.sphere) if len(self.sphere) else None
        if not isinstance(host_orientation, Orientation) or (
            sphere_orientation is not None and not isinstance(sphere_orientation, Orientation)
        ):
            raise PreconditionError("Spheres of dimension >= 1 must be orientable")
        self.host_orientation = host_orientation
        self.sphere_orientation = sphere_orientation

        self.facets_at: Dict[int, List[Simplex]] = {}
        if sphere_orientation is not None:
            for facet in sorted(sphere_orientation.signs):
                for v in facet:
                    self.facets_at.setdefault(v, []).append(facet)

    @cached_property
    def separation(self) -> SeparationResult:
        return separate(self.base_sphere, self.base_host, enhanced_mode=True, check_preconditions=False)

    def side_sign(self, y: int, a: int, orientation: Orientation, index: int) -> int:
        """
        +1 or -1 according to the side of H1 that y (a neighbor of a) lies on.

        The d-simplex spanned by y and the smallest H1 facet at a that spans
        one with y is compared with the orientation of G1. If y spans none,
        the smallest vertex of y's component of S(a) minus H1 that does is
        used instead.

        Raises:
            MalformedGeometryError: If no such simplex exists
        """
        candidates = [y]
        ring = self.host.induced(self.host.neighbors(a) - set(self.sphere.vertices))
        for component in connected_components(ring):
            if y in component:
                candidates += sorted(component - {y})
        for candidate in candidates:
            for sigma in self.facets_at.get(a, ()):
                if all(self.host.has_edge(candidate, w) for w in sigma):
                    tau = Simplex(tuple(sigma) + (candidate,))
                    return (
                        self.host_orientation.sign(tau)
                        * orientation.sign(sigma)
                        * permutation_sign((candidate,) + tuple(sigma))
                    )
        raise MalformedGeometryError(f"Entry edge ({y}, {a}) spans no {self.dimension}-simplex with H1", index)


def intersection_context(H: Graph, G: Graph) -> IntersectionContext:
    return IntersectionContext(H, G)


def _runs(C: Curve, inside: List[bool], allow_open: bool) -> List[Tuple[int, int]]:
    """Maximal index intervals of the curve inside H1 with a vertex outside on both ends."""
    n = len(C)
    runs: List[Tuple[int, int]] = []
    if C.closed:
        origin = next(t for t in range(n) if not inside[t])
        t = 1
        while t < n:
            position = (origin + t) % n
            if inside[position]:
                length = 0
                while inside[(position + length) % n]:
                    length += 1
                runs.append((position, (position + length - 1) % n))
                t += length
            else:
                t += 1
        return runs
    if not allow_open:
        raise PreconditionError("intersection_number needs a closed curve")
    t = 0
    while t < n:
        if inside[t]:
            start = t
            while t < n and inside[t]:
                t += 1
            if start > 0 and t < n:
                runs.append((start, t - 1))
        else:
            t += 1
    return runs


def intersection_number(
    C: Curve,
    H: Graph,
    G: Graph,
    curve_orientation: int = 1,
    sphere_orientation: Optional[Orientation] = None,
    allow_open: bool = False,
    context: Optional[IntersectionContext] = None,
) -> IntersectionCount:
    """
    Intersection number of a curve in G1 with the lifted sphere H1.

    For each maximal visit a = C(t1) .. b = C(tk) to H1 entered from
    y = C(t1-1) and left to z = C(tk+1), the incoming contribution is 1
    when y lies on the positive side of H1 (see IntersectionContext.side_sign)
    and the outgoing contribution is 1 when z does. A curve lying entirely in
    H1 has intersection number 0.

    Args:
        C: Curve in G1 (closed unless allow_open)
        H: (d-1)-sphere subgraph of the d-sphere G
        G: Base sphere
        curve_orientation: +1 or -1, multiplies every side sign
        sphere_orientation: Orientation of H1 (computed if None)
        allow_open: Accept open curves; visits touching an end are skipped
        context: Precomputed IntersectionContext for (H, G)

    Raises:
        PreconditionError: If the curve is open (and not allowed) or not in G1
        MalformedGeometryError: If an entry spans no simplex with H1
    """
    if curve_orientation not in (1, -1):
        raise PreconditionError("curve_orientation must be +1 or -1")
    context = context or IntersectionContext(H, G)
    C.validate(context.host)
    orientation = sphere_orientation or context.sphere_orientation

    inside = [v in context.sphere for v in C.vertices]
    if all(inside) or not any(inside):
        return IntersectionCount(0, 0, (), curve_orientation, orientation)
    if orientation is None:
        raise PreconditionError("intersection_number needs an orientation of H1")

    events = []
    for start, end in _runs(C, inside, allow_open):
        y, a = C.at(start - 1), C.vertices[start]
        z, b = C.at(end + 1), C.vertices[end]
        s_in = curve_orientation * context.side_sign(y, a, orientation, start)
        s_out = curve_orientation * context.side_sign(z, b, orientation, end)
        events.append(IntersectionEvent(start, end, y, z, int(s_in == 1), int(s_out == 1)))

    total = sum(e.raw for e in events)
    signed = sum(e.signed for e in events)
    logger.debug(f"Curve of length {len(C)}: {len(events)} events, total {total}, signed {signed}")
    return IntersectionCount(total, signed, tuple(events), curve_orientation, orientation)


def transition_parity(C: Curve, separation: SeparationResult, allow_open: bool = False) -> int:
    """Parity of side changes along the curve, ignoring visits to the sphere."""
    sides = [separation.side_of(v) for v in C.vertices]
    outside = [s for s in sides if s is not None]
    if not outside:
        return 0
    changes = sum(1 for a, b in zip(outside, outside[1:]) if a != b)
    if C.closed:
        changes += int(outside[-1] != outside[0])
    elif not allow_open:
        raise PreconditionError("transition_parity needs a closed curve")
    return changes % 2


def intersection_parity(
    C: Curve,
    H: Graph,
    G: Graph,
    allow_open: bool = False,
    context: Optional[IntersectionContext] = None,
) -> int:
    """
    Intersection number modulo 2, cross-checked against the side changes of
    the curve in the enhanced separation.

    Raises:
        TheoremViolationError: If the two computations disagree
    """
    context = context or IntersectionContext(H, G)
    count = intersection_number(C, H, G, allow_open=allow_open, context=context)
    oracle = transition_parity(C, context.separation, allow_open=allow_open)
    if count.parity != oracle:
        raise TheoremViolationError(
            f"Intersection parity {count.parity} disagrees with side-change parity {oracle}",
            detail=count.to_dict(),
        )
    return count.parity


def random_closed_curve(host: Graph, seed: int, length: int) -> Curve:
    """
    Closed curve from a seeded random walk of the given length, closed up
    along a shortest path back to its start.
    """
    if length < 1:
        raise PreconditionError("random_closed_curve needs a positive length")
    if not host.edges:
        raise PreconditionError("random_closed_curve needs a graph with edges")
    rng = np.random.Generator(np.random.PCG64(seed))
    start = host.vertices[int(rng.integers(len(host)))]
    walk = [start]
    while True:
        for _ in range(length):
            options = sorted(host.neighbors(walk[-1]))
            walk.append(options[int(rng.integers(len(options)))])
        back = nx.shortest_path(host.nx_graph, walk[-1], start)
        sequence = (walk + back[1:])[:-1]
        if len(sequence) >= 3:
            return Curve(tuple(sequence), closed=True)


@dataclass(frozen=True)
class InvarianceVerdict:
    """Parities along a deformation trace and the first step that changed it."""
    preserved: bool
    first_violation: Optional[int]
    parities: Tuple[int, ...]

    def __bool__(self) -> bool:
        return self.preserved


def parity_homotopy_invariance(
    C: Curve,
    trace: DeformationTrace,
    H: Graph,
    G: Graph,
    context: Optional[IntersectionContext] = None,
) -> InvarianceVerdict:
    """
    Check that every step of a curve deformation in G1 keeps the
    intersection parity with H1.

    Raises:
        PreconditionError: If the trace does not start at C
        CertificateError: If the trace does not replay in G1
    """
    context = context or IntersectionContext(H, G)
    if trace.initial != C.as_hypersurface():
        raise PreconditionError("Trace does not start at the given curve")

    start = C.vertices[0]
    parities = []
    first_violation = None
    for i, state in enumerate(trace.states(context.host)):
        if state.is_empty():
            parity = 0
        else:
            curve = C if i == 0 else curve_from_edges(state.facets, start if start in state.vertices else None)
            parity = intersection_parity(curve, H, G, allow_open=not C.closed, context=context)
        parities.append(parity)
        if first_violation is None and parity != parities[0]:
            first_violation = i
    return InvarianceVerdict(first_violation is None, first_violation, tuple(parities))


# Schoenflies


@dataclass(frozen=True)
class SideCertificate:
    """
    Shrinking of one side to a single d-simplex.

    region lists the base d-simplices of the side; measures[i] is the number
    of enhanced vertices strictly inside the side after i steps.
    """
    name: str
    region: Tuple[Simplex, ...]
    trace: DeformationTrace
    measures: Tuple[int, ...]
    ball: Optional[BallCertificate] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "region": [list(s) for s in self.region],
            "trace": self.trace.to_dict(),
            "measures": list(self.measures),
            "ball": None if self.ball is None else self.ball.to_dict(),
        }


@dataclass(frozen=True)
class SchoenfliesCertificate:
    """Separation plus a shrinking trace and ball certificate per side."""
    separation: SeparationResult
    sides: Tuple[SideCertificate, SideCertificate]

    def to_dict(self) -> Dict[str, Any]:
        return {"separation": self.separation.to_dict(), "sides": [s.to_dict() for s in self.sides]}


def closure(simplices) -> Set[Simplex]:
    """All non-empty faces of the given simplices."""
    found: Set[Simplex] = set()
    for s in simplices:
        for size in range(1, len(s) + 1):
            found.update(Simplex(c) for c in combinations(s, size))
    return found


def enclosed_measure(region, facets) -> int:
    """Simplices of the closed region that are not faces of the hypersurface."""
    return len(closure(region) - closure(facets))


def region_boundary(region) -> FrozenSet[Simplex]:
    """Codimension-one faces lying in exactly one simplex of the region."""
    counts: Dict[Simplex, int] = {}
    for s in region:
        for face in Simplex(s).faces():
            counts[face] = counts.get(face, 0) + 1
    return frozenset(f for f, c in counts.items() if c == 1)


def region_connected(region) -> bool:
    region = list(region)
    if not region:
        return False
    by_face: Dict[Simplex, List[int]] = {}
    for i, s in enumerate(region):
        for face in Simplex(s).faces():
            by_face.setdefault(face, []).append(i)
    seen, frontier = {0}, [0]
    while frontier:
        i = frontier.pop()
        for face in Simplex(region[i]).faces():
            for j in by_face[face]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    return len(seen) == len(region)


def _acceptable(region: FrozenSet[Simplex], surface: Hypersurface, d: int) -> bool:
    if not region_connected(region):
        return False
    if not surface.is_closed_pseudomanifold() or not surface.vertex_links_connected():
        return False
    return surface.euler_characteristic() == 1 + (-1) ** (d - 1)


def _shrink_side(name: str, d: int, facets: FrozenSet[Simplex], region: FrozenSet[Simplex]) -> Tuple[DeformationTrace, Tuple[int, ...]]:
    """Greedily remove d-simplices from the region until one is left."""
    start = Hypersurface(d, facets)
    if d == 0:
        return DeformationTrace(start), (enclosed_measure(region, ()),)
    if region_boundary(region) != start.facets:
        raise TheoremViolationError(f"Side {name}: the sphere is not the boundary of the side's simplices")

    surface = start
    steps: List[DeformationStep] = []
    measures = [enclosed_measure(region, surface.facets)]
    while len(region) > 1:
        best = None
        for t in sorted(region):
            boundary_t = frozenset(t.faces())
            if not boundary_t & surface.facets:
                continue
            candidate = Hypersurface(d, surface.facets ^ boundary_t)
            remaining = region - {t}
            if not _acceptable(remaining, candidate, d):
                continue
            measure = enclosed_measure(remaining, candidate.facets)
            if best is None or measure < best[0]:
                best = (measure, t, candidate, remaining)
        if best is None:
            raise TheoremViolationError(
                f"Side {name}: no simplex can be removed with {len(region)} left",
                detail=[list(s) for s in sorted(region)],
            )
        measure, t, candidate, remaining = best
        boundary_t = frozenset(t.faces())
        steps.append(DeformationStep(STEP_DEFORM, t, surface.facets & boundary_t, boundary_t - surface.facets))
        surface, region = candidate, remaining
        measures.append(measure)
        logger.debug(f"Side {name}: removed {tuple(t)}, measure {measure}")
    return DeformationTrace(start, tuple(steps)), tuple(measures)


def _certify_side(name: str, d: int, facets, region, side: Graph, ball_budget: Optional[int]) -> SideCertificate:
    trace, measures = _shrink_side(name, d, facets, region)
    try:
        ball = is_ball(side, ball_budget)
    except ResourceLimitError as e:
        logger.warning(f"Side {name}: direct ball check skipped ({e})")
        ball = None
    else:
        if not ball:
            raise TheoremViolationError(f"Side {name} is not a ball: {ball.reason}")
    logger.info(f"Side {name}: {len(trace)} steps, measures {measures[0]} -> {measures[-1]}")
    return SideCertificate(name, tuple(sorted(region)), trace, measures, ball)


def schoenflies(H: Graph, G: Graph, ball_budget: Optional[int] = None, check_preconditions: bool = True) -> SchoenfliesCertificate:
    """
    Certify that both sides of a (d-1)-sphere H in a d-sphere G are d-balls.

    The separation runs in G1. Each side is then shrunk at the base level:
    starting from the facets of H, d-simplices of G on that side are removed
    one at a time (H -> H xor boundary(t), i.e. H1 -> H1 xor S(t) in G1),
    choosing the step that leaves the fewest enclosed enhanced vertices,
    ties broken by the smallest simplex, until the hypersurface bounds a
    single d-simplex. Each side is also checked with is_ball directly; if that
    check runs out of budget the side certificate carries no ball.
    The two sides are processed concurrently.

    Raises:
        TheoremViolationError: If no progress is possible or a side is not a ball
    """
    result = separate(H, G, enhanced_mode=True, check_preconditions=check_preconditions)
    E = result.enhancement
    d = max((s.dimension for s in cliques(G)), default=-1)
    facets = frozenset(s for s in cliques(H) if s.dimension == d - 1)

    def region_of(inner: FrozenSet[int]) -> FrozenSet[Simplex]:
        return frozenset(E.vertex_map[v] for v in inner if E.vertex_map[v].dimension == d)

    jobs = [("A", result.inner_a, result.A), ("B", result.inner_b, result.B)]
    with ThreadPoolExecutor(max_workers=SCHOENFLIES_WORKERS) as executor:
        futures = [
            executor.submit(_certify_side, name, d, facets, region_of(inner), side, ball_budget)
            for name, inner, side in jobs
        ]
        sides = tuple(f.result() for f in futures)
    return SchoenfliesCertificate(result, sides)


# Euler characteristic bookkeeping


@dataclass(frozen=True)
class EulerVerdict:
    """chi(A) + chi(B) = 2, and chi = 1 on each side once both are balls."""
    chi_a: int
    chi_b: int

    @property
    def sum_ok(self) -> bool:
        return self.chi_a + self.chi_b == 2

    @property
    def balls_ok(self) -> bool:
        return self.chi_a == 1 and self.chi_b == 1

    def __bool__(self) -> bool:
        return self.sum_ok and self.balls_ok


def euler_budget_check(result: SeparationResult) -> EulerVerdict:
    return EulerVerdict(euler_characteristic(result.A), euler_characteristic(result.B))
