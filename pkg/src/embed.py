"""
Embedding checks for sub-spheres, knot co-dimension and transversality.

H is embedded in G when, for every simplex {x1..xk} of G whose vertices all
lie in H, the graph H cut down to the common neighbors of x1..xk is again a
sphere (the empty graph counting as the (-1)-sphere).
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from classify import is_geometric, is_sphere
from enhance import EnhancedGraph, lift_subgraph
from errors import PreconditionError
from graph_core import Graph, Simplex, cliques
from homotopy import Curve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingReport:
    """
    Outcome of is_embedded.

    On failure witness_simplex and witness_graph name the intersection that
    is not a sphere; recomputing it reproduces the failure.
    """
    embedded: bool
    checked: int
    witness_simplex: Optional[Simplex] = None
    witness_graph: Optional[Graph] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.embedded


def intersection_graph(H: Graph, G: Graph, simplex) -> Graph:
    """H cut down to the common neighbors (in G) of the simplex vertices."""
    common = set(H.vertices)
    for x in simplex:
        common &= G.neighbors(x)
    return H.induced(common)


def _require_sphere_pair(H: Graph, G: Graph) -> None:
    if not H.is_subgraph_of(G):
        raise PreconditionError("H is not a subgraph of G")
    if not is_sphere(H):
        raise PreconditionError("H is not a sphere")
    if len(G) == 0 or not is_geometric(G):
        raise PreconditionError("G is not a geometric graph")


def is_embedded(H: Graph, G: Graph, check_preconditions: bool = True) -> EmbeddingReport:
    """
    Check that a sphere H is embedded in a geometric graph G.

    Args:
        H: Sphere subgraph of G
        G: Geometric host graph
        check_preconditions: Verify that H is a sphere and G is geometric first

    Returns:
        EmbeddingReport

    Raises:
        PreconditionError: If check_preconditions is set and a precondition fails
    """
    if check_preconditions:
        _require_sphere_pair(H, G)
    elif not H.is_subgraph_of(G):
        raise PreconditionError("H is not a subgraph of G")

    inside = set(H.vertices)
    checked = 0
    for simplex in cliques(G):
        if not inside.issuperset(simplex):
            continue
        checked += 1
        cut = intersection_graph(H, G, simplex)
        result = is_sphere(cut)
        if not result:
            logger.debug(f"Embedding fails at {tuple(simplex)}: {result.reason}")
            return EmbeddingReport(
                False, checked, simplex, cut,
                f"intersection at {tuple(simplex)} is not a sphere: {result.reason}",
            )
    return EmbeddingReport(True, checked)


def knot_codimension(H: Graph, G: Graph) -> int:
    """
    k such that H is an embedded (d-k)-sphere in the d-sphere G.

    Raises:
        PreconditionError: If G is not a sphere or H is not embedded
    """
    host = is_sphere(G)
    if not host:
        raise PreconditionError("G is not a sphere")
    knot = is_sphere(H)
    if not knot:
        raise PreconditionError("H is not a sphere")
    report = is_embedded(H, G)
    if not report:
        raise PreconditionError(f"H is not embedded: {report.reason}")
    return host.dimension - knot.dimension


@dataclass(frozen=True)
class TransversalityReport:
    """Whether a curve crosses a hypersurface transversely, with the first bad index."""
    transverse: bool
    failing_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.transverse


def curve_crosses_transversely(C: Curve, H: Graph, G: Graph, check_preconditions: bool = False) -> TransversalityReport:
    """
    C crosses H transversely when every visit to H is a single vertex whose
    curve neighbors both lie outside H. Closed curves wrap around; the missing
    neighbor at the end of an open curve counts as outside.

    Raises:
        PreconditionError: If check_preconditions is set and H is not embedded in G
        GraphInputError: If C is not a curve in G
    """
    C.validate(G)
    if check_preconditions and not is_embedded(H, G):
        raise PreconditionError("H is not embedded in G")
    for t, v in enumerate(C.vertices):
        if v not in H:
            continue
        before, after = C.at(t - 1), C.at(t + 1)
        if (before is not None and before in H) or (after is not None and after in H):
            return TransversalityReport(False, t)
    return TransversalityReport(True)


@dataclass(frozen=True)
class TransverseIntersection:
    """Common vertices of two lifted spheres and whether they meet transversely."""
    transverse: bool
    vertices: Tuple[int, ...]
    edges: int

    def __bool__(self) -> bool:
        return self.transverse


def lifted_spheres_transverse(K1: Graph, H1: Graph, host: Graph) -> TransverseIntersection:
    """Two spheres of G1 meet transversely when they share vertices but no edges."""
    common = sorted(set(K1.vertices) & set(H1.vertices))
    shared = host.induced(common)
    return TransverseIntersection(bool(common) and not shared.edges, tuple(common), len(shared.edges))


def spheres_transverse(K: Graph, H: Graph, E: EnhancedGraph, check_preconditions: bool = True) -> TransverseIntersection:
    """
    Lift two spheres of complementary dimension into G1 and test that they
    meet in a non-empty edgeless graph.

    Raises:
        PreconditionError: If K or H is not a subgraph of the base, or (when
            checking) the dimensions do not add up to that of the base sphere
    """
    if check_preconditions:
        host = is_sphere(E.base)
        k, h = is_sphere(K), is_sphere(H)
        if not host or not k or not h:
            raise PreconditionError("spheres_transverse needs spheres K, H in a sphere")
        if k.dimension + h.dimension != host.dimension:
            raise PreconditionError(
                f"Dimensions {k.dimension} and {h.dimension} are not complementary in a {host.dimension}-sphere"
            )
    return lifted_spheres_transverse(lift_subgraph(E, K), lift_subgraph(E, H), E.enhanced)
