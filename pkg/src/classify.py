"""
Recursive classifiers: contractibility, inductive dimension, spheres, balls,
geometric graphs, boundary, orientation and the random-graph dimension
polynomial.

Positive answers are certificates that an independent replayer can check
without search. Negative answers are Refutation values (falsy). Exhausting
the search budget raises ResourceLimitError, which is never a verdict.
"""
import logging
import math
import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import sympy

from cache import ClassificationCache
from errors import GraphInputError, PreconditionError, ResourceLimitError
from generators import random_graph
from graph_core import Graph, Simplex, canonical_form, cliques, euler_characteristic, is_connected, unit_sphere

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 1_000_000
DEFAULT_POLYNOMIAL_BOUND = 40

_CACHE = ClassificationCache()


class SearchBudget:
    """Counts explored search states and raises once the limit is passed."""

    def __init__(self, limit: Optional[int] = None):
        self.limit = DEFAULT_NODE_BUDGET if limit is None else limit
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise ResourceLimitError(f"Search budget of {self.limit} states exhausted", explored=self.used)


def _budget(budget: Union[None, int, SearchBudget]) -> SearchBudget:
    if isinstance(budget, SearchBudget):
        return budget
    return SearchBudget(budget)


def clear_cache() -> None:
    """Forget all memoized classifications."""
    _CACHE.clear()


def cache_stats() -> Dict[str, int]:
    """Hit, miss and entry counts of the shared classification cache."""
    return {"hits": _CACHE.hits, "misses": _CACHE.misses, "entries": len(_CACHE)}


def _map_vertices(vertices, mapping: Dict[int, int]) -> Tuple[int, ...]:
    return tuple(sorted(mapping[v] for v in vertices))


# Result types


@dataclass(frozen=True)
class Refutation:
    """
    A negative classification result.

    Attributes:
        reason: Human-readable failure
        vertex: Vertex whose unit sphere failed, if any
        path: Vertices from the top graph down through nested unit spheres
        explored: Search states visited before giving up
    """
    reason: str
    vertex: Optional[int] = None
    path: Tuple[int, ...] = ()
    explored: int = 0

    kind = "refutation"

    def __bool__(self) -> bool:
        return False

    def relabel(self, mapping: Dict[int, int]) -> "Refutation":
        return Refutation(
            self.reason,
            None if self.vertex is None else mapping[self.vertex],
            tuple(mapping[v] for v in self.path),
            self.explored,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"reason": self.reason, "vertex": self.vertex, "path": list(self.path), "explored": self.explored}


@dataclass(frozen=True)
class ContractionCertificate:
    """
    Proof of contractibility: remove removal_order one by one, each with a
    contractible unit sphere at the time of removal, leaving only `remaining`.
    """
    removal_order: Tuple[int, ...]
    sphere_certificates: Tuple["ContractionCertificate", ...]
    remaining: int

    kind = "contraction"

    def relabel(self, mapping: Dict[int, int]) -> "ContractionCertificate":
        return ContractionCertificate(
            tuple(mapping[v] for v in self.removal_order),
            tuple(c.relabel(mapping) for c in self.sphere_certificates),
            mapping[self.remaining],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "removal_order": list(self.removal_order),
            "remaining": self.remaining,
            "spheres": [c.to_dict() for c in self.sphere_certificates],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ContractionCertificate":
        return cls(
            tuple(int(v) for v in data["removal_order"]),
            tuple(cls.from_dict(c) for c in data["spheres"]),
            int(data["remaining"]),
        )


@dataclass(frozen=True)
class SphereCertificate:
    """
    Proof that a graph is a d-sphere: every unit sphere is a (d-1)-sphere
    and removing `puncture` leaves a contractible graph. The empty graph is
    the (-1)-sphere and carries no puncture.
    """
    dimension: int
    vertex_certificates: Dict[int, "SphereCertificate"] = field(default_factory=dict)
    puncture: Optional[int] = None
    puncture_certificate: Optional[ContractionCertificate] = None

    kind = "sphere"

    def relabel(self, mapping: Dict[int, int]) -> "SphereCertificate":
        return SphereCertificate(
            self.dimension,
            {mapping[v]: c.relabel(mapping) for v, c in self.vertex_certificates.items()},
            None if self.puncture is None else mapping[self.puncture],
            None if self.puncture_certificate is None else self.puncture_certificate.relabel(mapping),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "puncture": self.puncture,
            "puncture_certificate": None if self.puncture_certificate is None else self.puncture_certificate.to_dict(),
            "unit_spheres": {v: self.vertex_certificates[v].to_dict() for v in sorted(self.vertex_certificates)},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SphereCertificate":
        puncture_cert = data.get("puncture_certificate")
        return cls(
            int(data["dimension"]),
            {int(v): cls.from_dict(c) for v, c in (data.get("unit_spheres") or {}).items()},
            None if data.get("puncture") is None else int(data["puncture"]),
            None if puncture_cert is None else ContractionCertificate.from_dict(puncture_cert),
        )


@dataclass(frozen=True)
class BallCertificate:
    """
    Proof that a graph is a d-ball.

    Interior vertices carry (d-1)-sphere certificates for their unit
    spheres, boundary vertices carry (d-1)-ball certificates, the boundary
    vertex set generates a (d-1)-sphere and the graph is contractible.
    """
    dimension: int
    interior: Tuple[int, ...]
    boundary: Tuple[int, ...]
    boundary_certificate: SphereCertificate
    contraction: ContractionCertificate
    vertex_certificates: Dict[int, Union[SphereCertificate, "BallCertificate"]] = field(default_factory=dict)

    kind = "ball"

    def relabel(self, mapping: Dict[int, int]) -> "BallCertificate":
        return BallCertificate(
            self.dimension,
            _map_vertices(self.interior, mapping),
            _map_vertices(self.boundary, mapping),
            self.boundary_certificate.relabel(mapping),
            self.contraction.relabel(mapping),
            {mapping[v]: c.relabel(mapping) for v, c in self.vertex_certificates.items()},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "interior": list(self.interior),
            "boundary": list(self.boundary),
            "boundary_certificate": self.boundary_certificate.to_dict(),
            "contraction": self.contraction.to_dict(),
            "unit_spheres": {
                v: {"kind": c.kind, "certificate": c.to_dict()} for v, c in sorted(self.vertex_certificates.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BallCertificate":
        units: Dict[int, Union[SphereCertificate, BallCertificate]] = {}
        for v, entry in (data.get("unit_spheres") or {}).items():
            loader = cls if entry["kind"] == "ball" else SphereCertificate
            units[int(v)] = loader.from_dict(entry["certificate"])
        return cls(
            int(data["dimension"]),
            tuple(int(v) for v in data["interior"]),
            tuple(int(v) for v in data["boundary"]),
            SphereCertificate.from_dict(data["boundary_certificate"]),
            ContractionCertificate.from_dict(data["contraction"]),
            units,
        )


ContractionResult = Union[ContractionCertificate, Refutation]
SphereResult = Union[SphereCertificate, Refutation]
BallResult = Union[BallCertificate, Refutation]


# Inductive dimension


def inductive_dimension(G: Graph) -> Fraction:
    """
    Inductive dimension: dim(empty) = -1 and
    dim(G) = 1 + (sum of dim(S(x)) over x) / |V|, in exact arithmetic.
    """
    if len(G) == 0:
        return Fraction(-1)
    compacted, _ = G.compact()
    key = (len(compacted), compacted.edges)
    cached = _CACHE.get_value("dimension", key)
    if cached is not None:
        return cached
    total = sum((inductive_dimension(unit_sphere(G, x)) for x in G.vertices), Fraction(0))
    value = 1 + total / len(G)
    _CACHE.put_value("dimension", key, value)
    return value


def _integral_dimension(G: Graph) -> Union[int, Refutation]:
    d = inductive_dimension(G)
    if d.denominator != 1:
        return Refutation(f"inductive dimension {d} is not an integer")
    return int(d)


# Contractibility


def _quick_contraction_refutation(G: Graph) -> Optional[Refutation]:
    if len(G) == 0:
        return Refutation("the empty graph is not contractible")
    if not is_connected(G):
        return Refutation("graph is disconnected")
    chi = euler_characteristic(G)
    if chi != 1:
        return Refutation(f"euler characteristic is {chi}, contractible graphs have 1")
    return None


def _cone_certificate(G: Graph, apex: int, budget: SearchBudget) -> ContractionCertificate:
    """Remove everything but the apex; every unit sphere on the way is again a cone."""
    order: List[int] = []
    spheres: List[ContractionCertificate] = []
    current = G
    for y in G.vertices:
        if y == apex:
            continue
        sphere_cert = _contract(unit_sphere(current, y), budget)
        order.append(y)
        spheres.append(sphere_cert)
        current = current.remove_vertices([y])
    return ContractionCertificate(tuple(order), tuple(spheres), apex)


def _resolve_directly(G: Graph, budget: SearchBudget, use_cache: bool) -> Optional[ContractionResult]:
    """Answer without branching when possible: trivial graphs, cones, cached results."""
    quick = _quick_contraction_refutation(G)
    if quick is not None:
        return quick
    if len(G) == 1:
        return ContractionCertificate((), (), G.vertices[0])
    for v in G.vertices:
        if len(G.neighbors(v)) == len(G) - 1:
            return _cone_certificate(G, v, budget)
    if use_cache:
        return _CACHE.lookup("contractible", G)
    return None


@dataclass
class _Frame:
    graph: Graph
    next_index: int = 0


def _contraction_search(G: Graph, budget: SearchBudget) -> ContractionResult:
    """Depth-first search over removal sequences with backtracking."""
    start = budget.used
    direct = _resolve_directly(G, budget, use_cache=False)
    if direct is not None:
        return direct

    frames = [_Frame(G)]
    steps: List[Tuple[int, ContractionCertificate]] = []
    while frames:
        frame = frames[-1]
        vertices = frame.graph.vertices
        if frame.next_index >= len(vertices):
            frames.pop()
            if frames:
                steps.pop()
                _CACHE.store("contractible", frame.graph, Refutation("no removal sequence reaches K1"))
            continue

        x = vertices[frame.next_index]
        frame.next_index += 1
        budget.charge()
        sphere_cert = _contract(unit_sphere(frame.graph, x), budget)
        if not sphere_cert:
            continue

        rest = frame.graph.remove_vertices([x])
        outcome = _resolve_directly(rest, budget, use_cache=True)
        if outcome is None:
            steps.append((x, sphere_cert))
            frames.append(_Frame(rest))
            logger.debug(f"Contraction search depth {len(steps)}: removed {x}")
        elif outcome:
            steps.append((x, sphere_cert))
            return ContractionCertificate(
                tuple(s[0] for s in steps) + outcome.removal_order,
                tuple(s[1] for s in steps) + outcome.sphere_certificates,
                outcome.remaining,
            )

    return Refutation("no removal sequence reaches K1", explored=budget.used - start)


def _contract(G: Graph, budget: SearchBudget) -> ContractionResult:
    form = canonical_form(G)
    cached = _CACHE.lookup("contractible", G, form)
    if cached is not None:
        return cached
    result = _contraction_search(G, budget)
    _CACHE.store("contractible", G, result, form)
    return result


def is_contractible(G: Graph, budget: Union[None, int, SearchBudget] = None) -> ContractionResult:
    """
    Decide contractibility: G is K1, or some vertex has a contractible unit
    sphere and a contractible remainder.

    Args:
        G: Graph to classify
        budget: Node budget (int) or a shared SearchBudget

    Returns:
        ContractionCertificate or Refutation

    Raises:
        ResourceLimitError: If the search exceeds the budget
    """
    return _contract(G, _budget(budget))


# Spheres and balls


def _sphere(G: Graph, budget: SearchBudget) -> SphereResult:
    if len(G) == 0:
        return SphereCertificate(-1)
    form = canonical_form(G)
    cached = _CACHE.lookup("sphere", G, form)
    if cached is not None:
        return cached
    result = _sphere_search(G, budget)
    _CACHE.store("sphere", G, result, form)
    return result


def _sphere_search(G: Graph, budget: SearchBudget) -> SphereResult:
    d = _integral_dimension(G)
    if isinstance(d, Refutation):
        return d
    chi = euler_characteristic(G)
    if chi != 1 + (-1) ** d:
        return Refutation(f"euler characteristic {chi} does not match a {d}-sphere")

    vertex_certs: Dict[int, SphereCertificate] = {}
    for x in G.vertices:
        budget.charge()
        sub = _sphere(unit_sphere(G, x), budget)
        if not sub:
            return Refutation(f"unit sphere of {x} is not a sphere: {sub.reason}", x, (x,) + sub.path)
        if sub.dimension != d - 1:
            return Refutation(f"unit sphere of {x} is a {sub.dimension}-sphere, expected {d - 1}", x, (x,))
        vertex_certs[x] = sub

    for x in G.vertices:
        punctured = _contract(G.remove_vertices([x]), budget)
        if punctured:
            return SphereCertificate(d, vertex_certs, x, punctured)
    return Refutation("no vertex removal leaves a contractible graph")


def is_sphere(G: Graph, budget: Union[None, int, SearchBudget] = None) -> SphereResult:
    """
    Decide whether G is a d-sphere and find d.

    The empty graph is the (-1)-sphere. Otherwise d is the inductive
    dimension, every unit sphere must be a (d-1)-sphere and some vertex
    (searched in label order) must leave a contractible graph when removed.

    Raises:
        ResourceLimitError: If the search exceeds the budget
    """
    result = _sphere(G, _budget(budget))
    logger.debug(f"is_sphere({G!r}) -> {result.dimension if result else result.reason}")
    return result


def _unit_sphere_as_sphere_or_ball(S: Graph, budget: SearchBudget) -> Union[SphereCertificate, BallCertificate, Refutation]:
    # Spheres have euler characteristic 0 or 2, balls 1
    if len(S) > 0 and euler_characteristic(S) == 1:
        return _ball(S, budget)
    return _sphere(S, budget)


def _ball(G: Graph, budget: SearchBudget) -> BallResult:
    if len(G) == 0:
        return Refutation("the empty graph is not a ball")
    form = canonical_form(G)
    cached = _CACHE.lookup("ball", G, form)
    if cached is not None:
        return cached
    result = _ball_search(G, budget)
    _CACHE.store("ball", G, result, form)
    return result


def _ball_search(G: Graph, budget: SearchBudget) -> BallResult:
    d = _integral_dimension(G)
    if isinstance(d, Refutation):
        return d
    chi = euler_characteristic(G)
    if chi != 1:
        return Refutation(f"euler characteristic {chi} does not match a ball")

    interior: List[int] = []
    boundary_vertices: List[int] = []
    vertex_certs: Dict[int, Union[SphereCertificate, BallCertificate]] = {}
    for x in G.vertices:
        budget.charge()
        sub = _unit_sphere_as_sphere_or_ball(unit_sphere(G, x), budget)
        if not sub:
            return Refutation(f"unit sphere of {x} is neither sphere nor ball: {sub.reason}", x, (x,) + sub.path)
        if sub.dimension != d - 1:
            return Refutation(f"unit sphere of {x} has dimension {sub.dimension}, expected {d - 1}", x, (x,))
        vertex_certs[x] = sub
        (boundary_vertices if sub.kind == "ball" else interior).append(x)

    contraction = _contract(G, budget)
    if not contraction:
        return Refutation(f"graph is not contractible: {contraction.reason}")

    boundary_cert = _sphere(G.induced(boundary_vertices), budget)
    if not boundary_cert:
        return Refutation(f"boundary is not a sphere: {boundary_cert.reason}", None, boundary_cert.path)
    if boundary_cert.dimension != d - 1:
        return Refutation(f"boundary is a {boundary_cert.dimension}-sphere, expected {d - 1}")
    return BallCertificate(d, tuple(interior), tuple(boundary_vertices), boundary_cert, contraction, vertex_certs)


def is_ball(G: Graph, budget: Union[None, int, SearchBudget] = None) -> BallResult:
    """
    Decide whether G is a d-ball.

    K1 is the only 0-ball. In general G must be contractible, every unit
    sphere must be a (d-1)-sphere (interior vertex) or a (d-1)-ball
    (boundary vertex), and the boundary vertices must generate a
    (d-1)-sphere.

    Raises:
        ResourceLimitError: If the search exceeds the budget
    """
    return _ball(G, _budget(budget))


# Geometric graphs


class GeometryKind(Enum):
    """Verdicts of is_geometric."""
    GEOMETRIC = "geometric"
    WITH_BOUNDARY = "geometric_with_boundary"
    NEITHER = "neither"


@dataclass(frozen=True)
class GeometryVerdict:
    """Result of is_geometric with its witness."""
    kind: GeometryKind
    dimension: Optional[int]
    interior: Tuple[int, ...] = ()
    boundary: Tuple[int, ...] = ()
    witness: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.kind != GeometryKind.NEITHER

    def describe(self) -> str:
        if self.kind == GeometryKind.NEITHER:
            return f"neither ({self.reason})"
        return f"{self.kind.value} d={self.dimension}"


def is_geometric(G: Graph, budget: Union[None, int, SearchBudget] = None) -> GeometryVerdict:
    """
    Classify G as a geometric d-graph, a geometric d-graph with boundary,
    or neither.

    Every unit sphere must be a (d-1)-sphere or a (d-1)-ball. With boundary,
    the boundary vertices must in turn generate a geometric (d-1)-graph
    without boundary.

    Raises:
        PreconditionError: If G is empty
        ResourceLimitError: If the search exceeds the budget
    """
    if len(G) == 0:
        raise PreconditionError("is_geometric needs a non-empty graph")
    budget = _budget(budget)

    d = _integral_dimension(G)
    if isinstance(d, Refutation):
        return GeometryVerdict(GeometryKind.NEITHER, None, reason=d.reason)

    interior: List[int] = []
    boundary_vertices: List[int] = []
    for x in G.vertices:
        sub = _unit_sphere_as_sphere_or_ball(unit_sphere(G, x), budget)
        if not sub or sub.dimension != d - 1:
            reason = sub.reason if not sub else f"dimension {sub.dimension}"
            return GeometryVerdict(
                GeometryKind.NEITHER, d, witness=x,
                reason=f"unit sphere of {x} is not a {d - 1}-sphere or {d - 1}-ball ({reason})",
            )
        (boundary_vertices if sub.kind == "ball" else interior).append(x)

    if not boundary_vertices:
        return GeometryVerdict(GeometryKind.GEOMETRIC, d, tuple(interior))

    inner = is_geometric(G.induced(boundary_vertices), budget)
    if inner.kind != GeometryKind.GEOMETRIC or inner.dimension != d - 1:
        return GeometryVerdict(
            GeometryKind.NEITHER, d, tuple(interior), tuple(boundary_vertices),
            reason=f"boundary is not a geometric {d - 1}-graph without boundary",
        )
    return GeometryVerdict(GeometryKind.WITH_BOUNDARY, d, tuple(interior), tuple(boundary_vertices))


def boundary(G: Graph, budget: Union[None, int, SearchBudget] = None) -> Graph:
    """
    The graph generated by vertices whose unit sphere is a ball.

    Raises:
        PreconditionError: If G is not geometric with boundary
    """
    verdict = is_geometric(G, budget)
    if verdict.kind != GeometryKind.WITH_BOUNDARY:
        raise PreconditionError(f"boundary needs a geometric graph with boundary, got {verdict.describe()}")
    return G.induced(verdict.boundary)


# Orientation


@dataclass(frozen=True)
class Orientation:
    """
    Sign per d-simplex: +1 means the sorted vertex order is positive.

    A d-simplex with sign s induces sign s * (-1)^i on the face that omits
    its i-th vertex.
    """
    dimension: int
    signs: Dict[Simplex, int]

    kind = "orientation"

    def sign(self, simplex) -> int:
        return self.signs[Simplex(simplex)]

    def induced_face_sign(self, facet, face) -> int:
        facet = Simplex(facet)
        missing = [i for i, v in enumerate(facet) if v not in face]
        if len(missing) != 1:
            raise GraphInputError(f"{tuple(face)} is not a facet of {tuple(facet)}")
        return self.signs[facet] * (-1) ** missing[0]

    def negate(self) -> "Orientation":
        return Orientation(self.dimension, {s: -v for s, v in self.signs.items()})

    def to_dict(self) -> Dict[str, Any]:
        return {"dimension": self.dimension, "signs": [[list(s), v] for s, v in sorted(self.signs.items())]}


@dataclass(frozen=True)
class NonOrientableWitness:
    """A closed chain of d-simplices along which signs cannot be propagated."""
    cycle: Tuple[Simplex, ...]
    face: Simplex

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"cycle": [list(s) for s in self.cycle], "face": list(self.face)}


def permutation_sign(sequence) -> int:
    """Sign of the permutation sorting a sequence of distinct items."""
    items = list(sequence)
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def _chain_to_root(parent: Dict[Simplex, Optional[Simplex]], start: Simplex) -> List[Simplex]:
    chain = [start]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    return chain


def orient(G: Graph, budget: Union[None, int, SearchBudget] = None) -> Union[Orientation, NonOrientableWitness]:
    """
    Find a consistent orientation of the d-simplices of a geometric graph.

    Signs are propagated breadth-first over the face-adjacency graph of the
    d-simplices, starting each connected piece from its smallest simplex with
    sign +1. For d = 0 the first vertex gets +1 and every other vertex -1, so
    the 0-sphere is oriented like the boundary of an edge.

    Returns:
        Orientation, or NonOrientableWitness naming a conflicting cycle

    Raises:
        PreconditionError: If G is not geometric (with or without boundary)
    """
    if len(G) == 0:
        raise PreconditionError("orient needs a non-empty graph")
    verdict = is_geometric(G, budget)
    if not verdict:
        raise PreconditionError(f"orient needs a geometric graph, got {verdict.describe()}")
    d = verdict.dimension

    facets = [s for s in cliques(G) if s.dimension == d]
    if d == 0:
        return Orientation(0, {s: (1 if i == 0 else -1) for i, s in enumerate(facets)})

    by_face: Dict[Simplex, List[Simplex]] = {}
    for facet in facets:
        for face in facet.faces():
            by_face.setdefault(face, []).append(facet)

    signs: Dict[Simplex, int] = {}
    parent: Dict[Simplex, Optional[Simplex]] = {}
    for root in facets:
        if root in signs:
            continue
        signs[root] = 1
        parent[root] = None
        queue = deque([root])
        while queue:
            tau = queue.popleft()
            for i, v in enumerate(tau):
                face = Simplex(w for w in tau if w != v)
                for sigma in by_face[face]:
                    if sigma == tau:
                        continue
                    j = next(k for k, w in enumerate(sigma) if w not in face)
                    wanted = -signs[tau] * (-1) ** (i + j)
                    if sigma not in signs:
                        signs[sigma] = wanted
                        parent[sigma] = tau
                        queue.append(sigma)
                    elif signs[sigma] != wanted:
                        return _witness(parent, tau, sigma, face)

    logger.info(f"Oriented {len(signs)} {d}-simplices")
    return Orientation(d, signs)


def _witness(parent, tau: Simplex, sigma: Simplex, face: Simplex) -> NonOrientableWitness:
    up_tau = _chain_to_root(parent, tau)
    up_sigma = _chain_to_root(parent, sigma)
    on_sigma_path = set(up_sigma)
    meet = next(s for s in up_tau if s in on_sigma_path)
    loop = up_tau[: up_tau.index(meet) + 1] + list(reversed(up_sigma[: up_sigma.index(meet)]))
    logger.info(f"Orientation conflict across face {tuple(face)}, cycle of {len(loop)} simplices")
    return NonOrientableWitness(tuple(loop), face)


# Random graph dimension


P = sympy.Symbol("p")
_POLYNOMIALS: List[sympy.Poly] = []
_POLYNOMIALS_LOCK = threading.Lock()


def expected_dimension_polynomial(n: int, bound: int = DEFAULT_POLYNOMIAL_BOUND) -> sympy.Poly:
    """
    Expected inductive dimension of G(n+1, p) as a polynomial in p.

    d_{n+1}(p) = 1 + sum_k C(n, k) p^k (1-p)^(n-k) d_k(p), with d_0 = -1.

    Args:
        n: Index so that the result describes graphs on n+1 vertices
        bound: Largest accepted n

    Returns:
        sympy Poly in p over the rationals

    Raises:
        GraphInputError: If n is negative or above bound
    """
    if n < 0 or n > bound:
        raise GraphInputError(f"expected_dimension_polynomial needs 0 <= n <= {bound}, got {n}")
    one = sympy.Poly(1, P, domain=sympy.QQ)
    q = sympy.Poly(1 - P, P, domain=sympy.QQ)
    p = sympy.Poly(P, P, domain=sympy.QQ)
    with _POLYNOMIALS_LOCK:
        if not _POLYNOMIALS:
            _POLYNOMIALS.append(-one)
        while len(_POLYNOMIALS) <= n + 1:
            m = len(_POLYNOMIALS) - 1
            total = one
            for k in range(m + 1):
                total = total + math.comb(m, k) * p ** k * q ** (m - k) * _POLYNOMIALS[k]
            _POLYNOMIALS.append(total)
        return _POLYNOMIALS[n + 1]


def evaluate_expected_dimension(n: int, p: Union[float, Fraction]) -> Union[float, Fraction]:
    """Value of expected_dimension_polynomial(n) at p, exact for Fraction input."""
    if isinstance(p, Fraction):
        value = expected_dimension_polynomial(n).eval(sympy.Rational(p.numerator, p.denominator))
        return Fraction(int(value.p), int(value.q))
    return float(expected_dimension_polynomial(n).eval(sympy.Float(p)))


def sample_mean_dimension(n: int, p: float, samples: int, seed: int = 0) -> Tuple[float, float]:
    """
    Monte-Carlo mean of the inductive dimension over G(n, p).

    All samples come from one PCG64 stream seeded with `seed`.

    Returns:
        (mean, standard error of the mean)
    """
    if samples < 2:
        raise GraphInputError(f"sample_mean_dimension needs at least 2 samples, got {samples}")
    rng = np.random.Generator(np.random.PCG64(seed))
    values = np.array([float(inductive_dimension(random_graph(n, p, rng=rng))) for _ in range(samples)])
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(samples))
    logger.info(f"G({n}, {p}): mean dimension {mean:.5f} +/- {stderr:.5f} over {samples} samples")
    return mean, stderr
