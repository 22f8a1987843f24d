"""
Independent certificate replayer.

Every check here replays recorded data against the input graph: vertex
removals, unit-sphere certificates, deformation steps and component
memberships. Nothing searches.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, FrozenSet, Optional, Union

from classify import BallCertificate, ContractionCertificate, SphereCertificate
from documents import CertificateDocument, graph_digest, graph_from_dict, payload_digest
from enhance import enhanced, lift_subgraph
from errors import CertificateError, GraphInputError
from graph_core import Graph, Simplex, cliques, is_connected, unit_sphere
from homotopy import Curve, DeformationTrace, is_simple_closed, is_simple_path
from separation import enclosed_measure, intersection_number, region_boundary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    kind: str
    failing_step: Optional[str] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(path: str, message: str) -> None:
    raise CertificateError(message, step=path)


def check_contraction(G: Graph, cert: ContractionCertificate, path: str = "contraction") -> None:
    """Remove the recorded vertices one by one and check each unit sphere."""
    if len(cert.sphere_certificates) != len(cert.removal_order):
        _fail(path, "one unit-sphere certificate is needed per removal")
    current = G
    for i, v in enumerate(cert.removal_order):
        if v not in current:
            _fail(f"{path}.removal_order[{i}]", f"vertex {v} is not present")
        check_contraction(unit_sphere(current, v), cert.sphere_certificates[i], f"{path}.spheres[{i}]")
        current = current.remove_vertices([v])
    if current.vertices != (cert.remaining,):
        _fail(f"{path}.remaining", f"expected only {cert.remaining} to remain, found {len(current)} vertices")


def check_sphere(G: Graph, cert: SphereCertificate, path: str = "sphere", dimension: Optional[int] = None) -> None:
    if dimension is not None and cert.dimension != dimension:
        _fail(f"{path}.dimension", f"expected a {dimension}-sphere, certificate says {cert.dimension}")
    if cert.dimension == -1:
        if len(G):
            _fail(path, "only the empty graph is a (-1)-sphere")
        return
    if not len(G):
        _fail(path, "the empty graph is only a (-1)-sphere")
    if set(cert.vertex_certificates) != set(G.vertices):
        _fail(f"{path}.unit_spheres", "unit-sphere certificates do not cover the vertices")
    for v in G.vertices:
        check_sphere(unit_sphere(G, v), cert.vertex_certificates[v], f"{path}.unit_spheres[{v}]", cert.dimension - 1)
    if cert.puncture not in G or cert.puncture_certificate is None:
        _fail(f"{path}.puncture", "missing puncture")
    check_contraction(G.remove_vertices([cert.puncture]), cert.puncture_certificate, f"{path}.puncture_certificate")


def check_ball(G: Graph, cert: BallCertificate, path: str = "ball", dimension: Optional[int] = None) -> None:
    if dimension is not None and cert.dimension != dimension:
        _fail(f"{path}.dimension", f"expected a {dimension}-ball, certificate says {cert.dimension}")
    interior, boundary = set(cert.interior), set(cert.boundary)
    if interior & boundary or interior | boundary != set(G.vertices):
        _fail(f"{path}.interior", "interior and boundary must partition the vertices")
    if set(cert.vertex_certificates) != set(G.vertices):
        _fail(f"{path}.unit_spheres", "unit-sphere certificates do not cover the vertices")
    for v in G.vertices:
        sub = cert.vertex_certificates[v]
        where = f"{path}.unit_spheres[{v}]"
        if v in interior:
            if not isinstance(sub, SphereCertificate):
                _fail(where, f"interior vertex {v} needs a sphere certificate")
            check_sphere(unit_sphere(G, v), sub, where, cert.dimension - 1)
        else:
            if not isinstance(sub, BallCertificate):
                _fail(where, f"boundary vertex {v} needs a ball certificate")
            check_ball(unit_sphere(G, v), sub, where, cert.dimension - 1)
    check_sphere(G.induced(boundary), cert.boundary_certificate, f"{path}.boundary_certificate", cert.dimension - 1)
    check_contraction(G, cert.contraction, f"{path}.contraction")


def _separation_sides(G: Graph, payload: Dict[str, Any], path: str = "separation"):
    """Check a recorded separation; returns (host, sphere, inner_a, inner_b)."""
    H = graph_from_dict(payload["sphere"])
    if not H.is_subgraph_of(G):
        _fail(f"{path}.sphere", "sphere is not a subgraph of the input")
    if payload["enhanced"]:
        E = enhanced(G)
        host, sphere = E.enhanced, lift_subgraph(E, H)
    else:
        host, sphere = G, H
    if list(sphere.vertices) != [int(v) for v in payload["sphere_vertices"]]:
        _fail(f"{path}.sphere_vertices", "recorded sphere vertices do not match")

    inner_a = frozenset(int(v) for v in payload["inner_a"])
    inner_b = frozenset(int(v) for v in payload["inner_b"])
    on_sphere = set(sphere.vertices)
    if not inner_a or not inner_b:
        _fail(f"{path}.inner_a", "both sides need an inner vertex")
    if inner_a & inner_b or (inner_a | inner_b) & on_sphere:
        _fail(f"{path}.inner_b", "sides overlap each other or the sphere")
    if inner_a | inner_b | on_sphere != set(host.vertices):
        _fail(f"{path}.inner_b", "sides and sphere do not cover the host")
    for name, inner in (("inner_a", inner_a), ("inner_b", inner_b)):
        if not is_connected(host.induced(inner)):
            _fail(f"{path}.{name}", f"{name} is not connected")
    if any(host.neighbors(v) & inner_b for v in inner_a):
        _fail(f"{path}.inner_b", "an edge joins the two sides")
    return host, sphere, H, inner_a, inner_b


def check_separation(G: Graph, payload: Dict[str, Any]) -> None:
    _separation_sides(G, payload)


def check_schoenflies(G: Graph, payload: Dict[str, Any]) -> None:
    host, sphere, H, inner_a, inner_b = _separation_sides(G, payload["separation"] | {"sphere": payload["sphere"]})
    E = enhanced(G)
    d = max((s.dimension for s in cliques(G)), default=-1)
    sides = payload["sides"]
    if len(sides) != 2:
        _fail("sides", "expected two sides")
    for i, (side, inner) in enumerate(zip(sides, (inner_a, inner_b))):
        path = f"sides[{i}]"
        region = frozenset(Simplex(s) for s in side["region"])
        expected = frozenset(E.vertex_map[v] for v in inner if E.vertex_map[v].dimension == d)
        if region != expected:
            _fail(f"{path}.region", "region is not the side's top simplices")
        _check_shrinking(G, H, d, region, side, path)
        if side.get("ball") is not None:
            check_ball(host.induced(inner | set(sphere.vertices)), BallCertificate.from_dict(side["ball"]), f"{path}.ball", d)


def _check_shrinking(G: Graph, H: Graph, d: int, region: FrozenSet[Simplex], side: Dict[str, Any], path: str) -> None:
    trace = DeformationTrace.from_dict(side["trace"])
    measures = [int(m) for m in side["measures"]]
    facets = frozenset(s for s in cliques(H) if s.dimension == d - 1)
    if trace.initial.facets != facets or trace.initial.dimension != d:
        _fail(f"{path}.trace.initial", "trace does not start at the sphere")
    if d == 0:
        if len(region) != 1 or len(trace) or measures != [enclosed_measure(region, ())]:
            _fail(f"{path}.trace", "a 0-dimensional side is a single vertex")
        return
    if region_boundary(region) != facets:
        _fail(f"{path}.region", "sphere is not the boundary of the region")

    states = trace.states(G)
    if len(measures) != len(states):
        _fail(f"{path}.measures", "one measure per state is needed")
    remaining = set(region)
    for i, state in enumerate(states):
        if i:
            carrier = trace.steps[i - 1].carrier
            if carrier not in remaining:
                _fail(f"{path}.trace.steps[{i - 1}]", f"carrier {tuple(carrier)} is not in the remaining region")
            remaining.discard(carrier)
            if measures[i] >= measures[i - 1]:
                _fail(f"{path}.measures[{i}]", "measure did not decrease")
        if enclosed_measure(remaining, state.facets) != measures[i]:
            _fail(f"{path}.measures[{i}]", "recorded measure does not match")
    if len(remaining) != 1 or states[-1].facets != frozenset(Simplex(next(iter(remaining))).faces()):
        _fail(f"{path}.trace", "final hypersurface is not the boundary of one simplex")


def check_trace(G: Graph, payload: Dict[str, Any]) -> None:
    """Replay a deformation trace in G (or G1) and check curve shape and end state."""
    host = enhanced(G).enhanced if payload.get("host") == "enhanced" else G
    trace = DeformationTrace.from_dict(payload["trace"])
    states = trace.states(host)
    if payload.get("curve"):
        ends = payload.get("ends")
        for i, state in enumerate(states):
            if state.is_empty():
                continue
            shaped = is_simple_closed(state.facets) if ends is None else is_simple_path(state.facets, tuple(ends))
            if not shaped:
                _fail(f"trace.steps[{i - 1}]" if i else "trace.initial", "state is not a simple curve")
    if payload.get("final_empty") and not states[-1].is_empty():
        _fail("trace", "trace does not end at the empty hypersurface")


def check_intersection(G: Graph, payload: Dict[str, Any]) -> None:
    """Recompute the intersection count and compare it with the recorded one."""
    H = graph_from_dict(payload["sphere"])
    curve = Curve(tuple(int(v) for v in payload["curve"]["vertices"]), bool(payload["curve"]["closed"]))
    count = intersection_number(
        curve, H, G,
        curve_orientation=int(payload["count"]["curve_orientation"]),
        allow_open=not curve.closed,
    )
    recorded = payload["count"]
    if count.to_dict() != recorded:
        for key in ("total", "signed_total", "events"):
            if count.to_dict()[key] != recorded.get(key):
                _fail(f"count.{key}", f"recorded {key} does not match the recomputed value")
        _fail("count", "recorded count does not match")


CHECKERS: Dict[str, Callable[[Graph, Dict[str, Any]], None]] = {
    "contraction": lambda G, p: check_contraction(G, ContractionCertificate.from_dict(p)),
    "sphere": lambda G, p: check_sphere(G, SphereCertificate.from_dict(p)),
    "ball": lambda G, p: check_ball(G, BallCertificate.from_dict(p)),
    "separation": check_separation,
    "schoenflies": check_schoenflies,
    "trace": check_trace,
    "intersection": check_intersection,
}


def verify_document(document: CertificateDocument, graph: Graph) -> VerificationReport:
    """
    Check a certificate document against its input graph.

    The payload is replayed before its digest is compared, so an edited
    certificate names the first replay step that breaks. A digest mismatch
    is reported only when the edited payload still replays.

    Returns:
        VerificationReport naming the first failing step, if any
    """
    kind = document.kind
    if graph_digest(graph) != document.input_digest:
        return VerificationReport(False, kind, "input_digest", "certificate was written for a different graph")
    try:
        CHECKERS[kind](graph, document.payload)
    except CertificateError as e:
        logger.info(f"{kind} certificate fails at {e.step}: {e}")
        return VerificationReport(False, kind, e.step, str(e))
    except (GraphInputError, KeyError, TypeError, ValueError) as e:
        logger.info(f"{kind} certificate payload is malformed: {e}")
        return VerificationReport(False, kind, "payload", f"malformed payload: {e}")
    if payload_digest(document.payload) != document.payload_digest:
        logger.info(f"{kind} certificate replays but its payload digest does not match")
        return VerificationReport(False, kind, "payload_digest", "payload was modified after it was written")
    logger.info(f"{kind} certificate verified")
    return VerificationReport(True, kind)



def verify_certificate(kind: str, payload: Union[Dict[str, Any], Any], graph: Graph) -> VerificationReport:
    """Verify an in-memory payload without the document envelope."""
    document = CertificateDocument.create(kind, payload if isinstance(payload, dict) else payload.to_dict(), graph)
    return verify_document(document, graph)
