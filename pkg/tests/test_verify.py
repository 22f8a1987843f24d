"""
Tests for the independent certificate replayer.

Every certificate kind is produced by the library, verified, then tampered
with to check that the replayer names the failing step.

To run these tests:

    pytest tests/test_verify.py -v
"""
import copy
import sys
from pathlib import Path

import pytest

# Add src directory to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from classify import ContractionCertificate, clear_cache, is_ball, is_contractible, is_sphere
from documents import CertificateDocument, graph_to_dict
from generators import cycle, icosahedron, line, octahedron, wheel
from graph_core import Graph
from homotopy import Curve, contract_curve, lift_curve
from separation import intersection_context, intersection_number, schoenflies, separate
from verify import verify_certificate, verify_document

EQUATOR = Graph([0, 1, 2, 3], [(0, 2), (2, 1), (1, 3), (3, 0)])


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_cache()
    yield


class TestClassificationCertificates:
    """Test contraction, sphere and ball certificates."""

    def test_handmade_contraction(self):
        """Test a contraction of L3 written out by hand."""
        leaf = lambda v: ContractionCertificate((), (), v)  # noqa: E731
        cert = ContractionCertificate((0, 1), (leaf(1), leaf(2)), 2)
        assert verify_certificate("contraction", cert, line(3))

    def test_wrong_removal_order(self):
        """Test that removing the middle vertex first fails at its sphere certificate."""
        leaf = lambda v: ContractionCertificate((), (), v)  # noqa: E731
        cert = ContractionCertificate((1, 0), (leaf(1), leaf(2)), 2)
        report = verify_certificate("contraction", cert, line(3))
        assert not report
        assert report.failing_step == "contraction.spheres[0].remaining"

    def test_computed_certificates_verify(self):
        """Test certificates produced by the classifiers."""
        assert verify_certificate("contraction", is_contractible(wheel(6)), wheel(6))
        assert verify_certificate("sphere", is_sphere(octahedron()), octahedron())
        assert verify_certificate("sphere", is_sphere(icosahedron()), icosahedron())
        assert verify_certificate("ball", is_ball(wheel(5)), wheel(5))
        assert verify_certificate("ball", is_ball(line(4)), line(4))

    def test_tampered_sphere_dimension(self):
        """Test that a wrong dimension is caught at the first unit sphere."""
        data = is_sphere(octahedron()).to_dict()
        data["dimension"] = 3
        report = verify_certificate("sphere", data, octahedron())
        assert not report
        assert report.failing_step == "sphere.unit_spheres[0].dimension"

    def test_tampered_ball_boundary(self):
        """Test that interior and boundary must partition the vertices."""
        data = is_ball(wheel(5)).to_dict()
        data["interior"] = [0, 5]
        report = verify_certificate("ball", data, wheel(5))
        assert not report
        assert report.failing_step == "ball.interior"

    def test_certificate_for_another_graph(self):
        """Test that a certificate is bound to its input graph."""
        document = CertificateDocument.create("sphere", is_sphere(cycle(5)).to_dict(), cycle(5))
        report = verify_document(document, cycle(6))
        assert not report
        assert report.failing_step == "input_digest"

    def test_modified_payload(self):
        """Test that an edit which still replays is caught by the payload digest."""
        document = CertificateDocument.create("sphere", is_sphere(cycle(5)).to_dict(), cycle(5))
        payload = copy.deepcopy(document.payload)
        payload["note"] = "edited"
        forged = CertificateDocument(document.kind, payload, document.tool_version,
                                     document.input_digest, document.payload_digest)
        assert verify_document(forged, cycle(5)).failing_step == "payload_digest"

    def test_malformed_payload(self):
        """Test that a payload missing fields is reported, not raised."""
        report = verify_certificate("ball", {"dimension": 2}, wheel(5))
        assert not report
        assert report.failing_step == "payload"


class TestSeparationCertificates:
    """Test separation and Schoenflies certificates."""

    def separation_payload(self, enhanced_mode=True):
        result = separate(EQUATOR, octahedron(), enhanced_mode=enhanced_mode)
        return {"sphere": graph_to_dict(EQUATOR), **result.to_dict()}

    def test_separation_verifies(self):
        """Test both modes."""
        assert verify_certificate("separation", self.separation_payload(), octahedron())
        assert verify_certificate("separation", self.separation_payload(False), octahedron())

    def test_sides_swapped_vertex(self):
        """Test that moving a vertex across the sphere is caught."""
        payload = self.separation_payload()
        payload["inner_b"].append(payload["inner_a"].pop())
        report = verify_certificate("separation", payload, octahedron())
        assert not report
        assert report.failing_step.startswith("separation.")

    def test_schoenflies_verifies(self):
        """Test the full Schoenflies certificate."""
        cert = schoenflies(EQUATOR, octahedron())
        payload = {"sphere": graph_to_dict(EQUATOR), **cert.to_dict()}
        assert verify_certificate("schoenflies", payload, octahedron())

    def test_schoenflies_bad_measure(self):
        """Test that a measure that does not decrease is reported."""
        cert = schoenflies(EQUATOR, octahedron())
        payload = {"sphere": graph_to_dict(EQUATOR), **cert.to_dict()}
        payload["sides"][0]["measures"][1] += 100
        report = verify_certificate("schoenflies", payload, octahedron())
        assert not report
        assert report.failing_step == "sides[0].measures[1]"

    def test_schoenflies_truncated_trace(self):
        """Test that a trace ending before a single simplex is rejected."""
        cert = schoenflies(EQUATOR, octahedron())
        payload = {"sphere": graph_to_dict(EQUATOR), **cert.to_dict()}
        payload["sides"][1]["trace"]["steps"].pop()
        payload["sides"][1]["measures"].pop()
        report = verify_certificate("schoenflies", payload, octahedron())
        assert not report
        assert report.failing_step == "sides[1].trace"


class TestTraceAndIntersectionCertificates:
    """Test deformation traces and intersection counts."""

    def trace_payload(self):
        trace = contract_curve(octahedron(), Curve((0, 2, 1, 3)))
        return {"host": "base", "trace": trace.to_dict(), "curve": True, "final_empty": True}

    def test_contraction_trace_verifies(self):
        """Test a curve contraction trace."""
        assert verify_certificate("trace", self.trace_payload(), octahedron())

    def test_forged_trace_step(self):
        """Test that a step with a wrong carrier fails at that step."""
        payload = self.trace_payload()
        payload["trace"]["steps"][0]["carrier"] = [1, 3, 5]
        report = verify_certificate("trace", payload, octahedron())
        assert not report
        assert report.failing_step == "steps[0]"

    def test_unfinished_trace(self):
        """Test that a trace claimed to end empty must do so."""
        payload = self.trace_payload()
        payload["trace"]["steps"].pop()
        report = verify_certificate("trace", payload, octahedron())
        assert not report
        assert report.failing_step == "trace"

    def test_intersection_verifies_and_detects_edits(self):
        """Test an intersection count and a forged total."""
        context = intersection_context(EQUATOR, octahedron())
        curve = lift_curve(context.enhancement, Curve((4, 0, 5, 1)))
        count = intersection_number(curve, EQUATOR, octahedron(), context=context)
        payload = {"sphere": graph_to_dict(EQUATOR), "curve": curve.to_dict(), "count": count.to_dict()}
        assert verify_certificate("intersection", payload, octahedron())
        payload["count"]["total"] = 4
        report = verify_certificate("intersection", payload, octahedron())
        assert not report
        assert report.failing_step == "count.total"
