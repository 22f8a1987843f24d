"""
Tests for separation, intersection numbers, parity invariance and the
Schoenflies ball certification.

To run these tests:

    pytest tests/test_separation.py -v

Three-dimensional cases are marked slow:

    pytest tests/test_separation.py -v -m "not slow"
"""
import sys
from pathlib import Path

import pytest

# Add src directory to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from classify import clear_cache, is_ball
from documents import graph_to_dict
from errors import GraphInputError, MalformedGeometryError, PreconditionError, TheoremViolationError
from generators import cross_polytope, cycle, edgeless, icosahedron, line, octahedron, wheel
from graph_core import Graph, Simplex, is_isomorphic
from homotopy import Curve, deform_hypersurface, is_simple_closed, lift_curve, random_deformation_trace
from separation import (
    IntersectionContext,
    closure,
    enclosed_measure,
    euler_budget_check,
    intersection_number,
    intersection_parity,
    parity_homotopy_invariance,
    random_closed_curve,
    region_boundary,
    region_connected,
    schoenflies,
    separate,
    transition_parity,
)
from verify import verify_certificate

EQUATOR = Graph([0, 1, 2, 3], [(0, 2), (2, 1), (1, 3), (3, 0)])
HEXAGON = Graph(range(6), [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)])
RING = Graph([1, 2, 3, 4, 5], [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_cache()
    yield


@pytest.fixture(scope="module")
def equator_context():
    """Enhanced octahedron with the lifted equator, shared by the intersection tests."""
    return IntersectionContext(EQUATOR, octahedron())


class TestSeparate:
    """Test the Jordan-Brouwer split."""

    def test_direct_equator(self):
        """Test that the equator splits the octahedron into two wheels."""
        result = separate(EQUATOR, octahedron(), enhanced_mode=False)
        assert result.inner_a == frozenset({4})
        assert result.inner_b == frozenset({5})
        assert is_isomorphic(result.A, wheel(4))
        assert is_isomorphic(result.B, wheel(4))
        assert result.A.induced(EQUATOR.vertices) == EQUATOR

    def test_sides_meet_in_the_sphere(self):
        """Test that A and B share exactly the sphere vertices in both modes."""
        for mode in (False, True):
            result = separate(EQUATOR, octahedron(), enhanced_mode=mode)
            assert set(result.A.vertices) & set(result.B.vertices) == set(result.sphere.vertices)
            assert set(result.A.vertices) | set(result.B.vertices) == set(result.host.vertices)

    def test_enhanced_equator(self):
        """Test the lifted split: nine simplices on each side."""
        result = separate(EQUATOR, octahedron())
        assert result.enhanced
        assert len(result.sphere) == 8
        assert len(result.inner_a) == len(result.inner_b) == 9
        north = result.enhancement.vertex((4,))
        assert result.side_of(north) == "A"
        assert result.side_of(result.enhancement.vertex((5,))) == "B"
        assert result.side_of(result.enhancement.vertex((0,))) is None

    def test_zero_sphere_in_circle(self):
        """Test that two opposite vertices split C4 into two paths."""
        result = separate(Graph([0, 2]), cycle(4), enhanced_mode=False)
        assert result.inner_a == frozenset({1}) and result.inner_b == frozenset({3})
        assert is_isomorphic(result.A, line(3))
        assert is_isomorphic(result.B, line(3))

    def test_icosahedron_ring(self):
        """Test a unit sphere separating its center from the rest."""
        result = separate(RING, icosahedron(), enhanced_mode=False)
        assert result.inner_a == frozenset({0})
        assert result.inner_b == frozenset(range(6, 12))
        assert is_isomorphic(result.A, wheel(5))
        assert len(result.B) == 11
        assert is_ball(result.B).dimension == 2

    def test_empty_sphere_in_zero_sphere(self):
        """Test that the empty graph splits two points into two K1."""
        for mode in (False, True):
            result = separate(Graph(), edgeless(2), enhanced_mode=mode)
            assert len(result.A) == len(result.B) == 1
            assert euler_budget_check(result).sum_ok

    def test_hamiltonian_cycle_needs_enhanced_mode(self):
        """Test that a non-embedded sphere separates only after lifting."""
        with pytest.raises(PreconditionError):
            separate(HEXAGON, octahedron(), enhanced_mode=False)
        result = separate(HEXAGON, octahedron())
        assert len(result.sphere) == 12
        assert euler_budget_check(result)

    def test_euler_characteristics_add_to_two(self):
        """Test chi(A) + chi(B) = 2 with chi = 1 on each side."""
        verdict = euler_budget_check(separate(EQUATOR, octahedron()))
        assert verdict.sum_ok and verdict.balls_ok

    def test_preconditions(self):
        """Test hosts and spheres of the wrong kind."""
        with pytest.raises(PreconditionError):
            separate(EQUATOR, wheel(4))
        with pytest.raises(PreconditionError):
            separate(Graph([4, 5]), octahedron())
        with pytest.raises(PreconditionError):
            separate(Graph([0, 1], [(0, 1)]), octahedron())

    def test_unchecked_bad_input_is_a_theorem_violation(self):
        """Test that a complement with one component is reported with its components."""
        with pytest.raises(TheoremViolationError) as excinfo:
            separate(Graph([0]), cycle(4), enhanced_mode=False, check_preconditions=False)
        assert excinfo.value.components == [[1, 2, 3]]

    @pytest.mark.slow
    def test_three_sphere(self):
        """Test the octahedral equator of the 3-dimensional cross polytope."""
        result = separate(octahedron(), cross_polytope(3), enhanced_mode=False)
        assert result.inner_a == frozenset({6}) and result.inner_b == frozenset({7})
        assert is_ball(result.A).dimension == 3


class TestIntersectionNumber:
    """Test entry/exit counting against the lifted equator."""

    def test_curve_through_both_poles(self, equator_context):
        """Test a closed curve crossing the equator twice."""
        C = lift_curve(equator_context.enhancement, Curve((4, 0, 5, 1)))
        count = intersection_number(C, EQUATOR, octahedron(), context=equator_context)
        assert len(count.events) == 2
        assert all(e.crossing for e in count.events)
        assert count.total == 2
        assert count.signed_total == 0
        assert count.parity == 0

    def test_touch_down(self, equator_context):
        """Test a curve that visits the equator and returns to the same side."""
        E = equator_context.enhancement
        C = Curve(tuple(E.vertex(s) for s in [(4,), (0, 4), (0,), (0, 2, 4)]))
        count = intersection_number(C, EQUATOR, octahedron(), context=equator_context)
        assert len(count.events) == 1
        event = count.events[0]
        assert not event.crossing
        assert abs(event.signed) == 2
        assert count.parity == 0

    def test_curve_orientation_flips_signs(self, equator_context):
        """Test that reversing the curve orientation negates the signed total."""
        E = equator_context.enhancement
        C = Curve(tuple(E.vertex(s) for s in [(4,), (0, 4), (0,), (0, 2, 4)]))
        plus = intersection_number(C, EQUATOR, octahedron(), context=equator_context)
        minus = intersection_number(C, EQUATOR, octahedron(), curve_orientation=-1, context=equator_context)
        assert minus.signed_total == -plus.signed_total
        with pytest.raises(PreconditionError):
            intersection_number(C, EQUATOR, octahedron(), curve_orientation=2, context=equator_context)

    def test_curve_off_or_inside_sphere(self, equator_context):
        """Test that curves missing the sphere or lying in it count zero."""
        E = equator_context.enhancement
        north = Curve(tuple(E.vertex(s) for s in [(4,), (0, 4), (0, 2, 4), (2, 4)]))
        inside = lift_curve(E, Curve((0, 2, 1, 3)))
        assert intersection_number(north, EQUATOR, octahedron(), context=equator_context).total == 0
        assert intersection_number(inside, EQUATOR, octahedron(), context=equator_context).total == 0

    def test_open_curve(self, equator_context):
        """Test an open curve from pole to pole, and the closed-curve requirement."""
        E = equator_context.enhancement
        C = lift_curve(E, Curve((4, 0, 5), closed=False))
        count = intersection_number(C, EQUATOR, octahedron(), allow_open=True, context=equator_context)
        assert count.total == 1
        assert intersection_parity(C, EQUATOR, octahedron(), allow_open=True, context=equator_context) == 1
        with pytest.raises(PreconditionError):
            intersection_number(C, EQUATOR, octahedron(), context=equator_context)

    def test_open_curve_skips_visits_at_its_ends(self, equator_context):
        """Test that a visit touching the start of an open curve is ignored."""
        E = equator_context.enhancement
        C = Curve(tuple(E.vertex(s) for s in [(0,), (0, 4), (4,)]), closed=False)
        assert intersection_number(C, EQUATOR, octahedron(), allow_open=True, context=equator_context).events == ()

    def test_curve_must_live_in_enhanced_graph(self, equator_context):
        """Test that a curve with a non-edge step is rejected."""
        E = equator_context.enhancement
        C = Curve(tuple(E.vertex(s) for s in [(4,), (0,), (5,)]))
        with pytest.raises(GraphInputError):
            intersection_number(C, EQUATOR, octahedron(), context=equator_context)

    def test_parity_oracle_agrees(self, equator_context):
        """Test transition parity on the separation used as oracle."""
        C = lift_curve(equator_context.enhancement, Curve((4, 0, 5, 1)))
        assert transition_parity(C, equator_context.separation) == 0

    def test_count_serializes(self, equator_context):
        """Test the dictionary layout used in certificates."""
        C = lift_curve(equator_context.enhancement, Curve((4, 0, 5, 1)))
        data = intersection_number(C, EQUATOR, octahedron(), context=equator_context).to_dict()
        assert set(data) == {"total", "signed_total", "curve_orientation", "events"}
        assert set(data["events"][0]) == {"start", "end", "entry", "exit", "incoming", "outgoing"}

    def test_malformed_geometry_error_is_a_precondition_error(self):
        """Test the error hierarchy callers rely on."""
        assert issubclass(MalformedGeometryError, PreconditionError)


class TestRandomCurveParity:
    """Test seeded random closed curves against the side-change oracle."""

    @pytest.fixture(scope="class", params=[(EQUATOR, octahedron), (RING, icosahedron)], ids=["octahedron", "icosahedron"])
    def context(self, request):
        sphere, make_host = request.param
        return IntersectionContext(sphere, make_host())

    @pytest.mark.parametrize("seed", range(200))
    def test_random_closed_curve_meets_sphere_evenly(self, context, seed):
        """Test total and signed total are even and agree with the transition parity."""
        C = random_closed_curve(context.host, seed, length=16)
        count = intersection_number(C, context.base_sphere, context.base_host, context=context)
        assert count.total % 2 == 0
        assert count.signed_total % 2 == 0
        assert transition_parity(C, context.separation) == count.total % 2


class TestParityInvariance:
    """Test that deformations keep the intersection parity."""

    def test_random_single_steps(self, equator_context):
        """Test one hundred seeded single-step deformations of a crossing curve."""
        C = lift_curve(equator_context.enhancement, Curve((4, 0, 5, 1)))
        for seed in range(100):
            trace = random_deformation_trace(equator_context.host, C, seed=seed, steps=1)
            states = trace.states(equator_context.host)
            # every step is an involution
            assert deform_hypersurface(equator_context.host, states[1], trace.steps[0].carrier) == states[0]
            verdict = parity_homotopy_invariance(C, trace, EQUATOR, octahedron(), context=equator_context)
            assert verdict, f"seed {seed} changed parity at step {verdict.first_violation}"

    def test_longer_traces(self, equator_context):
        """Test a few multi-step traces."""
        C = lift_curve(equator_context.enhancement, Curve((4, 0, 5, 1)))
        for seed in range(5):
            trace = random_deformation_trace(equator_context.host, C, seed=seed, steps=6)
            verdict = parity_homotopy_invariance(C, trace, EQUATOR, octahedron(), context=equator_context)
            assert verdict.parities == (0,) * 7

    def test_trace_must_start_at_curve(self, equator_context):
        """Test that a trace for another curve is rejected."""
        E = equator_context.enhancement
        C = lift_curve(E, Curve((4, 0, 5, 1)))
        other = lift_curve(E, Curve((4, 2, 5, 3)))
        trace = random_deformation_trace(equator_context.host, other, seed=0, steps=1)
        with pytest.raises(PreconditionError):
            parity_homotopy_invariance(C, trace, EQUATOR, octahedron(), context=equator_context)


class TestRegions:
    """Test simplicial region helpers."""

    def test_closure_and_measure(self):
        """Test closure counts and the enclosed measure of a triangle."""
        triangle = [Simplex((0, 2, 4))]
        assert len(closure(triangle)) == 7
        boundary = [Simplex((0, 2)), Simplex((0, 4)), Simplex((2, 4))]
        assert enclosed_measure(triangle, boundary) == 1

    def test_region_boundary(self):
        """Test that the north cap of the octahedron is bounded by the equator."""
        cap = [Simplex(t) for t in [(0, 2, 4), (0, 3, 4), (1, 2, 4), (1, 3, 4)]]
        assert region_boundary(cap) == frozenset(Simplex(e) for e in EQUATOR.edges)
        assert region_connected(cap)
        assert not region_connected([Simplex((0, 2, 4)), Simplex((1, 3, 5))])
        assert not region_connected([])


class TestSchoenflies:
    """Test shrinking both sides of a sphere to a simplex."""

    def test_equator(self):
        """Test that each side of the equator shrinks through decreasing measures."""
        cert = schoenflies(EQUATOR, octahedron())
        assert [side.name for side in cert.sides] == ["A", "B"]
        north, south = cert.sides
        assert len(north.region) == len(south.region) == 4
        for side in cert.sides:
            assert len(side.trace) == 3
            assert list(side.measures) == sorted(side.measures, reverse=True)
            assert len(set(side.measures)) == len(side.measures)
            final = side.trace.replay(octahedron())
            remaining = set(side.region) - {step.carrier for step in side.trace.steps}
            assert len(remaining) == 1
            assert final.facets == frozenset(next(iter(remaining)).faces())
            assert side.ball is not None and side.ball.dimension == 2

    @pytest.mark.parametrize("sphere, make_host", [
        (EQUATOR, octahedron),
        (RING, icosahedron),
        (Graph([0, 2]), lambda: cycle(4)),
    ], ids=["octahedron-equator", "icosahedron-ring", "square-antipodes"])
    def test_both_sides_certify_and_verify(self, sphere, make_host):
        """Test strictly shrinking measures, a ball on each side and a verified certificate."""
        G = make_host()
        cert = schoenflies(sphere, G)
        assert len(cert.sides) == 2
        for side in cert.sides:
            assert all(a > b for a, b in zip(side.measures, side.measures[1:]))
            assert side.ball is not None
            assert side.ball.dimension == max(len(s) for s in side.region) - 1
        payload = {"sphere": graph_to_dict(sphere), **cert.to_dict()}
        assert verify_certificate("schoenflies", payload, G)

    def test_hamiltonian_cycle(self):
        """Test a sphere that is only embedded after lifting."""
        cert = schoenflies(HEXAGON, octahedron())
        for side in cert.sides:
            assert len(side.region) == 4
            assert all(is_simple_closed(s.facets) for s in side.trace.states(octahedron()))

    def test_zero_dimensional(self):
        """Test the 0-sphere: each side is one vertex and nothing moves."""
        cert = schoenflies(Graph(), edgeless(2))
        assert [len(side.trace) for side in cert.sides] == [0, 0]
        assert [side.measures for side in cert.sides] == [(1,), (1,)]

    def test_circle(self):
        """Test a 0-sphere in a circle: sides are arcs shrunk edge by edge."""
        cert = schoenflies(Graph([0, 3]), cycle(6))
        for side in cert.sides:
            assert len(side.region) == 3
            assert len(side.trace) == 2

    def test_ball_budget_exhaustion_skips_direct_check(self):
        """Test that an exhausted ball budget leaves the side without a ball certificate."""
        cert = schoenflies(EQUATOR, octahedron(), ball_budget=0)
        assert all(side.ball is None for side in cert.sides)
        assert all(len(side.trace) == 3 for side in cert.sides)

    def test_to_dict(self):
        """Test the certificate layout."""
        data = schoenflies(EQUATOR, octahedron()).to_dict()
        assert set(data) == {"separation", "sides"}
        assert set(data["sides"][0]) == {"name", "region", "trace", "measures", "ball"}

    @pytest.mark.slow
    def test_three_sphere(self):
        """Test the octahedral equator of the 3-dimensional cross polytope."""
        G = cross_polytope(3)
        cert = schoenflies(octahedron(), G)
        for side in cert.sides:
            assert len(side.region) == 8
            assert all(a > b for a, b in zip(side.measures, side.measures[1:]))
            assert side.ball is not None and side.ball.dimension == 3
        payload = {"sphere": graph_to_dict(octahedron()), **cert.to_dict()}
        assert verify_certificate("schoenflies", payload, G)
