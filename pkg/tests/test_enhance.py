"""
Tests for graph polynomials, the graph product and the enhanced graph G1.

To run these tests:

    pytest tests/test_enhance.py -v
"""
import sys
from pathlib import Path

import pytest
import sympy

# Add src directory to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from classify import clear_cache, is_ball, is_sphere
from enhance import enhanced, graph_polynomial, graph_product, graph_product_with_map, lift_subgraph
from errors import PreconditionError
from generators import complete, cycle, icosahedron, line, octahedron, wheel
from graph_core import Graph, Simplex, euler_characteristic, is_isomorphic


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_cache()
    yield


class TestGraphPolynomial:
    """Test the clique polynomial."""

    def test_edge_polynomial(self):
        """Test f for K2."""
        f = graph_polynomial(complete(2))
        assert len(f) == 3
        assert str(f) == "x0+x1+x0x1"
        x0, x1 = sympy.symbols("x0 x1")
        assert f.as_expr() == x0 + x1 + x0 * x1

    def test_empty_graph_is_zero(self):
        """Test that the empty graph has the zero polynomial."""
        f = graph_polynomial(Graph())
        assert f.is_zero()
        assert str(f) == "0"

    def test_value_at_minus_one(self):
        """Test that -f(-1, ..., -1) is the Euler characteristic."""
        for G in (octahedron(), cycle(5), wheel(6)):
            f = graph_polynomial(G)
            value = f.as_expr().subs({s: -1 for s in f.as_expr().free_symbols})
            assert -value == euler_characteristic(G)


class TestEnhancedGraph:
    """Test G1 sizes, shape and the vertex map."""

    def test_cycle_doubles(self):
        """Test that the enhanced C4 is C8."""
        E = enhanced(cycle(4))
        assert len(E.enhanced) == 8
        assert is_isomorphic(E.enhanced, cycle(8))

    def test_triangle_becomes_wheel(self):
        """Test that the enhanced K3 is the wheel W6 with the triangle as hub."""
        E = enhanced(complete(3))
        assert is_isomorphic(E.enhanced, wheel(6))
        hub = E.vertex((0, 1, 2))
        assert E.enhanced.degree(hub) == 6
        assert E.base_dimension(hub) == 2

    def test_polyhedra_sizes(self):
        """Test the vertex counts 26 and 62."""
        assert len(enhanced(octahedron()).enhanced) == 26
        assert len(enhanced(icosahedron()).enhanced) == 62

    def test_vertices_follow_clique_order(self):
        """Test that vertex i stands for the i-th clique."""
        E = enhanced(complete(2))
        assert E.map_table() == {0: [0], 1: [1], 2: [0, 1]}
        assert E.simplex(2) == Simplex((0, 1))

    def test_unknown_simplex(self):
        """Test that looking up a non-simplex is a precondition error."""
        E = enhanced(cycle(4))
        with pytest.raises(PreconditionError):
            E.vertex((0, 2))

    def test_enhancing_keeps_spheres_and_balls(self):
        """Test that G1 of a sphere (ball) is a sphere (ball) of the same dimension."""
        assert is_sphere(enhanced(cycle(5)).enhanced).dimension == 1
        assert is_sphere(enhanced(octahedron()).enhanced).dimension == 2
        assert is_ball(enhanced(wheel(4)).enhanced).dimension == 2

    def test_euler_characteristic_preserved(self):
        """Test that chi(G1) = chi(G)."""
        for G in (octahedron(), cycle(6), wheel(5), line(4)):
            assert euler_characteristic(enhanced(G).enhanced) == euler_characteristic(G)


class TestGraphProduct:
    """Test the product of two graphs."""

    def test_product_with_point_is_enhancement(self):
        """Test that G x K1 equals G1 label for label."""
        for G in (cycle(4), complete(3), octahedron()):
            assert graph_product(G, complete(1)) == enhanced(G).enhanced

    def test_line_square(self):
        """Test that L3 x L3 has 25 vertices and is a 2-ball."""
        P = graph_product(line(3), line(3))
        assert len(P) == 25
        assert is_ball(P).dimension == 2

    def test_product_vertex_map(self):
        """Test that product vertices map to pairs of simplices."""
        P, mapping = graph_product_with_map(complete(2), complete(1))
        assert len(P) == 3
        assert mapping[2] == (Simplex((0, 1)), Simplex((0,)))

    def test_product_with_empty_graph(self):
        """Test that multiplying by the empty graph gives the empty graph."""
        assert len(graph_product(cycle(4), Graph())) == 0


class TestLift:
    """Test lifting subgraphs into G1."""

    def test_equator_lifts_to_eight_cycle(self):
        """Test that the octahedron equator lifts to C8."""
        E = enhanced(octahedron())
        H1 = lift_subgraph(E, Graph([0, 1, 2, 3], [(0, 2), (2, 1), (1, 3), (3, 0)]))
        assert is_isomorphic(H1, cycle(8))

    def test_non_subgraph_rejected(self):
        """Test that lifting a graph with a foreign edge fails."""
        E = enhanced(octahedron())
        with pytest.raises(PreconditionError):
            lift_subgraph(E, Graph([0, 1], [(0, 1)]))

    def test_lift_uses_only_subgraph_simplices(self):
        """Test that a non-induced cycle lifts without the chords."""
        E = enhanced(octahedron())
        hexagon = Graph(range(6), [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)])
        H1 = E.lift(hexagon)
        assert len(H1) == 12
        assert is_isomorphic(H1, cycle(12))
