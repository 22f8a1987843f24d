"""
Graph polynomials, the graph product and the enhanced graph G1.

A graph G defines the polynomial f_G with one square-free monomial per
clique. The product H x K has the monomials of f_H * f_K as vertices and
joins two monomials when one divides the other. The enhanced graph
G1 = G x K1 has the simplices of G as vertices, joined by proper inclusion.

Enhanced vertices are the integer positions of the simplices in cliques(G)
order; EnhancedGraph.vertex_map records which simplex each one stands for.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Tuple

import sympy

from errors import PreconditionError
from graph_core import Graph, Simplex, cliques

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphPolynomial:
    """Square-free polynomial with one monomial per clique."""
    monomials: Tuple[Simplex, ...]

    def __len__(self) -> int:
        return len(self.monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    def as_expr(self, prefix: str = "x") -> sympy.Expr:
        """sympy expression with variable x<v> for vertex v."""
        symbols: Dict[int, sympy.Symbol] = {}
        terms = []
        for monomial in self.monomials:
            term = sympy.Integer(1)
            for v in monomial:
                term *= symbols.setdefault(v, sympy.Symbol(f"{prefix}{v}"))
            terms.append(term)
        return sympy.Add(*terms)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        return "+".join("".join(f"x{v}" for v in m) for m in self.monomials)


def graph_polynomial(G: Graph) -> GraphPolynomial:
    """The polynomial f_G, monomials in cliques order."""
    return GraphPolynomial(tuple(cliques(G)))


def _proper_faces(simplex: Simplex) -> Iterable[Tuple[int, ...]]:
    for size in range(1, len(simplex)):
        yield from combinations(simplex, size)


def graph_product_with_map(H: Graph, K: Graph) -> Tuple[Graph, Dict[int, Tuple[Simplex, Simplex]]]:
    """
    Graph product H x K together with its vertex map.

    Vertex i * |cliques(K)| + j is the pair (i-th clique of H, j-th clique
    of K). Two distinct pairs are adjacent iff they are contained in each
    other componentwise.

    Returns:
        (product graph, map from product vertex to its pair of simplices)
    """
    left, right = cliques(H), cliques(K)
    width = len(right)
    index = {(a, b): i * width + j for i, a in enumerate(left) for j, b in enumerate(right)}

    edges = []
    for (a, b), u in index.items():
        # Every pair strictly below (a, b): a face (or a itself) in each slot
        for fa in list(_proper_faces(a)) + [tuple(a)]:
            for fb in list(_proper_faces(b)) + [tuple(b)]:
                v = index[(fa, fb)]
                if v != u:
                    edges.append((v, u))
    vertex_map = {u: pair for pair, u in index.items()}
    logger.debug(f"Product of {H!r} and {K!r}: {len(vertex_map)} vertices, {len(edges)} edges")
    return Graph(vertex_map, edges), vertex_map


def graph_product(H: Graph, K: Graph) -> Graph:
    """The graph of f_H * f_K: monomials joined when one divides the other."""
    return graph_product_with_map(H, K)[0]


@dataclass(frozen=True)
class EnhancedGraph:
    """The enhanced graph G1 of a base graph with the simplex map."""
    base: Graph
    enhanced: Graph
    vertex_map: Dict[int, Simplex]
    index: Dict[Simplex, int]

    def simplex(self, v: int) -> Simplex:
        return self.vertex_map[v]

    def vertex(self, simplex: Iterable[int]) -> int:
        key = Simplex(simplex)
        if key not in self.index:
            raise PreconditionError(f"{tuple(key)} is not a simplex of the base graph")
        return self.index[key]

    def lift(self, H: Graph) -> Graph:
        return lift_subgraph(self, H)

    def base_dimension(self, v: int) -> int:
        """Dimension of the base simplex that enhanced vertex v stands for."""
        return self.vertex_map[v].dimension

    def map_table(self) -> Dict[int, List[int]]:
        return {v: list(s) for v, s in sorted(self.vertex_map.items())}


def enhanced(G: Graph) -> EnhancedGraph:
    """
    Build G1: one vertex per simplex of G, edges between a simplex and each
    of its proper faces. Equal, label for label, to graph_product(G, K1).
    """
    simplices = cliques(G)
    index = {s: i for i, s in enumerate(simplices)}
    edges = [(index[face], index[s]) for s in simplices for face in _proper_faces(s)]
    graph = Graph(range(len(simplices)), edges)
    logger.debug(f"Enhanced {G!r} to {graph!r}")
    return EnhancedGraph(G, graph, dict(enumerate(simplices)), index)


def lift_subgraph(E: EnhancedGraph, H: Graph) -> Graph:
    """
    The graph H1: the part of G1 generated by the simplices of H.

    Raises:
        PreconditionError: If H is not a subgraph of the base graph
    """
    if not H.is_subgraph_of(E.base):
        raise PreconditionError("lift_subgraph needs a subgraph of the base graph")
    return E.enhanced.induced(E.index[s] for s in cliques(H))
