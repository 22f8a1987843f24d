"""
Deterministically labeled constructions of the named graphs.

Labelings (relied on by tests and documented in FORMAT_REFERENCE.md):

- complete(n), edgeless(n): vertices 0..n-1
- cycle(n): 0-1-...-(n-1)-0
- line(n): path 0-1-...-(n-1)
- wheel(n): rim cycle 0..n-1, hub n
- join(H, K): H relabeled to 0..|H|-1 in sorted order, K placed after it
- suspension(G) = join(G, edgeless(2)): poles |G| and |G|+1
- cross_polytope(d): vertices 0..2d+1, the only non-edges are the
  antipodal pairs (2i, 2i+1)
- octahedron() = cross_polytope(2): equator 0-2-1-3, north pole 4, south pole 5
- icosahedron(): top 0, upper ring 1..5, lower ring 6..10, bottom 11;
  upper i is joined to lower 5+i and 5+(i mod 5)+1
- cube(): 3-bit hypercube, u ~ v iff u xor v is a power of two
- house(): square 0-1-2-3-0 with roof 4 joined to 2 and 3
- moebius_band(n): three rows of n/2 columns, label(r, i) = r*(n/2) + i,
  glued with a half twist; the boundary is one cycle of length n
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from errors import GraphInputError
from graph_core import Edge, Graph, disjoint_union

logger = logging.getLogger(__name__)

MAX_CROSS_POLYTOPE_DIM = 5


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise GraphInputError(message)


def complete(n: int) -> Graph:
    """Complete graph K_n."""
    _require(n >= 0, f"complete(n) needs n >= 0, got {n}")
    return Graph(range(n), ((u, v) for u in range(n) for v in range(u + 1, n)))


def edgeless(n: int) -> Graph:
    """Edgeless graph P_n on n vertices."""
    _require(n >= 0, f"edgeless(n) needs n >= 0, got {n}")
    return Graph(range(n))


def cycle(n: int) -> Graph:
    """Circular graph C_n."""
    _require(n >= 3, f"cycle(n) needs n >= 3, got {n}")
    return Graph(range(n), ((i, (i + 1) % n) for i in range(n)))


def line(n: int) -> Graph:
    """Line graph L_n with n vertices."""
    _require(n >= 1, f"line(n) needs n >= 1, got {n}")
    return Graph(range(n), ((i, i + 1) for i in range(n - 1)))


def wheel(n: int) -> Graph:
    """Wheel W_n: cycle C_n on 0..n-1 plus hub n."""
    _require(n >= 4, f"wheel(n) needs n >= 4, got {n}")
    rim = [(i, (i + 1) % n) for i in range(n)]
    spokes = [(i, n) for i in range(n)]
    return Graph(range(n + 1), rim + spokes)


def join(H: Graph, K: Graph) -> Graph:
    """Zykov join: disjoint union of H and K plus every edge between them."""
    union, h_map, k_map = disjoint_union(H, K)
    cross = [(a, b) for a in h_map.values() for b in k_map.values()]
    return Graph(union.vertices, list(union.edges) + cross)


def suspension(G: Graph) -> Graph:
    """Join with the 0-sphere P_2."""
    return join(G, edgeless(2))


def cross_polytope(d: int) -> Graph:
    """
    The d-dimensional cross polytope, the join of d+1 copies of P_2.

    Raises:
        GraphInputError: If d is outside 0..MAX_CROSS_POLYTOPE_DIM
    """
    _require(0 <= d <= MAX_CROSS_POLYTOPE_DIM, f"cross_polytope(d) supports 0 <= d <= {MAX_CROSS_POLYTOPE_DIM}, got {d}")
    n = 2 * (d + 1)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if u // 2 != v // 2]
    return Graph(range(n), edges)


def octahedron() -> Graph:
    return cross_polytope(2)


def icosahedron() -> Graph:
    edges: List[Edge] = []
    for i in range(1, 6):
        nxt = i % 5 + 1
        edges.append((0, i))
        edges.append((i, nxt))
        edges.append((5 + i, 5 + nxt))
        edges.append((5 + i, 11))
        edges.append((i, 5 + i))
        edges.append((i, 5 + nxt))
    return Graph(range(12), edges)


def cube() -> Graph:
    return Graph(range(8), ((u, u ^ bit) for u in range(8) for bit in (1, 2, 4) if u < u ^ bit))


def house() -> Graph:
    return Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)])


def moebius_band(n: int) -> Graph:
    """
    Triangulated Moebius strip whose boundary is a cycle of length n.

    Three rows of m = n/2 columns form a strip of squares, each square
    split along the diagonal (r, i)-(r+1, i+1). Column m is glued back to
    column 0 with the rows reversed.

    Raises:
        GraphInputError: If n is odd or below 10
    """
    _require(n >= 10 and n % 2 == 0, f"moebius_band(n) needs an even n >= 10, got {n}")
    m = n // 2

    def label(r: int, i: int) -> int:
        if i == m:
            return (2 - r) * m
        return r * m + i

    edges = set()
    for i in range(m):
        for r in (0, 1):
            a, b = label(r, i), label(r + 1, i)
            c, diag = label(r, i + 1), label(r + 1, i + 1)
            for u, v in ((a, b), (a, c), (b, diag), (a, diag)):
                edges.add((min(u, v), max(u, v)))
    return Graph(range(3 * m), edges)


def random_graph(n: int, p: float, seed: Optional[int] = 0, rng: Optional[np.random.Generator] = None) -> Graph:
    """
    Erdos-Renyi graph G(n, p).

    Uses numpy's PCG64 bit generator: C(n, 2) uniforms are drawn in
    lexicographic pair order (0,1), (0,2), ..., (n-2,n-1) and a pair is an
    edge iff its uniform is below p.

    Args:
        n: Number of vertices
        p: Edge probability in [0, 1]
        seed: PCG64 seed (ignored when rng is given)
        rng: Generator to draw from, for sampling many graphs from one stream

    Returns:
        The sampled graph
    """
    _require(n >= 0, f"random_graph needs n >= 0, got {n}")
    _require(0.0 <= p <= 1.0, f"random_graph needs 0 <= p <= 1, got {p}")
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(seed))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    draws = rng.random(len(pairs))
    return Graph(range(n), (pair for pair, u in zip(pairs, draws) if u < p))


# name -> (constructor, integer parameter names) for the command line
GENERATORS: Dict[str, Tuple[Callable[..., Graph], Tuple[str, ...]]] = {
    "complete": (complete, ("n",)),
    "edgeless": (edgeless, ("n",)),
    "cycle": (cycle, ("n",)),
    "line": (line, ("n",)),
    "wheel": (wheel, ("n",)),
    "cross_polytope": (cross_polytope, ("d",)),
    "octahedron": (octahedron, ()),
    "icosahedron": (icosahedron, ()),
    "cube": (cube, ()),
    "house": (house, ()),
    "moebius_band": (moebius_band, ("n",)),
}


def generate(name: str, params: List[str]) -> Graph:
    """
    Build a named graph from string parameters.

    random_graph takes n, p and an optional seed; suspension takes the name
    and parameters of the graph to suspend.

    Raises:
        GraphInputError: If the name is unknown or parameters do not parse
    """
    key = name.replace("-", "_")
    try:
        if key == "random_graph":
            _require(len(params) in (2, 3), "random_graph takes n p [seed]")
            seed = int(params[2]) if len(params) == 3 else 0
            return random_graph(int(params[0]), float(params[1]), seed)
        if key == "suspension":
            _require(len(params) >= 1, "suspension takes a generator name and its parameters")
            return suspension(generate(params[0], params[1:]))
        if key not in GENERATORS:
            known = ", ".join(sorted(list(GENERATORS) + ["random_graph", "suspension"]))
            raise GraphInputError(f"Unknown generator '{name}'. Known generators: {known}")
        constructor, names = GENERATORS[key]
        _require(len(params) == len(names), f"{key} takes parameters: {' '.join(names) or '(none)'}")
        return constructor(*(int(value) for value in params))
    except ValueError as e:
        raise GraphInputError(f"Bad parameter for {name}: {e}") from e
