"""
Command-line entry point for the Evako topology toolkit.

Results are YAML documents on stdout (a one-line summary with --human);
logs go to stderr. Exit codes: 0 success, 1 negative verdict, 2 input
error, 3 resource limit, 4 theorem-violation diagnostic.
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO, Tuple

from classify import cache_stats, expected_dimension_polynomial, inductive_dimension, is_ball, is_contractible, is_sphere
from config import Settings, load_settings
from documents import (
    CertificateDocument,
    dump_yaml,
    graph_to_dict,
    load_file,
    parse_certificate,
    parse_graph_input,
    serialize_graph,
)
from embed import is_embedded
from enhance import enhanced, graph_product_with_map, lift_subgraph
from errors import GraphInputError, ResourceLimitError, TheoremViolationError
from generators import generate
from graph_core import Graph, euler_characteristic, f_vector
from homotopy import (
    Curve,
    DeformationTrace,
    contract_curve,
    deformation_step,
    hypersurface_from_subgraph,
    lift_curve,
    random_deformation_trace,
)
from separation import euler_budget_check, intersection_context, intersection_number, schoenflies, separate
from verify import verify_document

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_THEOREM = 4

# (exit code, structured result, one-line summary, optional (certificate kind, payload, graph))
Outcome = Tuple[int, Dict[str, Any], str, Optional[Tuple[str, Dict[str, Any], Graph]]]


def setup_logging(log_level: str = "WARNING"):
    """Configure logging on stderr; stdout carries documents."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


class CommandContext:
    """Parsed arguments, settings and the input stream for one command."""

    def __init__(self, args: argparse.Namespace, settings: Settings, stdin: TextIO):
        self.args = args
        self.settings = settings
        self.stdin = stdin

    def read(self, path: str) -> Any:
        if path == "-":
            stream = getattr(self.stdin, "buffer", self.stdin)
            return stream.read()
        return load_file(path)

    def graph(self, path: Optional[str] = None) -> Graph:
        return parse_graph_input(self.read(path or self.args.graph), self.args.edge_list)

    def sphere(self) -> Graph:
        if not self.args.sphere:
            raise GraphInputError(f"'{self.args.command}' needs --sphere PATH")
        return parse_graph_input(self.read(self.args.sphere), self.args.edge_list)

    def enhanced_mode(self, default: bool) -> bool:
        return default if self.args.mode is None else self.args.mode == "enhanced"


def parse_vertices(text: str, what: str = "curve") -> Tuple[int, ...]:
    """'0 1 2' or '0,1,2' to a tuple of labels."""
    try:
        return tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise GraphInputError(f"Cannot parse {what} '{text}': labels must be integers")


# Commands


def cmd_gen(ctx: CommandContext) -> Outcome:
    params = list(ctx.args.params)
    if ctx.args.name.replace("-", "_") == "random_graph" and len(params) == 2:
        params.append(str(ctx.settings.seed))
    G = generate(ctx.args.name, params)
    name = " ".join([ctx.args.name] + params)
    return EXIT_OK, {"document": serialize_graph(G, name)}, f"{name}: {len(G)} vertices, {len(G.edges)} edges", None


def cmd_classify(ctx: CommandContext) -> Outcome:
    outcome = _classify(ctx.graph(), ctx.settings.budget_nodes)
    stats = cache_stats()
    logger.info(f"Classification cache: {stats['hits']} hits, {stats['misses']} misses, {stats['entries']} entries")
    return outcome


def _classify(G: Graph, budget: int) -> Outcome:
    sphere = is_sphere(G, budget)
    if sphere:
        summary = f"sphere d={sphere.dimension}"
        return EXIT_OK, {"verdict": "sphere", "dimension": sphere.dimension, "summary": summary}, summary, (
            "sphere", sphere.to_dict(), G)
    ball = is_ball(G, budget) if len(G) else sphere
    if ball:
        summary = f"ball d={ball.dimension}"
        data = {"verdict": "ball", "dimension": ball.dimension, "boundary": list(ball.boundary), "summary": summary}
        return EXIT_OK, data, summary, ("ball", ball.to_dict(), G)
    contraction = is_contractible(G, budget) if len(G) else sphere
    if contraction:
        return EXIT_OK, {"verdict": "contractible", "summary": "contractible"}, "contractible", (
            "contraction", contraction.to_dict(), G)
    data = {"verdict": "neither", "reason": sphere.reason, "path": list(sphere.path), "summary": "neither"}
    return EXIT_NEGATIVE, data, "neither", None


def cmd_dim(ctx: CommandContext) -> Outcome:
    if ctx.args.polynomial is not None:
        n = ctx.args.polynomial
        poly = expected_dimension_polynomial(n, ctx.settings.polynomial_bound)
        text = str(poly.as_expr())
        return EXIT_OK, {"n": n, "polynomial": text}, f"d_{n}(p) = {text}", None
    value = inductive_dimension(ctx.graph())
    return EXIT_OK, {"dimension": str(value), "value": float(value)}, f"dim = {value}", None


def cmd_euler(ctx: CommandContext) -> Outcome:
    G = ctx.graph()
    chi = euler_characteristic(G)
    counts = f_vector(G, ctx.args.max_dim)
    return EXIT_OK, {"euler_characteristic": chi, "f_vector": counts}, f"chi = {chi}, f = {counts}", None


def cmd_enhance(ctx: CommandContext) -> Outcome:
    E = enhanced(ctx.graph())
    document = serialize_graph(E.enhanced, "enhanced", E.map_table())
    return EXIT_OK, {"document": document}, f"G1: {len(E.enhanced)} vertices, {len(E.enhanced.edges)} edges", None


def cmd_product(ctx: CommandContext) -> Outcome:
    product, vertex_map = graph_product_with_map(ctx.graph(ctx.args.left), ctx.graph(ctx.args.right))
    document = serialize_graph(product, "product", vertex_map)
    return EXIT_OK, {"document": document}, f"product: {len(product)} vertices, {len(product.edges)} edges", None


def cmd_embed_check(ctx: CommandContext) -> Outcome:
    G, H = ctx.graph(), ctx.sphere()
    if ctx.enhanced_mode(default=False):
        E = enhanced(G)
        G, H = E.enhanced, lift_subgraph(E, H)
    report = is_embedded(H, G)
    data: Dict[str, Any] = {"embedded": report.embedded, "checked": report.checked}
    if not report:
        data["witness_simplex"] = list(report.witness_simplex)
        data["reason"] = report.reason
        return EXIT_NEGATIVE, data, f"not embedded: {report.reason}", None
    return EXIT_OK, data, f"embedded ({report.checked} simplices checked)", None


def cmd_separate(ctx: CommandContext) -> Outcome:
    G, H = ctx.graph(), ctx.sphere()
    result = separate(H, G, enhanced_mode=ctx.enhanced_mode(default=True))
    euler = euler_budget_check(result)
    data = {
        "enhanced": result.enhanced,
        "side_a": {"inner": sorted(result.inner_a), "vertices": len(result.A), "euler_characteristic": euler.chi_a},
        "side_b": {"inner": sorted(result.inner_b), "vertices": len(result.B), "euler_characteristic": euler.chi_b},
    }
    if not euler.sum_ok:
        raise TheoremViolationError(f"chi(A) + chi(B) = {euler.chi_a + euler.chi_b}, expected 2", detail=data)
    summary = f"A: {len(result.A)} vertices, B: {len(result.B)} vertices"
    return EXIT_OK, data, summary, ("separation", {"sphere": graph_to_dict(H), **result.to_dict()}, G)


def cmd_schoenflies(ctx: CommandContext) -> Outcome:
    G, H = ctx.graph(), ctx.sphere()
    cert = schoenflies(H, G, ball_budget=ctx.settings.budget_nodes)
    data = {
        "sides": [
            {
                "name": side.name,
                "simplices": len(side.region),
                "steps": len(side.trace),
                "measures": list(side.measures),
                "ball_certified": side.ball is not None,
            }
            for side in cert.sides
        ]
    }
    summary = ", ".join(f"{s.name}: {len(s.trace)} steps" for s in cert.sides)
    return EXIT_OK, data, f"both sides are balls ({summary})", (
        "schoenflies", {"sphere": graph_to_dict(H), **cert.to_dict()}, G)


def cmd_intersect(ctx: CommandContext) -> Outcome:
    G, H = ctx.graph(), ctx.sphere()
    if not ctx.args.curve:
        raise GraphInputError("'intersect' needs --curve")
    context = intersection_context(H, G)
    curve = Curve(parse_vertices(ctx.args.curve), closed=not ctx.args.open)
    if ctx.args.lift:
        curve = lift_curve(context.enhancement, Curve.in_graph(G, curve.vertices, curve.closed))
    count = intersection_number(
        curve, H, G, curve_orientation=ctx.args.orientation, allow_open=ctx.args.open, context=context
    )
    data = count.to_dict()
    data["parity"] = count.parity
    payload = {"sphere": graph_to_dict(H), "curve": curve.to_dict(), "count": count.to_dict()}
    return EXIT_OK, data, f"intersection number {count.total} (signed {count.signed_total})", (
        "intersection", payload, G)


def cmd_deform(ctx: CommandContext) -> Outcome:
    G = ctx.graph()
    use_enhanced = ctx.enhanced_mode(default=False)
    E = enhanced(G) if use_enhanced else None
    host = E.enhanced if E else G
    curve = None
    if ctx.args.sphere:
        H = ctx.sphere()
        surface = hypersurface_from_subgraph(host, lift_subgraph(E, H) if E else H)
    elif ctx.args.curve:
        curve = Curve(parse_vertices(ctx.args.curve), closed=not ctx.args.open)
        curve = lift_curve(E, Curve.in_graph(G, curve.vertices, curve.closed)) if E else curve
        curve.validate(host)
        surface = curve.as_hypersurface()
    else:
        raise GraphInputError("'deform' needs --curve or --sphere")

    if ctx.args.random_steps:
        if curve is None:
            raise GraphInputError("--random-steps deforms curves only")
        trace = random_deformation_trace(host, curve, ctx.settings.seed, ctx.args.random_steps)
    else:
        steps = []
        current = surface
        for carrier in ctx.args.carrier or []:
            current, step = deformation_step(host, current, parse_vertices(carrier, "carrier"))
            steps.append(step)
        trace = DeformationTrace(surface, tuple(steps))

    final = trace.replay(host)
    payload: Dict[str, Any] = {"host": "enhanced" if E else "base", "trace": trace.to_dict()}
    if ctx.args.random_steps:
        payload["curve"] = True
        if not curve.closed:
            payload["ends"] = [curve.vertices[0], curve.vertices[-1]]
    data = {"steps": len(trace), "final": final.to_dict()}
    return EXIT_OK, data, f"{len(trace)} steps, {len(final)} facets", ("trace", payload, G)


def cmd_contract(ctx: CommandContext) -> Outcome:
    G = ctx.graph()
    if not ctx.args.curve:
        raise GraphInputError("'contract' needs --curve")
    use_enhanced = ctx.enhanced_mode(default=False)
    curve = Curve.in_graph(G, parse_vertices(ctx.args.curve))
    trace = contract_curve(G, curve, enhance_first=use_enhanced, budget=ctx.settings.trace_budget)
    payload = {
        "host": "enhanced" if use_enhanced else "base",
        "trace": trace.to_dict(),
        "curve": True,
        "final_empty": True,
    }
    data = {"steps": len(trace), "trivial": True}
    return EXIT_OK, data, f"curve contracts in {len(trace)} steps", ("trace", payload, G)


def cmd_verify(ctx: CommandContext) -> Outcome:
    document = parse_certificate(ctx.read(ctx.args.certificate_file))
    report = verify_document(document, ctx.graph())
    data = {"ok": report.ok, "kind": report.kind, "failing_step": report.failing_step, "message": report.message}
    if not report:
        return EXIT_NEGATIVE, data, f"{report.kind} certificate REJECTED at {report.failing_step}: {report.message}", None
    return EXIT_OK, data, f"{report.kind} certificate verified", None


COMMANDS = {
    "gen": cmd_gen,
    "classify": cmd_classify,
    "dim": cmd_dim,
    "euler": cmd_euler,
    "enhance": cmd_enhance,
    "product": cmd_product,
    "embed-check": cmd_embed_check,
    "separate": cmd_separate,
    "schoenflies": cmd_schoenflies,
    "intersect": cmd_intersect,
    "deform": cmd_deform,
    "contract": cmd_contract,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML settings file")
    common.add_argument("--budget-nodes", type=int, help="Search-state budget for classification")
    common.add_argument("--trace-budget", type=int, help="State budget for curve contraction")
    common.add_argument("--seed", type=int, help="Seed for random generators and deformations")
    common.add_argument("--human", action="store_true", help="Print a one-line summary instead of YAML")
    common.add_argument("--certificate", help="Write the certificate document to this path")
    common.add_argument("--edge-list", action="store_true", help="Read graphs as plain 'u v' edge lists")
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--enhanced", dest="mode", action="store_const", const="enhanced", help="Work in G1")
    mode.add_argument("--direct", dest="mode", action="store_const", const="direct", help="Work in G itself")

    parser = argparse.ArgumentParser(
        prog="evako",
        description="Evako discrete topology: spheres, balls, enhanced graphs, separation and Schoenflies certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="Write a named graph")
    p.add_argument("name")
    p.add_argument("params", nargs="*")

    for name, text in (("classify", "Sphere / ball / contractible / neither"), ("enhance", "Enhanced graph G1")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("graph", nargs="?", default="-")

    p = sub.add_parser("dim", parents=[common], help="Inductive dimension")
    p.add_argument("graph", nargs="?", default="-")
    p.add_argument("--polynomial", type=int, metavar="N", help="Expected dimension polynomial of G(N, p) instead")

    p = sub.add_parser("euler", parents=[common], help="Euler characteristic and f-vector")
    p.add_argument("graph", nargs="?", default="-")
    p.add_argument("--max-dim", type=int, help="Largest simplex dimension to count in the f-vector")

    p = sub.add_parser("product", parents=[common], help="Graph product of two graphs")
    p.add_argument("left")
    p.add_argument("right")

    for name, text in (
        ("embed-check", "Is the sphere embedded?"),
        ("separate", "Jordan-Brouwer separation"),
        ("schoenflies", "Certify both sides are balls"),
        ("intersect", "Intersection number of a curve with the sphere"),
        ("deform", "Simple homotopy deformation steps"),
        ("contract", "Contract a closed curve"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("graph", nargs="?", default="-")
        p.add_argument("--sphere", help="Sphere subgraph document")
        if name in ("intersect", "deform", "contract"):
            p.add_argument("--curve", help="Curve vertices, e.g. '0 1 2 3'")
            p.add_argument("--open", action="store_true", help="The curve is open")
        if name == "intersect":
            p.add_argument("--lift", action="store_true", help="The curve is in G; lift it to G1")
            p.add_argument("--orientation", type=int, default=1, choices=(1, -1), help="Curve orientation")
        if name == "deform":
            p.add_argument("--carrier", action="append", help="Carrier simplex, e.g. '0 1 4' (repeatable)")
            p.add_argument("--random-steps", type=int, help="Random shape-keeping steps on a curve")

    p = sub.add_parser("verify", parents=[common], help="Replay a certificate")
    p.add_argument("certificate_file")
    p.add_argument("graph", nargs="?", default="-")
    return parser


def _emit(stdout: TextIO, data: Dict[str, Any], summary: str, human: bool) -> None:
    if human:
        stdout.write(summary + "\n")
    elif "document" in data:
        stdout.write(data["document"].decode("utf-8"))
    else:
        stdout.write(dump_yaml(data).decode("utf-8"))


def run(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    """Run one command and return its exit code."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT

    try:
        settings = load_settings(
            args.config,
            {"budget_nodes": args.budget_nodes, "trace_budget": args.trace_budget, "seed": args.seed},
        )
        setup_logging(settings.log_level)
        code, data, summary, certificate = COMMANDS[args.command](CommandContext(args, settings, stdin))
        _emit(stdout, data, summary, args.human)
        if certificate and args.certificate:
            kind, payload, graph = certificate
            with open(args.certificate, "wb") as f:
                f.write(CertificateDocument.create(kind, payload, graph).to_bytes())
            logger.info(f"Wrote {kind} certificate to {args.certificate}")
        return code
    except TheoremViolationError as e:
        logger.error(f"Theorem violation: {e}")
        if e.components:
            logger.error(f"Components: {e.components}")
        stdout.write(dump_yaml({"error": "theorem_violation", "message": str(e), "components": e.components}).decode("utf-8"))
        return EXIT_THEOREM
    except ResourceLimitError as e:
        logger.error(f"Resource limit: {e} ({e.explored} states explored)")
        sys.stderr.write(f"resource limit: {e}\n")
        return EXIT_RESOURCE
    except GraphInputError as e:
        logger.error(f"Input error: {e}")
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT


def main():
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
