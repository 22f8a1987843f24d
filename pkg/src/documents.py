"""
Graph and certificate documents.

Both are YAML written with sorted keys and flow-style inner lists, so the
same graph or certificate always serializes to the same bytes:

    edges:
    - [0, 2]
    - [0, 3]
    name: octahedron
    vertices: [0, 1, 2, 3, 4, 5]

Enhanced graphs and products add a `map` sidecar from vertex to the
simplex (or pair of simplices) it stands for.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import yaml

from errors import GraphInputError
from graph_core import Graph
from validation import DocumentParseError, DocumentValidator

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"


def _load_yaml(data: Union[bytes, str]) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentParseError(f"Document is not UTF-8: {e}")
    try:
        return yaml.safe_load(data)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise DocumentParseError(str(problem), None if mark is None else mark.line + 1)


def dump_yaml(data: Any) -> bytes:
    return yaml.safe_dump(data, sort_keys=True, default_flow_style=None, width=1_000_000).encode("utf-8")


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class GraphDocument:
    """A named graph with an optional vertex map sidecar."""
    name: str
    graph: Graph
    vertex_map: Optional[Dict[int, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "vertices": list(self.graph.vertices),
            "edges": [list(e) for e in self.graph.edges],
        }
        if self.vertex_map is not None:
            data["map"] = {int(v): _plain_mapping(s) for v, s in sorted(self.vertex_map.items())}
        return data

    def to_bytes(self) -> bytes:
        return dump_yaml(self.to_dict())


def parse_graph_document(data: Union[bytes, str]) -> GraphDocument:
    """
    Parse and validate a graph document.

    Raises:
        DocumentParseError: If the text is not valid YAML
        DocumentValidationError: If the document breaks the schema
    """
    document = _load_yaml(data)
    DocumentValidator(document).validate_graph()
    graph = Graph(document["vertices"], document.get("edges") or [])
    mapping = document.get("map")
    return GraphDocument(document.get("name", "graph"), graph, None if mapping is None else dict(mapping))


def parse_graph(data: Union[bytes, str]) -> Graph:
    return parse_graph_document(data).graph


def serialize_graph(G: Graph, name: str = "graph", vertex_map: Optional[Dict[int, Any]] = None) -> bytes:
    return GraphDocument(name, G, vertex_map).to_bytes()


def graph_from_dict(data: Dict[str, Any]) -> Graph:
    """Graph embedded in a certificate payload ({vertices, edges})."""
    DocumentValidator({"vertices": data.get("vertices"), "edges": data.get("edges") or []}).validate_graph()
    return Graph(data["vertices"], data.get("edges") or [])


def graph_to_dict(G: Graph) -> Dict[str, Any]:
    return {"vertices": list(G.vertices), "edges": [list(e) for e in G.edges]}


def graph_digest(G: Graph) -> str:
    """Digest of the vertex and edge content, independent of name and formatting."""
    return digest(dump_yaml(graph_to_dict(G)))


def parse_edge_list(text: str) -> Graph:
    """
    Parse a plain edge list: one "u v" pair per line, a single label declares
    an isolated vertex, '#' starts a comment.

    Raises:
        DocumentParseError: On a line that is not one or two labels
    """
    vertices: List[int] = []
    edges: List[tuple] = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) > 2:
            raise DocumentParseError(f"expected 'u v', got '{line}'", number)
        try:
            labels = [int(f) for f in fields]
        except ValueError:
            raise DocumentParseError(f"labels must be integers, got '{line}'", number)
        if any(v < 0 for v in labels):
            raise DocumentParseError(f"labels must be non-negative, got '{line}'", number)
        if len(labels) == 2 and labels[0] == labels[1]:
            raise DocumentParseError(f"self-loop at {labels[0]}", number)
        vertices.extend(labels)
        if len(labels) == 2:
            edges.append(tuple(labels))
    return Graph(set(vertices), set(tuple(sorted(e)) for e in edges))


def parse_graph_input(data: Union[bytes, str], edge_list: bool = False) -> Graph:
    """A graph document, or an edge list when edge_list is set."""
    if edge_list:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        return parse_edge_list(text)
    return parse_graph(data)


@dataclass(frozen=True)
class CertificateDocument:
    """
    A self-contained certificate: the verifier needs only this document and
    the input graph. payload_digest covers the payload's canonical bytes.
    """
    kind: str
    payload: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION
    input_digest: str = ""
    payload_digest: str = ""

    @classmethod
    def create(cls, kind: str, payload: Dict[str, Any], graph: Graph) -> "CertificateDocument":
        payload = canonical_payload(payload)
        return cls(kind, payload, TOOL_VERSION, graph_digest(graph), payload_digest(payload))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "payload": self.payload,
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
            "payload_digest": self.payload_digest,
        }

    def to_bytes(self) -> bytes:
        return dump_yaml(self.to_dict())


def canonical_payload(payload: Dict[str, Any]) -> Dict[str, Any]:
    """The payload as it reads back from YAML (tuples become lists)."""
    return yaml.safe_load(dump_yaml(_plain_mapping(payload)))


def _plain_mapping(value: Any) -> Any:
    """Tuples (and Simplex tuples) to lists, recursively."""
    if isinstance(value, dict):
        return {k: _plain_mapping(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain_mapping(v) for v in value]
    return value


def payload_digest(payload: Dict[str, Any]) -> str:
    return digest(dump_yaml(payload))


def parse_certificate(data: Union[bytes, str]) -> CertificateDocument:
    """
    Raises:
        DocumentParseError: If the text is not valid YAML
        DocumentValidationError: If the envelope is malformed
    """
    document = _load_yaml(data)
    DocumentValidator(document).validate_certificate()
    if document["tool_version"] != TOOL_VERSION:
        logger.warning(f"Certificate written by tool version {document['tool_version']}, verifying with {TOOL_VERSION}")
    return CertificateDocument(
        document["kind"],
        document["payload"],
        document["tool_version"],
        document["input_digest"],
        document["payload_digest"],
    )


def load_file(path: str) -> bytes:
    """
    Raises:
        GraphInputError: If the file cannot be read
    """
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise GraphInputError(f"Cannot read {path}: {e}")
