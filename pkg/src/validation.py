"""
Validation for graph documents, certificate envelopes and settings.

Validators collect every problem they find, each with a suggestion, and
raise once with a formatted multi-line message.
"""
import logging
import re
from typing import Any, Dict, List, Optional, Set

from errors import GraphInputError

logger = logging.getLogger(__name__)


class DocumentParseError(GraphInputError):
    """Exception raised when a document is not well-formed structured text."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DocumentValidationError(GraphInputError):
    """Exception raised when a parsed document breaks the schema."""
    pass


class SettingsValidationError(GraphInputError):
    """Exception raised when settings values are invalid."""
    pass


def _is_label(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def format_errors(title: str, errors: List[str]) -> str:
    """Format collected errors into one message."""
    lines = [
        "",
        "=" * 70,
        title,
        "=" * 70,
        "",
        f"Found {len(errors)} error(s):",
        "",
    ]
    for i, error in enumerate(errors, 1):
        lines.append(f"{i}. {error}")
        lines.append("")
    lines.append("=" * 70)
    return "\n".join(lines)


class DocumentValidator:
    """
    Validates parsed graph and certificate documents.

    Graph documents need a string name, a list of distinct non-negative
    integer vertices and a list of vertex pairs between declared vertices,
    without self-loops or duplicates. Unsorted lists and pairs are accepted
    with a warning; serialization canonicalizes them.
    """

    CERTIFICATE_KINDS = {"contraction", "sphere", "ball", "separation", "schoenflies", "trace", "intersection"}
    DIGEST_PATTERN = re.compile(r"^[0-9a-f]{64}$")

    def __init__(self, document: Any):
        self.document = document
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def validate_graph(self) -> bool:
        """
        Raises:
            DocumentValidationError: If the document is not a valid graph document
        """
        self.errors = []
        self.warnings = []
        if not isinstance(self.document, dict):
            self.errors.append(
                f"Graph document must be a mapping, got {type(self.document).__name__}.\n"
                f"  Suggestion: Use top-level keys 'name', 'vertices' and 'edges'."
            )
        else:
            self._validate_keys(self.document, {"name", "vertices", "edges", "map"}, "Graph document")
            self._validate_name()
            vertices = self._validate_vertices()
            self._validate_edges(vertices)
            if self.document.get("map") is not None:
                self._validate_map(vertices)
        return self._report("Graph Document Validation Failed")

    def validate_certificate(self) -> bool:
        """
        Raises:
            DocumentValidationError: If the certificate envelope is malformed
        """
        self.errors = []
        self.warnings = []
        doc = self.document
        if not isinstance(doc, dict):
            self.errors.append(f"Certificate must be a mapping, got {type(doc).__name__}.")
            return self._report("Certificate Validation Failed")

        self._validate_keys(doc, {"kind", "payload", "tool_version", "input_digest", "payload_digest"}, "Certificate")
        kind = doc.get("kind")
        if kind not in self.CERTIFICATE_KINDS:
            self.errors.append(
                f"Unknown certificate kind '{kind}'.\n"
                f"  Suggestion: Use one of: {', '.join(sorted(self.CERTIFICATE_KINDS))}."
            )
        if not isinstance(doc.get("payload"), dict):
            self.errors.append("Certificate 'payload' must be a mapping.")
        if not isinstance(doc.get("tool_version"), str):
            self.errors.append("Certificate 'tool_version' must be a string.")
        for key in ("input_digest", "payload_digest"):
            value = doc.get(key)
            if not isinstance(value, str) or not self.DIGEST_PATTERN.match(value):
                self.errors.append(
                    f"Certificate '{key}' must be a sha256 hex digest.\n"
                    f"  Suggestion: Regenerate the certificate instead of editing it by hand."
                )
        return self._report("Certificate Validation Failed")

    def _validate_keys(self, doc: Dict[str, Any], allowed: Set[str], context: str):
        for key in sorted(set(doc) - allowed, key=str):
            self.errors.append(
                f"{context}: Unknown field '{key}'.\n"
                f"  Suggestion: Allowed fields are {', '.join(sorted(allowed))}."
            )

    def _validate_name(self):
        name = self.document.get("name", "graph")
        if not isinstance(name, str):
            self.errors.append(f"'name' must be a string, got {type(name).__name__}.")

    def _validate_vertices(self) -> Set[int]:
        vertices = self.document.get("vertices")
        if vertices is None:
            self.errors.append(
                "Missing required field 'vertices'.\n"
                "  Suggestion: Add 'vertices: []' for the empty graph."
            )
            return set()
        if not isinstance(vertices, list):
            self.errors.append("'vertices' must be a list of non-negative integers.")
            return set()

        declared: Set[int] = set()
        clean = True
        for v in vertices:
            if not _is_label(v):
                self.errors.append(f"Vertex {v!r} is not a non-negative integer.")
                clean = False
            elif v in declared:
                self.errors.append(f"Vertex {v} is declared twice.")
            else:
                declared.add(v)
        if clean and vertices != sorted(vertices):
            self.warnings.append("'vertices' is not sorted; it will be sorted on output.")
        return declared

    def _validate_edges(self, vertices: Set[int]):
        edges = self.document.get("edges", [])
        if edges is None:
            return
        if not isinstance(edges, list):
            self.errors.append("'edges' must be a list of [u, v] pairs.")
            return

        seen: Set[tuple] = set()
        unsorted = False
        for idx, edge in enumerate(edges):
            context = f"Edge #{idx + 1}"
            if not isinstance(edge, list) or len(edge) != 2 or not all(_is_label(v) for v in edge):
                self.errors.append(f"{context}: {edge!r} is not a pair of non-negative integers.")
                continue
            u, v = edge
            if u == v:
                self.errors.append(
                    f"{context}: Self-loop at vertex {u}.\n"
                    f"  Suggestion: Graphs are simple; remove the edge."
                )
                continue
            for endpoint in (u, v):
                if endpoint not in vertices:
                    self.errors.append(
                        f"{context}: Vertex {endpoint} is not declared.\n"
                        f"  Suggestion: Add {endpoint} to 'vertices'."
                    )
            key = (min(u, v), max(u, v))
            if key in seen:
                self.errors.append(f"{context}: Duplicate edge {list(key)}.")
            seen.add(key)
            unsorted = unsorted or u > v
        if unsorted:
            self.warnings.append("Some edges are stored as [u, v] with u > v; they will be flipped on output.")

    def _validate_map(self, vertices: Set[int]):
        mapping = self.document["map"]
        if not isinstance(mapping, dict):
            self.errors.append("'map' must be a mapping from vertex to a list.")
            return
        for key, value in mapping.items():
            if key not in vertices:
                self.errors.append(f"'map' entry {key!r} is not a declared vertex.")
            if not isinstance(value, list):
                self.errors.append(f"'map' entry {key!r} must be a list.")

    def _report(self, title: str) -> bool:
        for warning in self.warnings:
            logger.warning(f"Document warning: {warning}")
        if self.errors:
            raise DocumentValidationError(format_errors(title, self.errors))
        return True


class SettingsValidator:
    """Validates a settings mapping (from YAML, environment or flags)."""

    POSITIVE_INT_KEYS = ("budget_nodes", "trace_budget", "polynomial_bound")
    VALID_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
    KNOWN_KEYS = set(POSITIVE_INT_KEYS) | {"seed", "log_level"}

    def __init__(self, settings: Dict[str, Any]):
        self.settings = settings
        self.errors: List[str] = []

    def validate(self) -> bool:
        """
        Raises:
            SettingsValidationError: If any value is invalid
        """
        self.errors = []
        if not isinstance(self.settings, dict):
            raise SettingsValidationError(
                format_errors("Settings Validation Failed", ["Settings file must contain a mapping."])
            )

        for key in sorted(set(self.settings) - self.KNOWN_KEYS, key=str):
            self.errors.append(
                f"Unknown setting '{key}'.\n"
                f"  Suggestion: Known settings are {', '.join(sorted(self.KNOWN_KEYS))}."
            )
        for key in self.POSITIVE_INT_KEYS:
            if key in self.settings:
                value = self.settings[key]
                if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                    self.errors.append(f"'{key}' must be a positive integer, got {value!r}.")
        if "seed" in self.settings and not _is_label(self.settings["seed"]):
            self.errors.append(f"'seed' must be a non-negative integer, got {self.settings['seed']!r}.")
        if "log_level" in self.settings:
            level = self.settings["log_level"]
            if not isinstance(level, str) or level.upper() not in self.VALID_LOG_LEVELS:
                self.errors.append(
                    f"Invalid log level {level!r}.\n"
                    f"  Suggestion: Use one of {', '.join(sorted(self.VALID_LOG_LEVELS))}."
                )

        if self.errors:
            raise SettingsValidationError(format_errors("Settings Validation Failed", self.errors))
        logger.debug("Settings validation passed")
        return True


def validate_graph_document(document: Any) -> bool:
    """
    Convenience function to validate a parsed graph document.

    Raises:
        DocumentValidationError: If validation fails
    """
    return DocumentValidator(document).validate_graph()
