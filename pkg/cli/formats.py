"""
Input File Formats

Line-based text formats for complexes, graph-product specs, covers and
immersions. Every file passes through the same layers: size limit, line
syntax, then semantic construction by the owning package.

Key Concerns:
1. Early rejection: oversized or malformed files stop before any computation
2. Precise errors: failures name the file line that caused them
3. Round trips: writers emit exactly what the parsers accept
"""

from typing import Dict, List, Mapping, Optional, Tuple
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import hashlib
import logging
import re

from complexes.simplicial import ComplexError, SimplicialComplex, build_complex
from covers.building import GraphProductSpec
from covers.cells import CellComplex, CoverError
from covers.permutation import CoverMap, generator_edges, identity, parse_cycles
from embedding.immersion import EmbeddingError, Immersion, immersion_from_coordinates

logger = logging.getLogger(__name__)

MAX_INPUT_BYTES = 2_000_000

_TOKEN = re.compile(r"^[^\s#]+$")


class InputFormatError(ValueError):
    """Raised when an input file cannot be parsed."""


class ParseResult(Enum):
    """Which layer accepted or rejected a file."""
    ACCEPTED = "accepted"
    REJECTED_SIZE = "rejected_size"
    REJECTED_SYNTAX = "rejected_syntax"
    REJECTED_SEMANTICS = "rejected_semantics"


@dataclass
class ParseOutcome:
    result: ParseResult
    message: str
    lines: List[Tuple[int, List[str]]] = field(default_factory=list)


class FormatValidator:
    """Split a file into keyword lines, rejecting anything unexpected.

    Comments start at `#`; blank lines are skipped; every remaining line
    must start with one of the allowed keywords.
    """

    def __init__(self, keywords: Mapping[str, int], max_bytes: int = MAX_INPUT_BYTES):
        # keyword -> minimum number of arguments
        self.keywords = dict(keywords)
        self.max_bytes = max_bytes

    def validate(self, text: str) -> ParseOutcome:
        if len(text.encode()) > self.max_bytes:
            return ParseOutcome(ParseResult.REJECTED_SIZE, f"input exceeds {self.max_bytes} bytes")
        lines = []
        for number, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if not body:
                continue
            tokens = body.split()
            keyword, args = tokens[0], tokens[1:]
            if keyword not in self.keywords:
                return ParseOutcome(
                    ParseResult.REJECTED_SYNTAX, f"line {number}: unknown keyword {keyword!r}"
                )
            if len(args) < self.keywords[keyword]:
                return ParseOutcome(
                    ParseResult.REJECTED_SYNTAX, f"line {number}: {keyword} needs arguments"
                )
            lines.append((number, tokens))
        return ParseOutcome(ParseResult.ACCEPTED, "ok", lines)

    def lines(self, text: str) -> List[Tuple[int, List[str]]]:
        outcome = self.validate(text)
        if outcome.result != ParseResult.ACCEPTED:
            raise InputFormatError(outcome.message)
        return outcome.lines


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


_COMPLEX_KEYWORDS = {"vertex": 1, "simplex": 1}


def _complex_from_lines(lines: List[Tuple[int, List[str]]]) -> SimplicialComplex:
    vertices: List[str] = []
    simplices: List[List[str]] = []
    for number, tokens in lines:
        keyword, args = tokens[0], tokens[1:]
        if keyword == "vertex":
            if len(args) != 1:
                raise InputFormatError(f"line {number}: vertex takes one identifier")
            vertices.append(args[0])
        elif keyword == "simplex":
            if len(set(args)) != len(args):
                raise InputFormatError(f"line {number}: repeated vertex in simplex")
            simplices.append(args)
    try:
        return build_complex(simplices, vertices)
    except ComplexError as e:
        raise InputFormatError(str(e)) from e


def parse_complex(text: str) -> SimplicialComplex:
    """`vertex <id>` and `simplex <id> ...` lines; simplices are closed downward."""
    return _complex_from_lines(FormatValidator(_COMPLEX_KEYWORDS).lines(text))


def format_complex(K: SimplicialComplex) -> str:
    lines = [f"vertex {v}" for v in K.vertices]
    for simplex in sorted(K.maximal_simplices()):
        if len(simplex) > 1:
            lines.append("simplex " + " ".join(K.names(simplex)))
    return "\n".join(lines) + "\n"


def _positive_int(token: str, number: int, what: str) -> int:
    if not token.isdigit() or int(token) < 1:
        raise InputFormatError(f"line {number}: {what} must be a positive integer, got {token!r}")
    return int(token)


def parse_graph_product(text: str) -> GraphProductSpec:
    """Complex lines plus `order <vertex> <m>` and an optional default `order * <m>`."""
    validator = FormatValidator({**_COMPLEX_KEYWORDS, "order": 2})
    lines = validator.lines(text)
    L = _complex_from_lines([(n, t) for n, t in lines if t[0] != "order"])
    default: Optional[int] = None
    orders: Dict[str, int] = {}
    for number, tokens in lines:
        if tokens[0] != "order":
            continue
        if len(tokens) != 3:
            raise InputFormatError(f"line {number}: order takes a vertex and an integer")
        m = _positive_int(tokens[2], number, "order")
        if tokens[1] == "*":
            default = m
        elif tokens[1] not in L.vertices:
            raise InputFormatError(f"line {number}: unknown vertex {tokens[1]!r}")
        else:
            orders[tokens[1]] = m
    if default is not None:
        for v in L.vertices:
            orders.setdefault(v, default)
    try:
        return GraphProductSpec(L, orders)
    except CoverError as e:
        raise InputFormatError(str(e)) from e


def parse_cover(text: str, base: CellComplex) -> CoverMap:
    """`degree <n>` then `perm <generator-index> <cycles>`; unlisted generators act trivially.

    Generator indices are 0-based positions among the non-forest edges of the base.
    """
    lines = FormatValidator({"degree": 1, "perm": 1}).lines(text)
    degrees = [t for _, t in lines if t[0] == "degree"]
    if len(degrees) != 1:
        raise InputFormatError("a cover file needs exactly one degree line")
    n = _positive_int(degrees[0][1], 0, "degree")
    generators = generator_edges(base)
    perms = [identity(n) for _ in generators]
    for number, tokens in lines:
        if tokens[0] != "perm":
            continue
        if not tokens[1].isdigit() or int(tokens[1]) >= len(generators):
            raise InputFormatError(f"line {number}: no generator {tokens[1]!r}")
        try:
            perms[int(tokens[1])] = parse_cycles(" ".join(tokens[2:]), n)
        except CoverError as e:
            raise InputFormatError(f"line {number}: {e}") from e
    try:
        return CoverMap(base, n, tuple(perms))
    except CoverError as e:
        raise InputFormatError(str(e)) from e


def parse_rational(token: str) -> Fraction:
    if not re.fullmatch(r"-?\d+(/0*[1-9]\d*)?", token):
        raise InputFormatError(f"malformed rational {token!r}")
    return Fraction(token)


def parse_immersion(text: str, L: SimplicialComplex) -> Immersion:
    """`coord <vertex> <q1> ... <q2d>` lines with rationals p/q."""
    coords: Dict[str, Tuple[Fraction, ...]] = {}
    for number, tokens in FormatValidator({"coord": 3}).lines(text):
        v = tokens[1]
        if v in coords:
            raise InputFormatError(f"line {number}: vertex {v!r} given twice")
        try:
            coords[v] = tuple(parse_rational(t) for t in tokens[2:])
        except InputFormatError as e:
            raise InputFormatError(f"line {number}: {e}") from e
    try:
        return immersion_from_coordinates(L, coords)
    except EmbeddingError as e:
        raise InputFormatError(str(e)) from e


def parse_vertex_map(text: str) -> Dict[str, str]:
    """`v:w` pairs separated by commas or whitespace."""
    mapping = {}
    for item in re.split(r"[,\s]+", text.strip()):
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 2 or not all(_TOKEN.match(p) for p in parts):
            raise InputFormatError(f"malformed map entry {item!r}")
        mapping[parts[0]] = parts[1]
    return mapping


def parse_int_list(text: str) -> List[int]:
    try:
        values = [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError as e:
        raise InputFormatError(f"malformed integer list {text!r}") from e
    if not values:
        raise InputFormatError("empty integer list")
    return values
