"""
Exact Immersions

Piecewise-linear maps of a d-dimensional complex into R^(2d), given by
rational coordinates on vertices. Genericity is decided pair by pair with
exact barycentric solves: two disjoint top simplices either miss or cross
at a single point interior to both.

Key Concerns:
1. Exactness: coordinates are Fractions, every incidence is decided without tolerance
2. Nondegeneracy: each top simplex must span an affine d-plane
3. Certification: a failed check carries the offending pair
"""

from typing import Dict, List, Mapping, Optional, Sequence, Tuple
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import logging

from complexes.simplicial import Simplex, SimplicialComplex
from homology.linalg import rank_rational, solve_rational

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


class EmbeddingError(ValueError):
    """Raised when an immersion or intersection computation is malformed."""


class Crossing(Enum):
    """How the images of two disjoint top simplices meet."""
    MISS = "miss"
    CROSS = "cross"
    BOUNDARY = "boundary"
    DEGENERATE = "degenerate"


@dataclass
class GenericityResult:
    holds: bool
    witness: Optional[Tuple[Tuple[str, ...], Tuple[str, ...]]] = None
    reason: str = ""


@dataclass
class Immersion:
    """Linear extension of vertex coordinates in R^(2d)."""
    source: SimplicialComplex
    d: int
    coordinates: Dict[str, Point]
    certificate: Optional[GenericityResult] = field(default=None, compare=False)

    def __post_init__(self):
        if self.d < 1:
            raise EmbeddingError("immersions need d >= 1")
        if self.source.dim > self.d:
            raise EmbeddingError(f"a {self.source.dim}-complex does not immerse in R^{2 * self.d}")
        coords = {}
        for v in self.source.vertices:
            if v not in self.coordinates:
                raise EmbeddingError(f"no coordinates for vertex {v}")
            point = tuple(Fraction(x) for x in self.coordinates[v])
            if len(point) != 2 * self.d:
                raise EmbeddingError(
                    f"vertex {v} has {len(point)} coordinates, expected {2 * self.d}"
                )
            coords[v] = point
        self.coordinates = coords
        for simplex in self.top_simplices():
            if not self._spans_plane(simplex):
                raise EmbeddingError(f"degenerate simplex {self.source.names(simplex)}")

    @property
    def ambient(self) -> int:
        return 2 * self.d

    def top_simplices(self) -> List[Simplex]:
        return self.source.simplices_of_dim(self.d)

    def point(self, vertex: int) -> Point:
        return self.coordinates[self.source.vertices[vertex]]

    def directions(self, simplex: Simplex) -> List[List[Fraction]]:
        """Edge vectors x_i - x_0 in vertex order."""
        base = self.point(simplex[0])
        return [[a - b for a, b in zip(self.point(v), base)] for v in simplex[1:]]

    def _spans_plane(self, simplex: Simplex) -> bool:
        return rank_rational(self.directions(simplex)) == len(simplex) - 1


def crossing(f: Immersion, sigma: Simplex, tau: Simplex) -> Crossing:
    """Classify f(sigma) and f(tau) for disjoint top simplices.

    Unknowns are the barycentric weights of both simplices; the spans meet
    where the weighted points agree.
    """
    n = f.ambient
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for axis in range(n):
        row = [f.point(v)[axis] for v in sigma] + [-f.point(w)[axis] for w in tau]
        rows.append(row)
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * len(sigma) + [Fraction(0)] * len(tau))
    rhs.append(Fraction(1))
    rows.append([Fraction(0)] * len(sigma) + [Fraction(1)] * len(tau))
    rhs.append(Fraction(1))

    status, weights = solve_rational(rows, rhs)
    if status == "inconsistent":
        return Crossing.MISS
    if status == "underdetermined":
        return Crossing.DEGENERATE
    low = min(weights)
    if low < 0:
        return Crossing.MISS
    if low == 0:
        return Crossing.BOUNDARY
    return Crossing.CROSS


def disjoint_pairs(f: Immersion) -> List[Tuple[Simplex, Simplex]]:
    """Unordered pairs of disjoint top simplices, in sorted order."""
    tops = sorted(f.top_simplices())
    return [
        (s, t)
        for i, s in enumerate(tops)
        for t in tops[i + 1:]
        if not set(s) & set(t)
    ]


def generic_check(f: Immersion) -> GenericityResult:
    """Decide genericity and store the result on the immersion.

    Disjoint pairs must miss or cross transversally in their interiors;
    pairs sharing vertices must have affinely independent vertex images.
    """
    src = f.source
    tops = sorted(f.top_simplices())
    result = GenericityResult(True)
    for i, s in enumerate(tops):
        for t in tops[i + 1:]:
            shared = set(s) & set(t)
            if shared:
                union = sorted(set(s) | set(t))
                base = f.point(union[0])
                vectors = [[a - b for a, b in zip(f.point(v), base)] for v in union[1:]]
                if rank_rational(vectors) != len(union) - 1:
                    result = GenericityResult(
                        False,
                        (src.names(s), src.names(t)),
                        "adjacent simplices not in general position",
                    )
                    break
                continue
            kind = crossing(f, s, t)
            if kind in (Crossing.BOUNDARY, Crossing.DEGENERATE):
                witness = (src.names(s), src.names(t))
                result = GenericityResult(False, witness, f"{kind.value} incidence")
                break
        if not result.holds:
            break
    if not result.holds:
        logger.debug("immersion not generic at %s: %s", result.witness, result.reason)
    f.certificate = result
    return result


def moment_immersion(L: SimplicialComplex, d: int) -> Immersion:
    """The i-th vertex (1-based) goes to (i, i^2, ..., i^(2d))."""
    if L.dim > d:
        raise EmbeddingError(f"moment immersion needs dim L <= {d}, got {L.dim}")
    coords = {
        v: tuple(Fraction(i ** e) for e in range(1, 2 * d + 1))
        for i, v in enumerate(L.vertices, start=1)
    }
    return Immersion(L, d, coords)


def immersion_from_coordinates(
    L: SimplicialComplex, coordinates: Mapping[str, Sequence[Fraction]]
) -> Immersion:
    """Infer d from the coordinate length, which must be even and agree everywhere."""
    lengths = {len(c) for c in coordinates.values()}
    if len(lengths) != 1:
        raise EmbeddingError("coordinate vectors differ in length")
    (n,) = lengths
    if n % 2 or n == 0:
        raise EmbeddingError(f"ambient dimension {n} is not a positive even number")
    return Immersion(L, n // 2, {v: tuple(Fraction(x) for x in c) for v, c in coordinates.items()})


def reflect(f: Immersion) -> Immersion:
    """Compose with the reflection negating the first axis."""
    coords = {v: (-p[0],) + p[1:] for v, p in f.coordinates.items()}
    return Immersion(f.source, f.d, coords)


def format_immersion(f: Immersion) -> str:
    lines = []
    for v in f.source.vertices:
        lines.append("coord " + v + " " + " ".join(str(x) for x in f.coordinates[v]))
    return "\n".join(lines) + "\n"
