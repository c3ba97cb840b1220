"""
Intersection Vectors and Finger Moves

The intersection vector of a generic immersion records the signed crossing
number of every ordered pair of disjoint top simplices. Pushing a simplex
with a finger around a (d-1)-cochain rho changes its row by rho(boundary),
so clearing the vector is a linear system over Z or F_2.

Key Concerns:
1. Symmetry: V(sigma, tau) = (-1)^d V(tau, sigma) after every operation
2. Certificates: unsolvable systems return the combination of pairs that proves it
3. Scope: only disjoint pairs are scored; adjacent pairs are checked for general position
"""

from typing import Dict, List, Mapping, Optional, Tuple
from dataclasses import dataclass, field
import logging

from complexes.simplicial import Simplex, SimplicialComplex
from embedding.immersion import Crossing, EmbeddingError, Immersion, crossing, generic_check
from growth.parallel import ordered_map
from homology.linalg import SparseMatrix, determinant, solve_integer_system, solve_mod2_system

logger = logging.getLogger(__name__)

RINGS = ("z", "f2")

Pair = Tuple[Simplex, Simplex]


def _check_ring(ring: str) -> str:
    if ring not in RINGS:
        raise EmbeddingError(f"unknown ring {ring!r}; expected one of {', '.join(RINGS)}")
    return ring


def boundary_faces(simplex: Simplex) -> List[Tuple[Simplex, int]]:
    """Codimension-one faces with the signs of the simplicial boundary."""
    return [
        (simplex[:i] + simplex[i + 1:], -1 if i % 2 else 1)
        for i in range(len(simplex))
    ]


@dataclass
class IntersectionVector:
    """Signed crossing numbers over ordered disjoint pairs of top simplices."""
    source: SimplicialComplex
    d: int
    entries: Dict[Pair, int]
    ring: str = "z"

    def __post_init__(self):
        _check_ring(self.ring)
        if self.ring == "f2":
            self.entries = {pair: v % 2 for pair, v in self.entries.items()}

    def __getitem__(self, pair: Pair) -> int:
        return self.entries[pair]

    def pairs(self) -> List[Pair]:
        """Unordered disjoint pairs, each listed once as (smaller, larger)."""
        return sorted((s, t) for s, t in self.entries if s < t)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries.values())

    def is_symmetric(self) -> bool:
        sign = -1 if self.d % 2 else 1
        modulus = 2 if self.ring == "f2" else 0
        for (s, t), v in self.entries.items():
            diff = v - sign * self.entries[(t, s)]
            if (diff % modulus if modulus else diff) != 0:
                return False
        return True

    def mod2(self) -> "IntersectionVector":
        return IntersectionVector(self.source, self.d, dict(self.entries), "f2")

    def copy(self) -> "IntersectionVector":
        return IntersectionVector(self.source, self.d, dict(self.entries), self.ring)

    def named(self) -> List[Tuple[Tuple[str, ...], Tuple[str, ...], int]]:
        names = self.source.names
        return [(names(s), names(t), self.entries[(s, t)]) for s, t in sorted(self.entries)]


def _sign(f: Immersion, sigma: Simplex, tau: Simplex) -> int:
    det = determinant(f.directions(sigma) + f.directions(tau))
    if det == 0:
        raise EmbeddingError(
            f"crossing of {f.source.names(sigma)} and {f.source.names(tau)} is not transverse"
        )
    return 1 if det > 0 else -1


def intersection_vector(f: Immersion, threads: Optional[int] = None) -> IntersectionVector:
    """Signed crossings of all ordered disjoint pairs of top simplices.

    The sign is that of the determinant of the spanning vectors of sigma
    followed by those of tau, both in vertex order.
    """
    certificate = f.certificate or generic_check(f)
    if not certificate.holds:
        raise EmbeddingError(
            f"immersion is not generic at {certificate.witness}: {certificate.reason}"
        )
    tops = sorted(f.top_simplices())
    pairs = [(s, t) for i, s in enumerate(tops) for t in tops[i + 1:] if not set(s) & set(t)]

    def entry(pair: Pair) -> int:
        s, t = pair
        kind = crossing(f, s, t)
        if kind == Crossing.CROSS:
            return _sign(f, s, t)
        if kind == Crossing.MISS:
            return 0
        raise EmbeddingError(
            f"{kind.value} incidence between {f.source.names(s)} and {f.source.names(t)}"
        )

    values = ordered_map(entry, pairs, threads)
    sign = -1 if f.d % 2 else 1
    entries: Dict[Pair, int] = {}
    for (s, t), v in zip(pairs, values):
        entries[(s, t)] = v
        entries[(t, s)] = sign * v
    return IntersectionVector(f.source, f.d, entries)


def _pairing(rho: Mapping[Simplex, int], simplex: Simplex) -> int:
    """rho(boundary of simplex)."""
    return sum(sign * rho.get(face, 0) for face, sign in boundary_faces(simplex))


def finger_move(
    V: IntersectionVector, sigma: Simplex, rho: Mapping[Simplex, int]
) -> IntersectionVector:
    """Push sigma around the (d-1)-cochain rho."""
    if len(sigma) != V.d + 1 or not V.source.contains(sigma):
        raise EmbeddingError(f"finger moves push top simplices, got {sigma}")
    sign = -1 if V.d % 2 else 1
    entries = dict(V.entries)
    for (s, t) in V.entries:
        if s != sigma:
            continue
        change = _pairing(rho, t)
        if change:
            entries[(sigma, t)] += change
            entries[(t, sigma)] += sign * change
    return IntersectionVector(V.source, V.d, entries, V.ring)


@dataclass
class FingerSolution:
    """One (d-1)-cochain per top simplex; applying all moves clears V."""
    ring: str
    cochains: Dict[Simplex, Dict[Simplex, int]] = field(default_factory=dict)

    def apply(self, V: IntersectionVector) -> IntersectionVector:
        for sigma in sorted(self.cochains):
            V = finger_move(V, sigma, self.cochains[sigma])
        return V

    def support(self) -> int:
        return sum(1 for rho in self.cochains.values() for v in rho.values() if v)


@dataclass
class VanKampenResult:
    ring: str
    solvable: bool
    solution: Optional[FingerSolution] = None
    certificate: List[Tuple[Pair, int]] = field(default_factory=list)
    modulus: int = 0
    complete: bool = True


def _unknowns(L: SimplicialComplex, d: int) -> List[Tuple[Simplex, Simplex]]:
    faces = sorted(L.simplices_of_dim(d - 1))
    return [
        (sigma, e)
        for sigma in sorted(L.simplices_of_dim(d))
        for e in faces
        if not set(sigma) & set(e)
    ]


def vankampen_solve(L: SimplicialComplex, V: IntersectionVector, ring: str) -> VanKampenResult:
    """Find finger moves clearing V, or certify that none exist.

    For each unordered disjoint pair the equation is
    V(s, t) + rho_s(boundary t) + (-1)^d rho_t(boundary s) = 0.
    Solvability means embeddability only for d != 2, which `complete` records.
    """
    _check_ring(ring)
    if V.source != L:
        raise EmbeddingError("intersection vector belongs to another complex")
    if L.dim != V.d:
        raise EmbeddingError(f"complex has dimension {L.dim}, vector has d = {V.d}")
    if V.ring == "f2" and ring == "z":
        raise EmbeddingError("a mod-2 intersection vector cannot be solved over Z")
    d = V.d
    unknowns = _unknowns(L, d)
    column = {u: j for j, u in enumerate(unknowns)}
    pairs = V.pairs()
    complete = d != 2
    if not pairs:
        return VanKampenResult(ring, True, solution=FingerSolution(ring), complete=complete)
    sign = -1 if d % 2 else 1
    entries = []
    rhs = []
    for row, (s, t) in enumerate(pairs):
        for face, fsign in boundary_faces(t):
            entries.append((row, column[(s, face)], fsign))
        for face, fsign in boundary_faces(s):
            entries.append((row, column[(t, face)], sign * fsign))
        rhs.append(-V[(s, t)])
    A = SparseMatrix.from_entries(len(pairs), len(unknowns), entries)
    solved = solve_mod2_system(A, rhs) if ring == "f2" else solve_integer_system(A, rhs)
    if not solved.solvable:
        certificate = [(pairs[i], c) for i, c in enumerate(solved.certificate or []) if c]
        logger.info(
            "van Kampen system over %s unsolvable (%d pairs in certificate)", ring, len(certificate)
        )
        return VanKampenResult(
            ring, False, certificate=certificate, modulus=solved.modulus, complete=complete
        )

    solution = FingerSolution(ring)
    for (sigma, e), value in zip(unknowns, solved.solution):
        if value:
            solution.cochains.setdefault(sigma, {})[e] = value
    target = V.mod2() if ring == "f2" else V
    if not solution.apply(target).is_zero():
        raise EmbeddingError("finger solution does not clear the intersection vector")
    return VanKampenResult(ring, True, solution=solution, complete=complete)


def mod2_sum(V: IntersectionVector) -> int:
    """Sum over unordered disjoint pairs, mod 2."""
    return sum(V[pair] for pair in V.pairs()) % 2


def mod2_graph_obstruction(f: Immersion) -> int:
    """Parity of the number of crossings between disjoint edges of a graph in the plane."""
    if f.d != 1:
        raise EmbeddingError("the graph obstruction is defined for immersions into the plane")
    return mod2_sum(intersection_vector(f))


def odd_scale(V: IntersectionVector, k: int) -> IntersectionVector:
    """(2k + 1) V, realizable by repeating the reflection trick k times."""
    if k < 0:
        raise EmbeddingError("odd scaling needs k >= 0")
    factor = 2 * k + 1
    return IntersectionVector(V.source, V.d, {p: factor * v for p, v in V.entries.items()}, V.ring)
