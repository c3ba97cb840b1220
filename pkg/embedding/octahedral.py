"""
Octahedral Immersions

Immersions of an octahedralization OL built from a generic immersion f of
L by sending v+ to f(v) and v- to f(v) + eps X_v. For small eps their
intersection vectors are special: V(sigma, tau) depends on tau only through
its projection to L. Special vectors clear fiber by fiber, each step a
coboundary solve on L, which succeeds whenever H^d(L; Z) is finite of odd
order.

Key Concerns:
1. Small eps: halved until genericity and invariance agree on two successive values
2. Order: fibers are cleared in order, and invariance is re-checked before each solve
3. Certificates: a failed coboundary solve returns the chain that obstructs it
"""

from typing import Dict, List, Mapping, Optional, Sequence, Tuple
from dataclasses import dataclass, field
from fractions import Fraction
import logging

from complexes.simplicial import Octahedralization, Simplex, SimplicialComplex, octahedralize
from embedding.immersion import EmbeddingError, Immersion, generic_check
from embedding.intersection import (
    FingerSolution,
    IntersectionVector,
    finger_move,
    intersection_vector,
    odd_scale,
)
from homology.chains import cohomology_top_order, simplicial_chain_complex
from homology.linalg import solve_integer_system

logger = logging.getLogger(__name__)

MAX_HALVINGS = 30


@dataclass
class InvarianceResult:
    holds: bool
    witness: Optional[Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]] = None


def invariance_check(
    V: IntersectionVector, octa: Octahedralization, base: SimplicialComplex
) -> InvarianceResult:
    """V(sigma, tau) == V(sigma, tau') whenever tau and tau' project to the same simplex."""
    OL = octa.complex
    seen: Dict[Tuple[Simplex, Simplex], Tuple[Simplex, int]] = {}
    for (sigma, tau), value in sorted(V.entries.items()):
        key = (sigma, octa.project(tau, base))
        if key not in seen:
            seen[key] = (tau, value)
            continue
        other, expected = seen[key]
        if value != expected:
            return InvarianceResult(False, (OL.names(sigma), OL.names(other), OL.names(tau)))
    return InvarianceResult(True)


@dataclass
class OctahedralImmersion:
    immersion: Immersion
    octa: Octahedralization
    eps: Fraction
    halvings: int
    vector: IntersectionVector


def _perturbed(octa: Octahedralization, f: Immersion, X: Mapping[str, Tuple[Fraction, ...]],
               eps: Fraction) -> Immersion:
    coords = {}
    for name, v in octa.projection.items():
        base = f.coordinates[v]
        if name.endswith("+"):
            coords[name] = base
        else:
            coords[name] = tuple(a + eps * b for a, b in zip(base, X[v]))
    return Immersion(octa.complex, f.d, coords)


def perturbed_octahedral_immersion(
    L: SimplicialComplex,
    f: Immersion,
    X: Mapping[str, Sequence[Fraction]],
    eps: Fraction = Fraction(1),
    max_halvings: int = MAX_HALVINGS,
) -> OctahedralImmersion:
    """Shrink eps until two successive values give generic, special, equal vectors."""
    if f.source != L:
        raise EmbeddingError("the immersion is not an immersion of L")
    if not generic_check(f).holds:
        raise EmbeddingError("the immersion of L must be generic")
    vectors = {}
    for v in L.vertices:
        if v not in X:
            raise EmbeddingError(f"no perturbation vector for vertex {v}")
        vec = tuple(Fraction(x) for x in X[v])
        if len(vec) != f.ambient:
            raise EmbeddingError(f"perturbation of {v} has {len(vec)} coordinates")
        if not any(vec):
            raise EmbeddingError(f"perturbation of {v} is zero")
        vectors[v] = vec
    eps = Fraction(eps)
    if eps <= 0:
        raise EmbeddingError("eps must be positive")

    octa = octahedralize(L)
    previous: Optional[IntersectionVector] = None
    for halvings in range(max_halvings + 1):
        current: Optional[IntersectionVector] = None
        try:
            g = _perturbed(octa, f, vectors, eps)
            if generic_check(g).holds:
                V = intersection_vector(g)
                if invariance_check(V, octa, L).holds:
                    current = V
        except EmbeddingError as e:
            logger.debug("eps = %s rejected: %s", eps, e)
        if current is not None and previous is not None and current.entries == previous.entries:
            logger.debug("octahedral immersion stable at eps = %s after %d halvings", eps, halvings)
            return OctahedralImmersion(g, octa, eps, halvings, current)
        previous = current
        eps /= 2
    raise EmbeddingError(
        f"perturbation still degenerate after {max_halvings} halvings; try another X"
    )


def pullback_vector(
    octa: Octahedralization,
    base: SimplicialComplex,
    d: int,
    table: Mapping[Tuple[Simplex, Simplex], int],
) -> IntersectionVector:
    """Special vector on OL whose entries depend only on the projected pair."""
    OL = octa.complex
    tops = sorted(OL.simplices_of_dim(d))
    entries = {}
    for s in tops:
        for t in tops:
            if s != t and not set(s) & set(t):
                entries[(s, t)] = table.get((octa.project(s, base), octa.project(t, base)), 0)
    V = IntersectionVector(OL, d, entries)
    if not V.is_symmetric():
        raise EmbeddingError("table does not have the (-1)^d symmetry")
    return V


@dataclass
class ReductionResult:
    """Outcome of clearing a special intersection vector of OL."""
    success: bool
    cohomology_order: int
    scale: int = 1
    solution: Optional[FingerSolution] = None
    blocked_at: Optional[Tuple[str, ...]] = None
    certificate: List[Tuple[Tuple[str, ...], int]] = field(default_factory=list)
    modulus: int = 0
    reason: str = ""


def octahedral_obstruction_reduce(
    L: SimplicialComplex, d: int, V: IntersectionVector, octa: Optional[Octahedralization] = None
) -> ReductionResult:
    """Clear V fiber by fiber with pulled-back coboundaries.

    When |H^d(L; Z)| = h is odd, V is first replaced by hV, which the
    reflection trick realizes, so that every row becomes a coboundary.
    Otherwise rows are solved as they stand and the first one that is not a
    coboundary is returned as the obstruction.
    """
    if d == 2:
        raise EmbeddingError("the reduction is not available for d = 2")
    if L.dim != d or V.d != d:
        raise EmbeddingError(f"expected a {d}-dimensional complex and vector")
    octa = octa or octahedralize(L)
    if V.source != octa.complex:
        raise EmbeddingError("vector does not belong to the octahedralization of L")
    if not invariance_check(V, octa, L).holds:
        raise EmbeddingError("intersection vector is not special")

    C = simplicial_chain_complex(L)
    order = cohomology_top_order(C, d)
    solution = FingerSolution("z")
    if V.is_zero():
        return ReductionResult(True, order, solution=solution, reason="vector already zero")

    scale = order if order % 2 else 1
    current = odd_scale(V, (scale - 1) // 2)
    OL = octa.complex
    base_tops = L.simplices_of_dim(d)
    base_index = {s: i for i, s in enumerate(base_tops)}
    base_faces = L.simplices_of_dim(d - 1)
    delta = C.boundary(d).transpose()

    fibers: Dict[Simplex, List[Simplex]] = {}
    for sigma in sorted(OL.simplices_of_dim(d)):
        fibers.setdefault(octa.project(sigma, L), []).append(sigma)

    for s in base_tops:
        for sigma in fibers.get(s, []):
            phi = [0] * len(base_tops)
            assigned: Dict[Simplex, int] = {}
            for (a, tau), value in current.entries.items():
                if a != sigma:
                    continue
                t = octa.project(tau, L)
                if t in assigned and assigned[t] != value:
                    raise EmbeddingError(f"invariance lost at {OL.names(sigma)}")
                assigned[t] = value
                phi[base_index[t]] = value
            if not any(phi):
                continue
            solved = solve_integer_system(delta, phi)
            if not solved.solvable:
                certificate = [
                    (L.names(base_tops[i]), c) for i, c in enumerate(solved.certificate or []) if c
                ]
                logger.info("row of %s is not a coboundary", OL.names(sigma))
                return ReductionResult(
                    False, order, scale,
                    blocked_at=OL.names(sigma),
                    certificate=certificate,
                    modulus=solved.modulus,
                    reason=f"H^{d}(L; Z) has order {'infinity' if order == 0 else order}",
                )
            rho = {}
            for e in OL.simplices_of_dim(d - 1):
                if set(e) & set(sigma):
                    continue
                value = solved.solution[base_faces.index(octa.project(e, L))]
                if value:
                    rho[e] = -value
            current = finger_move(current, sigma, rho)
            if rho:
                solution.cochains[sigma] = rho

    if not current.is_zero():
        raise EmbeddingError("fiberwise reduction left a nonzero intersection vector")
    return ReductionResult(True, order, scale, solution=solution)
