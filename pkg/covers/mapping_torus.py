"""
Mapping Tori

T_f = X x [0, 1] / (x, 1) ~ (f(x), 0) for a simplicial self-map f, as a cell
complex: every simplex sigma of X gives the cell sigma x 0 and the prism
sigma x I, with

    d(sigma x I) = (d sigma) x I + (-1)^k (f_# sigma - sigma)

where f_# sigma is zero when f collapses sigma and otherwise the image
simplex with the sign of the vertex permutation.
"""

from typing import Dict, List, Mapping, Tuple
import logging

from complexes.simplicial import Simplex, SimplicialComplex
from covers.cells import BoundaryEntry, CellComplex, CellComplexBuilder, CoverError, Step
from covers.permutation import CoverMap, Perm, identity

logger = logging.getLogger(__name__)

INTERVAL_MARKER = "interval"


def _check_simplicial(X: SimplicialComplex, f: Mapping[str, str]) -> Dict[int, int]:
    image: Dict[int, int] = {}
    for v in X.vertices:
        if v not in f:
            raise CoverError(f"map is undefined on vertex {v!r}")
        if f[v] not in X.vertices:
            raise CoverError(f"{v!r} maps to {f[v]!r}, which is not a vertex")
        image[X.index(v)] = X.index(f[v])
    for simplex in X.simplices:
        if not X.contains(tuple(sorted({image[v] for v in simplex}))):
            raise CoverError(f"map is not simplicial on {X.names(simplex)}")
    return image


def _pushforward(simplex: Simplex, image: Mapping[int, int]) -> Tuple[int, Simplex]:
    """(sign, sorted image) of f_# sigma; sign 0 when f is not injective on sigma."""
    values = [image[v] for v in simplex]
    if len(set(values)) != len(values):
        return 0, ()
    inversions = sum(1 for i in range(len(values)) for j in range(i + 1, len(values))
                     if values[i] > values[j])
    return (-1) ** inversions, tuple(sorted(values))


def mapping_torus(X: SimplicialComplex, f: Mapping[str, str]) -> CellComplex:
    """Cell structure of T_f; the edges v x I carry the `interval` marker."""
    image = _check_simplicial(X, f)
    if X.is_empty():
        return CellComplex([])
    builder = CellComplexBuilder()

    base: Dict[int, Dict[Simplex, int]] = {}
    prism: Dict[int, Dict[Simplex, int]] = {}

    for v in X.vertices:
        builder.add_vertex(v)
    base[0] = {(i,): i for i in range(len(X.vertices))}

    def edge_step(a: int, b: int) -> Step:
        """Step from vertex a to vertex b along the base edge joining them."""
        if a < b:
            return base[1][(a, b)], 1
        return base[1][(b, a)], -1

    for k in range(0, X.dim + 1):
        level_base = {}
        level_prism = {}
        if k >= 1:
            for simplex in X.simplices_of_dim(k):
                name = "".join(X.names(simplex))
                if k == 1:
                    level_base[simplex] = builder.add_edge(name, simplex[0], simplex[1])
                elif k == 2:
                    a, b, c = simplex
                    level_base[simplex] = builder.add_polygon(
                        name, [edge_step(a, b), edge_step(b, c), edge_step(c, a)]
                    )
                else:
                    level_base[simplex] = builder.add_cell(
                        name, k, simplex[0], _simplex_boundary(simplex, base, edge_step)
                    )
            base[k] = level_base
        for simplex in X.simplices_of_dim(k):
            name = "".join(X.names(simplex)) + "*I"
            if k == 0:
                (v,) = simplex
                index = builder.add_edge(name, v, image[v])
                builder.mark(INTERVAL_MARKER, index)
                level_prism[simplex] = index
            elif k == 1:
                level_prism[simplex] = builder.add_polygon(
                    name, _prism_word(simplex, image, prism, edge_step)
                )
            else:
                level_prism[simplex] = builder.add_cell(
                    name, k + 1, simplex[0], _prism_boundary(simplex, image, base, prism, edge_step)
                )
        prism[k] = level_prism

    result = builder.build()
    logger.debug("mapping torus of %r: cells %s", X, result.counts())
    return result


def _simplex_boundary(simplex: Simplex, base, edge_step) -> List[BoundaryEntry]:
    k = len(simplex) - 1
    entries = []
    for i in range(k + 1):
        face = simplex[:i] + simplex[i + 1:]
        transport = (edge_step(simplex[0], simplex[1]),) if i == 0 else ()
        entries.append(BoundaryEntry(base[k - 1][face], (-1) ** i, transport))
    return entries


def _prism_word(edge: Simplex, image, prism, edge_step) -> List[Step]:
    """e x I attached along e, I_b, f(e) reversed, I_a reversed."""
    a, b = edge
    word: List[Step] = [edge_step(a, b), (prism[0][(b,)], 1)]
    if image[a] != image[b]:
        word.append(edge_step(image[b], image[a]))
    word.append((prism[0][(a,)], -1))
    return word


def _prism_boundary(simplex: Simplex, image, base, prism, edge_step) -> List[BoundaryEntry]:
    k = len(simplex) - 1
    v0 = simplex[0]
    entries = []
    for i in range(k + 1):
        face = simplex[:i] + simplex[i + 1:]
        transport = (edge_step(v0, simplex[1]),) if i == 0 else ()
        entries.append(BoundaryEntry(prism[k - 1][face], (-1) ** i, transport))
    entries.append(BoundaryEntry(base[k][simplex], -((-1) ** k), ()))
    sign, target = _pushforward(simplex, image)
    if sign:
        transport: Tuple[Step, ...] = ((prism[0][(v0,)], 1),)
        if target[0] != image[v0]:
            transport += (edge_step(image[v0], target[0]),)
        entries.append(BoundaryEntry(base[k][target], (-1) ** k * sign, transport))
    return entries


def cyclic_cover(T: CellComplex, m: int) -> CoverMap:
    """Degree-m cover unwrapping the circle direction: every v x I shifts sheets by one."""
    if m < 1:
        raise CoverError("cyclic cover degree must be at least 1")
    intervals = T.markers.get(INTERVAL_MARKER)
    if intervals is None:
        raise CoverError("complex carries no interval edges; build it with mapping_torus")
    shift: Perm = tuple((i + 1) % m for i in range(m))
    perms = {e: identity(m) for e in range(T.count(1))}
    for e in intervals:
        perms[e] = shift
    return CoverMap.from_edge_permutations(T, m, perms)
