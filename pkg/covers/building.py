"""
Finite Quotients of Right-Angled Buildings

A graph product G_L of cyclic groups Z/m_v acts on its right-angled building
with the Davis chamber K_L as strict fundamental domain. Composing with
G_L -> Q = prod Z/k_v (k_v | m_v) gives a finite quotient: one copy of the
cube (sigma, tau) for every coset of Q_sigma = prod_{v in sigma} Z/k_v.

Key Concerns:
1. Cell counts: cells over (sigma, tau) number |Q| / prod_{v in sigma} k_v exactly
2. Orientation: boundaries reuse the chamber's cubical signs, so d d = 0 is inherited
3. Provenance: every cell projects to its chamber cube; degree is |Q|
"""

from typing import Dict, Iterator, List, Mapping, Tuple
from dataclasses import dataclass
from itertools import product
from math import prod
import logging

from complexes.chamber import Cube, CubicalChamber, davis_chamber
from complexes.simplicial import SimplicialComplex, is_flag
from covers.cells import BoundaryEntry, CellComplex, CellComplexBuilder, CoverError

logger = logging.getLogger(__name__)

Coset = Tuple[int, ...]


@dataclass(frozen=True)
class GraphProductSpec:
    """Flag complex L with a cyclic vertex group Z/m_v for every vertex."""
    L: SimplicialComplex
    orders: Mapping[str, int]

    def __post_init__(self):
        if not is_flag(self.L).holds:
            raise CoverError("graph products are modeled on flag complexes")
        unknown = set(self.orders) - set(self.L.vertices)
        if unknown:
            raise CoverError(f"orders given for unknown vertices {sorted(unknown)}")
        for v in self.L.vertices:
            if v not in self.orders:
                raise CoverError(f"vertex {v!r} has no order")
            if self.orders[v] < 2:
                raise CoverError(f"order of {v!r} must be at least 2, got {self.orders[v]}")

    @staticmethod
    def uniform(L: SimplicialComplex, m: int) -> "GraphProductSpec":
        return GraphProductSpec(L, {v: m for v in L.vertices})

    def order_vector(self) -> Tuple[int, ...]:
        return tuple(self.orders[v] for v in self.L.vertices)

    @property
    def min_order(self) -> int:
        return min(self.order_vector(), default=0)


@dataclass(frozen=True)
class QuotientTarget:
    """phi: G_L -> prod Z/k_v sending each vertex generator to its factor."""
    divisors: Mapping[str, int]

    def validate(self, spec: GraphProductSpec):
        for v in spec.L.vertices:
            k = self.divisors.get(v)
            if k is None:
                raise CoverError(f"vertex {v!r} has no divisor")
            if k < 1 or spec.orders[v] % k:
                raise CoverError(f"divisor {k} of {v!r} does not divide m = {spec.orders[v]}")
        unknown = set(self.divisors) - set(spec.L.vertices)
        if unknown:
            raise CoverError(f"divisors given for unknown vertices {sorted(unknown)}")

    def vector(self, spec: GraphProductSpec) -> Tuple[int, ...]:
        return tuple(self.divisors[v] for v in spec.L.vertices)

    def order(self) -> int:
        return prod(self.divisors.values())

    def identifier(self, spec: GraphProductSpec) -> str:
        return "Q[" + ",".join(str(k) for k in self.vector(spec)) + "]"

    def refines(self, other: "QuotientTarget") -> bool:
        """ker(self) lies in ker(other), i.e. every k_v of `other` divides ours."""
        return all(self.divisors[v] % other.divisors[v] == 0 for v in self.divisors)

    @staticmethod
    def full(spec: GraphProductSpec) -> "QuotientTarget":
        return QuotientTarget(dict(spec.orders))

    @staticmethod
    def trivial(spec: GraphProductSpec) -> "QuotientTarget":
        return QuotientTarget({v: 1 for v in spec.L.vertices})


def quotient_targets(spec: GraphProductSpec) -> List[QuotientTarget]:
    """Every divisor vector of the orders, ordered by |Q| then lexicographically."""
    options = [[k for k in range(1, m + 1) if m % k == 0] for m in spec.order_vector()]
    targets = [
        QuotientTarget(dict(zip(spec.L.vertices, choice))) for choice in product(*options)
    ]
    return sorted(targets, key=lambda t: (t.order(), t.vector(spec)))


def _cosets(divisors: Tuple[int, ...], sigma: Tuple[int, ...]) -> List[Coset]:
    """Representatives of Q / Q_sigma: coordinates in sigma are zero."""
    ranges = [range(1) if i in sigma else range(k) for i, k in enumerate(divisors)]
    return list(product(*ranges))


def _reduce(q: Coset, sigma: Tuple[int, ...]) -> Coset:
    return tuple(0 if i in sigma else x for i, x in enumerate(q))


def _union(sigma: Tuple[int, ...], s: int) -> Tuple[int, ...]:
    return tuple(sorted(sigma + (s,)))


class _QuotientIndex:
    """Cell index of (coset, cube) inside its dimension."""

    def __init__(self, chamber: CubicalChamber, divisors: Tuple[int, ...]):
        self.positions: Dict[Tuple[Cube, Coset], int] = {}
        self.layout: List[List[Tuple[Cube, Coset]]] = []
        top = max(chamber.dim(c) for c in chamber.cubes)
        for k in range(top + 1):
            level = []
            for cube in chamber.cubes_of_dim(k):
                for q in _cosets(divisors, cube[0]):
                    self.positions[(cube, q)] = len(level)
                    level.append((cube, q))
            self.layout.append(level)

    def __call__(self, cube: Cube, q: Coset) -> int:
        return self.positions[(cube, _reduce(q, cube[0]))]

    def cells(self, k: int) -> Iterator[Tuple[Cube, Coset]]:
        return iter(self.layout[k])


def building_quotient(spec: GraphProductSpec, target: QuotientTarget) -> CellComplex:
    """The quotient of the building by ker(G_L -> Q), as a cell complex.

    Every cell is anchored at the corner (sigma, sigma) of its cube. The face
    x_s = 0 shares that corner; the face x_s = 1 is reached along the edge
    (sigma, sigma + s), which crosses the s-mirror.
    """
    target.validate(spec)
    L = spec.L
    chamber = davis_chamber(L)
    divisors = target.vector(spec)
    index = _QuotientIndex(chamber, divisors)
    builder = CellComplexBuilder()

    def name(cube: Cube, q: Coset) -> str:
        return chamber.cube_name(cube) + "@" + "".join(str(x) for x in q)

    def edge(sigma: Tuple[int, ...], s: int, q: Coset) -> int:
        return index(((sigma), _union(sigma, s)), q)

    for cube, q in index.cells(0):
        builder.add_vertex(name(cube, q))

    for cube, q in index.cells(1) if len(index.layout) > 1 else ():
        sigma, tau = cube
        (s,) = chamber.directions(cube)
        upper = _union(sigma, s)
        builder.add_edge(name(cube, q), index((sigma, sigma), q), index((upper, upper), q))

    for k in range(2, len(index.layout)):
        for cube, q in index.cells(k):
            sigma, tau = cube
            directions = chamber.directions(cube)
            if k == 2:
                s, t = directions
                word = [
                    (edge(sigma, s, q), 1),
                    (edge(_union(sigma, s), t, q), 1),
                    (edge(_union(sigma, t), s, q), -1),
                    (edge(sigma, t, q), -1),
                ]
                builder.add_polygon(name(cube, q), word)
                continue
            boundary = []
            for j, s in enumerate(directions):
                sign = (-1) ** j
                upper = (_union(sigma, s), tau)
                lower = (sigma, tuple(v for v in tau if v != s))
                boundary.append(BoundaryEntry(index(upper, q), sign, ((edge(sigma, s, q), 1),)))
                boundary.append(BoundaryEntry(index(lower, q), -sign, ()))
            builder.add_cell(name(cube, q), k, index((sigma, sigma), q), boundary)

    chamber_index = [
        {c: i for i, c in enumerate(chamber.cubes_of_dim(k))} for k in range(len(index.layout))
    ]
    projection = [
        [chamber_index[k][cube] for cube, _ in index.layout[k]] for k in range(len(index.layout))
    ]
    degree = target.order()
    result = builder.build(degree=degree, projection=projection)
    logger.debug(
        "building quotient %s: cells %s", target.identifier(spec), result.counts()
    )
    return result


def expected_cell_count(spec: GraphProductSpec, target: QuotientTarget, cube: Cube) -> int:
    """|Q| / prod_{v in sigma} k_v for the cube (sigma, tau)."""
    divisors = target.vector(spec)
    return prod(divisors) // prod(divisors[v] for v in cube[0])


def boundary_preimage(spec: GraphProductSpec, X: CellComplex) -> CellComplex:
    """Y = p^-1(boundary of K_L): the cells whose cube carries a mirror label."""
    chamber = davis_chamber(spec.L)
    wanted = set()
    for k in range(len(X.cells)):
        for i, cube in enumerate(chamber.cubes_of_dim(k)):
            if cube[0]:
                wanted.add((k, i))
    return X.preimage(wanted)
