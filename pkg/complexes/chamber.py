"""
Davis Chamber

The chamber K_L of a flag complex L as a cubical complex: one cube per pair
(sigma, tau) of simplices of L with sigma a face of tau, sigma possibly empty.
The cube has dimension |tau| - |sigma| and carries the mirror labels sigma.
"""

from typing import Dict, List, Tuple
from dataclasses import dataclass
from itertools import combinations

from complexes.simplicial import ComplexError, Simplex, SimplicialComplex, is_flag

Cube = Tuple[Simplex, Simplex]


@dataclass(frozen=True)
class CubicalChamber:
    base: SimplicialComplex
    cubes: Tuple[Cube, ...]

    @staticmethod
    def dim(cube: Cube) -> int:
        sigma, tau = cube
        return len(tau) - len(sigma)

    @staticmethod
    def mirror_labels(cube: Cube) -> Simplex:
        return cube[0]

    @staticmethod
    def directions(cube: Cube) -> Tuple[int, ...]:
        """Free coordinates tau minus sigma, sorted; they orient the cube."""
        sigma, tau = cube
        return tuple(v for v in tau if v not in sigma)

    @staticmethod
    def faces(cube: Cube) -> List[Tuple[Cube, int]]:
        """Signed codimension-one faces.

        For the j-th free coordinate s the face x_s = 1 is (sigma + s, tau) with
        sign (-1)^j and the face x_s = 0 is (sigma, tau - s) with sign -(-1)^j.
        """
        sigma, tau = cube
        result = []
        for j, s in enumerate(CubicalChamber.directions(cube)):
            sign = (-1) ** j
            upper = (tuple(sorted(sigma + (s,))), tau)
            lower = (sigma, tuple(v for v in tau if v != s))
            result.append((upper, sign))
            result.append((lower, -sign))
        return result

    def cubes_of_dim(self, k: int) -> List[Cube]:
        return [c for c in self.cubes if self.dim(c) == k]

    def mirror(self, vertex: str) -> List[Cube]:
        s = self.base.index(vertex)
        return [c for c in self.cubes if s in c[0]]

    def boundary_cubes(self) -> List[Cube]:
        return [c for c in self.cubes if c[0]]

    def boundary_cube_count(self) -> int:
        return len(self.boundary_cubes())

    def euler_characteristic(self) -> int:
        return sum((-1) ** self.dim(c) for c in self.cubes)

    def cube_name(self, cube: Cube) -> str:
        sigma, tau = cube
        return "(" + "".join(self.base.names(sigma)) + "|" + "".join(self.base.names(tau)) + ")"

    def index(self) -> Dict[Cube, int]:
        return {c: i for i, c in enumerate(self.cubes)}


def davis_chamber(L: SimplicialComplex) -> CubicalChamber:
    """Cone on the barycentric subdivision of a flag complex, as cubes."""
    if not is_flag(L).holds:
        raise ComplexError("the Davis chamber requires a flag complex")
    augmented = [()] + sorted(L.simplices)
    cubes = []
    for tau in augmented:
        for size in range(len(tau) + 1):
            for sigma in combinations(tau, size):
                cubes.append((sigma, tau))
    cubes.sort(key=lambda c: (CubicalChamber.dim(c), c))
    return CubicalChamber(L, tuple(cubes))
