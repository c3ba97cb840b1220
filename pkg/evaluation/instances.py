"""
Named Instances

Small complexes with known answers, used by the verify suites and the
tests, plus seeded random families. Random families draw from a numpy
Generator so a seed pins every instance.
"""

from typing import Dict, List, Tuple
from itertools import combinations
from fractions import Fraction

import networkx as nx
import numpy as np

from complexes.simplicial import SimplicialComplex, build_complex
from covers.cells import CellComplex, bouquet
from covers.mapping_torus import mapping_torus


def point() -> SimplicialComplex:
    return build_complex([], ["a"])


def two_points() -> SimplicialComplex:
    return build_complex([], ["a", "b"])


def edge() -> SimplicialComplex:
    return build_complex([["a", "b"]])


def triangle() -> SimplicialComplex:
    """The full 2-simplex."""
    return build_complex([["a", "b", "c"]])


def cycle(n: int) -> SimplicialComplex:
    names = [f"v{i}" for i in range(n)]
    return build_complex([[names[i], names[(i + 1) % n]] for i in range(n)], names)


def hollow_triangle() -> SimplicialComplex:
    return cycle(3)


def path(n: int) -> SimplicialComplex:
    """n edges in a row."""
    names = [f"v{i}" for i in range(n + 1)]
    return build_complex([[names[i], names[i + 1]] for i in range(n)], names)


def tetrahedron_boundary() -> SimplicialComplex:
    return build_complex([list(f) for f in combinations("abcd", 3)])


def octahedron_boundary() -> SimplicialComplex:
    """Suspension of a square; its equator is a 4-cycle without diagonal."""
    equator = ["a", "b", "c", "d"]
    faces = []
    for pole in ("n", "s"):
        for i in range(4):
            faces.append([pole, equator[i], equator[(i + 1) % 4]])
    return build_complex(faces)


def rp2() -> SimplicialComplex:
    """The 6-vertex real projective plane."""
    faces = ["124", "126", "135", "136", "145", "234", "235", "256", "346", "456"]
    return build_complex([list(f) for f in faces], [str(i) for i in range(1, 7)])


def complete_graph(n: int) -> SimplicialComplex:
    names = [str(i) for i in range(1, n + 1)]
    return build_complex([list(e) for e in combinations(names, 2)], names)


def k33() -> SimplicialComplex:
    left, right = ["a1", "a2", "a3"], ["b1", "b2", "b3"]
    return build_complex([[a, b] for a in left for b in right], left + right)


def k4() -> SimplicialComplex:
    return complete_graph(4)


def k5() -> SimplicialComplex:
    return complete_graph(5)


def k4_planar_coordinates() -> Dict[str, Tuple[Fraction, Fraction]]:
    """A crossing-free drawing: a triangle with its center."""
    return {
        "1": (Fraction(0), Fraction(0)),
        "2": (Fraction(4), Fraction(0)),
        "3": (Fraction(0), Fraction(4)),
        "4": (Fraction(1), Fraction(1)),
    }


def wedge_of_circles(n: int = 2) -> CellComplex:
    return bouquet(n)


def circle_reflection() -> Dict[str, str]:
    """Reflection of the 3-cycle fixing v0."""
    return {"v0": "v0", "v1": "v2", "v2": "v1"}


def klein_bottle() -> CellComplex:
    """Mapping torus of a reflection of the circle."""
    return mapping_torus(cycle(3), circle_reflection())


def graph_product_family() -> List[Tuple[str, SimplicialComplex]]:
    return [
        ("point", point()),
        ("two-points", two_points()),
        ("edge", edge()),
        ("4-cycle", cycle(4)),
        ("5-cycle", cycle(5)),
        ("triangle", triangle()),
    ]


def random_flag_complex(rng: np.random.Generator, n: int, p: float) -> SimplicialComplex:
    """Clique complex of an Erdos-Renyi graph."""
    graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2 ** 31)))
    names = [f"v{i}" for i in range(n)]
    cliques = [[names[i] for i in c] for c in nx.find_cliques(graph) if len(c) > 1]
    return build_complex(cliques, names)


def random_tree(rng: np.random.Generator, n: int) -> SimplicialComplex:
    """Random recursive tree on n vertices."""
    names = [f"v{i}" for i in range(n)]
    edges = [[names[int(rng.integers(i))], names[i]] for i in range(1, n)]
    return build_complex(edges, names)


def random_two_complex(rng: np.random.Generator, n: int, triangles: int) -> SimplicialComplex:
    names = [f"v{i}" for i in range(n)]
    pool = list(combinations(range(n), 3))
    chosen = rng.choice(len(pool), size=min(triangles, len(pool)), replace=False)
    return build_complex([[names[i] for i in pool[j]] for j in sorted(chosen)], names)


def random_perturbation(
    rng: np.random.Generator, K: SimplicialComplex, dim: int
) -> Dict[str, Tuple[Fraction, ...]]:
    """Nonzero integer vectors with entries in [-3, 3], one per vertex."""
    vectors = {}
    for v in K.vertices:
        vec = (0,) * dim
        while not any(vec):
            vec = tuple(int(x) for x in rng.integers(-3, 4, size=dim))
        vectors[v] = tuple(Fraction(x) for x in vec)
    return vectors
