"""
Simplicial Complexes

Exact combinatorics of finite abstract simplicial complexes: closure,
flagness, links, full subcomplexes, barycentric subdivision and
octahedralization.

Key Concerns:
1. Determinism: vertex order is fixed at construction and drives every orientation
2. Immutability: complexes are never mutated after construction
3. Cheap cores: vertices are re-indexed densely, simplices are sorted index tuples
"""

from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
from dataclasses import dataclass
from itertools import combinations, product
import logging

import networkx as nx

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]


class ComplexError(ValueError):
    """Raised when a complex operation's precondition is violated."""


class SimplicialComplex:
    """Finite abstract simplicial complex over string vertex identifiers.

    Simplices are stored as sorted tuples of vertex indices. The empty
    simplex is never stored.
    """

    def __init__(self, vertices: Sequence[str], simplices: Iterable[Iterable[int]]):
        self._vertices: Tuple[str, ...] = tuple(vertices)
        if len(set(self._vertices)) != len(self._vertices):
            raise ComplexError("vertex identifiers must be unique")
        self._index: Dict[str, int] = {v: i for i, v in enumerate(self._vertices)}

        stored = set()
        for simplex in simplices:
            key = tuple(sorted(simplex))
            if not key:
                continue
            if len(set(key)) != len(key):
                raise ComplexError(f"repeated vertex in simplex {key}")
            if key[0] < 0 or key[-1] >= len(self._vertices):
                raise ComplexError(f"simplex {key} references an unknown vertex")
            stored.add(key)
        stored.update((i,) for i in range(len(self._vertices)))

        for simplex in stored:
            if len(simplex) > 1:
                for face in combinations(simplex, len(simplex) - 1):
                    if face not in stored:
                        raise ComplexError(f"not downward closed: {face} missing")

        self._simplices: FrozenSet[Simplex] = frozenset(stored)
        self._by_dim: Dict[int, List[Simplex]] = {}
        for simplex in sorted(stored):
            self._by_dim.setdefault(len(simplex) - 1, []).append(simplex)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def simplices(self) -> FrozenSet[Simplex]:
        return self._simplices

    @property
    def dim(self) -> int:
        """Dimension; -1 for the empty complex."""
        return max(self._by_dim) if self._by_dim else -1

    def is_empty(self) -> bool:
        return not self._vertices

    def index(self, vertex: str) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise ComplexError(f"unknown vertex {vertex!r}") from None

    def simplex(self, names: Iterable[str]) -> Simplex:
        """Convert vertex names to a sorted index tuple (no membership check)."""
        indices = [self.index(v) for v in names]
        if len(set(indices)) != len(indices):
            raise ComplexError(f"repeated vertex in {list(names)}")
        return tuple(sorted(indices))

    def names(self, simplex: Simplex) -> Tuple[str, ...]:
        return tuple(self._vertices[i] for i in simplex)

    def contains(self, simplex: Simplex) -> bool:
        return simplex in self._simplices

    def simplices_of_dim(self, k: int) -> List[Simplex]:
        """k-simplices in lexicographic index order."""
        return list(self._by_dim.get(k, []))

    def f_vector(self) -> List[int]:
        return [len(self._by_dim.get(k, [])) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def maximal_simplices(self) -> List[Simplex]:
        maximal = []
        for simplex in sorted(self._simplices, key=lambda s: (len(s), s)):
            if not any(
                len(other) > len(simplex) and set(simplex) <= set(other)
                for other in self._by_dim.get(len(simplex), [])
            ):
                maximal.append(simplex)
        return maximal

    def one_skeleton(self) -> nx.Graph:
        """1-skeleton as a networkx graph on vertex indices."""
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self._vertices)))
        graph.add_edges_from(self._by_dim.get(1, []))
        return graph

    def is_connected(self) -> bool:
        if self.is_empty():
            return False
        return nx.is_connected(self.one_skeleton())

    def sub(self, simplices: Iterable[Simplex], vertices: Optional[Iterable[int]] = None):
        """Subcomplex spanned by index simplices, keeping this complex's vertex order."""
        simplices = list(simplices)
        keep = set(vertices or ())
        for simplex in simplices:
            keep.update(simplex)
        order = sorted(keep)
        reindex = {old: new for new, old in enumerate(order)}
        return SimplicialComplex(
            [self._vertices[i] for i in order],
            [tuple(reindex[i] for i in s) for s in simplices],
        )

    def __len__(self) -> int:
        return len(self._simplices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._named() == other._named()

    def __hash__(self) -> int:
        return hash(self._named())

    def _named(self) -> FrozenSet[FrozenSet[str]]:
        return frozenset(frozenset(self.names(s)) for s in self._simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={len(self._vertices)}, f={self.f_vector()})"


@dataclass(frozen=True)
class CombinatorialCheck:
    """Outcome of a yes/no combinatorial test with an optional witness."""
    holds: bool
    witness: Optional[Tuple[str, ...]] = None


@dataclass(frozen=True)
class Octahedralization:
    """OL together with its projection to L (vertex name to vertex name)."""
    complex: SimplicialComplex
    projection: Dict[str, str]

    def project(self, simplex: Simplex, base: SimplicialComplex) -> Simplex:
        return base.simplex(self.projection[v] for v in self.complex.names(simplex))


def build_complex(
    maximal_simplices: Sequence[Sequence[str]],
    vertices: Sequence[str] = (),
) -> SimplicialComplex:
    """Downward closure of the given simplices.

    Vertex order: explicitly listed vertices first, then first appearance,
    lexicographic inside each input simplex.
    """
    order: List[str] = []
    seen = set()

    def note(v: str):
        if not isinstance(v, str) or not v or any(c.isspace() for c in v):
            raise ComplexError(f"malformed vertex identifier {v!r}")
        if v not in seen:
            seen.add(v)
            order.append(v)

    for v in vertices:
        note(v)
    for simplex in maximal_simplices:
        if len(set(simplex)) != len(simplex):
            raise ComplexError(f"duplicate vertex identifier in simplex {list(simplex)}")
        for v in sorted(simplex):
            note(v)

    index = {v: i for i, v in enumerate(order)}
    closure = set()
    for simplex in maximal_simplices:
        key = tuple(sorted(index[v] for v in simplex))
        for size in range(1, len(key) + 1):
            closure.update(combinations(key, size))
    return SimplicialComplex(order, closure)


def is_flag(K: SimplicialComplex) -> CombinatorialCheck:
    """Every clique of the 1-skeleton spans a simplex.

    On failure the witness is the lexicographically least clique of
    minimal size that does not span a simplex.
    """
    failing_size = None
    failures: List[Simplex] = []
    for clique in nx.enumerate_all_cliques(K.one_skeleton()):
        if failing_size is not None and len(clique) > failing_size:
            break
        key = tuple(sorted(clique))
        if not K.contains(key):
            failing_size = len(key)
            failures.append(key)
    if not failures:
        return CombinatorialCheck(True)
    return CombinatorialCheck(False, K.names(min(failures)))


def is_no_square(K: SimplicialComplex) -> CombinatorialCheck:
    """No induced 4-cycle without a diagonal. Witness is the cycle a, b, c, d."""
    if not is_flag(K).holds:
        raise ComplexError("no-square check requires a flag complex")
    graph = K.one_skeleton()
    n = len(K.vertices)
    for a in range(n):
        for c in range(a + 1, n):
            if graph.has_edge(a, c):
                continue
            common = sorted(set(graph[a]) & set(graph[c]))
            for b, d in combinations(common, 2):
                if not graph.has_edge(b, d):
                    return CombinatorialCheck(False, K.names((a, b, c, d)))
    return CombinatorialCheck(True)


def link(K: SimplicialComplex, sigma: Sequence[str]) -> SimplicialComplex:
    key = K.simplex(sigma)
    if not K.contains(key):
        raise ComplexError(f"{list(sigma)} is not a simplex")
    inside = set(key)
    faces = [
        tau
        for tau in K.simplices
        if not inside & set(tau) and K.contains(tuple(sorted(inside | set(tau))))
    ]
    return K.sub(faces)


def closed_star(K: SimplicialComplex, vertex: str) -> SimplicialComplex:
    v = K.index(vertex)
    cofaces = [s for s in K.simplices if v in s]
    faces = set()
    for simplex in cofaces:
        for size in range(1, len(simplex) + 1):
            faces.update(combinations(simplex, size))
    return K.sub(faces)


def full_subcomplex(K: SimplicialComplex, vertices: Iterable[str]) -> SimplicialComplex:
    chosen = {K.index(v) for v in vertices}
    return K.sub((s for s in K.simplices if set(s) <= chosen), chosen)


def barycenter_name(K: SimplicialComplex, simplex: Simplex) -> str:
    names = K.names(simplex)
    return names[0] if len(names) == 1 else "[" + ",".join(names) + "]"


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """Flag complex of chains in the face poset of K."""
    ordered = sorted(K.simplices, key=lambda s: (len(s), s))
    position = {s: i for i, s in enumerate(ordered)}

    # faces precede cofaces in `ordered`, so every face's chains exist already
    chains_ending: Dict[Simplex, List[Simplex]] = {}
    for simplex in ordered:
        chains_ending[simplex] = _all_chains(simplex, chains_ending, position)

    all_chains = [c for chains in chains_ending.values() for c in chains]
    return SimplicialComplex([barycenter_name(K, s) for s in ordered], all_chains)


def _all_chains(
    simplex: Simplex,
    chains_ending: Dict[Simplex, List[Simplex]],
    position: Dict[Simplex, int],
) -> List[Simplex]:
    top = position[simplex]
    chains = [(top,)]
    for size in range(1, len(simplex)):
        for face in combinations(simplex, size):
            chains.extend(chain + (top,) for chain in chains_ending[face])
    return chains


def octahedralize(K: SimplicialComplex) -> Octahedralization:
    """Double each vertex into v+ and v-; each k-simplex yields 2^(k+1) simplices.

    Vertex order is a+, a-, b+, b-, ... so the projection is order preserving.
    """
    names: List[str] = []
    projection: Dict[str, str] = {}
    for v in K.vertices:
        for sign in "+-":
            names.append(v + sign)
            projection[v + sign] = v

    simplices = []
    for simplex in K.simplices:
        for signs in product((0, 1), repeat=len(simplex)):
            simplices.append(tuple(2 * v + s for v, s in zip(simplex, signs)))
    return Octahedralization(SimplicialComplex(names, simplices), projection)
