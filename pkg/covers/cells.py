"""
Cell Complexes with Transport Data

Regular enough CW complexes for covering theory: every cell has an anchor
vertex, and every boundary entry records a path of edges from the cell's
anchor to the face's anchor. Lifting a cell to a cover only needs those
paths and the edge permutations.

Key Concerns:
1. Correctness: d d = 0 is asserted on every build and every transport is walked
2. Determinism: spanning forests come from BFS from the least vertex index
3. Provenance: covers keep their degree and projection to base cells
"""

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple
from dataclasses import dataclass
from collections import deque
from fractions import Fraction
import logging

import networkx as nx

from complexes.simplicial import SimplicialComplex
from homology.chains import ChainComplex
from homology.linalg import SparseMatrix
from homology.spectral import incidence_norm_bound

logger = logging.getLogger(__name__)

Step = Tuple[int, int]          # (edge index, +1 forward / -1 backward)
CellRef = Tuple[int, int]       # (dimension, index within dimension)


class CoverError(ValueError):
    """Raised when a cell complex or cover precondition is violated."""


@dataclass(frozen=True)
class BoundaryEntry:
    face: int
    coefficient: int
    transport: Tuple[Step, ...] = ()


@dataclass(frozen=True)
class Cell:
    name: str
    dim: int
    anchor: int
    boundary: Tuple[BoundaryEntry, ...] = ()
    endpoints: Optional[Tuple[int, int]] = None     # (tail, head) for edges
    word: Optional[Tuple[Step, ...]] = None         # attaching word for 2-cells


@dataclass
class Presentation:
    """pi_1 presentation: generators are non-forest edges, relators 2-cell words."""
    generators: Tuple[int, ...]
    relators: List[Tuple[Tuple[int, int], ...]]
    forest: Set[int]

    def format_relator(self, relator: Sequence[Tuple[int, int]]) -> str:
        letters = "abcdefghijklmnopqrstuvwxyz"
        parts = []
        for g, sign in relator:
            name = letters[g] if g < len(letters) else f"g{g}"
            parts.append(name if sign > 0 else name + "⁻¹")
        return "".join(parts) or "1"


class CellComplex:
    """Immutable cell complex; build through `CellComplexBuilder`."""

    def __init__(
        self,
        cells: Sequence[Sequence[Cell]],
        degree: int = 1,
        projection: Optional[Sequence[Sequence[int]]] = None,
        inclusion: Optional[Sequence[Sequence[int]]] = None,
        markers: Optional[Mapping[str, Tuple[int, ...]]] = None,
    ):
        self.cells: Tuple[Tuple[Cell, ...], ...] = tuple(tuple(level) for level in cells)
        self.degree = degree
        self.projection = tuple(tuple(p) for p in projection) if projection is not None else None
        self.inclusion = tuple(tuple(p) for p in inclusion) if inclusion is not None else None
        self.markers: Dict[str, Tuple[int, ...]] = dict(markers or {})
        self._chain_complex: Optional[ChainComplex] = None
        self._validate()

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def count(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k < len(self.cells) else 0

    def counts(self) -> List[int]:
        return [len(level) for level in self.cells]

    def cell(self, k: int, i: int) -> Cell:
        return self.cells[k][i]

    def edges(self) -> Tuple[Cell, ...]:
        return self.cells[1] if len(self.cells) > 1 else ()

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def _walk(self, start: int, path: Iterable[Step]) -> int:
        here = start
        for e, sign in path:
            tail, head = self.cells[1][e].endpoints
            if sign > 0:
                if tail != here:
                    raise CoverError(f"transport leaves vertex {here} along edge {e} from {tail}")
                here = head
            else:
                if head != here:
                    raise CoverError(f"transport enters edge {e} backwards away from {head}")
                here = tail
        return here

    def _validate(self):
        for k, level in enumerate(self.cells):
            for i, cell in enumerate(level):
                if cell.dim != k:
                    raise CoverError(f"cell {cell.name} stored in dimension {k}")
                for entry in cell.boundary:
                    if not 0 <= entry.face < self.count(k - 1):
                        raise CoverError(f"cell {cell.name} has a dangling face {entry.face}")
                    face_anchor = self.cells[k - 1][entry.face].anchor
                    if self._walk(cell.anchor, entry.transport) != face_anchor:
                        raise CoverError(f"transport of {cell.name} misses its face anchor")
                if cell.word and self._walk(cell.anchor, cell.word) != cell.anchor:
                    raise CoverError(f"attaching word of {cell.name} is not closed")
        self.chain_complex()

    def chain_complex(self) -> ChainComplex:
        """Cellular chains; coefficients of repeated faces are summed."""
        if self._chain_complex is None:
            boundaries = {}
            for k in range(1, len(self.cells)):
                columns = []
                for cell in self.cells[k]:
                    col: Dict[int, int] = {}
                    for entry in cell.boundary:
                        col[entry.face] = col.get(entry.face, 0) + entry.coefficient
                    columns.append(col)
                boundaries[k] = SparseMatrix(self.count(k - 1), self.count(k), columns)
            self._chain_complex = ChainComplex(self.counts(), boundaries)
        return self._chain_complex

    def incidence_matrix(self, k: int) -> SparseMatrix:
        """|coefficient| summed per boundary entry, with no cancellation."""
        columns = []
        for cell in self.cells[k] if 0 <= k < len(self.cells) else ():
            col: Dict[int, int] = {}
            for entry in cell.boundary:
                col[entry.face] = col.get(entry.face, 0) + abs(entry.coefficient)
            columns.append(col)
        return SparseMatrix(self.count(k - 1), self.count(k), columns)

    def norm_bound(self, k: int) -> Fraction:
        """Laplacian row-sum bound in degree k, valid for every finite cover."""
        return incidence_norm_bound(self.incidence_matrix(k), self.incidence_matrix(k + 1))

    def graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.count(0)))
        for i, edge in enumerate(self.edges()):
            graph.add_edge(*edge.endpoints, key=i)
        return graph

    def connected_components(self) -> List[List[int]]:
        """Vertex sets of the components, ordered by least vertex."""
        components = [sorted(c) for c in nx.connected_components(self.graph())]
        return sorted(components, key=lambda c: c[0])

    def is_connected(self) -> bool:
        return self.count(0) > 0 and len(self.connected_components()) == 1

    def spanning_forest(self) -> Tuple[Set[int], Dict[int, Tuple[int, int]]]:
        """BFS forest from the least vertex of each component.

        Returns the forest edges and, per non-root vertex, the (edge, parent)
        it was reached through.
        """
        incident: Dict[int, List[int]] = {v: [] for v in range(self.count(0))}
        for i, edge in enumerate(self.edges()):
            tail, head = edge.endpoints
            incident[tail].append(i)
            if head != tail:
                incident[head].append(i)

        seen = [False] * self.count(0)
        forest: Set[int] = set()
        parent: Dict[int, Tuple[int, int]] = {}
        for root in range(self.count(0)):
            if seen[root]:
                continue
            seen[root] = True
            queue = deque([root])
            while queue:
                v = queue.popleft()
                for e in sorted(incident[v]):
                    tail, head = self.cells[1][e].endpoints
                    other = head if tail == v else tail
                    if not seen[other]:
                        seen[other] = True
                        forest.add(e)
                        parent[other] = (e, v)
                        queue.append(other)
        return forest, parent

    def bfs_order(self) -> List[int]:
        """Vertices in the order the spanning forest reaches them."""
        _, parent = self.spanning_forest()
        order: List[int] = []
        children: Dict[int, List[int]] = {}
        for v, (_, p) in parent.items():
            children.setdefault(p, []).append(v)
        for root in range(self.count(0)):
            if root in parent:
                continue
            queue = deque([root])
            while queue:
                v = queue.popleft()
                order.append(v)
                queue.extend(sorted(children.get(v, [])))
        return order

    def cell_set(self) -> Set[CellRef]:
        return {(k, i) for k, level in enumerate(self.cells) for i in range(len(level))}

    def subcomplex(self, cells: Iterable[CellRef]) -> "CellComplex":
        """Subcomplex on the given (dim, index) cells.

        The set must be closed under faces and contain every edge used by the
        kept transports. The result records its inclusion per dimension.
        """
        chosen = set(cells)
        for k, i in chosen:
            cell = self.cells[k][i]
            for entry in cell.boundary:
                if (k - 1, entry.face) not in chosen:
                    raise CoverError(f"{cell.name} has face outside the subcomplex")
                for e, _ in entry.transport:
                    if (1, e) not in chosen:
                        raise CoverError(f"{cell.name} transports along an edge outside it")
            for e, _ in cell.word or ():
                if (1, e) not in chosen:
                    raise CoverError(f"{cell.name} attaches along an edge outside it")

        top = max((k for k, _ in chosen), default=-1)
        kept = [sorted(i for k, i in chosen if k == d) for d in range(top + 1)]
        position = [{old: new for new, old in enumerate(level)} for level in kept]

        def edge(e: int) -> int:
            return position[1][e]

        new_cells: List[List[Cell]] = []
        for d, level in enumerate(kept):
            out = []
            for i in level:
                cell = self.cells[d][i]
                boundary = tuple(
                    BoundaryEntry(
                        position[d - 1][b.face],
                        b.coefficient,
                        tuple((edge(e), s) for e, s in b.transport),
                    )
                    for b in cell.boundary
                )
                out.append(Cell(
                    cell.name,
                    d,
                    position[0][cell.anchor],
                    boundary,
                    tuple(position[0][v] for v in cell.endpoints) if cell.endpoints else None,
                    tuple((edge(e), s) for e, s in cell.word) if cell.word else None,
                ))
            new_cells.append(out)
        return CellComplex(new_cells, degree=self.degree, inclusion=kept)

    def preimage(self, base_cells: Iterable[CellRef]) -> "CellComplex":
        """Cells of this cover lying over the given base cells."""
        if self.projection is None:
            raise CoverError("preimage needs a cover with projection data")
        wanted = set(base_cells)
        return self.subcomplex(
            (k, i)
            for k, level in enumerate(self.projection)
            for i, base in enumerate(level)
            if (k, base) in wanted
        )

    def included_cells(self) -> Set[CellRef]:
        """Cells of the ambient complex this subcomplex occupies."""
        if self.inclusion is None:
            raise CoverError("not a subcomplex")
        return {(k, i) for k, level in enumerate(self.inclusion) for i in level}

    def __repr__(self) -> str:
        return f"CellComplex(counts={self.counts()}, degree={self.degree})"


class CellComplexBuilder:
    """Incremental construction of a CellComplex."""

    def __init__(self):
        self._cells: List[List[Cell]] = []
        self._markers: Dict[str, List[int]] = {}

    def _level(self, k: int) -> List[Cell]:
        while len(self._cells) <= k:
            self._cells.append([])
        return self._cells[k]

    def add_vertex(self, name: str) -> int:
        level = self._level(0)
        level.append(Cell(name, 0, len(level)))
        return len(level) - 1

    def add_edge(self, name: str, tail: int, head: int) -> int:
        level = self._level(1)
        index = len(level)
        boundary = (
            BoundaryEntry(head, 1, ((index, 1),)),
            BoundaryEntry(tail, -1, ()),
        )
        level.append(Cell(name, 1, tail, boundary, endpoints=(tail, head)))
        return index

    def add_polygon(self, name: str, word: Sequence[Step]) -> int:
        """2-cell attached along a closed edge word starting at its anchor."""
        if not word:
            raise CoverError(f"polygon {name} needs a nonempty word")
        edges = self._level(1)
        first, sign = word[0]
        anchor = edges[first].endpoints[0 if sign > 0 else 1]
        boundary = []
        prefix: List[Step] = []
        for e, s in word:
            transport = tuple(prefix) if s > 0 else tuple(prefix) + ((e, -1),)
            boundary.append(BoundaryEntry(e, s, transport))
            prefix.append((e, s))
        level = self._level(2)
        level.append(Cell(name, 2, anchor, tuple(boundary), word=tuple(word)))
        return len(level) - 1

    def add_cell(self, name: str, dim: int, anchor: int, boundary: Sequence[BoundaryEntry]) -> int:
        level = self._level(dim)
        level.append(Cell(name, dim, anchor, tuple(boundary)))
        return len(level) - 1

    def mark(self, marker: str, index: int):
        self._markers.setdefault(marker, []).append(index)

    def build(
        self,
        degree: int = 1,
        projection: Optional[Sequence[Sequence[int]]] = None,
    ) -> CellComplex:
        markers = {k: tuple(v) for k, v in self._markers.items()}
        return CellComplex(self._cells, degree=degree, projection=projection, markers=markers)


def from_simplicial(K: SimplicialComplex) -> CellComplex:
    """Cell structure of a simplicial complex.

    Cells in each dimension follow `K.simplices_of_dim` order. Edges run from
    the lower to the higher vertex; triangles are polygons ab + bc - ac.
    """
    builder = CellComplexBuilder()
    for v in K.vertices:
        builder.add_vertex(v)
    edge_index: Dict[Tuple[int, int], int] = {}
    for a, b in K.simplices_of_dim(1):
        edge_index[(a, b)] = builder.add_edge(f"{K.vertices[a]}{K.vertices[b]}", a, b)
    for k in range(2, K.dim + 1):
        index = {s: i for i, s in enumerate(K.simplices_of_dim(k - 1))}
        for simplex in K.simplices_of_dim(k):
            name = "".join(K.names(simplex))
            if k == 2:
                a, b, c = simplex
                builder.add_polygon(
                    name,
                    [(edge_index[(a, b)], 1), (edge_index[(b, c)], 1), (edge_index[(a, c)], -1)],
                )
                continue
            boundary = []
            for i in range(len(simplex)):
                face = simplex[:i] + simplex[i + 1:]
                transport = ((edge_index[(simplex[0], simplex[1])], 1),) if i == 0 else ()
                boundary.append(BoundaryEntry(index[face], (-1) ** i, transport))
            builder.add_cell(name, k, simplex[0], boundary)
    if not K.vertices:
        return CellComplex([])
    return builder.build()


def simplicial_cells(K: SimplicialComplex, L: SimplicialComplex) -> Set[CellRef]:
    """Cells of `from_simplicial(K)` occupied by the subcomplex L (matched by names)."""
    cells: Set[CellRef] = set()
    for k in range(L.dim + 1):
        index = {s: i for i, s in enumerate(K.simplices_of_dim(k))}
        for simplex in L.simplices_of_dim(k):
            key = K.simplex(L.names(simplex))
            if key not in index:
                raise CoverError(f"{L.names(simplex)} is not a simplex of the ambient complex")
            cells.add((k, index[key]))
    return cells


def pi1_presentation(X: CellComplex) -> Presentation:
    """Generators are the non-forest edges; relators are 2-cell words with
    forest edges deleted."""
    if not X.is_connected():
        raise CoverError("pi_1 presentation needs a connected complex")
    forest, _ = X.spanning_forest()
    generators = tuple(i for i in range(X.count(1)) if i not in forest)
    position = {e: g for g, e in enumerate(generators)}
    relators = []
    for cell in (X.cells[2] if X.count(2) else ()):
        relators.append(tuple((position[e], s) for e, s in cell.word if e in position))
    return Presentation(generators, relators, forest)


def bouquet(circles: int, name: str = "x") -> CellComplex:
    """Wedge of circles: one vertex and `circles` loops."""
    builder = CellComplexBuilder()
    builder.add_vertex("*")
    for i in range(circles):
        builder.add_edge(f"{name}{i}", 0, 0)
    return builder.build()


def torus_cells() -> CellComplex:
    """Minimal torus: one vertex, loops a and b, one square a b a^-1 b^-1."""
    builder = CellComplexBuilder()
    builder.add_vertex("*")
    a = builder.add_edge("a", 0, 0)
    b = builder.add_edge("b", 0, 0)
    builder.add_polygon("T", [(a, 1), (b, 1), (a, -1), (b, -1)])
    return builder.build()


def disk_cells() -> CellComplex:
    """Disk: one vertex, one loop a, one 2-cell attached along a."""
    builder = CellComplexBuilder()
    builder.add_vertex("*")
    a = builder.add_edge("a", 0, 0)
    builder.add_polygon("D", [(a, 1)])
    return builder.build()
