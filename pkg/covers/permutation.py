"""
Permutation Covers

A finite cover of a cell complex is a permutation of the sheets for every
non-forest edge (forest edges act trivially) such that each 2-cell word
acts as the identity. Covers are built, enumerated up to simultaneous
conjugacy, restricted to subcomplexes and composed.

Key Concerns:
1. Validity: the relator check runs whenever a CoverMap is constructed
2. Canonical forms: enumeration walks tuples in lexicographic order and keeps
   the first member of each conjugacy orbit
3. Gauge: arbitrary per-edge permutations are normalized to the forest form
"""

from typing import Dict, List, Mapping, Optional, Sequence, Tuple
from dataclasses import dataclass, field
from itertools import permutations, product
import logging
import re

from covers.cells import CellComplex, CellComplexBuilder, BoundaryEntry, CoverError, Step

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]

MAX_ENUMERATION_DEGREE = 6


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def cycles(p: Perm) -> List[Tuple[int, ...]]:
    seen = set()
    result = []
    for start in range(len(p)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = p[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = p[nxt]
        result.append(tuple(cycle))
    return result


def format_cycles(p: Perm) -> str:
    """Cycle notation on 1..n; fixed points omitted, identity is `()`."""
    text = "".join(
        "(" + " ".join(str(i + 1) for i in cycle) + ")"
        for cycle in cycles(p) if len(cycle) > 1
    )
    return text or "()"


def parse_cycles(text: str, n: int) -> Perm:
    """Parse cycle notation like `(1 2 3)(4 5)` on 1..n."""
    image = list(range(n))
    if not re.fullmatch(r"(\s*\([\d\s,]*\))*\s*", text):
        raise CoverError(f"malformed cycle notation {text!r}")
    seen = set()
    for group in re.findall(r"\(([^)]*)\)", text):
        points = [int(tok) - 1 for tok in re.split(r"[\s,]+", group.strip()) if tok]
        for pt in points:
            if not 0 <= pt < n:
                raise CoverError(f"point {pt + 1} outside 1..{n}")
            if pt in seen:
                raise CoverError(f"point {pt + 1} repeated in {text!r}")
            seen.add(pt)
        for a, b in zip(points, points[1:] + points[:1]):
            image[a] = b
    return tuple(image)


def generator_edges(base: CellComplex) -> Tuple[int, ...]:
    forest, _ = base.spanning_forest()
    return tuple(i for i in range(base.count(1)) if i not in forest)


def _act(perms: Mapping[int, Perm], inverses: Mapping[int, Perm], step: Step, sheet: int) -> int:
    e, sign = step
    return perms[e][sheet] if sign > 0 else inverses[e][sheet]


@dataclass(frozen=True, eq=False)
class CoverMap:
    """Degree-n cover of `base` given by one permutation per generator edge."""
    base: CellComplex
    degree: int
    permutations: Tuple[Perm, ...]
    generators: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        generators = generator_edges(self.base)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "permutations", tuple(tuple(p) for p in self.permutations))
        if self.degree < 1:
            raise CoverError("cover degree must be at least 1")
        if len(self.permutations) != len(generators):
            raise CoverError(
                f"expected {len(generators)} generator permutations, got {len(self.permutations)}"
            )
        for p in self.permutations:
            if sorted(p) != list(range(self.degree)):
                raise CoverError(f"{p} is not a permutation of {self.degree} sheets")
        failure = self._relator_failure()
        if failure is not None:
            raise CoverError(f"relator of 2-cell {failure} does not act trivially")

    def edge_permutations(self) -> Dict[int, Perm]:
        perms = {e: identity(self.degree) for e in range(self.base.count(1))}
        perms.update(zip(self.generators, self.permutations))
        return perms

    def _relator_failure(self) -> Optional[str]:
        perms = self.edge_permutations()
        inverses = {e: inverse(p) for e, p in perms.items()}
        for cell in self.base.cells[2] if self.base.count(2) else ():
            for sheet in range(self.degree):
                here = sheet
                for step in cell.word:
                    here = _act(perms, inverses, step, here)
                if here != sheet:
                    return cell.name
        return None

    def component_count(self) -> int:
        """Connected components of the cover space."""
        n = self.degree
        parent = list(range(self.base.count(0) * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, perm in self.edge_permutations().items():
            tail, head = self.base.cells[1][e].endpoints
            for i in range(n):
                a, b = find(tail * n + i), find(head * n + perm[i])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return len({find(x) for x in range(len(parent))})

    @property
    def transitive(self) -> bool:
        """Generators act transitively on the sheets."""
        orbit = {0}
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for p in self.permutations:
                for j in (p[i], inverse(p)[i]):
                    if j not in orbit:
                        orbit.add(j)
                        frontier.append(j)
        return len(orbit) == self.degree

    @property
    def identifier(self) -> str:
        return f"d{self.degree}[" + ";".join(format_cycles(p) for p in self.permutations) + "]"

    @staticmethod
    def trivial(base: CellComplex, degree: int = 1) -> "CoverMap":
        return CoverMap(base, degree, tuple(identity(degree) for _ in generator_edges(base)))

    @staticmethod
    def from_edge_permutations(
        base: CellComplex, degree: int, edge_perms: Mapping[int, Perm]
    ) -> "CoverMap":
        """Normalize per-edge permutations so forest edges act trivially.

        Sheets over v are relabelled by g_v, giving g_head^-1 s_e g_tail on
        each edge; g is chosen along the forest to kill forest edges.
        """
        n = degree
        perms = {e: tuple(edge_perms.get(e, identity(n))) for e in range(base.count(1))}
        _, parent = base.spanning_forest()
        gauge: Dict[int, Perm] = {}
        for v in base.bfs_order():
            if v not in parent:
                gauge[v] = identity(n)
                continue
            e, p = parent[v]
            tail, _ = base.cells[1][e].endpoints
            if tail == p:
                gauge[v] = compose(perms[e], gauge[p])
            else:
                gauge[v] = compose(inverse(perms[e]), gauge[p])
        normalized = []
        for e in generator_edges(base):
            tail, head = base.cells[1][e].endpoints
            normalized.append(compose(inverse(gauge[head]), compose(perms[e], gauge[tail])))
        return CoverMap(base, n, tuple(normalized))


def _lift_path(path: Sequence[Step], sheet: int, n: int, perms, inverses):
    lifted = []
    here = sheet
    for e, sign in path:
        if sign > 0:
            lifted.append((e * n + here, 1))
            here = perms[e][here]
        else:
            here = inverses[e][here]
            lifted.append((e * n + here, -1))
    return tuple(lifted), here


def build_cover(X: CellComplex, c: CoverMap) -> CellComplex:
    """Total space of the cover: cell (c, i) sits at index c * n + i."""
    if c.base is not X:
        raise CoverError("cover map was built over a different complex")
    n = c.degree
    perms = c.edge_permutations()
    inverses = {e: inverse(p) for e, p in perms.items()}
    builder = CellComplexBuilder()

    for cell in X.cells[0] if X.count(0) else ():
        for i in range(n):
            builder.add_vertex(f"{cell.name}~{i}")
    for e, cell in enumerate(X.edges()):
        tail, head = cell.endpoints
        for i in range(n):
            builder.add_edge(f"{cell.name}~{i}", tail * n + i, head * n + perms[e][i])
    for k in range(2, X.dim + 1):
        for cell in X.cells[k]:
            for i in range(n):
                name = f"{cell.name}~{i}"
                if k == 2:
                    word, end = _lift_path(cell.word, i, n, perms, inverses)
                    if end != i:
                        raise CoverError(f"relator check failed on {cell.name}")
                    builder.add_polygon(name, word)
                    continue
                boundary = []
                for entry in cell.boundary:
                    transport, sheet = _lift_path(entry.transport, i, n, perms, inverses)
                    boundary.append(
                        BoundaryEntry(entry.face * n + sheet, entry.coefficient, transport)
                    )
                builder.add_cell(name, k, cell.anchor * n + i, boundary)

    for marker, indices in X.markers.items():
        for e in indices:
            for i in range(n):
                builder.mark(marker, e * n + i)
    projection = [[b for b in range(X.count(k)) for _ in range(n)] for k in range(X.dim + 1)]
    return builder.build(degree=X.degree * n, projection=projection)


def _relator_words(X: CellComplex, generators: Sequence[int]):
    position = {e: g for g, e in enumerate(generators)}
    words = []
    for cell in X.cells[2] if X.count(2) else ():
        words.append(tuple((position[e], s) for e, s in cell.word if e in position))
    return words


def _satisfies(words, perms: Sequence[Perm], n: int) -> bool:
    inverses = [inverse(p) for p in perms]
    for word in words:
        for sheet in range(n):
            here = sheet
            for g, s in word:
                here = perms[g][here] if s > 0 else inverses[g][here]
            if here != sheet:
                return False
    return True


def _conjugate(perms: Sequence[Perm], pi: Perm) -> Tuple[Perm, ...]:
    pi_inv = inverse(pi)
    return tuple(compose(pi, compose(p, pi_inv)) for p in perms)


def enumerate_covers(
    X: CellComplex,
    max_degree: int,
    min_degree: int = 2,
    transitive_only: bool = False,
) -> List[CoverMap]:
    """All covers of degree min_degree..max_degree up to simultaneous conjugacy.

    Tuples are visited in lexicographic order; the first member of each
    conjugacy orbit is its canonical representative.
    """
    if max_degree > MAX_ENUMERATION_DEGREE:
        raise CoverError(f"enumeration is limited to degree {MAX_ENUMERATION_DEGREE}")
    generators = generator_edges(X)
    words = _relator_words(X, generators)
    result: List[CoverMap] = []
    for n in range(max(min_degree, 1), max_degree + 1):
        group = list(permutations(range(n)))
        seen = set()
        found = 0
        for perms in product(group, repeat=len(generators)):
            if perms in seen or not _satisfies(words, perms, n):
                continue
            seen.update(_conjugate(perms, pi) for pi in group)
            cover = CoverMap(X, n, perms)
            found += 1
            if transitive_only and not cover.transitive:
                continue
            result.append(cover)
        logger.debug("degree %d: %d conjugacy classes", n, found)
    return result


def restrict_cover(X: CellComplex, c: CoverMap, A: CellComplex) -> CoverMap:
    """Pull the cover back along the inclusion of the subcomplex A."""
    if A.inclusion is None:
        raise CoverError("restriction needs a subcomplex of the cover's base")
    if c.base is not X:
        raise CoverError("cover map was built over a different complex")
    if A.counts() and len(A.inclusion) > len(X.cells):
        raise CoverError("subcomplex has cells above the ambient dimension")
    for k, level in enumerate(A.inclusion):
        if any(i >= X.count(k) for i in level):
            raise CoverError("subcomplex references cells outside the complex")
    perms = c.edge_permutations()
    edges = A.inclusion[1] if len(A.inclusion) > 1 else ()
    restricted = {i: perms[e] for i, e in enumerate(edges)}
    return CoverMap.from_edge_permutations(A, c.degree, restricted)


def compose_covers(c: CoverMap, upper: CoverMap) -> CoverMap:
    """Cover of c.base from a cover `upper` of the total space of c.

    Sheet (i, j), sheet j over the i-th lift, becomes sheet i * m + j.
    """
    n, m = c.degree, upper.degree
    lower_perms = c.edge_permutations()
    upper_perms = upper.edge_permutations()
    if upper.base.count(1) != c.base.count(1) * n:
        raise CoverError("upper cover is not over the total space of the lower cover")
    combined = {}
    for e, perm in lower_perms.items():
        image = [0] * (n * m)
        for i in range(n):
            lifted = upper_perms[e * n + i]
            for j in range(m):
                image[i * m + j] = perm[i] * m + lifted[j]
        combined[e] = tuple(image)
    return CoverMap.from_edge_permutations(c.base, n * m, combined)


def _orbits(perms: Sequence[Perm], n: int) -> List[List[int]]:
    seen: set = set()
    orbits = []
    for start in range(n):
        if start in seen:
            continue
        orbit, frontier = [start], [start]
        seen.add(start)
        while frontier:
            i = frontier.pop()
            for p in perms:
                for j in (p[i], p.index(i)):
                    if j not in seen:
                        seen.add(j)
                        orbit.append(j)
                        frontier.append(j)
        orbits.append(orbit)
    return orbits


def _equivariant_image(
    start: int, target: int, f_perms, f_inv, c_perms, c_inv
) -> Optional[Dict[int, int]]:
    """Extend start -> target along the generators, or None on a clash."""
    image = {start: target}
    stack = [start]
    while stack:
        i = stack.pop()
        for g in range(len(f_perms)):
            for j, t in ((f_perms[g][i], c_perms[g][image[i]]), (f_inv[g][i], c_inv[g][image[i]])):
                if j not in image:
                    image[j] = t
                    stack.append(j)
                elif image[j] != t:
                    return None
    return image


def refines(finer: CoverMap, coarser: CoverMap) -> bool:
    """True when the finer cover maps onto the coarser one over the base.

    With forest edges trivial on both sides a covering map is an
    equivariant map of sheets with every fibre of size
    finer.degree / coarser.degree. Each finer orbit is sent onto one
    coarser orbit; orbits are assigned by backtracking since several may
    share a target.
    """
    if finer.base is not coarser.base:
        raise CoverError("covers over different complexes are not comparable")
    if finer.degree % coarser.degree:
        return False
    fibre = finer.degree // coarser.degree
    f_perms, c_perms = finer.permutations, coarser.permutations
    f_inv = [inverse(p) for p in f_perms]
    c_inv = [inverse(p) for p in c_perms]
    orbits = _orbits(f_perms, finer.degree)
    load = [0] * coarser.degree

    def assign(k: int) -> bool:
        if k == len(orbits):
            return all(count == fibre for count in load)
        start = orbits[k][0]
        for target in range(coarser.degree):
            image = _equivariant_image(start, target, f_perms, f_inv, c_perms, c_inv)
            if image is None:
                continue
            hit = list(image.values())
            if any(load[t] + hit.count(t) > fibre for t in set(hit)):
                continue
            for t in hit:
                load[t] += 1
            if assign(k + 1):
                return True
            for t in hit:
                load[t] -= 1
        return False

    return assign(0)
