"""
Chain Complexes and Homology

Betti numbers over Q and F_p, integral homology through the Smith normal
form, relative complexes and the universal-coefficient inequality.

Key Concerns:
1. Two independent paths: field ranks and Smith forms must agree over Q
2. Validation: d_k d_(k+1) = 0 is checked when a complex is built
3. Conventions: reduced Betti numbers use b~_(-1)(empty) = 1
"""

from typing import Dict, Iterable, List, Mapping, Set
from dataclasses import dataclass, field
from math import log, prod
import logging

from complexes.chamber import CubicalChamber
from complexes.simplicial import SimplicialComplex
from homology.cache import default_rank_cache
from homology.linalg import Field, HomologyError, SparseMatrix, invariant_factors

logger = logging.getLogger(__name__)


class ChainComplex:
    """Finite free chain complex given by integer boundary matrices.

    `boundaries[k]` maps C_k to C_(k-1): rows are (k-1)-cells, columns k-cells.
    """

    def __init__(self, counts: List[int], boundaries: Mapping[int, SparseMatrix]):
        self.counts = list(counts)
        self._boundaries: Dict[int, SparseMatrix] = {}
        for k, matrix in boundaries.items():
            if k < 1 or k >= len(self.counts):
                raise HomologyError(f"boundary in degree {k} outside 1..{len(self.counts) - 1}")
            if matrix.shape != (self.counts[k - 1], self.counts[k]):
                raise HomologyError(
                    f"d_{k} has shape {matrix.shape}, expected "
                    f"{(self.counts[k - 1], self.counts[k])}"
                )
            self._boundaries[k] = matrix
        for k in range(1, len(self.counts) - 1):
            if not self.boundary(k).matmul(self.boundary(k + 1)).is_zero():
                raise HomologyError(f"d_{k} d_{k + 1} != 0")

    @property
    def top_dim(self) -> int:
        return len(self.counts) - 1

    def count(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def boundary(self, k: int) -> SparseMatrix:
        """d_k, or a zero matrix of the right shape outside the stored range."""
        if k in self._boundaries:
            return self._boundaries[k]
        return SparseMatrix.zero(self.count(k - 1), self.count(k))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts))

    def is_empty(self) -> bool:
        return not any(self.counts)

    def relative(self, sub: Mapping[int, Iterable[int]]) -> "ChainComplex":
        """Quotient C / C_sub for a subcomplex given as cell indices per degree."""
        keep: Dict[int, List[int]] = {}
        drop: Dict[int, Set[int]] = {k: set(sub.get(k, ())) for k in range(len(self.counts))}
        for k in range(len(self.counts)):
            for cell in drop[k]:
                for row in self.boundary(k).columns[cell] if cell < self.count(k) else ():
                    if row not in drop.get(k - 1, set()):
                        raise HomologyError(
                            f"cell {cell} in degree {k} has a face outside the subcomplex"
                        )
            keep[k] = [i for i in range(self.count(k)) if i not in drop[k]]

        position = {k: {old: new for new, old in enumerate(cells)} for k, cells in keep.items()}
        boundaries = {}
        for k in range(1, len(self.counts)):
            columns = []
            for cell in keep[k]:
                col = self.boundary(k).columns[cell]
                rows = position[k - 1]
                columns.append({rows[r]: v for r, v in col.items() if r in rows})
            boundaries[k] = SparseMatrix(len(keep[k - 1]), len(keep[k]), columns)
        return ChainComplex([len(keep[k]) for k in range(len(self.counts))], boundaries)


@dataclass
class HomologyResult:
    """H_k with coefficients in Q, F_p or Z; torsion is only populated over Z."""
    degree: int
    ring: str
    betti: int
    torsion: List[int] = field(default_factory=list)

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion) if self.torsion else 1

    @property
    def logtor(self) -> float:
        """log |tors H_k|, for display only."""
        return sum(log(d) for d in self.torsion)

    def __str__(self) -> str:
        parts = [f"Z^{self.betti}"] if self.betti else []
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def simplicial_chain_complex(K: SimplicialComplex) -> ChainComplex:
    """Oriented simplicial chains; face i of a simplex carries sign (-1)^i."""
    counts = K.f_vector()
    boundaries = {}
    for k in range(1, len(counts)):
        rows = {s: i for i, s in enumerate(K.simplices_of_dim(k - 1))}
        columns = []
        for simplex in K.simplices_of_dim(k):
            columns.append({
                rows[simplex[:i] + simplex[i + 1:]]: (-1) ** i for i in range(len(simplex))
            })
        boundaries[k] = SparseMatrix(counts[k - 1], counts[k], columns)
    return ChainComplex(counts, boundaries)


def chamber_chain_complex(chamber: CubicalChamber) -> ChainComplex:
    """Cellular chains of the Davis chamber with the cubical boundary."""
    top = max(chamber.dim(c) for c in chamber.cubes)
    by_dim = [chamber.cubes_of_dim(k) for k in range(top + 1)]
    position = [{c: i for i, c in enumerate(cubes)} for cubes in by_dim]
    boundaries = {}
    for k in range(1, top + 1):
        columns = []
        for cube in by_dim[k]:
            col: Dict[int, int] = {}
            for face, sign in chamber.faces(cube):
                r = position[k - 1][face]
                col[r] = col.get(r, 0) + sign
            columns.append(col)
        boundaries[k] = SparseMatrix(len(by_dim[k - 1]), len(by_dim[k]), columns)
    return ChainComplex([len(c) for c in by_dim], boundaries)


def chamber_boundary_cells(chamber: CubicalChamber) -> Dict[int, List[int]]:
    """Indices of the cubes of the chamber boundary, per dimension."""
    cells: Dict[int, List[int]] = {}
    counters: Dict[int, int] = {}
    for cube in chamber.cubes:
        k = chamber.dim(cube)
        i = counters.get(k, 0)
        counters[k] = i + 1
        if cube[0]:
            cells.setdefault(k, []).append(i)
    return cells


def relative_chain_complex(K: SimplicialComplex, L: SimplicialComplex) -> ChainComplex:
    """Chains of the pair (K, L) for a subcomplex L, matched by vertex names."""
    sub: Dict[int, List[int]] = {}
    for k in range(L.dim + 1):
        index = {s: i for i, s in enumerate(K.simplices_of_dim(k))}
        for simplex in L.simplices_of_dim(k):
            key = K.simplex(L.names(simplex))
            if key not in index:
                raise HomologyError(f"{L.names(simplex)} is not a simplex of the ambient complex")
            sub.setdefault(k, []).append(index[key])
    return simplicial_chain_complex(K).relative(sub)


def _rank(C: ChainComplex, k: int, field: Field) -> int:
    return default_rank_cache.rank(C.boundary(k), field)


def betti(C: ChainComplex, k: int, field: Field) -> int:
    """dim H_k(C; field) = n_k - rank d_k - rank d_(k+1)."""
    if k < 0 or k > C.top_dim:
        return 0
    return C.count(k) - _rank(C, k, field) - _rank(C, k + 1, field)


def betti_numbers(C: ChainComplex, field: Field) -> List[int]:
    return [betti(C, k, field) for k in range(C.top_dim + 1)]


def reduced_betti(C: ChainComplex, k: int, field: Field) -> int:
    """Reduced Betti numbers with b~_(-1) = 1 exactly when C is empty."""
    if k == -1:
        return 1 if C.count(0) == 0 else 0
    value = betti(C, k, field)
    if k == 0 and C.count(0) > 0:
        value -= 1
    return value


def integral_homology(C: ChainComplex, k: int) -> HomologyResult:
    """H_k(C; Z) from the Smith normal forms of d_k and d_(k+1)."""
    if k < 0 or k > C.top_dim:
        return HomologyResult(k, "z", 0)
    rank_in = len(invariant_factors(C.boundary(k))) if k > 0 else 0
    factors_out = invariant_factors(C.boundary(k + 1))
    free = C.count(k) - rank_in - len(factors_out)
    return HomologyResult(k, "z", free, [d for d in factors_out if d > 1])


def reduced_integral_homology(C: ChainComplex, k: int) -> HomologyResult:
    if k == -1:
        return HomologyResult(-1, "z", 1 if C.count(0) == 0 else 0)
    result = integral_homology(C, k)
    if k == 0 and C.count(0) > 0:
        result.betti -= 1
    return result


def cohomology_top_order(C: ChainComplex, d: int) -> int:
    """|H^d(C; Z)|, or 0 when the group is infinite.

    By universal coefficients the free rank is b_d and the torsion is that
    of H_(d-1).
    """
    if betti(C, d, Field.rational()) > 0:
        return 0
    return integral_homology(C, d - 1).torsion_order if d >= 1 else 1


def _count_divisible(divisors: List[int], p: int) -> int:
    return sum(1 for d in divisors if d % p == 0)


@dataclass
class UCTReport:
    """Checks 0 <= (b_k(F_p) - b_k(Q)) log p <= tau_k + tau_(k-1)."""
    k: int
    p: int
    betti_p: int
    betti_q: int
    torsion_k: List[int]
    torsion_k_minus_1: List[int]
    count_form_holds: bool
    log_form_holds: bool

    @property
    def holds(self) -> bool:
        return self.count_form_holds and self.log_form_holds


def uct_inequality_check(C: ChainComplex, k: int, p: int) -> UCTReport:
    """Universal-coefficient inequality in counting and exact logarithmic form."""
    field_p = Field.mod(p)
    b_p = betti(C, k, field_p)
    b_q = betti(C, k, Field.rational())
    tors_k = integral_homology(C, k).torsion
    tors_prev = integral_homology(C, k - 1).torsion if k >= 1 else []
    gap = b_p - b_q

    count_ok = 0 <= gap <= _count_divisible(tors_k, p) + _count_divisible(tors_prev, p)
    # gap * log p <= log|T_k| + log|T_(k-1)|, compared without logarithms
    total_torsion = prod(tors_k) * prod(tors_prev)
    log_ok = gap >= 0 and p ** gap <= total_torsion
    if not (count_ok and log_ok):
        logger.warning("UCT inequality failed in degree %d at p=%d (gap %d)", k, p, gap)
    return UCTReport(k, p, b_p, b_q, tors_k, tors_prev, count_ok, log_ok)
