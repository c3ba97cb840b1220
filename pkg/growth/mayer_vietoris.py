"""
Mayer-Vietoris Inequalities and the Nerve Lemma

For X = A1 u_B A2 the Mayer-Vietoris sequence of every finite cover gives

    b_k(X') <= b_k(A1') + b_k(A2') + b_(k-1)(B')
    b_k(A1') + b_k(A2') <= b_k(B') + b_k(X')

for the restricted covers, so both hold for normalized values of every
cover, not only in the limit. The nerve lemma turns a cover of X by pieces
with growth-acyclic or one-point intersections into relative homology of the
nerve.

Key Concerns:
1. Validity: decompositions are checked cell by cell before anything is computed
2. Unconditional checks: the per-cover inequalities are asserted on every sample
3. Hypotheses: retraction data is supplied by the caller, never discovered
"""

from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import logging

from complexes.simplicial import SimplicialComplex, closed_star, full_subcomplex, link
from covers.cells import CellComplex, CellRef, from_simplicial, simplicial_cells
from covers.permutation import CoverMap, build_cover, restrict_cover
from growth.samples import GrowthError
from homology.chains import betti, relative_chain_complex
from homology.linalg import Field

logger = logging.getLogger(__name__)


@dataclass
class MVDecomposition:
    X: CellComplex
    A1: CellComplex
    A2: CellComplex
    B: CellComplex
    label: str = ""


def vertex_star_decomposition(K: SimplicialComplex, vertex: str) -> MVDecomposition:
    """K = St(v) u (K - v) glued along Lk(v)."""
    X = from_simplicial(K)
    rest = [w for w in K.vertices if w != vertex]
    A1 = X.subcomplex(simplicial_cells(K, closed_star(K, vertex)))
    A2 = X.subcomplex(simplicial_cells(K, full_subcomplex(K, rest)))
    B = X.subcomplex(simplicial_cells(K, link(K, [vertex])))
    return MVDecomposition(X, A1, A2, B, label=f"star of {vertex}")


def _validate(X: CellComplex, A1: CellComplex, A2: CellComplex, B: CellComplex):
    for piece in (A1, A2, B):
        if piece.inclusion is None:
            raise GrowthError("decomposition pieces must be subcomplexes of X")
    a1, a2, b = A1.included_cells(), A2.included_cells(), B.included_cells()
    if a1 | a2 != X.cell_set():
        raise GrowthError("A1 and A2 do not cover X")
    if a1 & a2 != b:
        raise GrowthError("A1 and A2 do not intersect in B")


@dataclass
class MVRecord:
    """Normalized Betti numbers of one cover and its restrictions."""
    cover_id: str
    x: Fraction
    a1: Fraction
    a2: Fraction
    b_k: Fraction
    b_k_minus_1: Fraction
    upper_holds: bool
    lower_holds: bool
    additive: Optional[bool] = None

    @property
    def holds(self) -> bool:
        return self.upper_holds and self.lower_holds and self.additive is not False


@dataclass
class MVReport:
    k: int
    ring: str
    records: List[MVRecord] = field(default_factory=list)
    statements: Dict[str, bool] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.records)


def _normalized(A: CellComplex, c: CoverMap, k: int, field: Field, X: CellComplex) -> Fraction:
    if A is X:
        total = build_cover(X, c)
    else:
        restricted = restrict_cover(X, c, A)
        total = build_cover(A, restricted)
    return Fraction(betti(total.chain_complex(), k, field), c.degree)


def mv_inequality_check(
    X: CellComplex,
    A1: CellComplex,
    A2: CellComplex,
    B: CellComplex,
    covers: Sequence[CoverMap],
    k: int,
    field: Field,
    retraction_degree: Optional[int] = None,
) -> MVReport:
    """Check both per-cover inequalities on every cover.

    With B empty the two inequalities collapse to additivity, which is
    recorded per cover. Given the degree d of a virtual retraction, the
    bracket-level consequences are evaluated on the observed extremes; they
    are informational and do not affect `holds`.
    """
    _validate(X, A1, A2, B)
    report = MVReport(k, field.tag)
    b_empty = not B.included_cells()
    for c in covers:
        x = _normalized(X, c, k, field, X)
        a1 = _normalized(A1, c, k, field, X)
        a2 = _normalized(A2, c, k, field, X)
        bk = _normalized(B, c, k, field, X)
        bk1 = _normalized(B, c, k - 1, field, X)
        record = MVRecord(
            c.identifier,
            x, a1, a2, bk, bk1,
            upper_holds=x <= a1 + a2 + bk1,
            lower_holds=a1 + a2 <= bk + x,
            additive=(x == a1 + a2) if b_empty else None,
        )
        if not record.holds:
            logger.warning("Mayer-Vietoris inequality failed on cover %s", c.identifier)
        report.records.append(record)

    if retraction_degree is not None and report.records:
        report.statements = _bracket_statements(report.records, retraction_degree)
    return report


def _bracket_statements(records: Sequence[MVRecord], d: int) -> Dict[str, bool]:
    def upper(values):
        return max(values)

    def lower(values):
        return min(values)

    x = [r.x for r in records]
    a1 = [r.a1 for r in records]
    a2 = [r.a2 for r in records]
    statements: Dict[str, bool] = {}
    if upper(r.b_k_minus_1 for r in records) == 0:
        statements["upper_X <= upper_A1 + upper_A2"] = upper(x) <= upper(a1) + upper(a2)
    if upper(r.b_k for r in records) == 0:
        statements["lower_A1 <= lower_X"] = lower(a1) <= lower(x)
        statements["lower_A2 <= lower_X"] = lower(a2) <= lower(x)
        statements[f"upper_A1 <= {d} upper_X"] = upper(a1) <= d * upper(x)
    return statements


def nerve_relative_betti(
    X: CellComplex,
    pieces: Sequence[CellComplex],
    acyclic_flags: Mapping[FrozenSet[int], bool],
    k: int,
    field: Field,
) -> int:
    """b_k(N, L; F) for the nerve N of the pieces.

    L collects the nerve simplices whose intersection is flagged acyclic and
    must be a subcomplex. Every other intersection has to be a single point.
    """
    if not pieces:
        raise GrowthError("the nerve needs at least one piece")
    cells: List[Set[CellRef]] = []
    for piece in pieces:
        if piece.inclusion is None:
            raise GrowthError("nerve pieces must be subcomplexes of X")
        if piece.count(0) == 0:
            raise GrowthError("nerve pieces must be nonempty")
        cells.append(piece.included_cells())
    if set().union(*cells) != X.cell_set():
        raise GrowthError("the pieces do not cover X")

    nerve: List[tuple] = []
    flagged: List[tuple] = []
    for size in range(1, len(pieces) + 1):
        for subset in combinations(range(len(pieces)), size):
            common = set.intersection(*(cells[i] for i in subset))
            if not any(d == 0 for d, _ in common):
                continue
            nerve.append(subset)
            if acyclic_flags.get(frozenset(subset), False):
                flagged.append(subset)
            elif len(common) != 1:
                raise GrowthError(
                    f"intersection of pieces {list(subset)} is neither flagged acyclic nor a point"
                )

    flagged_set = set(flagged)
    for simplex in flagged:
        for size in range(1, len(simplex)):
            for face in combinations(simplex, size):
                if face not in flagged_set:
                    raise GrowthError(f"acyclic simplices are not closed under faces at {face}")

    names = [f"U{i}" for i in range(len(pieces))]
    N = SimplicialComplex(names, nerve)
    sub = N.sub(flagged)
    value = betti(relative_chain_complex(N, sub), k, field)
    logger.debug(
        "nerve f-vector %s, acyclic part %s, b_%d = %d", N.f_vector(), sub.f_vector(), k, value
    )
    return value
