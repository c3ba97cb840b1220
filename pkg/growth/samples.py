"""
Growth Samples and Brackets

Normalized Betti numbers b_k(X'; F) / |X' -> X| over finite families of
covers, and the upper and lower limits those values allow on the sampled
sub-poset. A finite family only brackets the true limits, so every bracket
carries a caveat unless a closed form is known.

Key Concerns:
1. Exactness: every value is a Fraction, never a float
2. Boundedness: a sample exceeding the base's k-cell count is a bug and raises
3. Honesty: brackets report what was sampled, with the family and its shape
"""

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
from dataclasses import dataclass
from fractions import Fraction
import logging

import networkx as nx

from covers.cells import CellComplex
from covers.permutation import CoverMap, build_cover, enumerate_covers, refines
from homology.chains import betti
from homology.linalg import Field

logger = logging.getLogger(__name__)

Refinement = Tuple[str, str]    # (finer cover id, coarser cover id)


class GrowthError(ValueError):
    """Raised when growth data is inconsistent or a precondition fails."""


@dataclass(frozen=True)
class GrowthSample:
    """b_k(X'; F) / |X' -> X| for one cover X' of X."""
    cover_id: str
    degree: int
    k: int
    field: str
    value: Fraction
    betti: int

    def __post_init__(self):
        if self.value < 0:
            raise GrowthError(f"negative normalized Betti number for {self.cover_id}")


def _check_bound(sample: GrowthSample, base_cells: int):
    if sample.value > base_cells:
        raise GrowthError(
            f"{sample.cover_id}: normalized b_{sample.k} = {sample.value} exceeds "
            f"the {base_cells} {sample.k}-cells of the base"
        )


def sample_cover(base: CellComplex, cover: CoverMap, k: int, field: Field) -> GrowthSample:
    total = build_cover(base, cover)
    b = betti(total.chain_complex(), k, field)
    value = Fraction(b, cover.degree)
    sample = GrowthSample(cover.identifier, cover.degree, k, field.tag, value, b)
    _check_bound(sample, base.count(k))
    return sample


def sample_quotient(
    X: CellComplex, k: int, field: Field, cover_id: str, base_cells: Optional[int] = None
) -> GrowthSample:
    """Sample a complex that already records its degree over the base."""
    b = betti(X.chain_complex(), k, field)
    sample = GrowthSample(cover_id, X.degree, k, field.tag, Fraction(b, X.degree), b)
    if base_cells is not None:
        _check_bound(sample, base_cells)
    return sample


def normalized_betti(base: CellComplex, cover, k: int, field: Field) -> GrowthSample:
    """Dispatch on a CoverMap over `base` or a prebuilt quotient complex."""
    if isinstance(cover, CoverMap):
        return sample_cover(base, cover, k, field)
    if isinstance(cover, CellComplex):
        return sample_quotient(cover, k, field, f"quotient-d{cover.degree}", base.count(k))
    raise GrowthError(f"cannot sample a {type(cover).__name__}")


def rebase_sample(sample: GrowthSample, intermediate_degree: int) -> GrowthSample:
    """Sample of X'' over X from its sample over X', where |X' -> X| = intermediate_degree."""
    if intermediate_degree < 1:
        raise GrowthError("intermediate degree must be positive")
    return GrowthSample(
        sample.cover_id,
        sample.degree * intermediate_degree,
        sample.k,
        sample.field,
        sample.value / intermediate_degree,
        sample.betti,
    )


def component_values(total: CellComplex, base: CellComplex, k: int, field: Field) -> List[Fraction]:
    """Normalized b_k of each connected component of a cover, over its own degree."""
    if total.projection is None:
        raise GrowthError("component values need a cover with projection data")
    values = []
    for vertices in total.connected_components():
        chosen = set(vertices)
        cells = [
            (d, i)
            for d, level in enumerate(total.cells)
            for i, cell in enumerate(level)
            if cell.anchor in chosen or (d == 0 and i in chosen)
        ]
        piece = total.subcomplex(cells)
        degree = Fraction(len(vertices), base.count(0))
        values.append(Fraction(betti(piece.chain_complex(), k, field)) / degree)
    return values


@dataclass
class PosetLimits:
    """lower = max_x min tail(x), upper = min_x max tail(x) on a finite poset."""
    lower: Fraction
    upper: Fraction
    directed: bool
    maximal: List[str]


def _refinement_graph(ids: Iterable[str], refinements: Iterable[Refinement]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(ids)
    for finer, coarser in refinements:
        if finer not in graph or coarser not in graph:
            raise GrowthError(f"refinement ({finer}, {coarser}) names an unknown cover")
        if finer == coarser:
            continue
        graph.add_edge(coarser, finer)
    if not nx.is_directed_acyclic_graph(graph):
        raise GrowthError("refinement data contains a cycle")
    return graph


def poset_limits(values: Mapping[str, Fraction], refinements: Iterable[Refinement]) -> PosetLimits:
    """Limits of a function on a finite sampled poset; tails are upward closures."""
    if not values:
        raise GrowthError("poset limits need at least one sample")
    graph = _refinement_graph(values, refinements)
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None
    for x in sorted(graph.nodes):
        tail = [values[y] for y in nx.descendants(graph, x) | {x}]
        low, high = min(tail), max(tail)
        lower = low if lower is None else max(lower, low)
        upper = high if upper is None else min(upper, high)
    maximal = sorted(x for x in graph.nodes if graph.out_degree(x) == 0)
    return PosetLimits(lower, upper, len(maximal) == 1, maximal)


@dataclass
class AdditivityReport:
    f: PosetLimits
    g: PosetLimits
    total: PosetLimits
    holds: bool


def almost_additivity_holds(
    f: Mapping[str, Fraction],
    g: Mapping[str, Fraction],
    refinements: Sequence[Refinement],
) -> AdditivityReport:
    """lower f + lower g <= lower(f+g) <= lower f + upper g <= upper(f+g) <= upper f + upper g."""
    if set(f) != set(g):
        raise GrowthError("both functions must be sampled on the same covers")
    lf = poset_limits(f, refinements)
    lg = poset_limits(g, refinements)
    total = poset_limits({x: f[x] + g[x] for x in f}, refinements)
    if not total.directed:
        raise GrowthError("almost additivity needs a directed sample (one finest cover)")
    holds = (
        lf.lower + lg.lower <= total.lower
        <= lf.lower + lg.upper
        <= total.upper
        <= lf.upper + lg.upper
    )
    return AdditivityReport(lf, lg, total, holds)


@dataclass
class GrowthBracket:
    """What a finite family of covers says about the growth limits."""
    observed_min: Fraction
    observed_max: Fraction
    lower: Fraction
    upper: Fraction
    directed: bool
    family: str
    caveat: bool = True
    sample_count: int = 0

    def contains(self, value: Fraction) -> bool:
        return self.observed_min <= value <= self.observed_max


def growth_bracket(
    samples: Sequence[GrowthSample],
    refinements: Sequence[Refinement] = (),
    family: str = "sampled covers",
) -> GrowthBracket:
    """Bracket of the limits over the sampled sub-poset.

    Refinements must point from a cover to one it covers; degrees must
    divide along every refinement.
    """
    if not samples:
        raise GrowthError("a growth bracket needs at least one sample")
    if len({(s.k, s.field) for s in samples}) != 1:
        raise GrowthError("samples mix degrees or fields")
    by_id: Dict[str, GrowthSample] = {}
    for s in samples:
        if s.cover_id in by_id:
            raise GrowthError(f"cover {s.cover_id} sampled twice")
        by_id[s.cover_id] = s
    for finer, coarser in refinements:
        if finer in by_id and coarser in by_id and by_id[finer].degree % by_id[coarser].degree:
            raise GrowthError(f"degree of {finer} is not a multiple of the degree of {coarser}")
    limits = poset_limits({i: s.value for i, s in by_id.items()}, refinements)
    values = [s.value for s in samples]
    return GrowthBracket(
        observed_min=min(values),
        observed_max=max(values),
        lower=limits.lower,
        upper=limits.upper,
        directed=limits.directed,
        family=family,
        sample_count=len(samples),
    )


def disjoint_union_bracket(a: GrowthBracket, b: GrowthBracket) -> GrowthBracket:
    """Limits of a disjoint union are the sums of the limits of its parts."""
    return GrowthBracket(
        observed_min=a.observed_min + b.observed_min,
        observed_max=a.observed_max + b.observed_max,
        lower=a.lower + b.lower,
        upper=a.upper + b.upper,
        directed=a.directed and b.directed,
        family=f"{a.family} + {b.family}",
        caveat=a.caveat or b.caveat,
        sample_count=a.sample_count * b.sample_count,
    )


def cover_family(
    X: CellComplex, max_degree: int, transitive_only: bool = True
) -> Tuple[List[CoverMap], List[Refinement]]:
    """Covers of degree 1..max_degree with every refinement among them."""
    covers = enumerate_covers(X, max_degree, min_degree=1, transitive_only=transitive_only)
    refinements = [
        (finer.identifier, coarser.identifier)
        for finer in covers
        for coarser in covers
        if coarser.degree < finer.degree and refines(finer, coarser)
    ]
    logger.debug("cover family: %d covers, %d refinements", len(covers), len(refinements))
    return covers, refinements
