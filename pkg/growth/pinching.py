"""
Pinching and Decay

Two quantitative consequences of approximation, checked on explicit covers:

- delta-pinching: some connected cover X_d pins normalized b_k of all its
  further covers to a window of width at most 2 delta, and the trace of
  (1 - x/D)^r on the Laplacian of X_d bounds that window from above
- mapping tori: the cyclic covers unwrapping the circle direction have
  normalized Betti numbers tending to zero

Key Concerns:
1. Exactness: windows, traces and values are Fractions
2. Search order: candidates are tried in enumeration order, first success wins
3. Bounds: D comes from the base, so it is valid for every cover in the search
"""

from typing import List, Mapping, Optional, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
import logging

from complexes.simplicial import SimplicialComplex
from covers.cells import CellComplex
from covers.mapping_torus import cyclic_cover, mapping_torus
from covers.permutation import build_cover, enumerate_covers
from growth.parallel import ordered_map
from growth.samples import GrowthError, GrowthSample, rebase_sample, sample_cover
from homology.chains import betti
from homology.linalg import Field
from homology.spectral import laplacian, pinch_trace

logger = logging.getLogger(__name__)


@dataclass
class PinchReport:
    """Outcome of the delta-pinching search."""
    delta: Fraction
    found: bool
    cover_id: Optional[str] = None
    degree: int = 0
    samples: List[GrowthSample] = field(default_factory=list)
    window_min: Optional[Fraction] = None
    window_max: Optional[Fraction] = None
    norm_bound: Optional[Fraction] = None
    power: int = 0
    trace_bound: Optional[Fraction] = None
    candidates_tried: int = 0

    @property
    def width(self) -> Optional[Fraction]:
        if self.window_min is None:
            return None
        return self.window_max - self.window_min

    @property
    def trace_window(self):
        """[t - delta, t] with t = tr f(Delta)/n for the chosen cover."""
        if self.trace_bound is None:
            return None
        return self.trace_bound - self.delta, self.trace_bound

    @property
    def trace_dominates(self) -> bool:
        """b_k(X_d)/n <= tr f(Delta)/n, which always holds since f >= 0 and f(0) = 1."""
        if self.trace_bound is None or not self.samples:
            return False
        return self.samples[0].value <= self.trace_bound


def delta_pinch_search(
    base: CellComplex,
    delta: Fraction,
    k: int = 1,
    field: Field = Field.rational(),
    min_degree: int = 4,
    further_degree: int = 3,
    power: int = 8,
    threads: Optional[int] = None,
) -> PinchReport:
    """Find a connected cover of degree min_degree whose further covers stay pinched.

    Values of further covers are normalized by their total degree over the
    base, so they are directly comparable with samples of `base`.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise GrowthError("delta must be positive")
    D = base.norm_bound(k)
    candidates = enumerate_covers(base, min_degree, min_degree=min_degree, transitive_only=True)
    report = PinchReport(delta, False, norm_bound=D, power=power)
    for candidate in candidates:
        report.candidates_tried += 1
        X_d = build_cover(base, candidate)
        further = enumerate_covers(X_d, further_degree, min_degree=1)

        def sample(c, X_d=X_d, n=candidate.degree):
            return rebase_sample(sample_cover(X_d, c, k, field), n)

        samples = ordered_map(sample, further, threads)
        values = [s.value for s in samples]
        width = max(values) - min(values)
        logger.debug("candidate %s: %d further covers, width %s", candidate.identifier,
                     len(samples), width)
        if width <= 2 * delta:
            report.found = True
            report.cover_id = candidate.identifier
            report.degree = candidate.degree
            report.samples = samples
            report.window_min, report.window_max = min(values), max(values)
            if D > 0:
                trace = pinch_trace(laplacian(X_d.chain_complex(), k), D, power)
                report.trace_bound = trace / candidate.degree
            return report
    logger.info("no pinched cover among %d candidates", report.candidates_tried)
    return report


@dataclass
class DecayReport:
    """Normalized b_k of the degree-m cyclic covers of a mapping torus."""
    k: int
    field: str
    degrees: List[int]
    values: List[Fraction]

    @property
    def non_increasing(self) -> bool:
        ordered = [v for _, v in sorted(zip(self.degrees, self.values))]
        return all(a >= b for a, b in zip(ordered, ordered[1:]))


def mapping_torus_decay(
    X: SimplicialComplex,
    f: Mapping[str, str],
    k: int,
    field: Field,
    degrees: Sequence[int],
) -> DecayReport:
    T = mapping_torus(X, f)
    values = []
    for m in degrees:
        cover = build_cover(T, cyclic_cover(T, m))
        values.append(Fraction(betti(cover.chain_complex(), k, field), m))
    return DecayReport(k, field.tag, list(degrees), values)
