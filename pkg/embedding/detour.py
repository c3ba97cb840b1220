"""
Geometric Finger Moves in the Plane

Realizes a finger move of a graph edge as an actual polygonal path: leave
the edge at a point p, run a thin tube toward a vertex v, circle v once in
a small square and come back. Counting crossings of the new path exactly
must reproduce the algebraic update by rho = +-[v].
"""

from typing import Dict, List, Optional, Tuple
from dataclasses import dataclass, field
from fractions import Fraction
import logging

from complexes.simplicial import Simplex
from embedding.immersion import EmbeddingError, Immersion
from embedding.intersection import finger_move, intersection_vector

logger = logging.getLogger(__name__)

Point2 = Tuple[Fraction, Fraction]

SPLIT_PARAMETERS = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 7)]
MAX_SHRINK = 40


class _Degenerate(Exception):
    pass


def _cross(a: Point2, b: Point2) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _sub(a: Point2, b: Point2) -> Point2:
    return a[0] - b[0], a[1] - b[1]


def _segment_crossing(P: Point2, Q: Point2, R: Point2, S: Point2) -> int:
    """Signed transverse crossing of PQ with RS; raises on touching or overlap."""
    u, w = _sub(Q, P), _sub(S, R)
    det = _cross(u, w)
    rp = _sub(R, P)
    if det == 0:
        if _cross(rp, u) != 0:
            return 0
        # collinear: overlap of the parameter ranges on PQ
        length = u[0] * u[0] + u[1] * u[1]
        t0 = (rp[0] * u[0] + rp[1] * u[1]) / length
        sp = _sub(S, P)
        t1 = (sp[0] * u[0] + sp[1] * u[1]) / length
        if max(t0, t1) < 0 or min(t0, t1) > 1:
            return 0
        raise _Degenerate("collinear overlap")
    s = _cross(rp, w) / det
    t = _cross(rp, u) / det
    if s < 0 or s > 1 or t < 0 or t > 1:
        return 0
    if s in (0, 1) or t in (0, 1):
        raise _Degenerate("crossing at an endpoint")
    return 1 if det > 0 else -1


def _rot(x: Point2) -> Point2:
    return -x[1], x[0]


def detour_path(
    A: Point2, B: Point2, E: Point2, t: Fraction, r: Fraction, rho: int
) -> List[Point2]:
    """A, p, M, square around E, M, p, B; counterclockwise when rho = +1."""
    p = (A[0] + t * (B[0] - A[0]), A[1] + t * (B[1] - A[1]))
    offset = (r * (p[0] - E[0]), r * (p[1] - E[1]))
    M = (E[0] + offset[0], E[1] + offset[1])
    q1 = _rot(offset)
    Q1 = (E[0] + q1[0], E[1] + q1[1])
    Q2 = (E[0] - offset[0], E[1] - offset[1])
    Q3 = (E[0] - q1[0], E[1] - q1[1])
    loop = [Q1, Q2, Q3] if rho > 0 else [Q3, Q2, Q1]
    return [A, p, M] + loop + [M, p, B]


@dataclass
class DetourReport:
    """Geometric and algebraic rows of the pushed edge, keyed by the other edge."""
    sigma: Tuple[str, ...]
    vertex: str
    rho: int
    geometric: Dict[Tuple[str, ...], int] = field(default_factory=dict)
    algebraic: Dict[Tuple[str, ...], int] = field(default_factory=dict)
    path: List[Point2] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.geometric == self.algebraic


def _point(f: Immersion, v: int) -> Point2:
    x = f.point(v)
    return x[0], x[1]


def _loop_ok(f: Immersion, path: List[Point2], vertex: int) -> bool:
    """The square meets each edge at v once and no other edge at all."""
    square = path[2:7]
    for edge in f.top_simplices():
        P, Q = _point(f, edge[0]), _point(f, edge[1])
        hits = 0
        for a, b in zip(square, square[1:]):
            try:
                hits += abs(_segment_crossing(a, b, P, Q))
            except _Degenerate:
                return False
        if hits != (1 if vertex in edge else 0):
            return False
    return True


def _path_row(f: Immersion, path: List[Point2], sigma: Simplex) -> Dict[Simplex, int]:
    row = {}
    for tau in f.top_simplices():
        if set(tau) & set(sigma):
            continue
        P, Q = _point(f, tau[0]), _point(f, tau[1])
        row[tau] = sum(_segment_crossing(a, b, P, Q) for a, b in zip(path, path[1:]))
    return row


def finger_detour(f: Immersion, sigma: Simplex, vertex: str, rho: int = 1) -> DetourReport:
    """Push the edge sigma once around `vertex` and compare both rows."""
    if f.d != 1:
        raise EmbeddingError("geometric detours are implemented for graphs in the plane")
    if rho not in (1, -1):
        raise EmbeddingError("rho must be +1 or -1")
    src = f.source
    v = src.index(vertex)
    if v in sigma:
        raise EmbeddingError("the detour vertex must not lie on the pushed edge")
    A, B, E = _point(f, sigma[0]), _point(f, sigma[1]), _point(f, v)

    V = intersection_vector(f)
    moved = finger_move(V, sigma, {(v,): rho})
    report = DetourReport(src.names(sigma), vertex, rho)
    report.algebraic = {src.names(t): moved[(sigma, t)] for (s, t) in moved.entries if s == sigma}

    for t in SPLIT_PARAMETERS:
        r = Fraction(1, 4)
        for _ in range(MAX_SHRINK):
            path = detour_path(A, B, E, t, r, rho)
            if _loop_ok(f, path, v):
                break
            r /= 2
        else:
            continue
        try:
            row = _path_row(f, path, sigma)
        except _Degenerate:
            logger.debug("split parameter %s degenerate for %s", t, src.names(sigma))
            continue
        report.geometric = {src.names(tau): value for tau, value in row.items()}
        report.path = path
        return report
    raise EmbeddingError(f"no generic detour found for {src.names(sigma)} around {vertex}")


@dataclass
class AgreementSummary:
    cases: int = 0
    agreed: int = 0
    failures: List[DetourReport] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.cases > 0 and self.agreed == self.cases


def detour_agreement(f: Immersion, moves: List[Tuple[Simplex, str, int]],
                     summary: Optional[AgreementSummary] = None) -> AgreementSummary:
    summary = summary or AgreementSummary()
    for sigma, vertex, rho in moves:
        report = finger_detour(f, sigma, vertex, rho)
        summary.cases += 1
        if report.agree:
            summary.agreed += 1
        else:
            summary.failures.append(report)
    return summary
