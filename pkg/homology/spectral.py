"""
Combinatorial Laplacians and Eigenvalue Counting

Exact spectral primitives behind the approximation argument: the Laplacian
of a chain complex, a row-sum norm bound valid for every finite cover, the
count of small nonzero eigenvalues by Sturm-based root counting, and the
trace of the pinching polynomial (1 - x/D)^r.

Key Concerns:
1. Exactness: characteristic polynomials and traces are computed over Z and Q
2. Size: the characteristic-polynomial path is capped at 200 x 200
3. Validity: the norm bound dominates the Laplacian of every cover
"""

from dataclasses import dataclass
from fractions import Fraction
from math import log
import logging

import numpy as np
import sympy

from homology.chains import ChainComplex
from homology.linalg import Field, HomologyError, SparseMatrix, rank

logger = logging.getLogger(__name__)

MAX_CHARPOLY_SIZE = 200


def laplacian(C: ChainComplex, k: int) -> np.ndarray:
    """Delta_k = d_k^T d_k + d_(k+1) d_(k+1)^T as an integer object array."""
    down = C.boundary(k)
    up = C.boundary(k + 1)
    n = C.count(k)
    result = np.zeros((n, n), dtype=object)
    if down.n_rows:
        result = result + _dense(down.transpose().matmul(down))
    if up.n_cols:
        result = result + _dense(up.matmul(up.transpose()))
    return result


def _dense(matrix: SparseMatrix) -> np.ndarray:
    array = np.zeros(matrix.shape, dtype=object)
    for r, c, v in matrix.entries():
        array[r, c] = v
    return array


def row_sum_norm(matrix: np.ndarray) -> int:
    """Maximum absolute row sum, an upper bound for the operator norm."""
    if matrix.size == 0:
        return 0
    return int(max(sum(abs(int(v)) for v in row) for row in matrix))


def operator_norm_bound(C: ChainComplex, k: int) -> Fraction:
    """Row sums of |d_k|^T |d_k| + |d_(k+1)| |d_(k+1)|^T on absolute entries.

    Covers replicate the local incidence pattern of the base, so this bound
    holds for the Laplacian of every finite cover.
    """
    return incidence_norm_bound(C.boundary(k).abs(), C.boundary(k + 1).abs())


def incidence_norm_bound(down: SparseMatrix, up: SparseMatrix) -> Fraction:
    """Row sums of down^T down + up up^T for nonnegative incidence matrices.

    Cell complexes pass incidences counted without cancellation, so a loop
    contributes both of its ends even though its boundary is zero.
    """
    n = down.n_cols
    if n == 0:
        return Fraction(0)
    totals = [0] * n
    if down.n_rows:
        for r, _, v in down.transpose().matmul(down).entries():
            totals[r] += v
    if up.n_cols:
        for r, _, v in up.matmul(up.transpose()).entries():
            totals[r] += v
    return Fraction(max(totals))


def _check_symmetric_integer(matrix) -> np.ndarray:
    array = np.array(matrix, dtype=object)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise HomologyError(f"expected a square matrix, got shape {array.shape}")
    for value in array.flat:
        if int(value) != value:
            raise HomologyError("expected integer entries")
    if not (array == array.T).all():
        raise HomologyError("matrix is not symmetric")
    return array


@dataclass
class EigenvalueReport:
    """Outcome of counting eigenvalues with 0 < |lambda| <= epsilon.

    `bound` is N log ||Delta|| / log(1/epsilon) as a float for display; the
    verdict `passed` is decided exactly.
    """
    size: int
    epsilon: Fraction
    count: int
    nullity: int
    norm: int
    bound: float
    passed: bool


def small_eigenvalue_check(matrix, epsilon: Fraction) -> EigenvalueReport:
    """Count small nonzero eigenvalues of a symmetric integer matrix exactly.

    The characteristic polynomial is split into square-free factors; roots in
    [-epsilon, epsilon] are counted per factor with multiplicity and the
    zero eigenspace (dimension from the rank) is set aside.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise HomologyError("epsilon must lie in (0, 1)")
    array = _check_symmetric_integer(matrix)
    n = array.shape[0]
    if n > MAX_CHARPOLY_SIZE:
        raise HomologyError(f"matrix of size {n} exceeds the exact path cap {MAX_CHARPOLY_SIZE}")

    # norms below 1 are raised to 1: the bound is then 0 and only N_eps = 0 passes
    norm = max(row_sum_norm(array), 1)
    if n == 0:
        return EigenvalueReport(0, epsilon, 0, 0, norm, 0.0, True)

    nullity = n - rank(SparseMatrix.from_dense(array.tolist()), Field.rational())
    count, zero_multiplicity = _count_small_roots(array, epsilon)
    if zero_multiplicity != nullity:
        raise HomologyError(
            f"zero eigenvalue multiplicity {zero_multiplicity} disagrees with nullity {nullity}"
        )

    a, b = epsilon.numerator, epsilon.denominator
    # count * log(b/a) <= n * log(norm)  <=>  b^count <= a^count * norm^n
    passed = b ** count <= a ** count * norm ** n
    bound = n * log(norm) / log(b / a)
    if not passed:
        logger.warning("small eigenvalue bound violated: %d > %.4f", count, bound)
    return EigenvalueReport(n, epsilon, count, nullity, norm, bound, passed)


def _count_small_roots(array: np.ndarray, epsilon: Fraction):
    x = sympy.Symbol("x")
    charpoly = sympy.Matrix(array.tolist()).charpoly(x).as_expr()
    _, factors = sympy.sqf_list(sympy.Poly(charpoly, x, domain="ZZ"))
    count = 0
    zero_multiplicity = 0
    for factor, multiplicity in factors:
        if factor.eval(0) == 0:
            # square-free, so x divides it exactly once
            zero_multiplicity += multiplicity
            factor = sympy.Poly(sympy.quo(factor.as_expr(), x), x, domain="ZZ")
        if factor.degree() <= 0:
            continue
        count += multiplicity * sturm_root_count(factor, -epsilon, epsilon)
    return count, zero_multiplicity


def sturm_sign_changes(poly: sympy.Poly, point: Fraction) -> int:
    """Sign changes of the Sturm sequence of `poly` at `point`."""
    value = sympy.Rational(point.numerator, point.denominator)
    signs = [sympy.sign(p.eval(value)) for p in sympy.sturm(poly)]
    signs = [s for s in signs if s != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_root_count(poly: sympy.Poly, low: Fraction, high: Fraction) -> int:
    """Distinct real roots of a square-free `poly` in [low, high]."""
    # sign changes count roots in (low, high]
    count = sturm_sign_changes(poly, low) - sturm_sign_changes(poly, high)
    if poly.eval(sympy.Rational(low.numerator, low.denominator)) == 0:
        count += 1
    return count


def pinch_trace(matrix, D: Fraction, r: int) -> Fraction:
    """tr f(Delta) for f(x) = (1 - x/D)^r, exactly.

    Computed as tr((D I - Delta)^r) / D^r by repeated integer products.
    """
    array = _check_symmetric_integer(matrix)
    D = Fraction(D)
    if r < 1:
        raise HomologyError("r must be at least 1")
    if D <= 0:
        raise HomologyError("D must be positive")
    if D < row_sum_norm(array):
        raise HomologyError(f"D = {D} is below the observed norm bound {row_sum_norm(array)}")
    n = array.shape[0]
    if n == 0:
        return Fraction(0)

    # scale to integers: D = p/q, q*D*I - q*Delta = p*I - q*Delta
    p, q = D.numerator, D.denominator
    shifted = np.identity(n, dtype=object) * p - array * q
    power = shifted.copy()
    for _ in range(r - 1):
        power = power.dot(shifted)
    trace = sum(int(power[i, i]) for i in range(n))
    return Fraction(trace, p ** r)


def harmonic_dimension(C: ChainComplex, k: int) -> int:
    """dim ker Delta_k, which equals b_k(C; Q)."""
    array = laplacian(C, k)
    n = array.shape[0]
    if n == 0:
        return 0
    return n - rank(SparseMatrix.from_dense(array.tolist()), Field.rational())

