"""
Exact Sparse Linear Algebra

Rank over Q and F_p, Smith normal form over Z, and exact solves with
certificates. Everything is integer or Fraction arithmetic; no floating
point reaches an assertion.

Key Concerns:
1. Exactness: fraction-free elimination over Q keeps entries integral
2. Sparsity: boundary matrices are column lists of {row: value}
3. Certificates: an unsolvable system comes with the combination proving it
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import hashlib
import re

import sympy

Column = Dict[int, int]


class HomologyError(ValueError):
    """Raised on invalid homology or linear-algebra input."""


@dataclass(frozen=True)
class Field:
    """Coefficient field: characteristic 0 is Q, otherwise F_p."""
    characteristic: int

    @staticmethod
    def rational() -> "Field":
        return Field(0)

    @staticmethod
    def mod(p: int) -> "Field":
        if p < 2 or not sympy.isprime(p):
            raise HomologyError(f"F_{p}: characteristic must be prime")
        return Field(p)

    @staticmethod
    def parse(tag: str) -> "Field":
        """Parse `q`, `f2`, `f3`, ... (case-insensitive)."""
        tag = tag.strip().lower()
        if tag in ("q", "rational", "0"):
            return Field.rational()
        match = re.fullmatch(r"f_?(\d+)", tag)
        if not match:
            raise HomologyError(f"unknown field tag {tag!r}")
        return Field.mod(int(match.group(1)))

    @property
    def tag(self) -> str:
        return "q" if self.characteristic == 0 else f"f{self.characteristic}"

    def __str__(self) -> str:
        return self.tag


class SparseMatrix:
    """Integer matrix stored column-major as lists of {row: value}.

    Duplicate entries are summed and zeros dropped when the matrix is built.
    """

    def __init__(self, n_rows: int, n_cols: int, columns: Sequence[Column]):
        if len(columns) != n_cols:
            raise HomologyError(f"expected {n_cols} columns, got {len(columns)}")
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.columns: List[Column] = []
        for col in columns:
            clean = {r: v for r, v in col.items() if v != 0}
            for r in clean:
                if not 0 <= r < n_rows:
                    raise HomologyError(f"row {r} out of range for {n_rows} rows")
            self.columns.append(clean)

    @staticmethod
    def from_entries(n_rows: int, n_cols: int, entries: Iterable[Tuple[int, int, int]]):
        columns: List[Column] = [{} for _ in range(n_cols)]
        for r, c, v in entries:
            columns[c][r] = columns[c].get(r, 0) + v
        return SparseMatrix(n_rows, n_cols, columns)

    @staticmethod
    def from_dense(rows: Sequence[Sequence[int]]) -> "SparseMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        return SparseMatrix.from_entries(
            n_rows, n_cols,
            ((r, c, int(v)) for r, row in enumerate(rows) for c, v in enumerate(row)),
        )

    @staticmethod
    def zero(n_rows: int, n_cols: int) -> "SparseMatrix":
        return SparseMatrix(n_rows, n_cols, [{} for _ in range(n_cols)])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    def entries(self) -> List[Tuple[int, int, int]]:
        return [(r, c, v) for c, col in enumerate(self.columns) for r, v in sorted(col.items())]

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.n_cols for _ in range(self.n_rows)]
        for r, c, v in self.entries():
            dense[r][c] = v
        return dense

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_entries(
            self.n_cols, self.n_rows, ((c, r, v) for r, c, v in self.entries())
        )

    def abs(self) -> "SparseMatrix":
        return SparseMatrix(
            self.n_rows, self.n_cols, [{r: abs(v) for r, v in col.items()} for col in self.columns]
        )

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.n_cols != other.n_rows:
            raise HomologyError(f"shape mismatch {self.shape} @ {other.shape}")
        result = []
        for col in other.columns:
            out: Column = {}
            for k, v in col.items():
                for r, w in self.columns[k].items():
                    out[r] = out.get(r, 0) + w * v
            result.append(out)
        return SparseMatrix(self.n_rows, other.n_cols, result)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def digest(self) -> str:
        """Content digest used as a cache key."""
        payload = f"{self.n_rows}x{self.n_cols}:" + ";".join(
            f"{r},{c},{v}" for r, c, v in self.entries()
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns


def rank(matrix: SparseMatrix, field: Field) -> int:
    """Rank by sparse column reduction, pivoting on the largest row index."""
    p = field.characteristic
    pivots: Dict[int, Column] = {}
    for source in matrix.columns:
        col = {r: (v % p if p else v) for r, v in source.items()}
        col = {r: v for r, v in col.items() if v}
        while col:
            low = max(col)
            if low not in pivots:
                pivots[low] = col
                break
            col = _eliminate(col, pivots[low], low, p)
    return len(pivots)


def _eliminate(col: Column, pivot: Column, row: int, p: int) -> Column:
    if p:
        factor = col[row] * pow(pivot[row], -1, p) % p
        out = dict(col)
        for r, v in pivot.items():
            out[r] = (out.get(r, 0) - factor * v) % p
        return {r: v for r, v in out.items() if v}

    # fraction-free: c <- pivot[row] * c - c[row] * pivot, then strip the content
    a, b = pivot[row], col[row]
    out = {r: a * v for r, v in col.items()}
    for r, v in pivot.items():
        out[r] = out.get(r, 0) - b * v
    out = {r: v for r, v in out.items() if v}
    content = 0
    for v in out.values():
        content = gcd(content, v)
    if content > 1:
        out = {r: v // content for r, v in out.items()}
    return out


@dataclass
class SmithForm:
    """U * A * V = D with U, V unimodular; invariant factors are the nonzero diagonal."""
    invariant_factors: List[int]
    U: Optional[List[List[int]]] = None
    V: Optional[List[List[int]]] = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: SparseMatrix, transforms: bool = False) -> SmithForm:
    """Smith normal form of an integer matrix.

    The invariant factors d_1 | d_2 | ... are positive. With `transforms`
    the unimodular U (rows) and V (columns) are tracked as well.
    """
    A = matrix.to_dense()
    m, n = matrix.shape
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row dst += q * row src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in A:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if U is not None:
            U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block by the pivot
            offender = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                 if A[i][j] % A[t][t]),
                None,
            )
            if offender is None:
                break
            add_row(offender[0], t, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1

    factors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return SmithForm(factors, U, V)


def invariant_factors(matrix: SparseMatrix) -> List[int]:
    return smith_normal_form(matrix).invariant_factors


@dataclass
class SolveResult:
    """Outcome of an exact linear solve A x = b.

    When unsolvable, `certificate` is a row combination y with y A = 0
    (mod `modulus` for integer solves) while y b is not.
    """
    solvable: bool
    solution: Optional[List[int]] = None
    certificate: Optional[List[int]] = None
    modulus: int = 0


def solve_integer_system(A: SparseMatrix, b: Sequence[int]) -> SolveResult:
    """Solve A x = b over Z through the Smith normal form transforms."""
    if len(b) != A.n_rows:
        raise HomologyError("right-hand side length does not match row count")
    snf = smith_normal_form(A, transforms=True)
    Ub = [sum(u * v for u, v in zip(row, b)) for row in snf.U]
    y = [0] * A.n_cols
    for i, value in enumerate(Ub):
        if i < snf.rank:
            d = snf.invariant_factors[i]
            if value % d:
                return SolveResult(False, certificate=list(snf.U[i]), modulus=d)
            y[i] = value // d
        elif value:
            return SolveResult(False, certificate=list(snf.U[i]), modulus=0)
    x = [sum(snf.V[r][c] * y[c] for c in range(A.n_cols)) for r in range(A.n_cols)]
    return SolveResult(True, solution=x)


def solve_mod2_system(A: SparseMatrix, b: Sequence[int]) -> SolveResult:
    """Solve A x = b over F_2 with bitset rows.

    Each row carries the set of original equations it was combined from, so
    an inconsistent row 0 = 1 certifies unsolvability.
    """
    m, n = A.shape
    if len(b) != m:
        raise HomologyError("right-hand side length does not match row count")
    rows = [0] * m
    for r, c, v in A.entries():
        if v % 2:
            rows[r] |= 1 << c
    rhs = [v % 2 for v in b]
    origin = [1 << i for i in range(m)]

    pivot_rows: List[Tuple[int, int]] = []
    used = [False] * m
    for col in range(n):
        bit = 1 << col
        pick = next((r for r in range(m) if not used[r] and rows[r] & bit), None)
        if pick is None:
            continue
        used[pick] = True
        for r in range(m):
            if r != pick and rows[r] & bit:
                rows[r] ^= rows[pick]
                rhs[r] ^= rhs[pick]
                origin[r] ^= origin[pick]
        pivot_rows.append((col, pick))

    for r in range(m):
        if not rows[r] and rhs[r]:
            certificate = [(origin[r] >> i) & 1 for i in range(m)]
            return SolveResult(False, certificate=certificate, modulus=2)

    x = [0] * n
    for col, r in pivot_rows:
        x[col] = rhs[r]
    return SolveResult(True, solution=x)


def solve_rational(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """Gaussian elimination over Q.

    Returns ("unique", x), ("inconsistent", None) or ("underdetermined", x0)
    where x0 is one particular solution.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots: List[int] = []
    r = 0
    for c in range(n):
        pick = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pick is None:
            continue
        rows[r], rows[pick] = rows[pick], rows[r]
        lead = rows[r][c]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, m)):
        return "inconsistent", None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return ("unique" if r == n else "underdetermined"), x


def determinant(A: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(A)
    rows = [[Fraction(v) for v in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        pick = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pick is None:
            return Fraction(0)
        if pick != c:
            rows[c], rows[pick] = rows[pick], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def rank_rational(vectors: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a small dense list of rational vectors."""
    if not vectors:
        return 0
    rows = [[Fraction(v) for v in row] for row in vectors]
    n = len(rows[0])
    r = 0
    for c in range(n):
        pick = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pick is None:
            continue
        rows[r], rows[pick] = rows[pick], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
