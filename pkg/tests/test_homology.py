"""
Tests for exact linear algebra, chain complexes and spectral checks.
"""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from complexes.chamber import davis_chamber
from complexes.simplicial import build_complex
from evaluation import instances
from homology.cache import RankCache
from homology.chains import (
    ChainComplex,
    betti,
    betti_numbers,
    chamber_boundary_cells,
    chamber_chain_complex,
    cohomology_top_order,
    integral_homology,
    reduced_betti,
    relative_chain_complex,
    simplicial_chain_complex,
    uct_inequality_check,
)
from homology.linalg import (
    Field,
    HomologyError,
    SparseMatrix,
    determinant,
    rank,
    rank_rational,
    smith_normal_form,
    solve_integer_system,
    solve_mod2_system,
    solve_rational,
)
from homology.spectral import (
    harmonic_dimension,
    laplacian,
    operator_norm_bound,
    pinch_trace,
    small_eigenvalue_check,
    sturm_root_count,
)

Q = Field.rational()
F2 = Field.mod(2)


class TestField:
    def test_parse_tags(self):
        assert Field.parse("q") == Q
        assert Field.parse("F_3").tag == "f3"
        assert str(Field.parse("f2")) == "f2"

    def test_rejects_non_prime(self):
        with pytest.raises(HomologyError):
            Field.mod(4)
        with pytest.raises(HomologyError):
            Field.parse("r")


class TestSparseMatrix:
    def test_duplicates_are_summed(self):
        M = SparseMatrix.from_entries(2, 2, [(0, 0, 1), (0, 0, 2), (1, 1, 0)])
        assert M.to_dense() == [[3, 0], [0, 0]]

    def test_transpose_and_matmul(self):
        M = SparseMatrix.from_dense([[1, 2], [0, 1]])
        assert M.transpose().to_dense() == [[1, 0], [2, 1]]
        assert M.matmul(M).to_dense() == [[1, 4], [0, 1]]

    def test_row_out_of_range(self):
        with pytest.raises(HomologyError):
            SparseMatrix(1, 1, [{3: 1}])


class TestRank:
    def test_field_dependence(self):
        M = SparseMatrix.from_dense([[2]])
        assert rank(M, Q) == 1
        assert rank(M, F2) == 0

    def test_dependent_rows(self):
        M = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert rank(M, Q) == 2

    def test_rational_rank(self):
        assert rank_rational([[1, 2], [2, 4]]) == 1
        assert rank_rational([]) == 0


class TestSmithForm:
    def test_coprime_diagonal(self):
        assert smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]])).invariant_factors == [1, 6]

    def test_rank_one(self):
        assert smith_normal_form(SparseMatrix.from_dense([[2, 4], [4, 8]])).invariant_factors == [2]

    def test_transforms_diagonalize(self):
        A = SparseMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        snf = smith_normal_form(A, transforms=True)
        D = np.array(snf.U, dtype=object).dot(np.array(A.to_dense(), dtype=object))
        D = D.dot(np.array(snf.V, dtype=object))
        off_diagonal = [D[i, j] for i in range(3) for j in range(3) if i != j]
        assert all(v == 0 for v in off_diagonal)
        assert [D[i, i] for i in range(snf.rank)] == snf.invariant_factors
        factors = snf.invariant_factors
        assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


class TestSolves:
    def test_integer_solution(self):
        result = solve_integer_system(SparseMatrix.from_dense([[2]]), [4])
        assert result.solvable and result.solution == [2]

    def test_integer_certificate(self):
        result = solve_integer_system(SparseMatrix.from_dense([[2]]), [1])
        assert not result.solvable
        assert result.modulus == 2
        assert result.certificate == [1]

    def test_integer_solution_satisfies_system(self):
        A = SparseMatrix.from_dense([[1, -1, 0], [0, 1, -1], [1, 0, -1]])
        b = [3, -1, 2]
        result = solve_integer_system(A, b)
        assert result.solvable
        x = result.solution
        assert [sum(a * v for a, v in zip(row, x)) for row in A.to_dense()] == b

    def test_mod2_certificate(self):
        result = solve_mod2_system(SparseMatrix.from_dense([[1, 1], [1, 1]]), [0, 1])
        assert not result.solvable
        assert result.certificate == [1, 1]

    def test_mod2_solution(self):
        result = solve_mod2_system(SparseMatrix.from_dense([[1, 1], [1, 1]]), [1, 1])
        assert result.solvable
        assert result.solution == [1, 0]

    def test_rational_cases(self):
        kind, x = solve_rational([[1, 1], [1, -1]], [2, 0])
        assert kind == "unique" and x == [1, 1]
        assert solve_rational([[1, 1], [2, 2]], [1, 3]) == ("inconsistent", None)
        kind, x = solve_rational([[1, 1]], [2])
        assert kind == "underdetermined" and x == [2, 0]

    def test_determinant(self):
        assert determinant([[1, 2], [3, 4]]) == -2
        assert determinant([[0, 1], [0, 2]]) == 0


class TestChainComplexes:
    def test_circle(self):
        assert betti_numbers(simplicial_chain_complex(instances.cycle(3)), Q) == [1, 1]

    def test_rp2_over_fields(self):
        C = simplicial_chain_complex(instances.rp2())
        assert betti_numbers(C, Q) == [1, 0, 0]
        assert betti_numbers(C, F2) == [1, 1, 1]

    def test_rp2_integral(self):
        C = simplicial_chain_complex(instances.rp2())
        h1 = integral_homology(C, 1)
        assert h1.betti == 0 and h1.torsion == [2]
        assert str(h1) == "Z/2"
        assert str(integral_homology(C, 2)) == "0"

    def test_reduced_conventions(self):
        assert reduced_betti(simplicial_chain_complex(instances.two_points()), 0, Q) == 1
        empty = simplicial_chain_complex(build_complex([]))
        assert reduced_betti(empty, -1, Q) == 1
        assert reduced_betti(simplicial_chain_complex(instances.point()), -1, Q) == 0

    def test_relative_pair(self):
        pair = relative_chain_complex(instances.edge(), instances.two_points())
        assert betti(pair, 0, Q) == 0
        assert betti(pair, 1, Q) == 1

    def test_nonzero_composite_rejected(self):
        d1 = SparseMatrix.from_dense([[1]])
        d2 = SparseMatrix.from_dense([[1]])
        with pytest.raises(HomologyError):
            ChainComplex([1, 1, 1], {1: d1, 2: d2})

    def test_chamber_is_contractible(self):
        C = chamber_chain_complex(davis_chamber(instances.cycle(5)))
        assert betti_numbers(C, Q) == [1, 0, 0]

    def test_chamber_pair_matches_link_homology(self):
        chamber = davis_chamber(instances.cycle(5))
        pair = chamber_chain_complex(chamber).relative(chamber_boundary_cells(chamber))
        assert betti(pair, 2, Q) == 1
        assert betti(pair, 1, Q) == 0

    def test_cohomology_top_order(self):
        assert cohomology_top_order(simplicial_chain_complex(instances.rp2()), 2) == 2
        assert cohomology_top_order(simplicial_chain_complex(instances.cycle(3)), 1) == 0
        assert cohomology_top_order(simplicial_chain_complex(instances.path(3)), 1) == 1

    def test_uct_on_rp2(self):
        C = simplicial_chain_complex(instances.rp2())
        for k in range(3):
            report = uct_inequality_check(C, k, 2)
            assert report.holds
        assert uct_inequality_check(C, 1, 2).betti_p == 1
        assert uct_inequality_check(C, 2, 3).betti_p == 0


class TestSpectral:
    def test_graph_laplacian(self):
        C = simplicial_chain_complex(instances.cycle(3))
        L0 = laplacian(C, 0)
        assert [[int(v) for v in row] for row in L0] == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]

    def test_harmonic_dimension_is_betti(self):
        C = simplicial_chain_complex(instances.cycle(4))
        assert harmonic_dimension(C, 0) == 1
        assert harmonic_dimension(C, 1) == 1

    def test_norm_bound(self):
        assert operator_norm_bound(simplicial_chain_complex(instances.cycle(3)), 1) == 4

    def test_small_eigenvalues(self):
        report = small_eigenvalue_check([[2, 1], [1, 1]], Fraction(1, 2))
        assert report.count == 1
        assert report.nullity == 0
        assert report.norm == 3
        assert report.passed

    def test_zero_matrix(self):
        report = small_eigenvalue_check([[0]], Fraction(1, 2))
        assert report.count == 0 and report.nullity == 1 and report.passed

    def test_rejects_bad_input(self):
        with pytest.raises(HomologyError):
            small_eigenvalue_check([[0, 1], [0, 0]], Fraction(1, 2))
        with pytest.raises(HomologyError):
            small_eigenvalue_check([[1]], Fraction(1))

    def test_random_matrices_pass(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            n = int(rng.integers(1, 7))
            upper = np.triu(rng.integers(-4, 5, size=(n, n)))
            matrix = (upper + np.triu(upper, 1).T).astype(object)
            assert small_eigenvalue_check(matrix, Fraction(1, 4)).passed

    def test_sturm_counts_match_sympy(self):
        x = sympy.Symbol("x")
        assert sturm_root_count(sympy.Poly(x**2 - 2, x), Fraction(-2), Fraction(2)) == 2
        # roots on both endpoints are counted
        assert sturm_root_count(sympy.Poly(x**2 - 1, x), Fraction(-1), Fraction(1)) == 2
        assert sturm_root_count(sympy.Poly(x**2 + 1, x), Fraction(-5), Fraction(5)) == 0
        polys = [x**3 - x, 4 * x**2 - 1, x**4 - 5 * x**2 + 4, 9 * x**3 - x - 1]
        bounds = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]
        for expr in polys:
            poly = sympy.Poly(expr, x)
            for eps in bounds:
                bound = sympy.Rational(eps.numerator, eps.denominator)
                expected = poly.count_roots(-bound, bound)
                assert sturm_root_count(poly, -eps, eps) == expected

    def test_pinch_trace(self):
        M = [[2, -1], [-1, 2]]
        assert pinch_trace(M, Fraction(3), 1) == Fraction(2, 3)
        assert pinch_trace(M, Fraction(3), 2) == Fraction(4, 9)

    def test_pinch_trace_needs_norm(self):
        with pytest.raises(HomologyError):
            pinch_trace([[2, -1], [-1, 2]], Fraction(2), 1)


class TestRankCache:
    def test_hits_and_misses(self):
        cache = RankCache()
        M = SparseMatrix.from_dense([[1, 1], [1, 1]])
        assert cache.rank(M, Q) == 1
        assert cache.rank(M, Q) == 1
        stats = cache.stats()
        assert stats["hits"] == 1 and stats["misses"] == 1

    def test_field_is_part_of_key(self):
        cache = RankCache()
        M = SparseMatrix.from_dense([[2]])
        assert cache.rank(M, Q) == 1
        assert cache.rank(M, F2) == 0

    def test_empty_shape_skips_cache(self):
        cache = RankCache()
        assert cache.rank(SparseMatrix.zero(0, 3), Q) == 0
        assert cache.stats()["misses"] == 0
