"""
Tests for simplicial complexes and the cubical chamber.
"""

import numpy as np
import pytest

from complexes.chamber import CubicalChamber, davis_chamber
from complexes.simplicial import (
    ComplexError,
    SimplicialComplex,
    barycentric_subdivision,
    build_complex,
    closed_star,
    full_subcomplex,
    is_flag,
    is_no_square,
    link,
    octahedralize,
)
from evaluation import instances


class TestBuildComplex:
    def test_downward_closure(self):
        K = instances.triangle()
        assert K.f_vector() == [3, 3, 1]
        assert K.dim == 2
        assert K.euler_characteristic() == 1

    def test_isolated_vertices_keep_listed_order(self):
        K = build_complex([["c", "d"]], ["b", "a"])
        assert K.vertices == ("b", "a", "c", "d")
        assert K.f_vector() == [4, 1]

    def test_repeated_vertex_rejected(self):
        with pytest.raises(ComplexError):
            build_complex([["a", "a"]])

    def test_malformed_identifier_rejected(self):
        with pytest.raises(ComplexError):
            build_complex([["a b", "c"]])

    def test_not_downward_closed_rejected(self):
        with pytest.raises(ComplexError):
            SimplicialComplex(["a", "b", "c"], [(0, 1, 2)])

    def test_equality_ignores_vertex_order(self):
        assert build_complex([["a", "b"]]) == build_complex([["b", "a"]], ["b", "a"])

    def test_maximal_simplices(self):
        K = build_complex([["a", "b", "c"], ["c", "d"]])
        names = sorted(K.names(s) for s in K.maximal_simplices())
        assert names == [("a", "b", "c"), ("c", "d")]

    def test_connectivity(self):
        assert instances.cycle(5).is_connected()
        assert not instances.two_points().is_connected()


class TestFlagness:
    def test_cycles_of_length_four_or_more_are_flag(self):
        assert is_flag(instances.cycle(4)).holds
        assert is_flag(instances.cycle(5)).holds

    def test_hollow_triangle_witness(self):
        check = is_flag(instances.hollow_triangle())
        assert not check.holds
        assert check.witness == ("v0", "v1", "v2")

    def test_rp2_is_not_flag(self):
        assert not is_flag(instances.rp2()).holds

    def test_barycentric_subdivision_is_flag(self):
        assert is_flag(barycentric_subdivision(instances.rp2())).holds

    def test_square_witness(self):
        check = is_no_square(instances.cycle(4))
        assert not check.holds
        assert check.witness == ("v0", "v1", "v2", "v3")

    def test_pentagon_has_no_square(self):
        assert is_no_square(instances.cycle(5)).holds

    def test_octahedron_has_squares(self):
        K = instances.octahedron_boundary()
        assert is_flag(K).holds
        assert not is_no_square(K).holds

    def test_no_square_requires_flag(self):
        with pytest.raises(ComplexError):
            is_no_square(instances.hollow_triangle())


class TestConstructions:
    def test_link_of_vertex_in_pentagon(self):
        lk = link(instances.cycle(5), ["v0"])
        assert set(lk.vertices) == {"v1", "v4"}
        assert lk.f_vector() == [2]

    def test_link_of_non_simplex(self):
        with pytest.raises(ComplexError):
            link(instances.cycle(5), ["v0", "v2"])

    def test_closed_star(self):
        star = closed_star(instances.cycle(5), "v0")
        assert star.f_vector() == [3, 2]

    def test_full_subcomplex(self):
        sub = full_subcomplex(instances.cycle(5), ["v0", "v1", "v2"])
        assert sub.f_vector() == [3, 2]
        assert sub.vertices == ("v0", "v1", "v2")

    def test_star_and_complement_meet_in_link(self):
        K = instances.octahedron_boundary()
        star = closed_star(K, "n")
        rest = full_subcomplex(K, [v for v in K.vertices if v != "n"])
        common = {frozenset(star.names(s)) for s in star.simplices} & {
            frozenset(rest.names(s)) for s in rest.simplices
        }
        lk = link(K, ["n"])
        assert common == {frozenset(lk.names(s)) for s in lk.simplices}

    def test_barycentric_subdivision_counts(self):
        assert barycentric_subdivision(instances.edge()).f_vector() == [3, 2]
        assert barycentric_subdivision(instances.triangle()).f_vector() == [7, 12, 6]

    def test_subdivision_keeps_euler_characteristic(self):
        K = instances.rp2()
        assert barycentric_subdivision(K).euler_characteristic() == K.euler_characteristic() == 1


class TestOctahedralize:
    def test_edge_gives_four_cycle(self):
        octa = octahedralize(instances.edge())
        assert octa.complex.f_vector() == [4, 4]
        assert octa.complex.vertices == ("a+", "a-", "b+", "b-")

    def test_counts_double_per_vertex(self):
        K = instances.triangle()
        OL = octahedralize(K).complex
        assert OL.f_vector() == [2 ** (k + 1) * n for k, n in enumerate(K.f_vector())]

    def test_projection_preserves_order(self):
        K = instances.cycle(4)
        octa = octahedralize(K)
        for simplex in octa.complex.simplices:
            base = octa.project(simplex, K)
            assert len(base) == len(simplex)
            assert [octa.projection[v] for v in octa.complex.names(simplex)] == list(K.names(base))

    def test_flag_complex_stays_flag(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            L = instances.random_flag_complex(rng, 6, 0.5)
            assert is_flag(octahedralize(L).complex).holds


class TestChamber:
    def test_point_chamber_is_an_interval(self):
        chamber = davis_chamber(instances.point())
        assert len(chamber.cubes) == 3
        assert chamber.boundary_cube_count() == 1
        assert chamber.euler_characteristic() == 1

    def test_pentagon_chamber(self):
        chamber = davis_chamber(instances.cycle(5))
        assert len(chamber.cubes) == 31
        assert chamber.boundary_cube_count() == 20
        assert chamber.euler_characteristic() == 1
        assert [len(chamber.cubes_of_dim(k)) for k in range(3)] == [11, 15, 5]

    def test_mirror(self):
        chamber = davis_chamber(instances.edge())
        assert len(chamber.mirror("a")) == 3

    def test_faces_of_a_square(self):
        square = ((), (0, 1))
        faces = dict(CubicalChamber.faces(square))
        assert faces == {
            ((0,), (0, 1)): 1,
            ((), (1,)): -1,
            ((1,), (0, 1)): -1,
            ((), (0,)): 1,
        }

    def test_requires_flag(self):
        with pytest.raises(ComplexError):
            davis_chamber(instances.hollow_triangle())
