"""
Tests for cell complexes, permutation covers, building quotients and mapping tori.
"""

import pytest

from complexes.chamber import davis_chamber
from covers.building import (
    GraphProductSpec,
    QuotientTarget,
    boundary_preimage,
    building_quotient,
    expected_cell_count,
    quotient_targets,
)
from covers.cells import (
    CoverError,
    bouquet,
    disk_cells,
    from_simplicial,
    pi1_presentation,
    torus_cells,
)
from covers.mapping_torus import cyclic_cover, mapping_torus
from covers.permutation import (
    CoverMap,
    build_cover,
    compose,
    compose_covers,
    enumerate_covers,
    format_cycles,
    identity,
    inverse,
    parse_cycles,
    refines,
    restrict_cover,
)
from evaluation import instances
from homology.chains import betti_numbers
from homology.linalg import Field

Q = Field.rational()
F2 = Field.mod(2)


def homology(X, field=Q):
    return betti_numbers(X.chain_complex(), field)


class TestCellComplexes:
    def test_bouquet(self):
        X = bouquet(2)
        assert X.counts() == [1, 2]
        assert homology(X) == [1, 2]

    def test_torus_and_disk(self):
        assert homology(torus_cells()) == [1, 2, 1]
        assert homology(disk_cells()) == [1, 0, 0]

    def test_simplicial_cells_match_simplicial_homology(self):
        X = from_simplicial(instances.rp2())
        assert X.counts() == [6, 15, 10]
        assert homology(X, Q) == [1, 0, 0]
        assert homology(X, F2) == [1, 1, 1]

    def test_presentation_of_torus(self):
        presentation = pi1_presentation(torus_cells())
        assert presentation.generators == (0, 1)
        assert presentation.format_relator(presentation.relators[0]) == "aba⁻¹b⁻¹"

    def test_presentation_drops_forest_edges(self):
        presentation = pi1_presentation(from_simplicial(instances.cycle(4)))
        assert len(presentation.generators) == 1
        assert len(presentation.forest) == 3

    def test_norm_bound_counts_loops_twice(self):
        assert bouquet(1).norm_bound(1) == 4
        assert from_simplicial(instances.cycle(3)).norm_bound(1) == 4

    def test_subcomplex_must_be_closed(self):
        with pytest.raises(CoverError):
            torus_cells().subcomplex([(2, 0)])

    def test_components(self):
        X = from_simplicial(instances.two_points())
        assert X.connected_components() == [[0], [1]]
        assert not X.is_connected()


class TestPermutations:
    def test_cycle_notation(self):
        assert parse_cycles("(1 2 3)", 3) == (1, 2, 0)
        assert parse_cycles("(1,2)(3 4)", 4) == (1, 0, 3, 2)
        assert format_cycles((1, 2, 0)) == "(1 2 3)"
        assert format_cycles(identity(3)) == "()"

    def test_cycle_notation_errors(self):
        with pytest.raises(CoverError):
            parse_cycles("(1 2", 3)
        with pytest.raises(CoverError):
            parse_cycles("(1 2)(2 3)", 3)
        with pytest.raises(CoverError):
            parse_cycles("(1 4)", 3)

    def test_inverse(self):
        p = (2, 0, 3, 1)
        assert compose(p, inverse(p)) == identity(4)
        assert compose(inverse(p), p) == identity(4)


class TestCoverMaps:
    def test_relator_must_act_trivially(self):
        with pytest.raises(CoverError):
            CoverMap(torus_cells(), 3, ((1, 0, 2), (0, 2, 1)))

    def test_commuting_permutations_cover_the_torus(self):
        X = torus_cells()
        cover = CoverMap(X, 3, ((1, 2, 0), (2, 0, 1)))
        assert cover.transitive
        assert build_cover(X, cover).is_connected()

    def test_wrong_generator_count(self):
        with pytest.raises(CoverError):
            CoverMap(bouquet(2), 2, ((1, 0),))

    def test_not_a_permutation(self):
        with pytest.raises(CoverError):
            CoverMap(bouquet(1), 2, ((0, 0),))

    def test_trivial_cover_components(self):
        assert CoverMap.trivial(bouquet(1), 2).component_count() == 2

    def test_cover_of_wedge(self):
        X = bouquet(2)
        cover = CoverMap(X, 2, ((1, 0), (0, 1)))
        Y = build_cover(X, cover)
        assert Y.counts() == [2, 4]
        assert Y.degree == 2
        assert Y.is_connected()
        assert homology(Y) == [1, 3]

    def test_cover_of_torus_is_torus(self):
        X = torus_cells()
        Y = build_cover(X, CoverMap(X, 3, ((1, 2, 0), (0, 1, 2))))
        assert Y.counts() == [3, 6, 3]
        assert homology(Y) == [1, 2, 1]

    def test_cover_over_other_complex_rejected(self):
        cover = CoverMap.trivial(bouquet(1), 2)
        with pytest.raises(CoverError):
            build_cover(bouquet(1), cover)

    def test_gauge_normalization(self):
        X = from_simplicial(instances.cycle(3))
        cover = CoverMap.from_edge_permutations(X, 2, {0: (1, 0)})
        assert cover.permutations == ((1, 0),)
        assert build_cover(X, cover).is_connected()

    def test_restriction_to_a_loop(self):
        X = torus_cells()
        cover = CoverMap(X, 2, ((1, 0), (0, 1)))
        A = X.subcomplex([(0, 0), (1, 0)])
        restricted = restrict_cover(X, cover, A)
        assert restricted.base is A
        assert restricted.permutations == ((1, 0),)

    def test_composition(self):
        X = bouquet(1)
        lower = CoverMap(X, 2, ((1, 0),))
        Y = build_cover(X, lower)
        upper = CoverMap(Y, 2, ((1, 0),))
        composed = compose_covers(lower, upper)
        assert composed.degree == 4
        assert composed.transitive
        assert refines(composed, lower)
        assert not refines(lower, composed)


class TestRefinement:
    def test_trivial_covers(self):
        X = bouquet(1)
        assert refines(CoverMap.trivial(X, 2), CoverMap.trivial(X, 2))
        assert refines(CoverMap.trivial(X, 4), CoverMap.trivial(X, 2))
        assert refines(CoverMap.trivial(X, 3), CoverMap.trivial(X))

    def test_degree_must_divide(self):
        X = bouquet(1)
        assert not refines(CoverMap.trivial(X), CoverMap.trivial(X, 2))
        assert not refines(CoverMap(X, 3, ((1, 0, 2),)), CoverMap(X, 2, ((1, 0),)))

    def test_disconnected_finer_covers(self):
        X = bouquet(1)
        swap = CoverMap(X, 2, ((1, 0),))
        assert refines(CoverMap(X, 3, ((1, 0, 2),)), CoverMap.trivial(X))
        assert refines(CoverMap(X, 4, ((1, 0, 3, 2),)), swap)
        # fixed sheets 3 and 4 have nowhere equivariant to go
        assert not refines(CoverMap(X, 4, ((1, 0, 2, 3),)), swap)
        assert refines(CoverMap(X, 4, ((1, 0, 2, 3),)), CoverMap.trivial(X, 2))

    def test_fibres_must_be_even(self):
        X = bouquet(1)
        swap = CoverMap(X, 2, ((1, 0),))
        assert not refines(swap, CoverMap.trivial(X, 2))
        assert not refines(CoverMap.trivial(X, 2), swap)

    def test_two_generators(self):
        X = torus_cells()
        finer = CoverMap(X, 4, ((1, 0, 3, 2), (2, 3, 0, 1)))
        assert refines(finer, CoverMap(X, 2, ((1, 0), (0, 1))))
        assert refines(finer, CoverMap(X, 2, ((0, 1), (1, 0))))
        assert not refines(CoverMap(X, 2, ((1, 0), (0, 1))), CoverMap(X, 2, ((0, 1), (1, 0))))

    def test_different_bases(self):
        with pytest.raises(CoverError):
            refines(CoverMap.trivial(bouquet(1), 2), CoverMap.trivial(bouquet(1)))


class TestEnumeration:
    def test_circle_covers(self):
        covers = enumerate_covers(bouquet(1), 3)
        assert [c.degree for c in covers] == [2, 2, 3, 3, 3]
        assert covers[0].identifier == "d2[()]"

    def test_transitive_only(self):
        covers = enumerate_covers(bouquet(1), 3, transitive_only=True)
        assert [c.identifier for c in covers] == ["d2[(1 2)]", "d3[(1 2 3)]"]

    def test_min_degree_one_includes_trivial(self):
        covers = enumerate_covers(bouquet(1), 2, min_degree=1)
        assert covers[0].degree == 1

    def test_every_enumerated_cover_is_valid(self):
        X = torus_cells()
        for cover in enumerate_covers(X, 3):
            Y = build_cover(X, cover)
            assert Y.euler_characteristic() == 0

    def test_degree_limit(self):
        with pytest.raises(CoverError):
            enumerate_covers(bouquet(1), 7)


class TestBuildingQuotients:
    def test_spec_requires_flag(self):
        with pytest.raises(CoverError):
            GraphProductSpec.uniform(instances.hollow_triangle(), 2)

    def test_spec_rejects_bad_orders(self):
        L = instances.edge()
        with pytest.raises(CoverError):
            GraphProductSpec(L, {"a": 2})
        with pytest.raises(CoverError):
            GraphProductSpec(L, {"a": 2, "b": 1})

    def test_targets(self):
        spec = GraphProductSpec.uniform(instances.edge(), 2)
        targets = quotient_targets(spec)
        assert [t.order() for t in targets] == [1, 2, 2, 4]
        assert targets[-1].identifier(spec) == "Q[2,2]"
        assert targets[-1].refines(targets[1])

    def test_divisor_must_divide(self):
        spec = GraphProductSpec.uniform(instances.edge(), 4)
        with pytest.raises(CoverError):
            QuotientTarget({"a": 3, "b": 1}).validate(spec)

    def test_free_product_quotient_is_a_circle(self):
        spec = GraphProductSpec.uniform(instances.two_points(), 2)
        X = building_quotient(spec, QuotientTarget.full(spec))
        assert X.counts() == [8, 8]
        assert X.degree == 4
        assert homology(X) == [1, 1]

    def test_cell_counts_follow_stabilizers(self):
        spec = GraphProductSpec.uniform(instances.cycle(5), 2)
        target = QuotientTarget.full(spec)
        X = building_quotient(spec, target)
        chamber = davis_chamber(spec.L)
        for k in range(X.dim + 1):
            for i, cube in enumerate(chamber.cubes_of_dim(k)):
                lying_over = sum(1 for base in X.projection[k] if base == i)
                assert lying_over == expected_cell_count(spec, target, cube)

    def test_pentagon_quotient_is_a_closed_surface(self):
        spec = GraphProductSpec.uniform(instances.cycle(5), 2)
        X = building_quotient(spec, QuotientTarget.full(spec))
        assert X.counts() == [152, 320, 160]
        assert X.euler_characteristic() == -8
        assert homology(X, F2) == [1, 10, 1]

    def test_trivial_target_is_the_chamber(self):
        spec = GraphProductSpec.uniform(instances.edge(), 3)
        X = building_quotient(spec, QuotientTarget.trivial(spec))
        assert X.counts() == [4, 4, 1]
        assert homology(X) == [1, 0, 0]

    def test_boundary_preimage(self):
        spec = GraphProductSpec.uniform(instances.two_points(), 2)
        X = building_quotient(spec, QuotientTarget.full(spec))
        assert boundary_preimage(spec, X).counts() == [4]


class TestMappingTori:
    def test_identity_gives_torus(self):
        identity_map = {v: v for v in instances.cycle(3).vertices}
        T = mapping_torus(instances.cycle(3), identity_map)
        assert T.counts() == [3, 6, 3]
        assert homology(T) == [1, 2, 1]

    def test_reflection_gives_klein_bottle(self):
        K = instances.klein_bottle()
        assert K.euler_characteristic() == 0
        assert homology(K, Q) == [1, 1, 0]
        assert homology(K, F2) == [1, 2, 1]

    def test_map_must_be_simplicial(self):
        f = {"v0": "v0", "v1": "v2", "v2": "v2", "v3": "v3"}
        with pytest.raises(CoverError):
            mapping_torus(instances.cycle(4), f)

    def test_map_must_be_total(self):
        with pytest.raises(CoverError):
            mapping_torus(instances.cycle(3), {"v0": "v0"})

    def test_cyclic_cover_of_klein_bottle_is_a_torus(self):
        K = instances.klein_bottle()
        Y = build_cover(K, cyclic_cover(K, 2))
        assert Y.is_connected()
        assert homology(Y) == [1, 2, 1]

    def test_cyclic_cover_needs_interval_edges(self):
        with pytest.raises(CoverError):
            cyclic_cover(torus_cells(), 2)
