"""
Tests for growth samples, brackets, closed-form estimates, Mayer-Vietoris checks
and pinching.
"""

from fractions import Fraction

import pytest

from complexes.simplicial import build_complex
from covers.building import GraphProductSpec, QuotientTarget, building_quotient
from covers.cells import bouquet
from covers.permutation import CoverMap, build_cover, enumerate_covers
from evaluation import instances
from growth.estimates import (
    flag_version,
    field_dependence,
    graph_product_growth_estimate,
    raag_growth,
    relative_chamber_homology_check,
    verify_graph_product_bound,
    virtual_duality_check,
)
from growth.mayer_vietoris import (
    mv_inequality_check,
    nerve_relative_betti,
    vertex_star_decomposition,
)
from growth.parallel import THREADS_ENV, ordered_map, thread_cap
from growth.pinching import delta_pinch_search, mapping_torus_decay
from growth.samples import (
    GrowthError,
    GrowthSample,
    almost_additivity_holds,
    component_values,
    cover_family,
    disjoint_union_bracket,
    growth_bracket,
    normalized_betti,
    poset_limits,
    rebase_sample,
    sample_cover,
)
from homology.linalg import Field

Q = Field.rational()

CHAIN = [("b", "a"), ("c", "b")]


class TestSamples:
    def test_connected_cover_of_circle(self):
        X = bouquet(1)
        sample = sample_cover(X, CoverMap(X, 3, ((1, 2, 0),)), 1, Q)
        assert sample.value == Fraction(1, 3)
        assert sample.betti == 1
        assert sample.cover_id == "d3[(1 2 3)]"

    def test_trivial_cover_of_circle(self):
        X = bouquet(1)
        assert sample_cover(X, CoverMap.trivial(X, 2), 1, Q).value == 1

    def test_negative_value_rejected(self):
        with pytest.raises(GrowthError):
            GrowthSample("x", 1, 0, "q", Fraction(-1), 0)

    def test_dispatch_on_quotients(self):
        spec = GraphProductSpec.uniform(instances.two_points(), 2)
        quotient = building_quotient(spec, QuotientTarget.full(spec))
        sample = normalized_betti(quotient, quotient, 1, Q)
        assert sample.cover_id == "quotient-d4"
        assert sample.value == Fraction(1, 4)
        with pytest.raises(GrowthError):
            normalized_betti(quotient, "not a cover", 1, Q)

    def test_rebase(self):
        sample = GrowthSample("x", 2, 1, "q", Fraction(1), 2)
        rebased = rebase_sample(sample, 3)
        assert rebased.degree == 6
        assert rebased.value == Fraction(1, 3)
        with pytest.raises(GrowthError):
            rebase_sample(sample, 0)

    def test_component_values(self):
        X = bouquet(1)
        total = build_cover(X, CoverMap.trivial(X, 2))
        assert component_values(total, X, 1, Q) == [1, 1]


class TestPosetLimits:
    def test_directed_chain(self):
        values = {"a": Fraction(2), "b": Fraction(1), "c": Fraction(3, 2)}
        limits = poset_limits(values, CHAIN)
        assert limits.lower == limits.upper == Fraction(3, 2)
        assert limits.directed
        assert limits.maximal == ["c"]

    def test_two_maximal_covers(self):
        values = {"a": Fraction(1), "b": Fraction(2), "c": Fraction(3)}
        limits = poset_limits(values, [("b", "a"), ("c", "a")])
        assert not limits.directed
        assert limits.maximal == ["b", "c"]
        assert limits.upper == 2

    def test_bad_refinements(self):
        values = {"a": Fraction(1), "b": Fraction(1)}
        with pytest.raises(GrowthError):
            poset_limits(values, [("a", "b"), ("b", "a")])
        with pytest.raises(GrowthError):
            poset_limits(values, [("a", "z")])
        with pytest.raises(GrowthError):
            poset_limits({}, [])

    def test_almost_additivity(self):
        f = {"a": Fraction(2), "b": Fraction(1), "c": Fraction(3, 2)}
        g = {"a": Fraction(0), "b": Fraction(1), "c": Fraction(1)}
        report = almost_additivity_holds(f, g, CHAIN)
        assert report.holds
        assert report.total.lower == Fraction(5, 2)

    def test_almost_additivity_needs_directed_sample(self):
        f = {"a": Fraction(1), "b": Fraction(1), "c": Fraction(1)}
        with pytest.raises(GrowthError):
            almost_additivity_holds(f, f, [("b", "a"), ("c", "a")])


class TestBrackets:
    def test_disconnected_family(self):
        X = bouquet(1)
        covers, refinements = cover_family(X, 2, transitive_only=False)
        assert len(covers) == 3
        assert sorted(refinements) == [("d2[()]", "d1[()]"), ("d2[(1 2)]", "d1[()]")]

    def test_circle_family(self):
        X = bouquet(1)
        covers, refinements = cover_family(X, 3)
        assert [c.identifier for c in covers] == ["d1[()]", "d2[(1 2)]", "d3[(1 2 3)]"]
        assert sorted(refinements) == [("d2[(1 2)]", "d1[()]"), ("d3[(1 2 3)]", "d1[()]")]
        samples = [sample_cover(X, c, 1, Q) for c in covers]
        bracket = growth_bracket(samples, refinements)
        assert bracket.observed_min == Fraction(1, 3)
        assert bracket.observed_max == 1
        assert bracket.sample_count == 3
        assert bracket.caveat
        assert not bracket.directed
        assert bracket.contains(Fraction(1, 2))

    def test_bracket_validation(self):
        a = GrowthSample("a", 2, 1, "q", Fraction(1), 2)
        b = GrowthSample("b", 3, 1, "q", Fraction(1), 3)
        with pytest.raises(GrowthError):
            growth_bracket([])
        with pytest.raises(GrowthError):
            growth_bracket([a, GrowthSample("c", 2, 1, "f2", Fraction(1), 2)])
        with pytest.raises(GrowthError):
            growth_bracket([a, a])
        with pytest.raises(GrowthError):
            growth_bracket([a, b], [("b", "a")])

    def test_disjoint_union_adds(self):
        a = growth_bracket([GrowthSample("a", 1, 1, "q", Fraction(1), 1)])
        b = growth_bracket([GrowthSample("b", 1, 1, "q", Fraction(1, 2), 1)])
        union = disjoint_union_bracket(a, b)
        assert union.lower == union.upper == Fraction(3, 2)


class TestClosedForms:
    def test_raag_growth(self):
        assert raag_growth(instances.cycle(5), 2, Q) == 1
        assert raag_growth(instances.two_points(), 1, Q) == 1
        assert raag_growth(instances.point(), 1, Q) == 0
        with pytest.raises(GrowthError):
            raag_growth(instances.hollow_triangle(), 1, Q)

    def test_pentagon_estimate(self):
        spec = GraphProductSpec.uniform(instances.cycle(5), 3)
        estimate = graph_product_growth_estimate(spec, 2, Q)
        assert estimate.center == 1
        assert estimate.error == Fraction(40, 3)
        assert estimate.interval() == (Fraction(-37, 3), Fraction(43, 3))

    def test_free_product_bound(self):
        spec = GraphProductSpec.uniform(instances.two_points(), 5)
        report = verify_graph_product_bound(spec, QuotientTarget.full(spec), 1, Q)
        assert report.value == Fraction(16, 25)
        assert report.center == 1
        assert report.error == Fraction(4, 5)
        assert report.top_degree and report.top_bound == 2
        assert report.holds

    def test_contractible_link(self):
        spec = GraphProductSpec.uniform(instances.edge(), 2)
        report = verify_graph_product_bound(spec, QuotientTarget.full(spec), 1, Q)
        assert report.value == 0
        assert report.holds
        assert not report.top_degree

    def test_relative_chamber_homology(self):
        report = relative_chamber_homology_check(instances.cycle(5), 2, Q)
        assert report.relative_betti == 1
        assert report.holds

    def test_virtual_duality(self):
        assert virtual_duality_check(instances.cycle(5)).dimension == 2
        assert virtual_duality_check(instances.two_points()).dimension == 1
        assert virtual_duality_check(instances.point()).dimension == 0

    def test_virtual_duality_fails_on_mixed_degrees(self):
        names = [f"v{i}" for i in range(4)]
        square = [[names[i], names[(i + 1) % 4]] for i in range(4)]
        report = virtual_duality_check(build_complex(square, names + ["x"]))
        assert not report.holds
        assert report.witness == ()

    def test_field_dependence(self):
        result = field_dependence(flag_version(instances.rp2()), 2, 2)
        assert result.center_q == 0
        assert result.center_p == 1
        assert result.differs

    def test_flag_version_keeps_flag_complexes(self):
        L = instances.cycle(5)
        assert flag_version(L) is L


class TestMayerVietoris:
    def test_pentagon_star(self):
        decomposition = vertex_star_decomposition(instances.cycle(5), "v0")
        X = decomposition.X
        covers = enumerate_covers(X, 3, min_degree=1)
        report = mv_inequality_check(
            X, decomposition.A1, decomposition.A2, decomposition.B, covers, 1, Q,
            retraction_degree=2,
        )
        assert report.holds
        assert len(report.records) == len(covers)
        trivial = report.records[0]
        assert (trivial.x, trivial.a1, trivial.a2, trivial.b_k_minus_1) == (1, 0, 0, 2)
        assert "lower_A1 <= lower_X" in report.statements
        assert all(report.statements.values())

    def test_pieces_must_cover(self):
        d = vertex_star_decomposition(instances.cycle(5), "v0")
        with pytest.raises(GrowthError):
            mv_inequality_check(d.X, d.A1, d.A1, d.A1, [], 1, Q)

    def test_nerve_of_wedge(self):
        X = bouquet(2)
        pieces = [X.subcomplex([(0, 0), (1, i)]) for i in range(2)]
        flags = {frozenset([0]): True, frozenset([1]): True}
        assert nerve_relative_betti(X, pieces, flags, 1, Q) == 1

    def test_nerve_needs_point_intersections(self):
        X = bouquet(2)
        pieces = [X.subcomplex([(0, 0), (1, i)]) for i in range(2)]
        with pytest.raises(GrowthError):
            nerve_relative_betti(X, pieces, {}, 1, Q)
        with pytest.raises(GrowthError):
            nerve_relative_betti(X, pieces[:1], {frozenset([0]): True}, 1, Q)


class TestPinching:
    def test_circle_is_pinched(self):
        report = delta_pinch_search(bouquet(1), Fraction(1, 4), threads=1)
        assert report.found
        assert report.cover_id == "d4[(1 2 3 4)]"
        assert report.candidates_tried == 1
        assert report.window_max == Fraction(1, 4)
        assert report.width == Fraction(1, 6)
        assert report.trace_dominates

    def test_narrow_window_not_found(self):
        report = delta_pinch_search(bouquet(1), Fraction(1, 20), threads=1)
        assert not report.found
        assert report.width is None

    def test_delta_must_be_positive(self):
        with pytest.raises(GrowthError):
            delta_pinch_search(bouquet(1), Fraction(0))

    def test_torus_decay(self):
        identity = {v: v for v in instances.cycle(3).vertices}
        report = mapping_torus_decay(instances.cycle(3), identity, 1, Q, [1, 2, 4])
        assert report.values == [2, 1, Fraction(1, 2)]
        assert report.non_increasing


class TestParallel:
    def test_results_keep_input_order(self):
        assert ordered_map(lambda x: x * x, range(10), threads=4) == [x * x for x in range(10)]

    def test_env_caps_threads(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "2")
        assert thread_cap(8) == 2

    def test_bad_env_ignored(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "many")
        assert thread_cap(3) == 3
