import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_lower_sets, brute_upper_sets, powerset
from gspec import (
    CycleError,
    Order,
    SizeExceeded,
    UnknownElement,
    build_order,
    cb_filtration,
    check_axioms,
    covering_pairs,
    enumerate_closed_sets,
    longest_chain,
)


@st.composite
def orders(draw, max_size=6):
    n = draw(st.integers(min_value=0, max_value=max_size))
    names = [f"x{i}" for i in range(n)]
    relations = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if draw(st.booleans())
    ]
    return build_order(names, relations)


CHAIN3 = build_order(["o", "p", "m"], [("o", "p"), ("p", "m")])
DIAMOND = build_order(["o", "a", "b", "m"], [("o", "a"), ("o", "b"), ("a", "m"), ("b", "m")])


class TestBuildOrder:
    def test_two_point_chain(self):
        order = build_order(["o", "m"], [("o", "m")])
        assert order.relation == {("o", "o"), ("m", "m"), ("o", "m")}

    def test_reflexive_singleton(self):
        order = build_order(["a"], [])
        assert order.relation == {("a", "a")}

    def test_antisymmetry_violation(self):
        with pytest.raises(CycleError):
            build_order(["a", "b"], [("a", "b"), ("b", "a")])

    def test_longer_cycle(self):
        with pytest.raises(CycleError):
            build_order(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])

    def test_unknown_endpoint(self):
        with pytest.raises(UnknownElement):
            build_order(["a"], [("a", "zz")])

    def test_transitivity_computed(self):
        assert CHAIN3.leq("o", "m")


class TestPointQueries:
    def test_spcl_chain(self):
        assert CHAIN3.spcl("o") == {"o", "p", "m"}

    def test_gncl_chain(self):
        assert CHAIN3.gncl("m") == {"o", "p", "m"}

    def test_gncl_diamond_matches_enumeration(self):
        # Oracle: intersect every lower set containing the point.
        lowers = [S for S in brute_lower_sets(DIAMOND) if "a" in S]
        expected = frozenset.intersection(*lowers)
        assert expected == {"o", "a"}
        assert DIAMOND.gncl("a") == expected

    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            CHAIN3.spcl("zz")


class TestSubsets:
    def test_chain_upper_not_lower(self):
        order = build_order(["o", "m"], [("o", "m")])
        assert order.is_upper_set({"m"})
        assert not order.is_lower_set({"m"})

    def test_empty_set_both(self):
        order = build_order(["o", "m"], [("o", "m")])
        assert order.is_upper_set(set())
        assert order.is_lower_set(set())

    def test_diamond_upper_matches_enumeration(self):
        assert frozenset({"a", "m"}) in brute_upper_sets(DIAMOND)
        assert DIAMOND.is_upper_set({"a", "m"})

    def test_subspace_of_chain(self):
        sub = CHAIN3.subspace({"o", "m"})
        assert sub == build_order(["o", "m"], [("o", "m")])

    def test_subspace_identity(self):
        assert DIAMOND.subspace(DIAMOND.elements) == DIAMOND

    def test_subspace_antichain(self):
        sub = DIAMOND.subspace({"a", "b"})
        assert sub.is_discrete()


class TestCbFiltration:
    def test_three_chain(self):
        # Layer by layer: first the top, then the middle, then everything.
        cb = cb_filtration(CHAIN3)
        assert cb.layers == (frozenset({"m"}), frozenset({"m", "p"}),
                             frozenset({"m", "o", "p"}))
        assert cb.rank == 2

    def test_antichain(self):
        order = build_order(["a", "b", "c"], [])
        cb = cb_filtration(order)
        assert cb.rank == 0
        assert cb.layers == (frozenset({"a", "b", "c"}),)

    def test_empty(self):
        cb = cb_filtration(build_order([], []))
        assert cb.rank == -1
        assert cb.layers == ()


class TestCheckAxioms:
    def test_t0_always(self):
        assert check_axioms(DIAMOND).t0

    def test_two_chain_irreducibles(self):
        order = build_order(["o", "m"], [("o", "m")])
        report = check_axioms(order)
        assert report.sober
        assert {(frozenset({"o"}), "o"), (frozenset({"o", "m"}), "m")} == set(
            report.irreducibles
        )

    def test_diamond_sober(self):
        report = check_axioms(DIAMOND)
        assert report.sober
        assert (frozenset({"o", "a", "b", "m"}), "m") in report.irreducibles

    def test_chain_conditions_recorded(self):
        report = check_axioms(CHAIN3)
        assert report.artinian and report.noetherian and report.ok


class TestEnumerateClosedSets:
    def test_two_chain(self):
        order = build_order(["o", "m"], [("o", "m")])
        assert enumerate_closed_sets(order) == (
            frozenset(), frozenset({"o"}), frozenset({"m", "o"})
        )

    def test_antichain_all_subsets(self):
        order = build_order(["a", "b"], [])
        assert set(enumerate_closed_sets(order)) == set(powerset(["a", "b"]))

    def test_diamond_six_lower_sets(self):
        got = enumerate_closed_sets(DIAMOND)
        assert got == (
            frozenset(),
            frozenset({"o"}),
            frozenset({"a", "o"}),
            frozenset({"b", "o"}),
            frozenset({"a", "b", "o"}),
            frozenset({"a", "b", "m", "o"}),
        )
        assert set(got) == brute_lower_sets(DIAMOND)

    def test_size_bound(self):
        big = build_order([f"x{i}" for i in range(9)], [])
        with pytest.raises(SizeExceeded):
            enumerate_closed_sets(big, bound=8)

    def test_upper_sets_are_complements(self):
        from gspec import upper_sets
        universe = frozenset(DIAMOND.elements)
        assert set(upper_sets(DIAMOND)) == {
            universe - S for S in enumerate_closed_sets(DIAMOND)
        }
        assert set(upper_sets(DIAMOND)) == brute_upper_sets(DIAMOND)


class TestProperties:
    @given(orders())
    def test_relation_reflexive_transitive_antisymmetric(self, order):
        rel = order.relation
        assert all((p, p) in rel for p in order.elements)
        assert all(
            (p, s) in rel for (p, q) in rel for (r, s) in rel if q == r
        )
        assert not any(p != q and (q, p) in rel for (p, q) in rel)

    @given(orders(), st.data())
    def test_lower_iff_complement_upper(self, order, data):
        S = frozenset(data.draw(st.sets(st.sampled_from(sorted(order.elements)))) if order.elements else set())
        complement = frozenset(order.elements) - S
        assert order.is_lower_set(S) == order.is_upper_set(complement)

    @given(orders())
    def test_cb_layers_are_maxima_strata(self, order):
        cb = cb_filtration(order)
        previous = frozenset()
        for layer in cb.layers:
            remaining = frozenset(order.elements) - previous
            assert layer - previous == order.maximal_elements(remaining)
            previous = layer
        assert cb.rank == longest_chain(order)

    @given(orders())
    @settings(max_examples=40)
    def test_enumeration_matches_definition(self, order):
        assert set(enumerate_closed_sets(order)) == brute_lower_sets(order)

    @given(orders(), st.data())
    @settings(max_examples=40)
    def test_unions_intersections_of_lower_sets(self, order, data):
        closed = enumerate_closed_sets(order)
        family = data.draw(
            st.lists(st.sampled_from(list(closed)), min_size=1, max_size=4)
        )
        union = frozenset().union(*family)
        intersection = frozenset.intersection(*family)
        assert order.is_lower_set(union)
        assert order.is_lower_set(intersection)

    @given(orders())
    def test_covers_regenerate_order(self, order):
        rebuilt = build_order(order.elements, covering_pairs(order))
        assert rebuilt == order
