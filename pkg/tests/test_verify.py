import pytest

from gspec import (
    ClosureOrder,
    ElementMismatch,
    Order,
    brute_force_discrete_law,
    brute_force_perfect_law,
    build_order,
    check_piecewise,
    check_refinement,
    mutate_discrete,
    mutate_perfect,
    onestep_order,
    preset,
    run_suite,
    standard_order,
    validate_filtration,
)


def as_closure(order: Order) -> ClosureOrder:
    return ClosureOrder(order, ("test",))


class TestRefinement:
    def test_standard_to_onestep_passes(self):
        poset = preset("LOC2")
        report = check_refinement(standard_order(poset), onestep_order(poset, {"m"}))
        assert report.passed

    def test_reflexive(self):
        co = standard_order(preset("LOC2"))
        assert check_refinement(co, co).passed

    def test_swapped_direction_fails_with_pair(self):
        poset = preset("LOC2")
        discrete = as_closure(build_order(poset.base.elements, []))
        report = check_refinement(discrete, standard_order(poset))
        assert not report.passed
        assert ("pair", "(o,m)") in report.counterexample

    def test_element_mismatch(self):
        a = as_closure(build_order(["a"], []))
        b = as_closure(build_order(["b"], []))
        with pytest.raises(ElementMismatch):
            check_refinement(a, b)


class TestPiecewise:
    def test_loc2_second_step(self):
        poset = preset("LOC2")
        h1 = onestep_order(poset, {"m"})
        E = {"o", "p1", "p2", "p3", "p4", "p5"}
        post = mutate_perfect(h1, E)
        assert check_piecewise(h1, post, E).passed

    def test_identity_mutation(self):
        co = standard_order(preset("LOC2"))
        assert check_piecewise(co, co, set()).passed

    def test_tampered_part_fails(self):
        poset = preset("LOC2")
        h1 = onestep_order(poset, {"m"})
        E = {"o", "p1", "p2", "p3", "p4", "p5"}
        post = mutate_perfect(h1, E)
        tampered = as_closure(
            build_order(
                post.order.elements,
                sorted(post.order.strict_pairs() - {("o", "p1")}),
            )
        )
        report = check_piecewise(h1, tampered, E)
        assert not report.passed
        assert ("part", "E") in report.counterexample


class TestDiscreteLaw:
    def test_three_point_example(self):
        poset_doc = {"elements": ["o", "a", "x"], "covers": [["o", "a"]]}
        from gspec import load_prime_poset
        co = standard_order(load_prime_poset(poset_doc))
        post = mutate_discrete(co, {"o"})
        assert brute_force_discrete_law(co, {"o"}, post).passed

    def test_empty_class_degenerates_to_equality(self):
        co = standard_order(preset("LOC2"))
        assert brute_force_discrete_law(co, set(), co).passed
        other = as_closure(build_order(co.order.elements, []))
        assert not brute_force_discrete_law(co, set(), other).passed

    def test_corrupted_post_fails(self):
        from gspec import load_prime_poset
        co = standard_order(load_prime_poset(
            {"elements": ["o", "a", "x"], "covers": [["o", "a"]]}
        ))
        corrupted = as_closure(build_order(["o", "a", "x"], [("x", "a")]))
        report = brute_force_discrete_law(co, {"o"}, corrupted)
        assert not report.passed
        assert report.counterexample


class TestPerfectLaw:
    def test_loc2_second_step(self):
        poset = preset("LOC2")
        h1 = onestep_order(poset, {"m"})
        E = {"o", "p1", "p2", "p3", "p4", "p5"}
        post = mutate_perfect(h1, E)
        assert brute_force_perfect_law(h1, E, post).passed

    def test_full_class_means_identity(self):
        poset = preset("LOC2")
        co = standard_order(poset)
        E = set(poset.base.elements)
        assert brute_force_perfect_law(co, E, co).passed
        assert not brute_force_perfect_law(
            co, E, as_closure(build_order(co.order.elements, []))
        ).passed

    def test_corrupted_post_fails(self):
        poset = preset("LOC2")
        h1 = onestep_order(poset, {"m"})
        E = {"o", "p1", "p2", "p3", "p4", "p5"}
        corrupted = as_closure(build_order(h1.order.elements, [("p1", "m")]))
        assert not brute_force_perfect_law(h1, E, corrupted).passed


class TestRandomisedLaws:
    """The rewrite rules against the enumeration laws on random inputs."""

    def _random_cases(self, rng, count=60):
        from conftest import random_order
        from gspec import enumerate_closed_sets
        produced = 0
        while produced < count:
            order = random_order(rng, max_size=6)
            closed = enumerate_closed_sets(order)
            E = closed[rng.randrange(len(closed))]
            yield as_closure(order), E
            produced += 1

    def test_discrete_law_random(self, rng):
        from gspec import NotDiscrete
        for co, E in self._random_cases(rng):
            try:
                post = mutate_discrete(co, E)
            except NotDiscrete:
                continue
            assert brute_force_discrete_law(co, E, post).passed

    def test_perfect_law_random(self, rng):
        for co, E in self._random_cases(rng):
            post = mutate_perfect(co, E)
            assert brute_force_perfect_law(co, E, post).passed

    def test_general_brackets_random(self, rng):
        from gspec import mutate_general
        for co, E in self._random_cases(rng):
            bounds = mutate_general(co, E)
            assert bounds.lower.order.relation <= bounds.upper.order.relation
            assert bounds.upper.order.relation <= co.order.relation
            assert check_piecewise(co, bounds.lower, E).passed
            assert check_piecewise(co, bounds.upper, E).passed


class TestRunSuite:
    def test_loc2_two_step_all_pass(self):
        poset = preset("LOC2")
        filt = validate_filtration(poset, [{"m"}, {"m"}])
        reports = run_suite(poset, filt)
        assert reports and all(r.passed for r in reports)

    def test_loc3_height_all_pass_and_discrete(self):
        from gspec import chain_order, final_order, height_filtration
        poset = preset("LOC3")
        filt = height_filtration(poset)
        assert all(r.passed for r in run_suite(poset, filt))
        final = final_order(chain_order(poset, filt), poset)
        assert final.exact and final.lower.order.is_discrete()

    def test_nagata_poly_contrast(self):
        results = {}
        for name in ("POLY2", "NAGATA2"):
            poset = preset(name)
            filt = validate_filtration(poset, [{"a", "m"}])
            assert all(r.passed for r in run_suite(poset, filt))
            results[name] = onestep_order(poset, {"a", "m"}).order.strict_pairs()
        assert results["NAGATA2"] - results["POLY2"] == {("o", "m")}
        assert results["POLY2"] <= results["NAGATA2"]

    def test_reports_are_deterministic(self):
        poset = preset("LOC2M")
        filt = validate_filtration(poset, [{"m"}, {"m"}])
        first = [r.name for r in run_suite(poset, filt)]
        second = [r.name for r in run_suite(poset, filt)]
        assert first == second

    def test_bounded_chain_checks_upper(self):
        poset = preset("LOC3")
        filt = validate_filtration(poset, [{"r1", "r2", "r3", "m"}, {"m"}])
        reports = run_suite(poset, filt)
        names = [r.name for r in reports]
        assert "step-2:piecewise-upper" in names
        assert all(r.passed for r in reports)

    def test_failing_report_requires_witness(self):
        from gspec import PropertyReport
        with pytest.raises(ValueError):
            PropertyReport("broken", False)
