"""Brute-force oracles for the mutation engine.

Every law here is checked by exhaustive enumeration over subsets of a small
point set, with no code shared with the rewrite rules being validated, so
agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import filtration as spf
from . import mutation as mut
from .poset import (
    DEFAULT_ENUMERATION_BOUND,
    Order,
    SizeExceeded,
    cb_filtration,
    check_axioms,
    enumerate_closed_sets,
    longest_chain,
)
from .spectra import PrimePoset


class ElementMismatch(Exception):
    """Orders over different point sets cannot be compared."""


@dataclass(frozen=True)
class PropertyReport:
    name: str
    passed: bool
    counterexample: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self) -> None:
        if not self.passed and self.counterexample is None:
            raise ValueError("failing reports must carry a counterexample")

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = {k: v for k, v in self.counterexample}
        return out


def _witness(**kwargs: object) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((k, _show(v)) for k, v in kwargs.items()))


def _show(value: object) -> str:
    if isinstance(value, frozenset):
        return "{" + ",".join(sorted(value)) + "}"
    if isinstance(value, (set, list)):
        return "{" + ",".join(sorted(map(str, value))) + "}"
    if isinstance(value, tuple):
        return "(" + ",".join(map(str, value)) + ")"
    return str(value)


def _same_elements(pre: mut.ClosureOrder, post: mut.ClosureOrder) -> None:
    if pre.order.elements != post.order.elements:
        raise ElementMismatch(
            f"{pre.order.elements} versus {post.order.elements}"
        )


def check_refinement(pre: mut.ClosureOrder, post: mut.ClosureOrder, name: str = "refinement") -> PropertyReport:
    """Mutation only removes relations: post must be contained in pre."""
    _same_elements(pre, post)
    extra = post.order.relation - pre.order.relation
    if extra:
        return PropertyReport(name, False, _witness(pair=min(sorted(extra))))
    return PropertyReport(name, True)


def check_piecewise(
    pre: mut.ClosureOrder,
    post: mut.ClosureOrder,
    E: Iterable[str],
    name: str = "piecewise",
) -> PropertyReport:
    """E stays closed and both parts keep their subspace orders."""
    _same_elements(pre, post)
    E = frozenset(E)
    complement = frozenset(pre.order.elements) - E
    if not pre.order.is_lower_set(E):
        return PropertyReport(name, False, _witness(reason="E not closed before", E=E))
    if not post.order.is_lower_set(E):
        return PropertyReport(name, False, _witness(reason="E not closed after", E=E))
    for part, label in ((E, "E"), (complement, "complement")):
        before = pre.order.subspace(part).relation
        after = post.order.subspace(part).relation
        if before != after:
            delta = before ^ after
            return PropertyReport(
                name, False, _witness(part=label, pair=min(sorted(delta)))
            )
    return PropertyReport(name, True)


def brute_force_discrete_law(
    pre: mut.ClosureOrder,
    E: Iterable[str],
    post: mut.ClosureOrder,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    name: str = "discrete-law",
) -> PropertyReport:
    """After a discrete mutation the closed sets are exactly the U whose
    union with E was closed before."""
    _same_elements(pre, post)
    E = frozenset(E)
    universe = frozenset(pre.order.elements)
    pre_closed = set(enumerate_closed_sets(pre.order, bound))
    expected = {
        U for U in _powerset(universe, bound) if (U | E) in pre_closed
    }
    actual = set(enumerate_closed_sets(post.order, bound))
    if expected != actual:
        offender = sorted(expected ^ actual, key=lambda s: (len(s), sorted(s)))[0]
        return PropertyReport(name, False, _witness(set=offender))
    return PropertyReport(name, True)


def brute_force_perfect_law(
    pre: mut.ClosureOrder,
    E: Iterable[str],
    post: mut.ClosureOrder,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    name: str = "perfect-law",
) -> PropertyReport:
    """After a perfect mutation the closed sets are exactly the mixtures of
    a closed set inside E with a closed set outside it."""
    _same_elements(pre, post)
    E = frozenset(E)
    complement = frozenset(pre.order.elements) - E
    pre_closed = enumerate_closed_sets(pre.order, bound)
    expected = {
        (V1 & E) | (V2 & complement) for V1 in pre_closed for V2 in pre_closed
    }
    actual = set(enumerate_closed_sets(post.order, bound))
    if expected != actual:
        offender = sorted(expected ^ actual, key=lambda s: (len(s), sorted(s)))[0]
        return PropertyReport(name, False, _witness(set=offender))
    return PropertyReport(name, True)


def _powerset(universe: frozenset[str], bound: int) -> list[frozenset[str]]:
    elements = sorted(universe)
    if len(elements) > bound:
        raise SizeExceeded(f"{len(elements)} elements exceeds bound {bound}")
    out = []
    for mask in range(1 << len(elements)):
        out.append(frozenset(e for i, e in enumerate(elements) if mask >> i & 1))
    return out


def run_suite(
    poset: PrimePoset,
    filt: spf.SpFiltration,
    step_annotations: Mapping[int, bool] | None = None,
    policy: str = mut.POLICY_ERROR,
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> list[PropertyReport]:
    """Run the chain and validate every applicable law against it.

    The reports come back in a fixed order: per-step checks by step index,
    then the baseline checks of each exact order in chain position order.
    """
    steps = mut.chain_order(poset, filt, step_annotations, policy)
    reports: list[PropertyReport] = []
    small = len(poset.base.elements) <= bound

    for step, post in steps:
        tag = f"step-{step.index}"
        target = post.lower if post.exact else post.upper
        reports.append(check_refinement(step.pre, target, f"{tag}:refinement"))
        reports.append(
            check_piecewise(step.pre, post.lower, step.mutation_class, f"{tag}:piecewise")
        )
        if not post.exact:
            reports.append(
                check_piecewise(
                    step.pre, post.upper, step.mutation_class, f"{tag}:piecewise-upper"
                )
            )
        if small and post.exact and step.rule == mut.RULE_DISCRETE:
            reports.append(
                brute_force_discrete_law(
                    step.pre, step.mutation_class, post.lower, bound, f"{tag}:discrete-law"
                )
            )
        if small and post.exact and step.rule in (mut.RULE_DISCRETE, mut.RULE_PERFECT):
            reports.append(
                brute_force_perfect_law(
                    step.pre, step.mutation_class, post.lower, bound, f"{tag}:perfect-law"
                )
            )
        if post.exact:
            reports.append(
                _sandwich(step.pre, step.mutation_class, post.lower, f"{tag}:sandwich")
            )

    ordered = [(0, mut.standard_order(poset))]
    ordered += [
        (step.index, post.lower) for step, post in steps if post.exact
    ]
    for position, co in ordered:
        reports.extend(_baseline(poset, filt, position, co, bound))
    return reports


def _sandwich(
    pre: mut.ClosureOrder, E: frozenset[str], exact: mut.ClosureOrder, name: str
) -> PropertyReport:
    bracket = mut.mutate_general(pre, E)
    lo, hi = bracket.lower.order.relation, bracket.upper.order.relation
    mid = exact.order.relation
    if not lo <= mid:
        return PropertyReport(name, False, _witness(pair=min(sorted(lo - mid))))
    if not mid <= hi:
        return PropertyReport(name, False, _witness(pair=min(sorted(mid - hi))))
    return PropertyReport(name, True)


def _baseline(
    poset: PrimePoset,
    filt: spf.SpFiltration,
    position: int,
    co: mut.ClosureOrder,
    bound: int,
) -> list[PropertyReport]:
    tag = f"order-{position}"
    order = co.order
    out: list[PropertyReport] = []

    extra = order.relation - poset.base.relation
    out.append(
        PropertyReport(f"{tag}:refines-inclusion", not extra,
                       _witness(pair=min(sorted(extra))) if extra else None)
    )

    axioms = check_axioms(order, bound)
    out.append(
        PropertyReport(f"{tag}:t0", axioms.t0,
                       None if axioms.t0 else _witness(failures=set(axioms.failures)))
    )
    out.append(
        PropertyReport(f"{tag}:sober", axioms.sober,
                       None if axioms.sober else _witness(failures=set(axioms.failures)))
    )

    bad_level = next(
        (i for i in range(filt.n) if not order.is_upper_set(filt.level(i))), None
    )
    out.append(
        PropertyReport(f"{tag}:levels-open", bad_level is None,
                       None if bad_level is None else _witness(level=bad_level))
    )

    bad_stratum = None
    for i in range(filt.n + 1):
        stratum = filt.difference(i)
        if order.subspace(stratum).relation != poset.base.subspace(stratum).relation:
            bad_stratum = stratum
            break
    out.append(
        PropertyReport(f"{tag}:strata-restriction", bad_stratum is None,
                       None if bad_stratum is None else _witness(stratum=bad_stratum))
    )

    forced = set(poset.base.maximal_elements())
    for j in range(position):
        forced |= poset.base.maximal_elements(filt.difference(j))
    not_maximal = sorted(p for p in forced if order.spcl(p) != {p})
    out.append(
        PropertyReport(f"{tag}:maximal-difference", not not_maximal,
                       _witness(point=not_maximal[0]) if not_maximal else None)
    )

    out.append(_cb_sanity(order, f"{tag}:cb"))
    return out


def _cb_sanity(order: Order, name: str) -> PropertyReport:
    """Rank equals the longest chain; each layer adds the points whose
    minimal open set has shrunk to themselves (recomputed independently)."""
    cb = cb_filtration(order)
    if cb.rank != longest_chain(order):
        return PropertyReport(
            name, False, _witness(rank=cb.rank, chain=longest_chain(order))
        )
    accumulated: frozenset[str] = frozenset()
    for layer in cb.layers:
        remaining = frozenset(order.elements) - accumulated
        isolated = frozenset(
            p for p in remaining if order.spcl(p) & remaining == {p}
        )
        if layer != accumulated | isolated:
            return PropertyReport(name, False, _witness(layer=layer))
        accumulated = layer
    if accumulated != frozenset(order.elements):
        return PropertyReport(name, False, _witness(layer=accumulated))
    return PropertyReport(name, True)
