"""Closure orders of tilted hearts, computed by mutation rewrite rules.

The pipeline starts from the inclusion order (the Hochster topology of the
standard heart) and follows the chain of right mutations encoded by a
filtration: the first step is decided pair-by-pair through the coherence
oracle, later steps at a class E (always closed in the current order) are
rewritten by the discrete rule, the perfect rule, or bracketed between an
upper and a lower bound when neither applies.

Soundness over completeness: a step whose exact topology the available
rules do not determine returns an inexact :class:`BoundedOrder`, never a
guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import filtration as spf
from .poset import Order, longest_chain
from .spectra import COHERENT, NOT_COHERENT, UNDETERMINED, PrimePoset

POLICY_ERROR = "error"
POLICY_ASSUME_COHERENT = "assume-coherent"
POLICY_ASSUME_NONCOHERENT = "assume-noncoherent"
POLICIES = (POLICY_ERROR, POLICY_ASSUME_COHERENT, POLICY_ASSUME_NONCOHERENT)

RULE_STANDARD = "standard"
RULE_ONESTEP = "onestep"
RULE_DISCRETE = "discrete"
RULE_PERFECT = "perfect"
RULE_BOUNDED = "bounded"


class NotClosed(Exception):
    """The mutation class is not closed (not a lower set) in the current order."""


class NotDiscrete(Exception):
    """The mutation class is not a discrete subspace of the current order."""


class UndeterminedCoherence(Exception):
    """The oracle could not decide a coherence question under policy=error."""

    def __init__(self, p: str, q: str):
        super().__init__(
            f"coherence of the complement in [{p!r}, {q!r}] is not determined "
            "by the model; add an annotation or relax the policy"
        )
        self.pair = (p, q)


@dataclass(frozen=True)
class ClosureOrder:
    """A closure order together with the rule chain that produced it."""

    order: Order
    provenance: tuple[str, ...]

    def refines_inclusion(self, poset: PrimePoset) -> bool:
        return self.order.relation <= poset.base.relation


@dataclass(frozen=True)
class BoundedOrder:
    """Bracket for an under-determined order: lower <= truth <= upper."""

    lower: ClosureOrder
    upper: ClosureOrder
    exact: bool

    def __post_init__(self) -> None:
        if not self.lower.order.relation <= self.upper.order.relation:
            raise ValueError("lower bound exceeds upper bound")
        if self.exact and self.lower.order.relation != self.upper.order.relation:
            raise ValueError("exact flag set but bounds differ")


def exact_bounds(co: ClosureOrder) -> BoundedOrder:
    return BoundedOrder(co, co, True)


@dataclass(frozen=True)
class MutationStep:
    """One step of the mutation chain.

    ``support`` is the level the step tilts towards and ``mutation_class``
    its complement E, which is closed in the pre-order.  ``perfect`` records
    whether the step's torsion pair is known perfect.
    """

    index: int
    support: frozenset[str]
    mutation_class: frozenset[str]
    rule: str
    perfect: bool
    pre: ClosureOrder
    post: BoundedOrder


def standard_order(poset: PrimePoset) -> ClosureOrder:
    """The inclusion order itself: the Hochster topology of the standard heart."""
    return ClosureOrder(poset.base, (RULE_STANDARD,))


def onestep_order(
    poset: PrimePoset, V0: Iterable[str], policy: str = POLICY_ERROR
) -> ClosureOrder:
    """Closure order after a single tilt at the specialisation-closed V0.

    Within V0 and within its complement the order is inclusion; a cross pair
    p outside V0 below q inside V0 is related exactly when the restriction
    of V0 to the interval [p, q] has a non-coherent complement.  The oracle
    is consulted lazily, for cross pairs only.
    """
    _check_policy(policy)
    V0 = frozenset(V0)
    base = poset.base
    universe = frozenset(base.elements)
    if not V0 or V0 == universe:
        return ClosureOrder(base, (RULE_STANDARD, "shift"))
    if not base.is_upper_set(V0):
        raise spf.NotSpecializationClosed(0)

    pairs = set()
    for p, q in base.relation:
        if (p in V0) == (q in V0):
            pairs.add((p, q))
            continue
        if p in V0:  # p below q with p in V0 forces q in V0; unreachable
            raise AssertionError("upper-set invariant broken")
        verdict = poset.coherent_complement(p, q, V0).verdict
        if verdict == UNDETERMINED:
            if policy == POLICY_ERROR:
                raise UndeterminedCoherence(p, q)
            verdict = COHERENT if policy == POLICY_ASSUME_COHERENT else NOT_COHERENT
        if verdict == NOT_COHERENT:
            pairs.add((p, q))
    closed = _transitive_closure(pairs)
    if closed != pairs:
        raise AssertionError(
            "one-step relation not transitively closed; the coherence data is "
            "inconsistent with a ring"
        )
    label = "{" + ",".join(sorted(V0)) + "}"
    return ClosureOrder(
        Order(base.elements, frozenset(pairs)), (f"{RULE_ONESTEP} at {label}",)
    )


def mutate_discrete(co: ClosureOrder, E: Iterable[str]) -> ClosureOrder:
    """Mutation at a closed discrete class: its points become clopen and
    isolated, everything else keeps its order."""
    E = frozenset(E)
    order = co.order
    if not order.is_lower_set(E):
        raise NotClosed(f"{sorted(E)} is not closed in the current order")
    if not order.subspace(E).is_discrete():
        raise NotDiscrete(f"{sorted(E)} is not a discrete subspace")
    pairs = frozenset((p, q) for (p, q) in order.relation if p == q or p not in E)
    label = "{" + ",".join(sorted(E)) + "}"
    return ClosureOrder(
        Order(order.elements, pairs), co.provenance + (f"{RULE_DISCRETE} at {label}",)
    )


def mutate_perfect(co: ClosureOrder, E: Iterable[str]) -> ClosureOrder:
    """Mutation at a closed class with a perfect torsion pair: the class
    becomes clopen, both parts keep their subspace orders, all cross
    relations disappear.

    Certifying perfectness is the caller's job (an annotation or a
    derivation rule); at the poset level no distinction is drawn between
    plain and embedding-strength perfectness.
    """
    E = frozenset(E)
    order = co.order
    if not order.is_lower_set(E):
        raise NotClosed(f"{sorted(E)} is not closed in the current order")
    pairs = frozenset(
        (p, q) for (p, q) in order.relation if p == q or (p in E) == (q in E)
    )
    label = "{" + ",".join(sorted(E)) + "}"
    return ClosureOrder(
        Order(order.elements, pairs), co.provenance + (f"{RULE_PERFECT} at {label}",)
    )


def mutate_general(
    co: ClosureOrder, E: Iterable[str], forced_maximal: Iterable[str] = ()
) -> BoundedOrder:
    """Bracket for a mutation step with no applicable exact rule.

    Both bounds keep the subspace orders on E and its complement.  The lower
    bound drops every cross relation; the upper bound keeps the cross
    relations of the pre-order except those whose source is already known to
    be maximal in the result (the ``forced_maximal`` pruning).
    """
    E = frozenset(E)
    forced = frozenset(forced_maximal)
    order = co.order
    if not order.is_lower_set(E):
        raise NotClosed(f"{sorted(E)} is not closed in the current order")
    within = {
        (p, q) for (p, q) in order.relation if p == q or (p in E) == (q in E)
    }
    cross = {
        (p, q) for (p, q) in order.relation
        if p != q and p in E and q not in E and p not in forced
    }
    upper_pairs = _transitive_closure(within | cross)
    label = "{" + ",".join(sorted(E)) + "}"
    lower = ClosureOrder(
        Order(order.elements, frozenset(within)),
        co.provenance + (f"{RULE_BOUNDED} at {label} (lower)",),
    )
    upper = ClosureOrder(
        Order(order.elements, frozenset(upper_pairs)),
        co.provenance + (f"{RULE_BOUNDED} at {label} (upper)",),
    )
    return BoundedOrder(lower, upper, exact=within == upper_pairs)


def chain_order(
    poset: PrimePoset,
    filt: spf.SpFiltration,
    step_annotations: Mapping[int, bool] | None = None,
    policy: str = POLICY_ERROR,
) -> list[tuple[MutationStep, BoundedOrder]]:
    """Run the whole mutation chain for a filtration.

    Step 1 applies the one-step rule at V_0; step i > 1 mutates at
    E = complement of V_{i-1}, dispatching to the discrete rule when E is
    discrete in the current order, to the perfect rule when the step is
    certified perfect (annotation, or the built-in vanishing pattern for a
    two-dimensional local model tilting at its closed point), and otherwise
    to the sound upper/lower bracket.

    Truncated-slice filtrations short-circuit: every step, including the
    first, is a discrete (hence perfect) mutation, and the final order is
    the inclusion order on the last level next to isolated points.
    """
    _check_policy(policy)
    annotations = dict(step_annotations or {})
    flags = spf.classify(poset, filt)
    steps: list[tuple[MutationStep, BoundedOrder]] = []
    current = exact_bounds(standard_order(poset))
    universe = frozenset(poset.base.elements)

    if flags["truncated_slice"]:
        for i in range(1, filt.n + 1):
            E = universe - filt.level(i - 1)
            pre = current.lower
            post = exact_bounds(mutate_discrete(pre, E))
            steps.append(_record(i, filt, E, RULE_DISCRETE, True, pre, post))
            current = post
        return steps

    first = onestep_order(poset, filt.level(0), policy)
    post = exact_bounds(first)
    steps.append(
        _record(1, filt, universe - filt.level(0), RULE_ONESTEP, False,
                standard_order(poset), post)
    )
    current = post

    for i in range(2, filt.n + 1):
        E = universe - filt.level(i - 1)
        if current.upper.order.subspace(E).is_discrete():
            rule, perfect = RULE_DISCRETE, True
            post = _apply_exact(current, mutate_discrete, E)
        elif annotations.get(i, False) or _vanishing_pattern(poset, filt.level(i - 1)):
            rule, perfect = RULE_PERFECT, True
            post = _apply_exact(current, mutate_perfect, E)
        else:
            rule, perfect = RULE_BOUNDED, False
            pruned = _forced_maximal(poset, filt, i)
            lo = mutate_general(current.lower, E, pruned)
            if current.exact:
                post = lo
            else:
                hi = mutate_general(current.upper, E, pruned)
                post = BoundedOrder(lo.lower, hi.upper, exact=False)
        steps.append(_record(i, filt, E, rule, perfect, current.lower, post))
        current = post
    return steps


def final_order(steps: list[tuple[MutationStep, BoundedOrder]], poset: PrimePoset) -> BoundedOrder:
    """Resulting order of a chain; the standard order for an empty chain."""
    if not steps:
        return exact_bounds(standard_order(poset))
    return steps[-1][1]


@dataclass(frozen=True)
class ThetaEntry:
    """How one point's neighbourhoods move across a mutation step.

    The underlying bijection is the identity on prime names; what changes is
    each point's closure and minimal open set.
    """

    point: str
    closure_before: frozenset[str]
    closure_after: frozenset[str]
    open_before: frozenset[str]
    open_after: frozenset[str]


def theta_map(step: MutationStep) -> tuple[ThetaEntry, ...]:
    """The identity-on-points bijection of an exact step, documented."""
    if not step.post.exact:
        raise ValueError("theta map is only documented for exact steps")
    pre, post = step.pre.order, step.post.lower.order
    return tuple(
        ThetaEntry(
            point=p,
            closure_before=pre.gncl(p),
            closure_after=post.gncl(p),
            open_before=pre.spcl(p),
            open_after=post.spcl(p),
        )
        for p in pre.elements
    )


# -- helpers ----------------------------------------------------------------


def _check_policy(policy: str) -> None:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r} (choose from {POLICIES})")


def _transitive_closure(pairs: set[tuple[str, str]]) -> set[tuple[str, str]]:
    closed = set(pairs)
    changed = True
    while changed:
        changed = False
        for p, q in list(closed):
            for r, s in list(closed):
                if q == r and (p, s) not in closed:
                    closed.add((p, s))
                    changed = True
    return closed


def _record(
    index: int,
    filt: spf.SpFiltration,
    E: frozenset[str],
    rule: str,
    perfect: bool,
    pre: ClosureOrder,
    post: BoundedOrder,
) -> tuple[MutationStep, BoundedOrder]:
    step = MutationStep(
        index=index,
        support=filt.level(index - 1),
        mutation_class=E,
        rule=rule,
        perfect=perfect,
        pre=pre,
        post=post,
    )
    return step, post


def _apply_exact(current: BoundedOrder, op, E: frozenset[str]) -> BoundedOrder:
    lo = op(current.lower, E)
    if current.exact:
        return exact_bounds(lo)
    hi = op(current.upper, E)
    return BoundedOrder(lo, hi, exact=False)


def _vanishing_pattern(poset: PrimePoset, level: frozenset[str]) -> bool:
    """Built-in perfectness certificate: a local model of dimension at most
    two tilting at its unique closed point."""
    maxima = poset.base.maximal_elements()
    return (
        longest_chain(poset.base) <= 2
        and len(maxima) == 1
        and level == maxima
    )


def _forced_maximal(poset: PrimePoset, filt: spf.SpFiltration, step_index: int) -> frozenset[str]:
    """Points already known to be maximal in the order produced by this step:
    inclusion-maxima of the strata cut out by this and the earlier steps,
    plus the inclusion-maximal primes themselves."""
    forced = set(poset.base.maximal_elements())
    for j in range(step_index):
        forced |= poset.base.maximal_elements(filt.difference(j))
    return frozenset(forced)
