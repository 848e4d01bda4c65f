"""Finite partial orders and their Alexandrov-topology calculus.

A finite T0 Alexandrov space *is* a finite poset: open sets are the upper
sets of the closure order, closed sets the lower sets.  Everything in this
module is exact and small enough to enumerate, so the representation is the
full reflexive-transitive relation, computed once at construction time.

Points are opaque string identifiers.  All deterministic outputs sort
points lexicographically so that repeated runs are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

DEFAULT_ENUMERATION_BOUND = 16


class CycleError(Exception):
    """The transitive closure of the generators relates two distinct points
    both ways, so the result would not be antisymmetric (not T0)."""


class UnknownElement(Exception):
    """A point name that does not belong to the order."""


class SizeExceeded(Exception):
    """The order is too large for exhaustive closed-set enumeration."""


@dataclass(frozen=True)
class Order:
    """A finite partial order, stored transitively and reflexively closed.

    ``elements`` is the sorted tuple of point names and ``relation`` the full
    set of pairs ``(p, q)`` with ``p <= q``.  Instances are immutable; every
    derived object is a fresh value.
    """

    elements: tuple[str, ...]
    relation: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        els = self.elements
        if list(els) != sorted(set(els)):
            raise ValueError("elements must be a sorted tuple of distinct names")
        eset = set(els)
        for p, q in self.relation:
            if p not in eset or q not in eset:
                raise ValueError(f"relation pair ({p!r}, {q!r}) outside elements")
        rel = self.relation
        for p in els:
            if (p, p) not in rel:
                raise ValueError(f"relation not reflexive at {p!r}")
        for p, q in rel:
            if p != q and (q, p) in rel:
                raise ValueError(f"relation not antisymmetric on {p!r}, {q!r}")
            for r, s in rel:
                if q == r and (p, s) not in rel:
                    raise ValueError("relation not transitively closed")

    # -- point queries ----------------------------------------------------

    def _check(self, p: str) -> None:
        if p not in set(self.elements):
            raise UnknownElement(p)

    def leq(self, p: str, q: str) -> bool:
        self._check(p)
        self._check(q)
        return (p, q) in self.relation

    def spcl(self, p: str) -> frozenset[str]:
        """Smallest upper set containing ``p`` (its minimal open set)."""
        self._check(p)
        return frozenset(q for q in self.elements if (p, q) in self.relation)

    def gncl(self, p: str) -> frozenset[str]:
        """Smallest lower set containing ``p`` (the closure of ``{p}``)."""
        self._check(p)
        return frozenset(q for q in self.elements if (q, p) in self.relation)

    # -- subset queries ----------------------------------------------------

    def is_upper_set(self, subset: Iterable[str]) -> bool:
        S = self._subset(subset)
        return all((p, q) not in self.relation or q in S
                   for p in S for q in self.elements)

    def is_lower_set(self, subset: Iterable[str]) -> bool:
        S = self._subset(subset)
        return all((q, p) not in self.relation or q in S
                   for p in S for q in self.elements)

    def _subset(self, subset: Iterable[str]) -> frozenset[str]:
        S = frozenset(subset)
        for p in S:
            self._check(p)
        return S

    def subspace(self, subset: Iterable[str]) -> "Order":
        """Restriction of the order to ``subset``.

        For Alexandrov spaces this is exactly the subspace-topology order.
        """
        S = self._subset(subset)
        return Order(
            tuple(sorted(S)),
            frozenset((p, q) for (p, q) in self.relation if p in S and q in S),
        )

    # -- structure ---------------------------------------------------------

    def strict_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((p, q) for (p, q) in self.relation if p != q)

    def maximal_elements(self, within: Iterable[str] | None = None) -> frozenset[str]:
        S = self._subset(within) if within is not None else frozenset(self.elements)
        return frozenset(
            p for p in S
            if not any(q != p and q in S and (p, q) in self.relation for q in S)
        )

    def minimal_elements(self, within: Iterable[str] | None = None) -> frozenset[str]:
        S = self._subset(within) if within is not None else frozenset(self.elements)
        return frozenset(
            p for p in S
            if not any(q != p and q in S and (q, p) in self.relation for q in S)
        )

    def is_discrete(self) -> bool:
        return not self.strict_pairs()


def build_order(elements: Iterable[str], relations: Iterable[tuple[str, str]]) -> Order:
    """Reflexive-transitive closure of generating relations.

    Raises :class:`CycleError` if the closure would relate two distinct
    points both ways, and :class:`UnknownElement` if a generator mentions a
    name outside ``elements``.
    """
    els = tuple(sorted(set(elements)))
    index = {e: i for i, e in enumerate(els)}
    up = [1 << i for i in range(len(els))]
    for a, b in relations:
        if a not in index:
            raise UnknownElement(a)
        if b not in index:
            raise UnknownElement(b)
        up[index[a]] |= 1 << index[b]
    changed = True
    while changed:
        changed = False
        for i in range(len(els)):
            acc = up[i]
            probe = acc
            while probe:
                j = (probe & -probe).bit_length() - 1
                probe &= probe - 1
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            if up[i] >> j & 1 and up[j] >> i & 1:
                raise CycleError(f"{els[i]!r} and {els[j]!r} are related both ways")
    relation = frozenset(
        (els[i], els[j]) for i in range(len(els)) for j in range(len(els))
        if up[i] >> j & 1
    )
    return Order(els, relation)


def covering_pairs(order: Order) -> tuple[tuple[str, str], ...]:
    """The transitive reduction (Hasse diagram edges), sorted."""
    strict = order.strict_pairs()
    covers = [
        (p, q) for (p, q) in strict
        if not any(r != p and r != q and (p, r) in strict and (r, q) in strict
                   for r in order.elements)
    ]
    return tuple(sorted(covers))


@lru_cache(maxsize=None)
def longest_chain(order: Order) -> int:
    """Length (edge count) of a longest chain; -1 for the empty order."""
    if not order.elements:
        return -1
    strict = order.strict_pairs()
    succ = {p: [q for q in order.elements if (p, q) in strict] for p in order.elements}
    depth: dict[str, int] = {}

    def walk(p: str) -> int:
        if p not in depth:
            depth[p] = 1 + max((walk(q) for q in succ[p]), default=-1)
        return depth[p]

    return max(walk(p) for p in order.elements)


@dataclass(frozen=True)
class CbFiltration:
    """Cantor-Bendixson filtration of a finite T0 Alexandrov space.

    ``layers`` is the strictly increasing chain X_0 < X_1 < ... ending at the
    full point set; ``rank`` is the number of steps to stabilise, with the
    convention that the empty space (whose chain starts at the empty set and
    is already stable) has rank -1.
    """

    layers: tuple[frozenset[str], ...]
    rank: int


def cb_filtration(order: Order) -> CbFiltration:
    """Iteratively adjoin the isolated points of the complement.

    In a finite T0 Alexandrov space the isolated points of a subspace are
    exactly its maximal elements, so each layer adds the maxima of what is
    left.
    """
    layers: list[frozenset[str]] = []
    accumulated: set[str] = set()
    remaining = set(order.elements)
    while remaining:
        accumulated |= order.maximal_elements(remaining)
        layers.append(frozenset(accumulated))
        remaining = set(order.elements) - accumulated
    return CbFiltration(tuple(layers), len(layers) - 1)


@dataclass(frozen=True)
class AxiomReport:
    """Which separation/chain axioms hold, with the witnessing data.

    ``irreducibles`` pairs every irreducible closed set with the unique point
    whose closure it is.
    """

    t0: bool
    sober: bool
    artinian: bool
    noetherian: bool
    irreducibles: tuple[tuple[frozenset[str], str], ...]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_axioms(order: Order, bound: int = DEFAULT_ENUMERATION_BOUND) -> AxiomReport:
    """Check T0, soberness and the chain conditions.

    Soberness is decided by the unique-maximal-element criterion: a closed
    set is irreducible exactly when it has a single maximal point, and it
    must then be the closure of that point.
    """
    failures: list[str] = []
    t0 = not any(p != q and (q, p) in order.relation for (p, q) in order.relation)
    if not t0:
        failures.append("t0")

    irreducibles: list[tuple[frozenset[str], str]] = []
    sober = True
    for closed in enumerate_closed_sets(order, bound):
        if not closed:
            continue
        maxima = order.maximal_elements(closed)
        if len(maxima) == 1:
            point = next(iter(maxima))
            if closed != order.gncl(point):
                sober = False
                failures.append(f"sober:{sorted(closed)}")
            else:
                irreducibles.append((closed, point))
    irreducibles.sort(key=lambda pair: (len(pair[0]), sorted(pair[0])))

    # Finite posets satisfy both chain conditions outright; recorded for the
    # report's completeness.
    return AxiomReport(
        t0=t0,
        sober=sober,
        artinian=True,
        noetherian=True,
        irreducibles=tuple(irreducibles),
        failures=tuple(failures),
    )


def enumerate_closed_sets(
    order: Order, bound: int = DEFAULT_ENUMERATION_BOUND
) -> tuple[frozenset[str], ...]:
    """All lower sets, sorted by size then lexicographically by members."""
    n = len(order.elements)
    if n > bound:
        raise SizeExceeded(f"{n} elements exceeds enumeration bound {bound}")
    index = {e: i for i, e in enumerate(order.elements)}
    down = [0] * n
    for p, q in order.relation:
        down[index[q]] |= 1 << index[p]
    found = []
    for mask in range(1 << n):
        probe = mask
        ok = True
        while probe:
            i = (probe & -probe).bit_length() - 1
            probe &= probe - 1
            if down[i] & ~mask:
                ok = False
                break
        if ok:
            found.append(
                frozenset(order.elements[i] for i in range(n) if mask >> i & 1)
            )
    found.sort(key=lambda S: (len(S), sorted(S)))
    return tuple(found)


def upper_sets(order: Order, bound: int = DEFAULT_ENUMERATION_BOUND) -> tuple[frozenset[str], ...]:
    """All upper sets (open sets), via complements of the lower sets."""
    universe = frozenset(order.elements)
    complements = [universe - S for S in enumerate_closed_sets(order, bound)]
    complements.sort(key=lambda S: (len(S), sorted(S)))
    return tuple(complements)


def heights_by_longest_chain(order: Order) -> dict[str, int]:
    """Height of each point as the longest chain strictly below it."""
    strict = order.strict_pairs()
    pred = {p: [q for q in order.elements if (q, p) in strict] for p in order.elements}
    out: dict[str, int] = {}

    def walk(p: str) -> int:
        if p not in out:
            out[p] = 1 + max((walk(q) for q in pred[p]), default=-1)
        return out[p]

    for p in order.elements:
        walk(p)
    return out
