import random
from itertools import chain, combinations

import pytest

from gspec import Order, PrimePoset, build_order, covering_pairs, load_prime_poset


def powerset(items):
    items = sorted(items)
    return [
        frozenset(combo)
        for combo in chain.from_iterable(
            combinations(items, k) for k in range(len(items) + 1)
        )
    ]


def brute_lower_sets(order: Order) -> set[frozenset[str]]:
    """Independent enumeration straight from the definition."""
    out = set()
    for S in powerset(order.elements):
        if all(q in S for p in S for (q, r) in order.relation if r == p):
            out.add(S)
    return out


def brute_upper_sets(order: Order) -> set[frozenset[str]]:
    universe = frozenset(order.elements)
    return {universe - S for S in brute_lower_sets(order)}


def poset_from_order(order: Order) -> PrimePoset:
    return load_prime_poset(
        {"elements": list(order.elements),
         "covers": [list(c) for c in covering_pairs(order)]}
    )


def random_order(rng: random.Random, max_size: int = 10) -> Order:
    n = rng.randint(1, max_size)
    names = [f"x{i}" for i in range(n)]
    relations = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < 0.3
    ]
    return build_order(names, relations)


def random_monotone_f(rng: random.Random, order: Order) -> dict[str, int]:
    """A bounded monotone level function in normal form (minimum -1)."""
    f = {p: 0 for p in order.elements}
    for _ in range(rng.randint(0, 6)):
        seed = rng.choice(sorted(order.elements))
        up = {q for q in order.elements if (seed, q) in order.relation}
        for q in up:
            f[q] += 1
    low = min(f.values())
    return {p: v - low - 1 for p, v in f.items()}


@pytest.fixture
def rng():
    return random.Random(20250809)
