"""Intermediate filtrations by specialisation-closed subsets.

A filtration is a descending chain V_0 >= V_1 >= ... >= V_{n-1} of upper
sets of the inclusion order, with the implicit conventions V_{-1} = all
primes and V_n = empty.  Filtrations are stored in normal form: leading
levels equal to the whole spectrum and trailing empty levels are stripped
(they only shift the indexing), so V_0 is proper and V_{n-1} nonempty.

Equivalently a filtration is its level function f, where f(p) is the last
index at which p still belongs to a level; the two encodings convert back
and forth losslessly on normal forms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping

from .poset import covering_pairs
from .spectra import PrimePoset


class NotSpecializationClosed(Exception):
    def __init__(self, index: int):
        super().__init__(f"level {index} is not specialisation-closed")
        self.index = index


class NotDescending(Exception):
    def __init__(self, index: int):
        super().__init__(f"level {index} is not contained in level {index - 1}")
        self.index = index


class NotCodimensionFunction(Exception):
    def __init__(self, cover: tuple[str, str]):
        super().__init__(
            f"cover {cover[0]!r} < {cover[1]!r} does not raise the value by exactly one"
        )
        self.cover = cover


class FiltrationWarning(UserWarning):
    """Tolerated-but-normalised input, e.g. explicit trivial levels."""


@dataclass(frozen=True)
class SpFiltration:
    """Normal-form descending chain of specialisation-closed subsets."""

    elements: tuple[str, ...]
    levels: tuple[frozenset[str], ...]

    @property
    def n(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> frozenset[str]:
        """V_i with the implicit conventions for i outside 0..n-1."""
        if i < 0:
            return frozenset(self.elements)
        if i >= self.n:
            return frozenset()
        return self.levels[i]

    def difference(self, i: int) -> frozenset[str]:
        """The stratum V_{i-1} minus V_i."""
        return self.level(i - 1) - self.level(i)


def validate_filtration(poset: PrimePoset, levels: Iterable[Iterable[str]]) -> SpFiltration:
    """Check and normalise a chain of subsets into an :class:`SpFiltration`.

    Raises :class:`NotSpecializationClosed` or :class:`NotDescending` with
    the offending index; explicit full or empty levels are stripped with a
    :class:`FiltrationWarning`.
    """
    universe = frozenset(poset.base.elements)
    chain = [frozenset(level) for level in levels]
    for i, level in enumerate(chain):
        if not poset.base.is_upper_set(level):
            raise NotSpecializationClosed(i)
    for i in range(1, len(chain)):
        if not chain[i] <= chain[i - 1]:
            raise NotDescending(i)
    start = 0
    while start < len(chain) and chain[start] == universe:
        start += 1
    stop = len(chain)
    while stop > start and not chain[stop - 1]:
        stop -= 1
    if (start, stop) != (0, len(chain)):
        warnings.warn(
            f"stripped {start + len(chain) - stop} trivial level(s)",
            FiltrationWarning,
            stacklevel=2,
        )
    return SpFiltration(poset.base.elements, tuple(chain[start:stop]))


def filtration_to_f(filt: SpFiltration) -> dict[str, int]:
    """Level function: f(p) = max index i with p in V_i (so -1 off V_0)."""
    f = {p: -1 for p in filt.elements}
    for i, level in enumerate(filt.levels):
        for p in level:
            f[p] = i
    return f


def f_to_filtration(poset: PrimePoset, f: Mapping[str, int]) -> SpFiltration:
    """Levels V_i = {p : f(p) >= i}, normalised.

    Shifted inputs (constant added to f) normalise to the same filtration.
    """
    missing = set(poset.base.elements) - set(f)
    if missing:
        raise KeyError(f"level function missing {sorted(missing)}")
    top = max(f[p] for p in poset.base.elements) if poset.base.elements else -1
    levels = [
        {p for p in poset.base.elements if f[p] >= i} for i in range(min(0, top), top + 1)
    ]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FiltrationWarning)
        return validate_filtration(poset, levels)


def classify(poset: PrimePoset, filt: SpFiltration) -> dict[str, bool]:
    """Slice / truncated-slice flags.

    Truncated-slice means every stratum before the last level is an
    antichain for inclusion; slice additionally requires the last level to
    be an antichain.
    """
    base = poset.base
    truncated = all(
        _is_antichain(base, filt.difference(i)) for i in range(filt.n)
    )
    is_slice = truncated and _is_antichain(base, filt.level(filt.n - 1))
    return {"intermediate": True, "slice": is_slice, "truncated_slice": truncated}


def _is_antichain(base, subset: frozenset[str]) -> bool:
    return not any(
        p != q and (p, q) in base.relation for p in subset for q in subset
    )


def height_filtration(poset: PrimePoset) -> SpFiltration:
    """Levels V_i = {p : height(p) > i}; a slice filtration when height is a
    codimension function on the model."""
    levels = []
    i = 0
    while True:
        level = {p for p in poset.base.elements if poset.height[p] > i}
        if not level:
            break
        levels.append(level)
        i += 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FiltrationWarning)
        return validate_filtration(poset, levels)


def codim_filtration(poset: PrimePoset, d: Mapping[str, int]) -> SpFiltration:
    """Levels V_i = {p : d(p) > i} for a codimension function d.

    d must raise by exactly one along every covering relation; adding a
    constant to d does not change the normalised result.
    """
    base = poset.base
    # Scan covers from the bottom of the poset up so the first offender is
    # the lowest one.
    covers = sorted(covering_pairs(base), key=lambda c: (poset.height[c[0]], c))
    for p, q in covers:
        if d[q] != d[p] + 1:
            raise NotCodimensionFunction((p, q))
    if not base.elements:
        return SpFiltration((), ())
    lo = min(d[p] for p in base.elements)
    hi = max(d[p] for p in base.elements)
    levels = [{p for p in base.elements if d[p] > i} for i in range(lo, hi)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FiltrationWarning)
        return validate_filtration(poset, levels)
