"""Prime-poset models of a prime spectrum with height and coherence data.

A :class:`PrimePoset` is a finite poset standing in for ``Spec(R)`` with the
inclusion order, a stored height for every prime, and optional coherence
annotations.  Heights are stored rather than recomputed so that non-catenary
rings, where height is not a codimension function, can be modelled.

Coherence of the complement of a specialisation-closed set is a property of
the ring, not of its poset of primes (two rings with homeomorphic spectra
can disagree), so beyond a handful of provable rules the oracle defers to
per-interval annotations supplied with the model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .poset import Order, build_order, covering_pairs, heights_by_longest_chain, longest_chain

COHERENT = "coherent"
NOT_COHERENT = "not-coherent"
UNDETERMINED = "undetermined"

PRESET_NAMES = ("DVR1", "LOC2", "LOC2M", "LOC3", "POLY2", "NAGATA2")


class SchemaError(Exception):
    """The input document does not match the expected JSON shape."""


class AnnotationKeyError(Exception):
    """A coherence annotation key is not a valid interval/upper-set pair."""


class NotComparable(Exception):
    """Interval endpoints p, q with p not contained in q."""


class UnknownPreset(Exception):
    pass


@dataclass(frozen=True)
class CoherenceVerdict:
    verdict: str  # COHERENT | NOT_COHERENT | UNDETERMINED
    reason: str


AnnotationKey = tuple[str, str, frozenset[str]]


@dataclass(frozen=True, eq=True)
class PrimePoset:
    """Finite model of a prime spectrum.

    ``base`` carries the inclusion order, ``height`` the stored heights, and
    ``coherence`` maps an interval key ``(p, q, W)`` to whether the
    complement of the upper set ``W`` is coherent inside the interval
    ``[p, q]``.
    """

    base: Order
    height: Mapping[str, int] = field(hash=False)
    coherence: Mapping[AnnotationKey, bool] = field(hash=False)

    def __post_init__(self) -> None:
        for p in self.base.elements:
            if p not in self.height:
                raise SchemaError(f"missing height for {p!r}")
        for p, q in covering_pairs(self.base):
            if self.height[q] < self.height[p] + 1:
                raise SchemaError(f"height not compatible with cover {p!r} < {q!r}")
        for (p, q, W) in self.coherence:
            self._validate_annotation_key(p, q, W)

    def _validate_annotation_key(self, p: str, q: str, W: frozenset[str]) -> None:
        if (p, q) not in self.base.relation:
            raise AnnotationKeyError(f"{p!r} not contained in {q!r}")
        members = self._interval_elements(p, q)
        if not W <= members:
            raise AnnotationKeyError(
                f"annotation set {sorted(W)} not inside interval [{p!r}, {q!r}]"
            )
        if not self.base.subspace(members).is_upper_set(W):
            raise AnnotationKeyError(
                f"annotation set {sorted(W)} not specialisation-closed in "
                f"[{p!r}, {q!r}]"
            )

    def _interval_elements(self, p: str, q: str) -> frozenset[str]:
        return frozenset(
            r for r in self.base.elements
            if (p, r) in self.base.relation and (r, q) in self.base.relation
        )

    def interval(self, p: str, q: str) -> "PrimePoset":
        """The sub-poset ``{r : p <= r <= q}`` with re-based heights.

        This models the spectrum of the local quotient ring at ``q`` modulo
        ``p``; the embedding of that spectrum is exactly this interval, and
        its subspace topology is the induced one.  Heights are shifted so the
        bottom of the interval sits at height zero, and annotations whose own
        interval nests inside ``[p, q]`` are carried along.
        """
        if (p, q) not in self.base.relation:
            raise NotComparable(f"{p!r} not contained in {q!r}")
        members = self._interval_elements(p, q)
        base = self.base.subspace(members)
        offset = self.height[p]
        heights = {r: self.height[r] - offset for r in members}
        kept = {
            key: value for key, value in self.coherence.items()
            if (p, key[0]) in self.base.relation and (key[1], q) in self.base.relation
        }
        return PrimePoset(base, heights, kept)

    def coherent_complement(self, p: str, q: str, V0: Iterable[str]) -> CoherenceVerdict:
        """Decide whether ``V0`` restricted to ``[p, q]`` has coherent complement.

        ``V0`` must be specialisation-closed in the ambient poset.  The rules,
        in order:

        1. empty or full restriction: trivially coherent;
        2. the interval has Krull dimension at most one: every subset of such
           a spectrum is coherent;
        3. the complement is exactly the generic point of the interval:
           localisation at the generic point is a perfect (flat)
           localisation, so the complement is coherent;
        4. some minimal element of the restriction has re-based height at
           least two: violates the necessary height condition, not coherent;
        5. otherwise the question is ring-dependent: consult the annotations,
           else undetermined.
        """
        sub = self.interval(p, q)
        members = frozenset(sub.base.elements)
        W = frozenset(V0) & members
        if not W or W == members:
            return CoherenceVerdict(COHERENT, "trivial")
        if longest_chain(sub.base) <= 1:
            return CoherenceVerdict(COHERENT, "dimension-one")
        if W == members - {p}:
            return CoherenceVerdict(COHERENT, "generic-complement")
        minima = sub.base.minimal_elements(W)
        if any(sub.height[r] >= 2 for r in minima):
            return CoherenceVerdict(NOT_COHERENT, "deep-minimal")
        known = self.coherence.get((p, q, W))
        if known is not None:
            return CoherenceVerdict(COHERENT if known else NOT_COHERENT, "annotation")
        return CoherenceVerdict(UNDETERMINED, "no-rule")


def load_prime_poset(document: Mapping | str) -> PrimePoset:
    """Build a validated :class:`PrimePoset` from a JSON document.

    Accepts either a parsed mapping or a JSON string.  Expected shape::

        {
          "elements": [str],
          "covers": [[str, str]],
          "heights": {str: int},                      # optional
          "coherence": [{"p": str, "q": str,
                         "W": [str], "coherent": bool}]  # optional
        }

    Heights default to longest-chain-below when omitted.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise SchemaError("document must be a JSON object")
    unknown = set(document) - {"elements", "covers", "heights", "coherence"}
    if unknown:
        raise SchemaError(f"unexpected keys: {sorted(unknown)}")

    elements = document.get("elements")
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise SchemaError("'elements' must be a list of strings")
    covers = document.get("covers", [])
    if not isinstance(covers, list) or not all(
        isinstance(c, (list, tuple)) and len(c) == 2 and all(isinstance(x, str) for x in c)
        for c in covers
    ):
        raise SchemaError("'covers' must be a list of [string, string] pairs")

    base = build_order(elements, [tuple(c) for c in covers])

    heights = document.get("heights")
    if heights is None:
        height_map = heights_by_longest_chain(base)
    else:
        if not isinstance(heights, Mapping) or not all(
            isinstance(k, str) and isinstance(v, int) and not isinstance(v, bool)
            for k, v in heights.items()
        ):
            raise SchemaError("'heights' must map element names to integers")
        missing = set(base.elements) - set(heights)
        if missing:
            raise SchemaError(f"heights missing for {sorted(missing)}")
        if any(v < 0 for v in heights.values()):
            raise SchemaError("heights must be non-negative")
        height_map = {e: heights[e] for e in base.elements}

    annotations: dict[AnnotationKey, bool] = {}
    for entry in document.get("coherence", []):
        if not isinstance(entry, Mapping) or set(entry) != {"p", "q", "W", "coherent"}:
            raise SchemaError(
                "coherence entries must have exactly the keys p, q, W, coherent"
            )
        if not isinstance(entry["coherent"], bool):
            raise SchemaError("'coherent' must be a boolean")
        W = entry["W"]
        if not isinstance(W, list) or not all(isinstance(x, str) for x in W):
            raise SchemaError("'W' must be a list of strings")
        annotations[(entry["p"], entry["q"], frozenset(W))] = entry["coherent"]

    return PrimePoset(base, height_map, annotations)


def _diamond_document(coherent: bool) -> dict:
    return {
        "elements": ["o", "a", "b", "m"],
        "covers": [["o", "a"], ["o", "b"], ["a", "m"], ["b", "m"]],
        "heights": {"o": 0, "a": 1, "b": 1, "m": 2},
        "coherence": [{"p": "o", "q": "m", "W": ["a", "m"], "coherent": coherent}],
    }


_PRESET_DOCUMENTS: dict[str, dict] = {
    # Discrete valuation ring: the smallest chain.
    "DVR1": {
        "elements": ["o", "m"],
        "covers": [["o", "m"]],
    },
    # Two-dimensional local domain, five height-one primes shown.
    "LOC2": {
        "elements": ["o", "p1", "p2", "p3", "p4", "p5", "m"],
        "covers": [["o", "p1"], ["o", "p2"], ["o", "p3"], ["o", "p4"], ["o", "p5"],
                   ["p1", "m"], ["p2", "m"], ["p3", "m"], ["p4", "m"], ["p5", "m"]],
    },
    # Two-dimensional local ring with three minimal primes; the height-one
    # level sits in two overlapping quadrilaterals over the minimal level.
    "LOC2M": {
        "elements": ["r-1", "r0", "r1", "q-2", "q-1", "q1", "q2", "m"],
        "covers": [["r-1", "q-2"], ["r0", "q-2"],
                   ["r-1", "q-1"], ["r0", "q-1"],
                   ["r0", "q1"], ["r1", "q1"],
                   ["r0", "q2"], ["r1", "q2"],
                   ["q-2", "m"], ["q-1", "m"], ["q1", "m"], ["q2", "m"]],
    },
    # Three-dimensional local domain; height-one and height-two levels form
    # a cyclic band (each height-two prime above two height-one primes).
    "LOC3": {
        "elements": ["o", "q1", "q2", "q3", "r1", "r2", "r3", "m"],
        "covers": [["o", "q1"], ["o", "q2"], ["o", "q3"],
                   ["q1", "r1"], ["q2", "r1"],
                   ["q2", "r2"], ["q3", "r2"],
                   ["q3", "r3"], ["q1", "r3"],
                   ["r1", "m"], ["r2", "m"], ["r3", "m"]],
    },
    # Two homeomorphic diamonds that disagree about coherence of the
    # complement of the closure of the height-one prime "a": the polynomial
    # model declares it coherent, the Nagata-style model does not.
    "POLY2": _diamond_document(coherent=True),
    "NAGATA2": _diamond_document(coherent=False),
}


def preset(name: str) -> PrimePoset:
    """One of the built-in example spectra; see :data:`PRESET_NAMES`."""
    try:
        document = _PRESET_DOCUMENTS[name]
    except KeyError:
        raise UnknownPreset(
            f"{name!r} is not a preset (choose from {', '.join(PRESET_NAMES)})"
        ) from None
    return load_prime_poset(document)
