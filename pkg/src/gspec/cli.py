"""Command-line frontend.

Reads poset/filtration/annotation documents, runs the engine, and emits
orders as JSON, Hasse diagrams as DOT, or terse text.  Identical inputs
produce byte-identical outputs.

Exit codes: 0 success; 1 validation error or normalisation warnings; 2 an
undetermined coherence question under --policy error; 3 an inexact result
under --require-exact.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import filtration as spf
from . import mutation as mut
from . import verify
from .poset import CycleError, Order, SizeExceeded, UnknownElement, cb_filtration, check_axioms, covering_pairs
from .spectra import (
    PRESET_NAMES,
    AnnotationKeyError,
    NotComparable,
    PrimePoset,
    SchemaError,
    UnknownPreset,
    load_prime_poset,
    preset,
)

_VALIDATION_ERRORS = (
    SchemaError,
    CycleError,
    UnknownElement,
    UnknownPreset,
    AnnotationKeyError,
    NotComparable,
    SizeExceeded,
    spf.NotSpecializationClosed,
    spf.NotDescending,
    spf.NotCodimensionFunction,
    mut.NotClosed,
    mut.NotDiscrete,
    verify.ElementMismatch,
    json.JSONDecodeError,
    OSError,
    KeyError,
    ValueError,
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses status 2 for usage errors; keep 2 reserved for
        # undetermined coherence.
        return 1 if exc.code == 2 else int(exc.code or 0)
    try:
        return args.handler(args)
    except mut.UndeterminedCoherence as exc:
        print(f"gspec: {exc}", file=sys.stderr)
        return 2
    except _VALIDATION_ERRORS as exc:
        print(f"gspec: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gspec",
        description="Closure orders of tilted hearts over finite prime posets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def poset_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--preset", choices=PRESET_NAMES, help="built-in example poset")
        p.add_argument("--file", help="poset JSON document")

    def filtration_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--levels", help="JSON list of levels, e.g. '[[\"m\"],[\"m\"]]'")
        p.add_argument("--f", help="JSON level function, e.g. '{\"m\":0,\"o\":-1}'")
        p.add_argument("--height-filtration", action="store_true",
                       help="use the height filtration of the poset")
        p.add_argument("--codim", metavar="FILE",
                       help="JSON codimension function file")

    def output_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "dot", "text"), default="text")
        p.add_argument("--out", help="write to this path instead of stdout")

    def engine_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--annotations", metavar="FILE",
                       help="JSON step annotations {\"steps\":[{\"i\":2,\"perfect\":true}]}")
        p.add_argument("--policy", choices=mut.POLICIES, default=mut.POLICY_ERROR)

    p = sub.add_parser("presets", help="list the built-in posets")
    p.set_defaults(handler=_cmd_presets)

    p = sub.add_parser("validate", help="load a poset and check its axioms")
    poset_args(p)
    output_args(p)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("filtration", help="normalise and classify a filtration")
    poset_args(p)
    filtration_args(p)
    output_args(p)
    p.set_defaults(handler=_cmd_filtration)

    p = sub.add_parser("closure", help="closure order of the heart of a filtration")
    poset_args(p)
    filtration_args(p)
    engine_args(p)
    output_args(p)
    p.add_argument("--steps", action="store_true", help="emit every chain step")
    p.add_argument("--require-exact", action="store_true")
    p.set_defaults(handler=_cmd_closure)

    p = sub.add_parser("cb", help="Cantor-Bendixson filtration of an order")
    poset_args(p)
    filtration_args(p)
    engine_args(p)
    output_args(p)
    p.set_defaults(handler=_cmd_cb)

    p = sub.add_parser("mutate", help="apply one mutation to an order")
    poset_args(p)
    filtration_args(p)
    engine_args(p)
    output_args(p)
    p.add_argument("--at", required=True, help="JSON list: the closed class to mutate at")
    p.add_argument("--rule", choices=("auto", "discrete", "perfect", "general"),
                   default="auto")
    p.add_argument("--require-exact", action="store_true")
    p.set_defaults(handler=_cmd_mutate)

    p = sub.add_parser("check", help="run the brute-force property suite")
    poset_args(p)
    filtration_args(p)
    engine_args(p)
    output_args(p)
    p.set_defaults(handler=_cmd_check)

    return parser


# -- input plumbing ----------------------------------------------------------


def _load_poset(args: argparse.Namespace) -> PrimePoset:
    if bool(args.preset) == bool(args.file):
        raise ValueError("exactly one of --preset or --file is required")
    if args.preset:
        return preset(args.preset)
    with open(args.file, encoding="utf-8") as handle:
        return load_prime_poset(json.load(handle))


def _parse_filtration(
    args: argparse.Namespace, poset: PrimePoset, required: bool = True
) -> tuple[spf.SpFiltration | None, bool]:
    """Returns the filtration and whether normalisation warnings fired."""
    sources = [
        args.levels is not None,
        args.f is not None,
        args.height_filtration,
        args.codim is not None,
    ]
    if sum(sources) > 1:
        raise ValueError("give at most one filtration source")
    if not any(sources):
        if required:
            raise ValueError(
                "a filtration is required: --levels, --f, --height-filtration or --codim"
            )
        return None, False

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", spf.FiltrationWarning)
        if args.levels is not None:
            levels = json.loads(args.levels)
            if not isinstance(levels, list) or not all(isinstance(l, list) for l in levels):
                raise ValueError("--levels must be a JSON list of lists")
            filt = spf.validate_filtration(poset, levels)
        elif args.f is not None:
            f = json.loads(args.f)
            if not isinstance(f, dict):
                raise ValueError("--f must be a JSON object")
            filt = spf.f_to_filtration(poset, f)
        elif args.height_filtration:
            filt = spf.height_filtration(poset)
        else:
            with open(args.codim, encoding="utf-8") as handle:
                d = json.load(handle)
            if not isinstance(d, dict):
                raise ValueError("codimension file must hold a JSON object")
            filt = spf.codim_filtration(poset, d)
    for warning in caught:
        print(f"gspec: warning: {warning.message}", file=sys.stderr)
    return filt, bool(caught)


def _parse_annotations(args: argparse.Namespace) -> dict[int, bool]:
    if not getattr(args, "annotations", None):
        return {}
    with open(args.annotations, encoding="utf-8") as handle:
        doc = json.load(handle)
    entries = doc.get("steps") if isinstance(doc, dict) else None
    if not isinstance(entries, list):
        raise ValueError('annotations must look like {"steps": [{"i": 2, "perfect": true}]}')
    out: dict[int, bool] = {}
    for entry in entries:
        if not isinstance(entry, dict) or set(entry) != {"i", "perfect"}:
            raise ValueError("each step annotation needs exactly the keys 'i' and 'perfect'")
        out[int(entry["i"])] = bool(entry["perfect"])
    return out


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# -- output builders ---------------------------------------------------------


def hasse_dot(order: Order, heights: dict[str, int]) -> str:
    """Hasse diagram as deterministic DOT: transitive reduction, nodes in
    rank groups by height, edges from the smaller prime to the larger."""
    lines = ["digraph gspec {", "  rankdir=BT;", "  node [shape=circle];"]
    for h in sorted(set(heights[p] for p in order.elements)):
        names = sorted(p for p in order.elements if heights[p] == h)
        group = " ".join(f"{_quote(p)};" for p in names)
        lines.append(f"  {{ rank=same; {group} }}")
    for p, q in covering_pairs(order):
        lines.append(f"  {_quote(p)} -> {_quote(q)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quote(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _relations_json(order: Order) -> list[list[str]]:
    return [list(pair) for pair in sorted(order.strict_pairs())]


def _order_json(co: mut.ClosureOrder) -> dict:
    return {
        "elements": list(co.order.elements),
        "relations": _relations_json(co.order),
        "covers": [list(pair) for pair in covering_pairs(co.order)],
        "provenance": list(co.provenance),
    }


def _bounded_json(bounded: mut.BoundedOrder) -> dict:
    if bounded.exact:
        return {"exact": True, "order": _order_json(bounded.lower)}
    return {
        "exact": False,
        "lower": _order_json(bounded.lower),
        "upper": _order_json(bounded.upper),
    }


def _order_text(order: Order) -> str:
    covers = covering_pairs(order)
    if not covers:
        return f"discrete ({len(order.elements)} isolated points)\n"
    head = f"order on {len(order.elements)} points ({len(covers)} covers)\n"
    return head + "".join(f"{p} < {q}\n" for p, q in covers)


def _render_bounded(args: argparse.Namespace, poset: PrimePoset,
                    bounded: mut.BoundedOrder) -> str:
    heights = dict(poset.height)
    if args.format == "dot":
        if bounded.exact:
            return hasse_dot(bounded.lower.order, heights)
        return (
            "// inexact result: lower bound\n"
            + hasse_dot(bounded.lower.order, heights)
            + "// inexact result: upper bound\n"
            + hasse_dot(bounded.upper.order, heights)
        )
    if args.format == "json":
        return json.dumps(_bounded_json(bounded), indent=2, sort_keys=True) + "\n"
    if bounded.exact:
        return _order_text(bounded.lower.order)
    return (
        "inexact; lower bound:\n" + _order_text(bounded.lower.order)
        + "upper bound:\n" + _order_text(bounded.upper.order)
    )


# -- subcommands -------------------------------------------------------------


def _cmd_presets(args: argparse.Namespace) -> int:
    for name in PRESET_NAMES:
        poset = preset(name)
        dim = max(poset.height.values()) if poset.height else 0
        print(f"{name}: {len(poset.base.elements)} primes, dimension {dim}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    poset = _load_poset(args)
    report = check_axioms(poset.base)
    if args.format == "json":
        payload = {
            "elements": list(poset.base.elements),
            "heights": dict(sorted(poset.height.items())),
            "covers": [list(c) for c in covering_pairs(poset.base)],
            "axioms": {
                "t0": report.t0,
                "sober": report.sober,
                "artinian": report.artinian,
                "noetherian": report.noetherian,
            },
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [f"{len(poset.base.elements)} primes, "
                 f"{len(covering_pairs(poset.base))} covers"]
        for axiom in ("t0", "sober", "artinian", "noetherian"):
            lines.append(f"{axiom}: {'pass' if getattr(report, axiom) else 'FAIL'}")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.ok else 1


def _cmd_filtration(args: argparse.Namespace) -> int:
    poset = _load_poset(args)
    filt, warned = _parse_filtration(args, poset)
    flags = spf.classify(poset, filt)
    f = spf.filtration_to_f(filt)
    if args.format == "json":
        payload = {
            "levels": [sorted(level) for level in filt.levels],
            "f": dict(sorted(f.items())),
            "classification": flags,
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [f"length {filt.n}"]
        for i, level in enumerate(filt.levels):
            lines.append(f"V{i} = {{{','.join(sorted(level))}}}")
        lines.append(
            "classification: "
            + ", ".join(k for k, v in sorted(flags.items()) if v)
        )
        _emit(args, "\n".join(lines) + "\n")
    return 1 if warned else 0


def _cmd_closure(args: argparse.Namespace) -> int:
    poset = _load_poset(args)
    filt, warned = _parse_filtration(args, poset)
    annotations = _parse_annotations(args)
    steps = mut.chain_order(poset, filt, annotations, args.policy)
    final = mut.final_order(steps, poset)
    if args.require_exact and not final.exact:
        print("gspec: result is inexact", file=sys.stderr)
        return 3

    if args.steps:
        if args.format == "json":
            payload = {
                "steps": [
                    {
                        "index": step.index,
                        "rule": step.rule,
                        "perfect": step.perfect,
                        "support": sorted(step.support),
                        "class": sorted(step.mutation_class),
                        "result": _bounded_json(post),
                    }
                    for step, post in steps
                ],
                "final": _bounded_json(final),
            }
            text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        else:
            prefix = "// " if args.format == "dot" else ""
            chunks = []
            for step, post in steps:
                suffix = " (perfect)" if step.perfect else ""
                chunks.append(f"{prefix}step {step.index}: {step.rule}{suffix}\n")
                chunks.append(_render_bounded(args, poset, post))
            text = "".join(chunks)
    else:
        text = _render_bounded(args, poset, final)
    _emit(args, text)
    return 1 if warned else 0


def _cmd_cb(args: argparse.Namespace) -> int:
    poset = _load_poset(args)
    filt, warned = _parse_filtration(args, poset, required=False)
    if filt is None:
        co = mut.standard_order(poset)
    else:
        final = mut.final_order(
            mut.chain_order(poset, filt, _parse_annotations(args), args.policy), poset
        )
        if not final.exact:
            print("gspec: cannot take the filtration of an inexact order",
                  file=sys.stderr)
            return 3
        co = final.lower
    cb = cb_filtration(co.order)
    if args.format == "json":
        payload = {"rank": cb.rank, "layers": [sorted(x) for x in cb.layers]}
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = [f"rank {cb.rank}"]
        for i, layer in enumerate(cb.layers):
            lines.append(f"X{i} = {{{','.join(sorted(layer))}}}")
        _emit(args, "\n".join(lines) + "\n")
    return 1 if warned else 0


def _cmd_mutate(args: argparse.Namespace) -> int:
    poset = _load_poset(args)
    filt, warned = _parse_filtration(args, poset, required=False)
    if filt is None:
        base = mut.exact_bounds(mut.standard_order(poset))
    else:
        base = mut.final_order(
            mut.chain_order(poset, filt, _parse_annotations(args), args.policy), poset
        )
        if not base.exact:
            print("gspec: cannot mutate an inexact order", file=sys.stderr)
            return 3
    E = json.loads(args.at)
    if not isinstance(E, list) or not all(isinstance(x, str) for x in E):
        raise ValueError("--at must be a JSON list of point names")
    current = base.lower
    rule = args.rule
    if rule == "auto":
        rule = "discrete" if current.order.subspace(
            frozenset(E) & set(current.order.elements)
        ).is_discrete() else "general"
    if rule == "discrete":
        result = mut.exact_bounds(mut.mutate_discrete(current, E))
    elif rule == "perfect":
        result = mut.exact_bounds(mut.mutate_perfect(current, E))
    else:
        result = mut.mutate_general(current, E)
    if args.require_exact and not result.exact:
        print("gspec: result is inexact", file=sys.stderr)
        return 3
    _emit(args, _render_bounded(args, poset, result))
    return 1 if warned else 0


def _cmd_check(args: argparse.Namespace) -> int:
    poset = _load_poset(args)
    filt, warned = _parse_filtration(args, poset)
    reports = verify.run_suite(poset, filt, _parse_annotations(args), args.policy)
    failed = [r for r in reports if not r.passed]
    if args.format == "json":
        payload = {
            "passed": not failed,
            "reports": [r.to_json() for r in reports],
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        lines = []
        for r in reports:
            if r.passed:
                lines.append(f"PASS {r.name}")
            else:
                witness = ", ".join(f"{k}={v}" for k, v in r.counterexample)
                lines.append(f"FAIL {r.name} ({witness})")
        _emit(args, "\n".join(lines) + "\n")
    if failed:
        first = failed[0]
        witness = ", ".join(f"{k}={v}" for k, v in first.counterexample)
        print(f"gspec: first failure: {first.name} ({witness})", file=sys.stderr)
        return 1
    return 0 if not warned else 1


if __name__ == "__main__":
    sys.exit(main())
