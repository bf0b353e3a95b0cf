"""Command-line driver.

Verbs:

* ``check``      stability report for a presentation file
* ``eval``       evaluate a presentation to a finite structure
* ``transform``  apply a quotient spec to a presentation
* ``verify``     run the randomized coverage / oracle-equivalence suites
* ``example``    emit a built-in golden artifact
* ``derive``     read a quotient spec off finite coinserter data

Exit codes: 0 success, 1 check/verify failure, 2 usage or input error,
3 internal invariant violation.  Output is deterministic for identical
inputs; the default suite seed can be overridden with LOCALE_FORGE_SEED.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import intervals, serialize, suites
from .dsl import ParseError, parse, print_presentation, print_spec
from .evaluate import eval_dcpo, eval_frame, eval_preframe, eval_suplattice
from .generators import DomainError
from .lattice import (
    LatticeError,
    MonotoneMap,
    QuotientMode,
    as_frame_hom,
    fixed_points,
    kleene_closure,
    poset_isomorphism,
)
from .presentation import (
    PresentationError,
    PresentationKind,
    check_kind,
    instantiate_schemas,
)
from .rationals import parse_extrat
from .terms import TermError
from .transform import (
    TransformError,
    derive_spec_from_coinserter,
    present_open,
)


class UsageError(Exception):
    pass


def _parse_grid(text):
    if text is None:
        return None
    try:
        return [parse_extrat(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if path.endswith(".json"):
        doc = json.loads(source)
        if "mode" in doc:
            return serialize.spec_from_jsonable(doc)
        return serialize.presentation_from_jsonable(doc)
    return parse(source)


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# verbs


def cmd_check(args) -> int:
    p = _load(args.input)
    report = check_kind(p, grid=_parse_grid(args.grid), oracle=not args.no_oracle)
    if args.format == "json":
        _emit_json(serialize.stability_to_jsonable(report))
    else:
        sys.stdout.write(str(report) + "\n")
    return 0 if report.ok else 1


_EVALUATORS = {
    "frame": eval_frame,
    "sup": eval_suplattice,
    "preframe": eval_preframe,
    "dcpo": eval_dcpo,
}


def cmd_eval(args) -> int:
    p = _load(args.input)
    grid = _parse_grid(args.grid)
    if p.schematic:
        if grid is None:
            raise UsageError("schematic presentation: pass --grid")
        p = instantiate_schemas(p, grid)
    obj = _EVALUATORS[args.category](p)
    if args.format == "json":
        _emit_json(serialize.presented_to_jsonable(obj))
    else:
        n = obj.carrier_poset.n
        sys.stdout.write(f"{obj.category} carrier with {n} elements\n")
        for e in obj.carrier_poset.elements:
            sys.stdout.write(f"  {e}\n")
    return 0


def cmd_transform(args) -> int:
    from . import transform as tr

    p = _load(args.input)
    spec = _load(args.spec)
    mode = QuotientMode.parse(args.mode) if args.mode else spec.mode
    fn = {
        QuotientMode.SEMI_OPEN: tr.present_semi_open,
        QuotientMode.OPEN: tr.present_open,
        QuotientMode.SEMI_PROPER: tr.present_semi_proper,
        QuotientMode.PROPER: tr.present_proper,
        QuotientMode.SEMI_TRIQUOTIENT: tr.present_semi_triquotient,
        QuotientMode.TRIQUOTIENT: tr.present_triquotient,
    }[mode]
    out = fn(p, spec, check=not args.no_check)
    if args.format == "json":
        _emit_json(serialize.presentation_to_jsonable(out))
    else:
        sys.stdout.write(print_presentation(out))
    return 0


def cmd_verify(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("LOCALE_FORGE_SEED", suites.DEFAULT_SEED))
    results = []
    if args.coverage:
        kinds = (
            [PresentationKind(args.kind)]
            if args.kind
            else [PresentationKind.SUP, PresentationKind.PREFRAME, PresentationKind.DCPO]
        )
        for kind in kinds:
            results.append(suites.suite_coverage(kind, seed, args.count))
    elif args.oracle:
        if args.mode == "cross":
            results.append(suites.suite_cross_mode(seed, args.count))
        elif args.mode:
            results.append(
                suites.suite_oracle_equivalence(QuotientMode.parse(args.mode), seed, args.count)
            )
        else:
            for mode in QuotientMode:
                results.append(suites.suite_oracle_equivalence(mode, seed, args.count))
            results.append(suites.suite_cross_mode(seed, args.count))
    elif args.kleene:
        results.append(suites.suite_kleene(seed, args.count))
    else:
        raise UsageError("pick one of --coverage, --oracle, --kleene")
    ok = all(r.ok for r in results)
    if args.format == "json":
        _emit_json(
            [
                {
                    "suite": r.name,
                    "total": r.total,
                    "passed": r.passed,
                    "failures": r.failures,
                }
                for r in results
            ]
        )
    else:
        for r in results:
            sys.stdout.write(r.summary() + "\n")
    return 0 if ok else 1


def _z2_swap_artifact():
    """The two-point discrete locale glued by its swap: the derived spec
    identifies the atoms and the quotient presents the one-point locale."""
    from .generators import FiniteGeneratorDomain
    from .lattice import FinitePoset
    from .presentation import Presentation, Relation
    from .terms import TERM_ZERO, gen_term, join_of

    poset = FinitePoset.from_pairs(["bot", "a", "b", "top"], [(0, 1), (0, 2), (1, 3), (2, 3)])
    domain = FiniteGeneratorDomain(poset, use_meet=True, use_join=False)
    parent = Presentation(
        PresentationKind.SUP,
        domain,
        (Relation(join_of(["a", "b"]), gen_term("top")), Relation(gen_term("bot"), TERM_ZERO)),
    )
    frame = eval_frame(parent)
    X = frame.carrier
    swap_lab = {"bot": "bot", "a": "b", "b": "a", "top": "top"}
    idx = {e: i for i, e in enumerate(X.elements)}
    swap = as_frame_hom(MonotoneMap(X, X, tuple(idx[swap_lab[e]] for e in X.elements)))
    ident = as_frame_hom(MonotoneMap(X, X, tuple(range(X.n))))
    spec = derive_spec_from_coinserter(frame, ident, swap, QuotientMode.OPEN, coequaliser=True)
    out = present_open(parent, spec)
    quotient = eval_frame(out)
    closure = kleene_closure(MonotoneMap(X, X, swap.table))
    sub, retr = fixed_points(closure)
    pinned = [
        (quotient.interp[f"dia {g}"], retr(frame.interp[g])) for g in frame.interp
    ]
    iso = poset_isomorphism(quotient.carrier.poset, sub.poset, pinned)
    return {
        "parent": serialize.presentation_to_jsonable(parent),
        "derivedSpec": serialize.spec_to_jsonable(spec),
        "transformed": serialize.presentation_to_jsonable(out),
        "parentFrame": serialize.presented_to_jsonable(frame),
        "quotientFrame": serialize.presented_to_jsonable(quotient),
        "fixedPoints": serialize.lattice_to_jsonable(sub),
        "quotientIsTwoChain": quotient.carrier.n == 2,
        "matchesFixedPoints": iso is not None,
    }, spec, out, quotient


def cmd_example(args) -> int:
    name = args.name
    if name == "circle-open":
        out = intervals.circle_open_presentation()
        if args.format == "json":
            _emit_json(serialize.presentation_to_jsonable(out))
        else:
            sys.stdout.write(print_presentation(out))
        return 0
    if name == "circle-proper":
        out = intervals.circle_proper_presentation(simplify=args.simplify)
        if args.format == "json":
            _emit_json(serialize.presentation_to_jsonable(out))
        else:
            sys.stdout.write(print_presentation(out))
        return 0
    if name == "z2-swap":
        doc, spec, out, quotient = _z2_swap_artifact()
        if args.format == "json":
            _emit_json(doc)
        else:
            sys.stdout.write("derived quotient spec:\n")
            sys.stdout.write(print_spec(spec))
            sys.stdout.write("\ntransformed presentation:\n")
            sys.stdout.write(print_presentation(out))
            sys.stdout.write(
                f"\nquotient frame: {quotient.carrier.n} elements "
                f"({', '.join(quotient.carrier.elements)})\n"
            )
        return 0
    if name == "nat-reverse":
        rep = intervals.nat_reverse_counterexample()
        if args.format == "json":
            _emit_json(serialize.report_to_jsonable(rep))
        else:
            verdict = "established" if rep.verdict else "FAILED"
            sys.stdout.write(f"gluing N along successor: counterexample {verdict}\n")
            for n in rep.notes:
                sys.stdout.write(f"  {n}\n")
        return 0 if rep.verdict else 1
    raise UsageError(f"unknown example {name!r}")


def cmd_derive(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        bundle = json.load(fh)
    parent = serialize.presentation_from_jsonable(bundle["parent"])
    frame = eval_frame(parent)
    X = frame.carrier
    target = serialize.lattice_from_jsonable(bundle["target"])
    t_idx = {e: i for i, e in enumerate(target.elements)}
    x_idx = {e: i for i, e in enumerate(X.elements)}

    def read_map(doc) -> MonotoneMap:
        table = [0] * X.n
        for src_label, dst_label in doc.items():
            table[x_idx[src_label]] = t_idx[dst_label]
        return as_frame_hom(MonotoneMap(X, target, tuple(table)))

    fstar = read_map(bundle["fstar"])
    gstar = read_map(bundle["gstar"])
    mode = QuotientMode.parse(args.mode)
    spec = derive_spec_from_coinserter(frame, fstar, gstar, mode, coequaliser=args.coequaliser)
    if args.format == "json":
        _emit_json(serialize.spec_to_jsonable(spec))
    else:
        sys.stdout.write(print_spec(spec))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="locale-forge",
        description="frame presentations and their open/proper/triquotient locale quotients",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    def add_common(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("check", help="stability report for a presentation")
    sp.add_argument("input")
    sp.add_argument("--grid", help="comma-separated rationals for schema instantiation")
    sp.add_argument("--no-oracle", action="store_true", help="syntactic verdicts only")
    add_common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("eval", help="evaluate a presentation")
    sp.add_argument("input")
    sp.add_argument("--grid")
    sp.add_argument("--category", choices=list(_EVALUATORS), default="frame")
    add_common(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("transform", help="apply a quotient spec")
    sp.add_argument("input")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--mode", help="override the spec's mode")
    sp.add_argument("--no-check", action="store_true")
    add_common(sp)
    sp.set_defaults(fn=cmd_transform)

    sp = sub.add_parser("verify", help="run randomized verification suites")
    sp.add_argument("--coverage", action="store_true")
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--kleene", action="store_true")
    sp.add_argument("--kind", choices=["sup", "preframe", "dcpo"])
    sp.add_argument("--mode", help="quotient mode, or 'cross'")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--count", type=int, default=100)
    add_common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("example", help="emit a built-in golden artifact")
    sp.add_argument("name", choices=["circle-open", "circle-proper", "z2-swap", "nat-reverse"])
    sp.add_argument("--simplify", action="store_true")
    add_common(sp)
    sp.set_defaults(fn=cmd_example)

    sp = sub.add_parser("derive", help="quotient spec from finite coinserter data")
    sp.add_argument("input", help="JSON bundle with parent, target, fstar, gstar")
    sp.add_argument("--mode", required=True)
    sp.add_argument("--coequaliser", action="store_true")
    add_common(sp)
    sp.set_defaults(fn=cmd_derive)
    return ap


def _error_doc(kind: str, exc: Exception) -> str:
    return json.dumps({"error": kind, "detail": str(exc)}, sort_keys=True)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, ParseError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(_error_doc("input", exc) + "\n")
        return 2
    except (PresentationError, TransformError, DomainError, TermError, LatticeError, ValueError) as exc:
        sys.stderr.write(_error_doc("module", exc) + "\n")
        return 2
    except Exception as exc:  # pragma: no cover - invariant violations
        sys.stderr.write(_error_doc("internal", exc) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
