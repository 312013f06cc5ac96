"""Command-line harness: instances, censuses, lemma suites, reconstruction, cross-checks.

Exit codes: 0 pass, 1 counterexample, 2 inconclusive, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .a5 import A5Tuple, census_to_json, find_a5_tuples
from .cfpo import InstanceError, from_spec, load, to_json
from .formulas import LEAF_FORMULAS, SemanticEngine, SyntacticEngine, cross_check
from .groups import EnumeratedPermGroup, GroupInputError, load_table
from .lemmas import EXIT_CODES, FAIL, INCONCLUSIVE, PASS, REGISTRY, Bounds, Settings, report_json
from .order import LESSDOT_VARIANTS, STEP_READINGS
from .perm import DEFAULT_ORDER_BOUND, automorphism_group
from .reconstruct import (
    ABSTRACT,
    SEMI_ABSTRACT,
    compare_up_to_iso,
    reconstruct_abstract,
    reconstruct_semi_abstract,
    reconstruction_report,
    report_to_json,
)

USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def _instance(arg: str):
    """A spec string such as ``alt:5,5,2`` or a path to an instance JSON file."""
    if Path(arg).is_file():
        return load(arg)
    return from_spec(arg)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _bounds(args) -> Bounds:
    if args.group_order < 0 or args.census < 0 or (args.n_max is not None and args.n_max < 1):
        raise UsageError("bounds must be positive")
    return Bounds(args.group_order, args.census, args.n_max)


# -- commands ------------------------------------------------------------------------------


def cmd_generate(args) -> int:
    inst = from_spec(args.spec)
    print(f"{inst.name}: {len(inst.points)} points, {len(inst.edges)} edges", file=sys.stderr)
    _emit(to_json(inst), args.out)
    return 0


def cmd_census(args) -> int:
    inst = _instance(args.instance)
    group = automorphism_group(inst, args.group_order)
    census = find_a5_tuples(group, inst, args.census, args.seed)
    state = "complete" if census.complete else "incomplete"
    print(f"{inst.name}: |Aut| = {group.order}, {len(census.subgroups)} A5 subgroups, census {state}", file=sys.stderr)
    _emit(census_to_json(census), args.out)
    return 0 if census.complete else EXIT_CODES[INCONCLUSIVE]


def cmd_verify(args) -> int:
    names = list(REGISTRY) if args.lemma == "all" else [args.lemma]
    for name in names:
        if name not in REGISTRY:
            raise UsageError(f"unknown lemma {name!r}; known: {', '.join(REGISTRY)}")
    for spec in args.instance or []:
        from_spec(spec)
    settings = Settings(
        instances=tuple(args.instance) if args.instance else None,
        bounds=_bounds(args),
        lessdot_variant=args.lessdot,
        alpha5=args.alpha5 == "on",
        backend=args.backend,
        seed=args.seed,
        step=args.step,
    )
    reports = [REGISTRY[name](settings) for name in names]
    for r in reports:
        c = r.counts()
        print(f"{r.lemma}: {r.status} ({c[PASS]} pass, {c[FAIL]} fail, {c[INCONCLUSIVE]} inconclusive)", file=sys.stderr)
    _emit(report_json(reports), args.out)
    states = {r.status for r in reports}
    if FAIL in states:
        return EXIT_CODES[FAIL]
    return EXIT_CODES[INCONCLUSIVE] if INCONCLUSIVE in states else 0


def _parse_params(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError("--params expects two class indices, e.g. 0,3") from exc
    return a, b


def cmd_reconstruct(args) -> int:
    if bool(args.instance) == bool(args.table):
        raise UsageError("give exactly one of --instance and --table")
    inst = None
    if args.table:
        rec = reconstruct_abstract(load_table(args.table))
    else:
        inst = _instance(args.instance)
        group = automorphism_group(inst, args.group_order)
        mode = args.mode
        if mode == "auto":
            mode = ABSTRACT if group.elements is not None else SEMI_ABSTRACT
        if mode == ABSTRACT:
            if group.elements is None:
                raise UsageError("group exceeds --bounds.group-order; use --mode semi-abstract")
            rec = reconstruct_abstract(EnumeratedPermGroup(group))
        else:
            rec = reconstruct_semi_abstract(inst, args.census, args.seed)
    iso = compare_up_to_iso(rec, inst, "betweenness") if inst is not None else None
    levels = None
    params = _parse_params(args.params)
    if params is not None:
        n = rec.n_classes
        if not all(0 <= p < n for p in params):
            raise UsageError(f"--params must name classes below {n}")
        if not rec.relation("related")[params]:
            raise UsageError("parameter pair is not Related")
        ev = rec.order_evaluator("inclusive", args.alpha5 == "on", step=args.step)
        levels = ev.levels(params[0], params[1], args.n_max or max(1, n))
    doc = reconstruction_report(rec, iso, levels)
    print(f"{rec.mode}: {rec.n_classes} classes from {len(rec.interpretation.pairs)} PointReps"
          + ("" if iso is None else f"; betweenness isomorphic: {iso.ok}"), file=sys.stderr)
    _emit(report_to_json(doc), args.out)
    if iso is not None and not iso.ok:
        return EXIT_CODES[FAIL]
    if levels is not None and not levels.stabilized:
        return EXIT_CODES[INCONCLUSIVE]
    return 0


def cmd_crosscheck(args) -> int:
    formulas = tuple(args.formulas.split(",")) if args.formulas else LEAF_FORMULAS
    unknown = [f for f in formulas if f not in LEAF_FORMULAS]
    if unknown:
        raise UsageError(f"unknown formula(s) {', '.join(unknown)}; known: {', '.join(LEAF_FORMULAS)}")
    inst = _instance(args.instance)
    group = automorphism_group(inst, args.group_order)
    if group.elements is None:
        doc = {"instance": inst.name, "status": INCONCLUSIVE, "reason": f"|Aut| = {group.order} exceeds the bound",
               "formulas": {f: "skipped" for f in formulas}}
        print(f"{inst.name}: group not enumerated, every formula skipped", file=sys.stderr)
        _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", args.out)
        return EXIT_CODES[INCONCLUSIVE]
    AG = EnumeratedPermGroup(group)
    syn = SyntacticEngine(AG)
    sem = SemanticEngine(inst, [A5Tuple(AG._elements[b]) for b in syn.census.bases], complete=syn.complete)
    cc = cross_check(syn.leaves(), sem.leaves(), formulas)
    total = sum(r["discrepancies"] for r in cc.values())
    doc = {
        "instance": inst.name,
        "subgroups": syn.S,
        "status": PASS if total == 0 else FAIL,
        "formulas": {f: {"checked": r["checked"], "discrepancies": r["discrepancies"],
                         "examples": [v.to_json() for v in r["examples"]]} for f, r in cc.items()},
    }
    for f, r in cc.items():
        print(f"{f}: {r['discrepancies']} discrepancies over {r['checked']}", file=sys.stderr)
    _emit(json.dumps(doc, sort_keys=True, indent=1, default=_plain) + "\n", args.out)
    return 0 if total == 0 else EXIT_CODES[FAIL]


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    raise TypeError(type(obj).__name__)


# -- parser --------------------------------------------------------------------------------


def _add_bounds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bounds.group-order", dest="group_order", type=int, default=DEFAULT_ORDER_BOUND,
                   help="enumerate Aut only up to this order")
    p.add_argument("--bounds.census", dest="census", type=int, default=0,
                   help="random generator pairs added to a seeded census")
    p.add_argument("--n-max", dest="n_max", type=int, default=None, help="deepest <_n level")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")


def _add_switches(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha5", choices=("on", "off"), default="on")
    p.add_argument("--step", choices=STEP_READINGS, default="cumulative",
                   help="<_n recursion: 'printed' uses <_1 alone in its last two clauses")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfporecon", description="Reconstruct cone-transitive CFPOs from their automorphism groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write an instance as JSON")
    p.add_argument("spec")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("census", help="A5 census of Aut(instance)")
    p.add_argument("--instance", required=True)
    _add_bounds(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="run a lemma suite")
    p.add_argument("--lemma", required=True, help=f"one of {', '.join(REGISTRY)}, or all")
    p.add_argument("--instance", action="append", help="instance spec; repeat for several")
    p.add_argument("--variant.lessdot", dest="lessdot", choices=LESSDOT_VARIANTS, default="as-written")
    p.add_argument("--backend", choices=("semantic", "syntactic", "both"), default="both")
    _add_bounds(p)
    _add_switches(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reconstruct", help="full pipeline and comparison with the instance")
    p.add_argument("--instance", default=None)
    p.add_argument("--table", default=None, help='group table JSON {"order": n, "table": [[...]]}')
    p.add_argument("--mode", choices=("auto", ABSTRACT, SEMI_ABSTRACT), default="auto")
    p.add_argument("--params", default=None, help="parameter classes y1,y2 for the order formulas")
    _add_bounds(p)
    _add_switches(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("crosscheck", help="syntactic against semantic formula evaluation")
    p.add_argument("--instance", required=True)
    p.add_argument("--formulas", default=None, help=f"comma list from {', '.join(LEAF_FORMULAS)}")
    _add_bounds(p)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InstanceError, GroupInputError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"cfporecon: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
