"""Command-line front end.

Subcommands: run (a voting rule), check (an axiom against a bundle),
laminar (recognition + decomposition dump), gen (instance generators),
search (randomized counterexample hunt), paper-verify (the built-in
fixture suite).  Exit status: 0 success or Satisfied, 1 Violated, 2 usage
error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .axioms import (
    CohesivenessWitness,
    CommitteeWitness,
    CoreWitness,
    PriceSystem,
    check_priceable,
)
from .io import FormatError, load_instance, serialize_instance
from .laminar import (
    NotLaminarError,
    Split,
    UnanimousLeaf,
    UnanimousProject,
    generate_laminar,
    recognize_laminar,
)
from .model import as_fraction, binarize
from .oracle import GeneratorSpec, random_instance, search_counterexample
from .registry import MAIN_CHECKERS
from .rules import pav, phragmen, rule_x
from .verify import run_verification

RULES = ("phragmen", "pav", "rulex")

REPORT_HEADER = f"pbprop report v1 (tool {__version__})"


def _fmt_set(items) -> str:
    return "{" + ",".join(sorted(items)) + "}"


def _fmt_payments(payments: dict) -> str:
    return " ".join(f"{v}:{p}" for v, p in sorted(payments.items()))


def _print_witness(witness, out):
    if witness is None:
        return
    if isinstance(witness, CohesivenessWitness):
        out.write(f"  witness group  {_fmt_set(witness.group)}\n")
        out.write(f"  witness target {_fmt_set(witness.target)}\n")
        for c in sorted(witness.target):
            out.write(f"  alpha({c}) = {witness.alpha[c]}\n")
        out.write(f"  alpha total = {witness.sum_alpha()}\n")
    elif isinstance(witness, CoreWitness):
        out.write(f"  witness group  {_fmt_set(witness.group)}\n")
        out.write(f"  witness target {_fmt_set(witness.target)}\n")
    elif isinstance(witness, CommitteeWitness):
        out.write(f"  witness group {_fmt_set(witness.group)}\n")
        out.write(f"  owed level    {witness.level}\n")
    else:
        out.write(f"  witness: {witness}\n")


def _print_certificate(cert, out):
    if not isinstance(cert, PriceSystem):
        return
    out.write(f"  price system: initial budget b = {cert.initial_budget}\n")
    for v in sorted(cert.payments):
        row = {c: p for c, p in cert.payments[v].items() if p != 0}
        if row:
            out.write(f"    {v} pays {_fmt_payments(row)}\n")


def _cmd_run(args, out):
    instance = load_instance(args.file)
    if args.threshold is not None:
        instance = binarize(instance, as_fraction(args.threshold))
    out.write(REPORT_HEADER + "\n")
    out.write(f"rule {args.rule} on {args.file}\n")
    if args.rule == "phragmen":
        winners, trace = phragmen(instance, collect_ties=args.all_ties)
        out.write(f"bundle {_fmt_set(winners)}\n")
        for e in trace.events:
            line = f"  t={e.time} buy {e.project} payments {_fmt_payments(e.payments)}"
            if e.tied_with:
                line += f" tied-with {','.join(e.tied_with)}"
            out.write(line + "\n")
        out.write(f"  stop at t={trace.stop_time} ({trace.stop_reason})\n")
    elif args.rule == "pav":
        if args.all_ties:
            winners, score, ties = pav(instance, collect_ties=True)
            out.write(f"bundle {_fmt_set(winners)}\nscore {score}\n")
            for t in ties:
                out.write(f"  maximizer {_fmt_set(t)}\n")
        else:
            winners, score = pav(instance)
            out.write(f"bundle {_fmt_set(winners)}\nscore {score}\n")
    else:
        winners, trace = rule_x(instance, collect_ties=args.all_ties)
        out.write(f"bundle {_fmt_set(winners)}\n")
        for r in trace.rounds:
            line = f"  rho={r.rho} buy {r.project} payments {_fmt_payments(r.payments)}"
            if r.tied_with:
                line += f" tied-with {','.join(r.tied_with)}"
            out.write(line + "\n")
    return 0


def _cmd_check(args, out):
    instance = load_instance(args.file)
    bundle = frozenset(x for x in args.bundle.split(",") if x)
    if args.axiom == "priceable":
        verdict = check_priceable(instance, bundle, b_min_one=args.b_min == 1)
    else:
        verdict = MAIN_CHECKERS[args.axiom](instance, bundle)
    out.write(REPORT_HEADER + "\n")
    out.write(f"check {args.axiom} on {args.file} bundle {_fmt_set(bundle)}\n")
    out.write(("Satisfied" if verdict.satisfied else "Violated") + "\n")
    _print_witness(verdict.witness, out)
    _print_certificate(verdict.certificate, out)
    return 0 if verdict.satisfied else 1


def _dump_tree(node, out, indent="  "):
    if isinstance(node, UnanimousLeaf):
        out.write(
            f"{indent}leaf voters {_fmt_set(node.voters)} projects "
            f"{_fmt_set(node.projects)} budget {node.budget}\n"
        )
    elif isinstance(node, UnanimousProject):
        out.write(f"{indent}unanimous project {node.project} budget {node.budget}\n")
        _dump_tree(node.child, out, indent + "  ")
    elif isinstance(node, Split):
        out.write(f"{indent}split budget {node.budget}\n")
        _dump_tree(node.left, out, indent + "  ")
        _dump_tree(node.right, out, indent + "  ")


def _cmd_laminar(args, out):
    instance = load_instance(args.file)
    out.write(REPORT_HEADER + "\n")
    try:
        root = recognize_laminar(instance)
    except NotLaminarError as exc:
        out.write(f"not laminar: {exc}\n")
        return 1
    out.write(f"laminar instance {args.file}\n")
    _dump_tree(root, out)
    return 0


def _cmd_gen(args, out):
    if args.kind == "laminar":
        instance = generate_laminar(args.seed, max_depth=args.depth)
    else:
        spec = GeneratorSpec(
            max_voters=args.max_voters,
            max_projects=args.max_projects,
            approval=not args.cardinal,
        )
        import random

        instance = random_instance(spec, random.Random(args.seed))
    text = serialize_instance(instance)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_search(args, out):
    spec = GeneratorSpec()
    found = search_counterexample(
        spec, args.assume, args.conclude, trials=args.trials, seed=args.seed
    )
    out.write(REPORT_HEADER + "\n")
    out.write(
        f"search {args.assume} => {args.conclude} "
        f"trials={args.trials} seed={args.seed}\n"
    )
    if found is None:
        out.write("NoneFound\n")
        return 0
    out.write(f"counterexample at trial {found.trial}\n")
    out.write(f"bundle {_fmt_set(found.bundle)}\n")
    out.write(serialize_instance(found.instance))
    return 0


def _cmd_verify(args, out):
    out.write(REPORT_HEADER + "\n")
    items = run_verification()
    width = max(len(i.name) for i in items)
    failures = 0
    for item in items:
        status = "pass" if item.ok else "FAIL"
        out.write(f"{item.name.ljust(width)}  {status}  {item.detail}\n")
        failures += not item.ok
    out.write(f"{len(items) - failures}/{len(items)} fixtures pass\n")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbprop",
        description="Exact budgeting rules and proportionality-axiom checkers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a voting rule on an instance file")
    p_run.add_argument("rule", choices=RULES)
    p_run.add_argument("file")
    p_run.add_argument("--threshold", help="binarize utilities at this value first")
    p_run.add_argument("--all-ties", action="store_true")
    p_run.set_defaults(func=_cmd_run)

    p_check = sub.add_parser("check", help="check an axiom for a given bundle")
    p_check.add_argument("axiom", choices=sorted(set(MAIN_CHECKERS) - {"priceable1"}))
    p_check.add_argument("file")
    p_check.add_argument("--bundle", required=True, help="comma-separated project ids")
    p_check.add_argument(
        "--b-min", type=int, choices=(0, 1), default=0,
        help="lower bound on the price-system budget (priceable only)",
    )
    p_check.set_defaults(func=_cmd_check)

    p_lam = sub.add_parser("laminar", help="recognize and dump the decomposition")
    p_lam.add_argument("file")
    p_lam.set_defaults(func=_cmd_laminar)

    p_gen = sub.add_parser("gen", help="generate an instance")
    p_gen.add_argument("kind", choices=("laminar", "random"))
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--depth", type=int, default=2)
    p_gen.add_argument("--max-voters", type=int, default=5)
    p_gen.add_argument("--max-projects", type=int, default=4)
    p_gen.add_argument("--cardinal", action="store_true")
    p_gen.add_argument("--out", help="write to this path instead of stdout")
    p_gen.set_defaults(func=_cmd_gen)

    p_search = sub.add_parser("search", help="hunt for an axiom-implication witness")
    p_search.add_argument("--assume", required=True, choices=sorted(MAIN_CHECKERS))
    p_search.add_argument("--conclude", required=True, choices=sorted(MAIN_CHECKERS))
    p_search.add_argument("--trials", type=int, default=200)
    p_search.add_argument("--seed", type=int, default=0)
    p_search.set_defaults(func=_cmd_search)

    p_verify = sub.add_parser(
        "paper-verify", help="run the built-in reference fixture suite"
    )
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage error, 0 on --help; keep that contract.
        return int(exc.code or 0)
    try:
        return args.func(args, sys.stdout)
    except (FormatError, NotLaminarError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
