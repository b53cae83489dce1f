"""Command-line front end.

Subcommands: solve, expand, resilience, inducible, commerce, fuzz, dot.
Exit codes: 0 success (or resilient), 1 not resilient / property violated,
2 usage error, 3 invalid game or parameters, 4 budget exceeded or
inconclusive. Output is deterministic for fixed inputs and seeds; wall-clock
timings are only emitted under --timing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import commerce as commerce_mod
from . import harness
from .dsl import parse_file, serialize, to_dot, GameDocument
from .errors import (
    BudgetExceededError,
    DuplicatePlayerInOrderError,
    GameError,
    NotTwoPlayerError,
    ParseError,
)
from .expansion import ExpansionBudget, expand_contract_nodes, expand_order
from .inducible import binarize, inducible_region, leading_equilibrium
from .rational import vector_str
from .resilience import (
    ResilienceReport,
    Verdict,
    is_resilient,
    k_resilient,
    report_json,
)
from .solve import outcome_set, spe
from .trees import has_contract_nodes, leaves

EXIT_OK = 0
EXIT_NOT_RESILIENT = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4

BUDGET_ENV_VAR = "STACKGAME_MAX_NODES"


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return ExpansionBudget().max_nodes


def _emit_json(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _load(path, budget=None) -> GameDocument:
    doc = parse_file(path)
    if has_contract_nodes(doc.root):
        root = expand_contract_nodes(doc.root, budget)
        doc = GameDocument(name=doc.name, players=doc.players, root=root)
    return doc


def _order_indices(doc: GameDocument, text: str) -> tuple[int, ...]:
    names = [n.strip() for n in text.split(",") if n.strip()]
    try:
        return tuple(doc.player(n).index for n in names)
    except KeyError as err:
        raise NotTwoPlayerError("") from err  # replaced below; never shown


def _parse_order(parser, doc: GameDocument, text: str) -> tuple[int, ...]:
    names = [n.strip() for n in text.split(",") if n.strip()]
    indices = []
    for n in names:
        try:
            indices.append(doc.player(n).index)
        except KeyError:
            parser.error(f"unknown player {n!r}; game declares {', '.join(doc.player_names)}")
    if not indices:
        parser.error("--order needs at least one player name")
    return tuple(indices)


def _cmd_solve(args, parser) -> int:
    doc = _load(args.file, args.max_nodes)
    if args.mode == "set":
        outcomes = sorted(outcome_set(doc.root))
        if args.json:
            _emit_json(
                {
                    "game": doc.name,
                    "mode": "set",
                    "outcomes": [[str(v) for v in vec] for vec in outcomes],
                }
            )
        else:
            for vec in outcomes:
                print(vector_str(vec))
        return EXIT_OK
    result = spe(doc.root)
    if args.json:
        _emit_json(
            {
                "game": doc.name,
                "mode": "strict",
                "spe": [str(v) for v in result.payoffs],
                "leaf": {"id": result.leaf_origin, "label": result.leaf_label},
                "choices": {str(k): v for k, v in sorted(result.profile.choices.items())},
            }
        )
    else:
        print(vector_str(result.payoffs))
    return EXIT_OK


def _cmd_expand(args, parser) -> int:
    doc = _load(args.file, args.max_nodes)
    order = _parse_order(parser, doc, args.order)
    expanded = expand_order(doc.root, order, ExpansionBudget(args.max_nodes))
    out_doc = GameDocument(name=doc.name, players=doc.players, root=expanded)
    text = serialize(out_doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verdict_exit(verdict: Verdict) -> int:
    if verdict == Verdict.RESILIENT:
        return EXIT_OK
    if verdict == Verdict.NOT_RESILIENT:
        return EXIT_NOT_RESILIENT
    return EXIT_BUDGET


def _print_report(report: ResilienceReport, names) -> None:
    for r in report.orders:
        order = ",".join(names[p] for p in r.order)
        line = f"order ({order}): {r.verdict.value}"
        if r.spe_after is not None:
            line += f"  spe {vector_str(r.spe_before)} -> {vector_str(r.spe_after)}"
        if r.note:
            line += f"  [{r.note}]"
        print(line)
        if r.witness is not None and hasattr(r.witness, "cuts"):
            for cut in r.witness.cuts:
                choices = ", ".join(f"node {uid} -> child {idx}" for uid, idx in cut.choices)
                print(f"  cut for {names[cut.player]}: {choices or 'trivial'}")
            label = r.witness.leaf_label or f"leaf#{r.witness.leaf_origin}"
            print(f"  outcome: {label} {vector_str(r.witness.payoffs)}")
    print(f"verdict: {report.verdict.value}")


def _cmd_resilience(args, parser) -> int:
    if (args.k is None) == (args.order is None):
        parser.error("pass exactly one of --k or --order")
    doc = _load(args.file, args.max_nodes)
    budget = ExpansionBudget(args.max_nodes)
    if args.order is not None:
        order = _parse_order(parser, doc, args.order)
        if len(set(order)) != len(order):
            parser.error("--order must not repeat a player")
        result = is_resilient(doc.root, order, mode=args.mode, budget=budget)
        report = ResilienceReport(
            game=doc.name, k=len(order), mode=args.mode, orders=[result], verdict=result.verdict
        )
    else:
        report = k_resilient(
            doc.root, args.k, mode=args.mode, budget=budget, name=doc.name
        )
    if args.json:
        _emit_json(report_json(report, doc.player_names, include_timing=args.timing))
    else:
        _print_report(report, doc.player_names)
    return _verdict_exit(report.verdict)


def _cmd_inducible(args, parser) -> int:
    doc = _load(args.file, args.max_nodes)
    try:
        leader = doc.player(args.leader)
    except KeyError:
        parser.error(f"unknown player {args.leader!r}; game declares {', '.join(doc.player_names)}")
    root = doc.root
    if any(len(n.children) != 2 for n in _decisions(root)):
        root = binarize(root)
        print("note: game binarized for the region computation", file=sys.stderr)
    region = inducible_region(root, leader.index)
    best = leading_equilibrium(root, leader.index)
    labels = {lf.uid: (lf.label or f"leaf#{lf.origin}") for lf in leaves(root)}
    if args.json:
        _emit_json(
            {
                "game": doc.name,
                "leader": leader.name,
                "region": [
                    {
                        "label": e.describe(),
                        "payoffs": [str(v) for v in e.payoffs],
                        "threat": labels.get(e.threat) if e.threat is not None else None,
                    }
                    for e in region
                ],
                "equilibrium": {
                    "label": best.describe(),
                    "payoffs": [str(v) for v in best.payoffs],
                },
            }
        )
        return EXIT_OK
    print(f"leader: {leader.name}")
    width = max(len(e.describe()) for e in region)
    for e in region:
        threat = labels.get(e.threat, "-") if e.threat is not None else "-"
        mark = " *" if e.leaf == best.leaf else ""
        print(f"  {e.describe():<{width}}  {vector_str(e.payoffs):<18} threat: {threat}{mark}")
    print(f"leading equilibrium: {best.describe()} {vector_str(best.payoffs)}")
    return EXIT_OK


def _decisions(root):
    from .trees import decision_nodes

    return decision_nodes(root)


def _cmd_commerce(args, parser) -> int:
    params = commerce_mod.CommerceParams.from_strings(
        args.x, args.xprime, args.y, getattr(args, "lambda"), args.gamma
    )
    audit = commerce_mod.audit(args.contract, params, ExpansionBudget(args.max_nodes))
    if args.json:
        _emit_json(commerce_mod.audit_json(audit, include_timing=args.timing))
        return _verdict_exit(audit.verdict)
    for c in audit.constraints.constraints:
        status = "ok" if c.satisfied else "FAILS"
        print(f"constraint {c.name}: {c.lhs} {c.op} {c.rhs}  [{status}]")
    print(f"spe: {audit.spe_label} {vector_str(audit.spe_payoffs)}")
    if audit.reference_margin is not None:
        print(f"margin: {audit.margin} (stated bound: {audit.reference_margin})")
    else:
        print(f"margin: {audit.margin}")
    for name, la in sorted(audit.leaders.items()):
        labels = ", ".join(e.describe() for e in la.region)
        print(f"leader {name}: region {{{labels}}} -> {la.equilibrium.describe()} "
              f"{vector_str(la.equilibrium.payoffs)}")
    for r in audit.k1 + audit.k2:
        order = ",".join(commerce_mod.PLAYERS[p].name for p in r.order)
        print(f"order ({order}): {r.verdict.value}")
    print(f"fast path agrees: {'yes' if audit.fast_agrees else 'NO'}")
    verdict = audit.verdict.value
    if audit.verdict == Verdict.RESILIENT:
        verdict = "full resilient"
    print(f"verdict: {verdict}")
    return _verdict_exit(audit.verdict)


def _cmd_fuzz(args, parser) -> int:
    if args.check == "algorithm1" and args.players != 2:
        parser.error("--check algorithm1 needs --players 2")
    config = harness.GeneratorConfig(
        players=args.players,
        max_depth=args.depth,
        branching=(2, 2),
        max_leaves=args.max_leaves,
        seed=args.seed,
        strict_generic=True,
    )
    budget = ExpansionBudget(args.max_nodes)
    if args.check == "transitivity":
        result = harness.check_downward_transitivity(
            config, args.games, k_max=args.players, budget=budget
        )
    elif args.check == "algorithm1":
        result = harness.check_algorithm1_agreement(config, args.games, budget=budget)
    else:
        result = harness.check_idempotence(config, args.games, budget=budget)
    if args.out:
        harness.write_campaign(result, args.out, include_timing=args.timing)
    if args.json:
        _emit_json(result.to_json(include_timing=args.timing))
    else:
        total = result.checked + result.inconclusive
        pct = 100.0 * result.inconclusive / total if total else 0.0
        print(
            f"{result.property_name}: {result.games} games, {result.checked} checks, "
            f"{result.inconclusive} inconclusive ({pct:.1f}%)"
        )
        for c in result.counterexamples:
            print(f"counterexample game {c.index}: {c.detail}")
        print("PASS" if result.passed else "FAIL")
    return EXIT_OK if result.passed else EXIT_NOT_RESILIENT


def _cmd_dot(args, parser) -> int:
    doc = parse_file(args.file)
    profile = None
    highlight = None
    if args.annotate == "spe":
        if has_contract_nodes(doc.root):
            print("cannot annotate spe on a game with contract nodes; expand first", file=sys.stderr)
            return EXIT_INVALID
        profile = spe(doc.root).profile
    elif args.annotate == "attack":
        if args.order is None:
            parser.error("--annotate attack needs --order")
        if has_contract_nodes(doc.root):
            print("cannot annotate a game with contract nodes; expand first", file=sys.stderr)
            return EXIT_INVALID
        order = _parse_order(parser, doc, args.order)
        result = is_resilient(doc.root, order, budget=ExpansionBudget(args.max_nodes))
        profile = spe(doc.root).profile
        if result.witness is not None:
            highlight = {result.witness.leaf_origin: "red"}
    text = to_dot(doc, spe_profile=profile, highlight_leaves=highlight)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stackgame",
        description="Solve extensive-form games with contract commitments and "
        "audit their resilience to commitment attacks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    budget_default = _default_budget()

    def add_common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="game file (.game)")
        p.add_argument(
            "--max-nodes",
            type=int,
            default=budget_default,
            help=f"expansion node budget (default {budget_default}, env {BUDGET_ENV_VAR})",
        )
        p.add_argument("--timing", action="store_true", help="include wall-clock timings")

    p = sub.add_parser("solve", help="compute the equilibrium of a game")
    add_common(p)
    p.add_argument("--mode", choices=["strict", "set"], default="strict")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("expand", help="materialize the contract meta-game")
    add_common(p)
    p.add_argument("--order", required=True, help="comma-separated players, leading first")
    p.add_argument("-o", "--output", help="write the expanded game here")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("resilience", help="check whether contracts change the equilibrium")
    add_common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--k", type=int, help="check every order of k distinct players")
    group.add_argument("--order", help="check one specific order (comma-separated)")
    p.add_argument("--mode", choices=["strict", "set"], default="strict")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_resilience)

    p = sub.add_parser("inducible", help="leaves a leading contract player can force")
    add_common(p)
    p.add_argument("--leader", required=True, help="name of the leading player")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_inducible)

    p = sub.add_parser("commerce", help="audit one of the bundled escrow contracts")
    add_common(p, needs_file=False)
    p.add_argument("--contract", type=int, choices=[1, 2], required=True)
    p.add_argument("--x", required=True, help="price (rational)")
    p.add_argument("--xprime", required=True, help="item value to the seller")
    p.add_argument("--y", required=True, help="item value to the buyer")
    p.add_argument("--lambda", required=True, help="dispute deposit")
    p.add_argument("--gamma", help="oracle error rate (contract 2)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_commerce)

    p = sub.add_parser("fuzz", help="run a seeded property campaign")
    add_common(p, needs_file=False)
    p.add_argument(
        "--check",
        choices=["transitivity", "algorithm1", "idempotence"],
        required=True,
    )
    p.add_argument("--players", type=int, default=2)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-leaves", type=int, default=8)
    p.add_argument("--out", help="directory for campaign artifacts")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_fuzz)

    p = sub.add_parser("dot", help="render a game as a DOT digraph")
    add_common(p)
    p.add_argument("-o", "--output", help="write DOT here instead of stdout")
    p.add_argument("--annotate", choices=["spe", "attack"])
    p.add_argument("--order", help="attack order for --annotate attack")
    p.set_defaults(func=_cmd_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except BudgetExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except DuplicatePlayerInOrderError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"error: {args.file if hasattr(args, 'file') else ''}:{err}", file=sys.stderr)
        return EXIT_INVALID
    except (GameError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
