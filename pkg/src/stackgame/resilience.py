"""Resilience verdicts: does adding contract moves change the equilibrium?

A game is resilient for an order of contract players when the expanded
meta-game is equivalent to the original. The expansion of the outermost
(leading) contract is evaluated child by child rather than materialized,
which is payoff-equivalent (backward induction composes) and keeps memory
bounded by the inner expansion; budgets are still enforced on the exact
predicted node counts.

Two-player games that are strictly generic and bifurcating dispatch to the
inducible-region fast path; every report records which path produced it.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import BudgetExceededError
from .expansion import (
    AttackWitness,
    Cut,
    DEFAULT_BUDGET,
    _as_budget,
    _as_order,
    enumerate_cuts,
    expand_layers,
    extract_witness,
    format_count,
    predicted_expansion_size,
)
from .inducible import leading_equilibrium
from .solve import malice_key, outcome_set, prune, spe
from .trees import (
    Decision,
    GameTree,
    Leaf,
    StrategyProfile,
    UtilityVector,
    decision_nodes,
    leaves,
    player_count,
    require_no_contracts,
    tree_size,
    validate,
)


class Verdict(str, Enum):
    RESILIENT = "resilient"
    NOT_RESILIENT = "not-resilient"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class RegionWitness:
    """Fast-path attack evidence: the induced leaf and the threat backing it."""

    leaf_origin: int
    leaf_label: Optional[str]
    payoffs: UtilityVector
    threat_origin: Optional[int]
    threat_label: Optional[str]


@dataclass
class OrderResult:
    order: tuple[int, ...]
    verdict: Verdict
    spe_before: UtilityVector
    spe_after: Optional[UtilityVector]
    witness: Optional[object]  # AttackWitness | RegionWitness
    nodes: Optional[int]
    millis: Optional[float]
    path: str = "expansion"
    note: Optional[str] = None

    @property
    def resilient(self) -> Optional[bool]:
        if self.verdict == Verdict.INCONCLUSIVE:
            return None
        return self.verdict == Verdict.RESILIENT


@dataclass
class ResilienceReport:
    game: str
    k: Optional[int]
    mode: str
    orders: list[OrderResult]
    verdict: Verdict
    path: str = "expansion"

    @property
    def resilient(self) -> Optional[bool]:
        if self.verdict == Verdict.INCONCLUSIVE:
            return None
        return self.verdict == Verdict.RESILIENT


def _payoffs_json(payoffs) -> list[str]:
    return [str(v) for v in payoffs]


def witness_json(witness, player_names) -> dict:
    if isinstance(witness, AttackWitness):
        return {
            "via": "expansion",
            "cuts": [
                {
                    "player": player_names[c.player],
                    "choices": [[uid, idx] for uid, idx in c.choices],
                }
                for c in witness.cuts
            ],
            "outcome": {
                "leaf": witness.leaf_origin,
                "label": witness.leaf_label,
                "payoffs": _payoffs_json(witness.payoffs),
            },
        }
    return {
        "via": "region",
        "outcome": {
            "leaf": witness.leaf_origin,
            "label": witness.leaf_label,
            "payoffs": _payoffs_json(witness.payoffs),
        },
        "threat": {"leaf": witness.threat_origin, "label": witness.threat_label},
    }


def order_result_json(result: OrderResult, player_names, include_timing=False) -> dict:
    data = {
        "order": [player_names[p] for p in result.order],
        "verdict": result.verdict.value,
        "spe_before": _payoffs_json(result.spe_before),
        "path": result.path,
    }
    if result.spe_after is not None:
        data["spe_after"] = _payoffs_json(result.spe_after)
    if result.witness is not None:
        data["witness"] = witness_json(result.witness, player_names)
    if result.nodes is not None:
        data["nodes"] = result.nodes
    if include_timing and result.millis is not None:
        data["millis"] = round(result.millis, 3)
    if result.note:
        data["note"] = result.note
    return data


def report_json(report: ResilienceReport, player_names, include_timing=False) -> dict:
    return {
        "game": report.game,
        "k": report.k,
        "mode": report.mode,
        "verdict": report.verdict.value,
        "path": report.path,
        "orders": [
            order_result_json(r, player_names, include_timing) for r in report.orders
        ],
    }


RESILIENCE_REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["game", "k", "mode", "orders", "verdict"],
    "properties": {
        "game": {"type": "string"},
        "k": {"type": ["integer", "null"]},
        "mode": {"enum": ["strict", "set"]},
        "verdict": {"enum": ["resilient", "not-resilient", "inconclusive"]},
        "path": {"enum": ["expansion", "algorithm1"]},
        "orders": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["order", "verdict", "spe_before"],
                "properties": {
                    "order": {"type": "array", "items": {"type": "string"}},
                    "verdict": {"enum": ["resilient", "not-resilient", "inconclusive"]},
                    "spe_before": {"type": "array", "items": {"type": "string"}},
                    "spe_after": {"type": "array", "items": {"type": "string"}},
                    "path": {"enum": ["expansion", "algorithm1"]},
                    "nodes": {"type": "integer"},
                    "millis": {"type": "number"},
                    "note": {"type": "string"},
                    "witness": {
                        "type": "object",
                        "required": ["outcome"],
                        "properties": {
                            "via": {"enum": ["expansion", "region"]},
                            "cuts": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["player", "choices"],
                                    "properties": {
                                        "player": {"type": "string"},
                                        "choices": {
                                            "type": "array",
                                            "items": {
                                                "type": "array",
                                                "items": {"type": "integer"},
                                            },
                                        },
                                    },
                                },
                            },
                            "outcome": {
                                "type": "object",
                                "required": ["leaf", "payoffs"],
                                "properties": {
                                    "leaf": {"type": "integer"},
                                    "label": {"type": ["string", "null"]},
                                    "payoffs": {
                                        "type": "array",
                                        "items": {"type": "string"},
                                    },
                                },
                            },
                            "threat": {"type": "object"},
                        },
                    },
                },
            },
        },
    },
}


def _walk_inner_witness(sub: GameTree, profile: StrategyProfile, layers):
    """Chosen cuts at the surviving inner layers plus the realized leaf."""
    n = sub
    chosen: list[Cut] = []
    for layer in layers:
        if layer.wrapped:
            idx = profile[n.uid]
            chosen.append(layer.cuts[idx])
            n = n.children[idx]
        else:
            chosen.append(layer.cuts[0])
    while isinstance(n, Decision):
        n = n.children[profile[n.uid]]
    assert isinstance(n, Leaf)
    return chosen, n


def _preference_ranks(tree: GameTree, n_players: int) -> list[dict[UtilityVector, int]]:
    """Per player, each leaf vector's rank under that player's deterministic
    preference (0 = most preferred; preference-equivalent vectors share a
    rank). Subgame values are always leaf vectors, so ranking them once turns
    the hot backward-induction comparisons into int compares while keeping
    the exact semantics."""
    vecs = {lf.payoffs for lf in leaves(tree)}
    ranks: list[dict[UtilityVector, int]] = []
    for p in range(n_players):
        key_of = {v: (-(v[p]), malice_key(v, p)) for v in vecs}
        ordered = sorted(set(key_of.values()))
        pos = {k: i for i, k in enumerate(ordered)}
        ranks.append({v: pos[key_of[v]] for v in vecs})
    return ranks


def _cut_value_tables(node: GameTree, leader: int, ranks) -> list[UtilityVector]:
    """SPE payoffs of the cut-pinned subgame, one entry per local cut.

    Entries follow the cut enumeration order (owned uids ascending, later
    uids varying fastest); preorder uids make the child blocks contiguous, so
    parents combine child tables with plain products. Equal by construction
    to spe(prune(subtree, leader, cut)).payoffs for every local cut.
    """
    if isinstance(node, Leaf):
        return [node.payoffs]
    tables = [_cut_value_tables(c, leader, ranks) for c in node.children]
    out: list[UtilityVector] = []
    if node.owner == leader:
        for i in range(len(node.children)):
            for combo in itertools.product(*tables):
                out.append(combo[i])
        return out
    rank = ranks[node.owner]
    for combo in itertools.product(*tables):
        out.append(min(combo, key=rank.__getitem__))
    return out


def _cut_set_tables(node: GameTree, leader: int) -> list[frozenset]:
    """Outcome sets of the cut-pinned subgame, one entry per local cut."""
    if isinstance(node, Leaf):
        return [frozenset([node.payoffs])]
    tables = [_cut_set_tables(c, leader) for c in node.children]
    out: list[frozenset] = []
    if node.owner == leader:
        for i in range(len(node.children)):
            for combo in itertools.product(*tables):
                out.append(combo[i])
        return out
    for combo in itertools.product(*tables):
        floors = [min(v[node.owner] for v in s) for s in combo]
        merged = set()
        for i, s in enumerate(combo):
            bar = max(floors[j] for j in range(len(combo)) if j != i)
            merged.update(v for v in s if v[node.owner] >= bar)
        out.append(frozenset(merged))
    return out


def _decode_cut(tree: GameTree, leader: int, index: int) -> Cut:
    """The index-th cut in enumeration order, by mixed-radix decoding."""
    owned = sorted(
        (n for n in decision_nodes(tree) if n.owner == leader), key=lambda n: n.uid
    )
    choices = [0] * len(owned)
    for j in range(len(owned) - 1, -1, -1):
        fanout = len(owned[j].children)
        choices[j] = index % fanout
        index //= fanout
    return Cut(player=leader, choices=tuple((n.uid, c) for n, c in zip(owned, choices)))


def solve_expansion(tree: GameTree, order, budget=None, want_sets=False):
    """SPE of the expanded game without materializing the outer contract layer.

    Returns (payoffs, witness, total node count[, outcome set]). Every cut of
    the leading player is enumerated and the pinned game solved by backward
    induction; payoffs and sets agree exactly with running spe()/outcome_set()
    on the materialized expansion, because both rules compose over the
    outermost decision node (cross-checked in the test suite).
    """
    require_no_contracts(tree, "solve_expansion")
    players = _as_order(order)
    budget = _as_budget(budget)
    inner = expand_layers(tree, players[1:], budget)
    leader = players[0]

    predicted = predicted_expansion_size(inner.tree, leader)
    if predicted > budget.max_nodes:
        raise BudgetExceededError(
            f"expansion for order {players} would need {format_count(predicted)} "
            f"nodes (budget {budget.max_nodes})",
            predicted=predicted,
            max_nodes=budget.max_nodes,
        )

    root = inner.tree
    ranks = _preference_ranks(root, player_count(root))
    values: list[UtilityVector]
    if isinstance(root, Leaf):
        values = [root.payoffs]
    else:
        tables = [_cut_value_tables(c, leader, ranks) for c in root.children]
        if root.owner == leader:
            values = [
                combo[i]
                for i in range(len(root.children))
                for combo in itertools.product(*tables)
            ]
        else:
            rank = ranks[root.owner]
            values = [
                min(combo, key=rank.__getitem__)
                for combo in itertools.product(*tables)
            ]
    wrapped = len(values) > 1

    lead_rank = ranks[leader]
    best_idx = min(range(len(values)), key=lambda i: lead_rank[values[i]])
    payoffs = values[best_idx]

    best_cut = _decode_cut(root, leader, best_idx)
    best_sub = prune(root, leader, best_cut.as_dict())
    best_result = spe(best_sub)
    assert best_result.payoffs == payoffs, "table evaluation diverged from prune+spe"
    inner_cuts, lf = _walk_inner_witness(best_sub, best_result.profile, inner.layers)
    witness = AttackWitness(
        cuts=tuple([best_cut] + inner_cuts),
        leaf_origin=lf.origin,
        leaf_label=lf.label,
        payoffs=lf.payoffs,
    )

    if not want_sets:
        return payoffs, witness, predicted

    if isinstance(root, Leaf):
        sets = [frozenset([root.payoffs])]
    else:
        set_tables = [_cut_set_tables(c, leader) for c in root.children]
        if root.owner == leader:
            sets = [
                combo[i]
                for i in range(len(root.children))
                for combo in itertools.product(*set_tables)
            ]
        else:
            merged_sets = []
            for combo in itertools.product(*set_tables):
                floors = [min(v[root.owner] for v in s) for s in combo]
                merged = set()
                for i, s in enumerate(combo):
                    bar = max(floors[j] for j in range(len(combo)) if j != i)
                    merged.update(v for v in s if v[root.owner] >= bar)
                merged_sets.append(frozenset(merged))
            sets = merged_sets
    if not wrapped:
        return payoffs, witness, predicted, sets[0]
    floors = [min(v[leader] for v in s) for s in sets]
    combined = set()
    for i, s in enumerate(sets):
        bar = max(floors[j] for j in range(len(sets)) if j != i)
        combined.update(v for v in s if v[leader] >= bar)
    return payoffs, witness, predicted, frozenset(combined)


def is_resilient(tree: GameTree, order, mode: str = "strict", budget=None) -> OrderResult:
    """Expand one contract order and compare equilibria with the original."""
    players = _as_order(order)
    budget = _as_budget(budget)
    before = spe(tree)
    t0 = time.perf_counter()
    try:
        if mode == "set":
            after, witness, nodes, after_set = solve_expansion(
                tree, players, budget, want_sets=True
            )
            ok = after_set == outcome_set(tree)
        else:
            after, witness, nodes = solve_expansion(tree, players, budget)
            ok = after == before.payoffs
    except BudgetExceededError as err:
        return OrderResult(
            order=players,
            verdict=Verdict.INCONCLUSIVE,
            spe_before=before.payoffs,
            spe_after=None,
            witness=None,
            nodes=None,  # the exact prediction may be astronomically large
            millis=(time.perf_counter() - t0) * 1000.0,
            note=str(err),
        )
    return OrderResult(
        order=players,
        verdict=Verdict.RESILIENT if ok else Verdict.NOT_RESILIENT,
        spe_before=before.payoffs,
        spe_after=after,
        witness=None if ok else witness,
        nodes=nodes,
        millis=(time.perf_counter() - t0) * 1000.0,
    )


def _overall(orders) -> Verdict:
    if any(r.verdict == Verdict.NOT_RESILIENT for r in orders):
        return Verdict.NOT_RESILIENT
    if any(r.verdict == Verdict.INCONCLUSIVE for r in orders):
        return Verdict.INCONCLUSIVE
    return Verdict.RESILIENT


def k_resilient(
    tree: GameTree,
    k: int,
    mode: str = "strict",
    budget=None,
    name: str = "game",
    short_circuit: bool = False,
) -> ResilienceReport:
    """Verdict over every injective order of k players, lexicographic."""
    n = player_count(tree)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} players")
    budget = _as_budget(budget)
    results: list[OrderResult] = []
    for order in itertools.permutations(range(n), k):
        result = is_resilient(tree, order, mode=mode, budget=budget)
        results.append(result)
        if short_circuit and result.verdict == Verdict.NOT_RESILIENT:
            break
    return ResilienceReport(
        game=name, k=k, mode=mode, orders=results, verdict=_overall(results)
    )


def _fast_path_applicable(tree: GameTree) -> bool:
    if player_count(tree) != 2:
        return False
    if any(len(n.children) != 2 for n in decision_nodes(tree)):
        return False
    report = validate(tree, (0, 1))
    return report.strictly_generic


def full_resilient(
    tree: GameTree,
    mode: str = "strict",
    budget=None,
    name: str = "game",
    force_path: Optional[str] = None,
) -> ResilienceReport:
    """n-resilience; strictly generic bifurcating 2-player games go fast.

    The fast path runs the inducible-region solver once per leader role. For
    a failing order it still tries the expansion to attach a cut-level
    witness, falling back to the region's threat if the budget stops it.
    """
    n = player_count(tree)
    budget = _as_budget(budget)
    use_fast = force_path != "expansion" and (
        force_path == "algorithm1" or _fast_path_applicable(tree)
    )
    if not use_fast:
        report = k_resilient(tree, n, mode=mode, budget=budget, name=name)
        report.k = n
        return report

    before = spe(tree)
    results: list[OrderResult] = []
    for leader in (0, 1):
        t0 = time.perf_counter()
        entry = leading_equilibrium(tree, leader)
        ok = entry.payoffs == before.payoffs
        witness = None
        if not ok:
            try:
                _, witness, _ = solve_expansion(tree, (leader, 1 - leader), budget)
            except BudgetExceededError:
                witness = RegionWitness(
                    leaf_origin=entry.origin,
                    leaf_label=entry.label,
                    payoffs=entry.payoffs,
                    threat_origin=entry.threat,
                    threat_label=None,
                )
        results.append(
            OrderResult(
                order=(leader, 1 - leader),
                verdict=Verdict.RESILIENT if ok else Verdict.NOT_RESILIENT,
                spe_before=before.payoffs,
                spe_after=entry.payoffs,
                witness=witness,
                nodes=tree_size(tree),
                millis=(time.perf_counter() - t0) * 1000.0,
                path="algorithm1",
            )
        )
    return ResilienceReport(
        game=name,
        k=n,
        mode=mode,
        orders=results,
        verdict=_overall(results),
        path="algorithm1",
    )
