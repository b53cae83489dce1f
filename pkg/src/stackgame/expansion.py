"""Commitment enumeration and the explicit contract meta-game.

A contract move for a player is expanded into an ordinary decision node with
one child per pure-strategy commitment (cut) the player could deploy. Orders
of several contracts are expanded bottom-up, innermost (last) player first,
so each earlier player's commitments range over the already-expanded game and
can condition on the later players' contract choices.

Expansion sizes are predicted exactly with big-integer arithmetic before any
children are materialized, so a budget violation never exhausts memory.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceededError, DuplicatePlayerInOrderError
from .solve import prune
from .trees import (
    ContractNode,
    Decision,
    GameTree,
    Leaf,
    StrategyProfile,
    UtilityVector,
    owned_nodes,
    player_index,
    reindex,
    require_no_contracts,
    tree_size,
)


@dataclass(frozen=True)
class Cut:
    """A pure-strategy commitment: one chosen child per owned decision node."""

    player: int
    choices: tuple[tuple[int, int], ...]  # (node uid, child index), sorted by uid

    def as_dict(self) -> dict[int, int]:
        return dict(self.choices)

    def __len__(self):
        return len(self.choices)


@dataclass(frozen=True)
class ContractOrder:
    players: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.players)) != len(self.players):
            raise DuplicatePlayerInOrderError(f"order {self.players} repeats a player")
        if not self.players:
            raise ValueError("contract order must name at least one player")

    def __iter__(self):
        return iter(self.players)

    def __len__(self):
        return len(self.players)


@dataclass(frozen=True)
class ExpansionBudget:
    max_nodes: int = 10_000_000

    def __post_init__(self):
        if self.max_nodes <= 0:
            raise ValueError("budget must be positive")


DEFAULT_BUDGET = ExpansionBudget()


def format_count(n: int) -> str:
    """Node counts can be astronomically large; print huge ones as magnitudes."""
    if n < 10**18:
        return str(n)
    return f"about 10^{(n.bit_length() - 1) * 30103 // 100000}"


def _as_budget(budget) -> ExpansionBudget:
    if budget is None:
        return DEFAULT_BUDGET
    if isinstance(budget, ExpansionBudget):
        return budget
    return ExpansionBudget(int(budget))


def _as_order(order) -> tuple[int, ...]:
    if isinstance(order, ContractOrder):
        return order.players
    players = tuple(player_index(p) for p in order)
    if len(set(players)) != len(players):
        raise DuplicatePlayerInOrderError(f"order {players} repeats a player")
    return players


def cut_count(tree: GameTree, player) -> int:
    """Number of pure-strategy commitments available to the player."""
    return math.prod(len(n.children) for n in owned_nodes(tree, player))


def predicted_expansion_size(tree: GameTree, player) -> int:
    """Exact node count of expand_one's result, without materializing it.

    Computed recursively: for each subtree, the number of cut combinations
    below it and the total pruned size summed over those combinations.
    """
    p = player_index(player)

    def rec(n: GameTree) -> tuple[int, int]:
        # returns (combos, summed pruned size over combos)
        if isinstance(n, Leaf):
            return 1, 1
        combos = [rec(c) for c in n.children]
        prod_all = math.prod(c for c, _ in combos)
        cross = 0
        for i, (ci, si) in enumerate(combos):
            cross += si * (prod_all // ci)
        if n.owner == p:
            return len(n.children) * prod_all, cross
        return prod_all, prod_all + cross

    combos, summed = rec(tree)
    if combos == 1:
        return summed
    return 1 + summed


def enumerate_cuts(tree: GameTree, player, budget=None) -> list[Cut]:
    """All commitments for the player, lexicographic by node uid then child.

    A player owning no decision nodes gets exactly one empty cut.
    """
    require_no_contracts(tree, "enumerate_cuts")
    p = player_index(player)
    budget = _as_budget(budget)
    owned = sorted(owned_nodes(tree, p), key=lambda n: n.uid)
    total = math.prod(len(n.children) for n in owned)
    if total > budget.max_nodes:
        raise BudgetExceededError(
            f"{format_count(total)} cuts exceed the budget of {budget.max_nodes}",
            predicted=total,
            max_nodes=budget.max_nodes,
        )
    uids = [n.uid for n in owned]
    ranges = [range(len(n.children)) for n in owned]
    return [
        Cut(player=p, choices=tuple(zip(uids, combo)))
        for combo in itertools.product(*ranges)
    ]


@dataclass(frozen=True)
class Layer:
    """One contract level of an expanded game, outermost level first.

    ``wrapped`` is False when the player had a single commitment (no owned
    nodes), in which case no decision node was added for the layer.
    """

    player: int
    cuts: tuple[Cut, ...]
    wrapped: bool


@dataclass(frozen=True)
class LayeredExpansion:
    base: GameTree
    order: tuple[int, ...]
    layers: tuple[Layer, ...]
    tree: GameTree

    @property
    def size(self) -> int:
        return tree_size(self.tree)


def _expand_step(tree: GameTree, player: int, budget: ExpansionBudget):
    predicted = predicted_expansion_size(tree, player)
    if predicted > budget.max_nodes:
        raise BudgetExceededError(
            f"expansion for player {player} would need {format_count(predicted)} "
            f"nodes (budget {budget.max_nodes})",
            predicted=predicted,
            max_nodes=budget.max_nodes,
        )
    cuts = enumerate_cuts(tree, player, budget)
    if len(cuts) == 1:
        return prune(tree, player, cuts[0].as_dict()), Layer(player, tuple(cuts), False)
    children = tuple(prune(tree, player, c.as_dict()) for c in cuts)
    expanded = Decision(uid=-1, owner=player, children=children)
    return expanded, Layer(player, tuple(cuts), True)


def expand_layers(tree: GameTree, order, budget=None) -> LayeredExpansion:
    """Expand a contract order bottom-up, keeping per-layer cut provenance."""
    require_no_contracts(tree, "expand_layers")
    players = _as_order(order) if order else ()
    budget = _as_budget(budget)
    current = tree
    layers: list[Layer] = []
    for player in reversed(players):
        expanded, layer = _expand_step(current, player, budget)
        current = reindex(expanded)
        layers.insert(0, layer)
    return LayeredExpansion(base=tree, order=players, layers=tuple(layers), tree=current)


def expand_one(tree: GameTree, player, budget=None) -> GameTree:
    """The contract meta-game for a single player.

    The result is a decision node owned by the player with one child per cut;
    a player owning no nodes yields the unchanged game (a one-child decision
    node would be degenerate).
    """
    return expand_layers(tree, [player_index(player)], budget).tree


def expand_order(tree: GameTree, order, budget=None) -> GameTree:
    """Expand contracts for every player in the order, leading player outermost."""
    return expand_layers(tree, order, budget).tree


@dataclass(frozen=True)
class AttackWitness:
    """The commitments on an expanded game's equilibrium path and its outcome."""

    cuts: tuple[Cut, ...]  # outermost contract first
    leaf_origin: int
    leaf_label: Optional[str]
    payoffs: UtilityVector


def extract_witness(expansion: LayeredExpansion, profile: StrategyProfile) -> AttackWitness:
    """Read the chosen cut at each contract layer along the profile's path."""
    n = expansion.tree
    chosen: list[Cut] = []
    for layer in expansion.layers:
        if layer.wrapped:
            idx = profile[n.uid]
            chosen.append(layer.cuts[idx])
            n = n.children[idx]
        else:
            chosen.append(layer.cuts[0])
    while isinstance(n, Decision):
        n = n.children[profile[n.uid]]
    assert isinstance(n, Leaf)
    return AttackWitness(
        cuts=tuple(chosen),
        leaf_origin=n.origin,
        leaf_label=n.label,
        payoffs=n.payoffs,
    )


def expand_contract_nodes(tree: GameTree, budget=None) -> GameTree:
    """Desugar explicit contract nodes, innermost first.

    Each contract node becomes the meta-game of its owner over its subgame.
    """
    budget = _as_budget(budget)

    def innermost(n: GameTree):
        # a contract node whose subgame holds no further contract nodes
        if isinstance(n, ContractNode):
            inner = innermost(n.inner)
            return inner if inner is not None else n
        if isinstance(n, Decision):
            for c in n.children:
                found = innermost(c)
                if found is not None:
                    return found
        return None

    def replace(n: GameTree, target_uid: int, replacement: GameTree) -> GameTree:
        if n.uid == target_uid:
            return replacement
        if isinstance(n, Decision):
            return Decision(
                uid=n.uid, owner=n.owner, children=tuple(replace(c, target_uid, replacement) for c in n.children)
            )
        if isinstance(n, ContractNode):
            return ContractNode(uid=n.uid, owner=n.owner, inner=replace(n.inner, target_uid, replacement))
        return n

    current = tree
    while True:
        target = innermost(current)
        if target is None:
            return current
        expanded, _ = _expand_step(target.inner, target.owner, budget)
        current = reindex(replace(current, target.uid, expanded))
