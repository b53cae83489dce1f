"""Game-tree data model: players, nodes, strategy profiles, validation.

Trees are immutable after construction. Every node carries a unique preorder
id (``uid``); leaves additionally carry an ``origin`` id pointing back at the
leaf of the tree they were first built in, so payoff vectors in derived games
(pruned, binarized, expanded) can be reported under their original names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .errors import (
    ContractNodePresentError,
    IncompleteProfileError,
    MalformedTreeError,
)
from .rational import ExtendedRational

UtilityVector = tuple[ExtendedRational, ...]


@dataclass(frozen=True, slots=True)
class PlayerId:
    index: int
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Leaf:
    uid: int
    payoffs: UtilityVector
    label: Optional[str] = None
    origin: int = -1


@dataclass(frozen=True, slots=True)
class Decision:
    uid: int
    owner: int
    children: tuple["GameTree", ...]


@dataclass(frozen=True, slots=True)
class ContractNode:
    uid: int
    owner: int
    inner: "GameTree"


GameTree = Union[Leaf, Decision, ContractNode]


def leaf(*payoffs, label: Optional[str] = None, uid: int = -1) -> Leaf:
    values = tuple(ExtendedRational(p) for p in payoffs)
    return Leaf(uid=uid, payoffs=values, label=label, origin=uid)


def node(owner, *children: GameTree, uid: int = -1) -> Decision:
    return Decision(uid=uid, owner=player_index(owner), children=tuple(children))


def contract(owner, inner: GameTree, uid: int = -1) -> ContractNode:
    return ContractNode(uid=uid, owner=player_index(owner), inner=inner)


def player_index(player) -> int:
    if isinstance(player, PlayerId):
        return player.index
    if isinstance(player, int):
        return player
    raise TypeError(f"expected PlayerId or int, got {type(player).__name__}")


def reindex(tree: GameTree, fresh_origins: bool = False) -> GameTree:
    """Return a copy with preorder uids starting at 0.

    With ``fresh_origins`` each leaf's origin becomes its new uid (used when a
    tree is first built); otherwise existing origins are preserved so derived
    trees keep pointing at the game they came from.
    """
    counter = [0]

    def rec(n: GameTree) -> GameTree:
        uid = counter[0]
        counter[0] += 1
        if isinstance(n, Leaf):
            origin = uid if fresh_origins else n.origin
            return Leaf(uid=uid, payoffs=n.payoffs, label=n.label, origin=origin)
        if isinstance(n, Decision):
            return Decision(uid=uid, owner=n.owner, children=tuple(rec(c) for c in n.children))
        return ContractNode(uid=uid, owner=n.owner, inner=rec(n.inner))

    return rec(tree)


def iter_nodes(tree: GameTree) -> Iterator[GameTree]:
    stack = [tree]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Decision):
            stack.extend(reversed(n.children))
        elif isinstance(n, ContractNode):
            stack.append(n.inner)


def leaves(tree: GameTree) -> list[Leaf]:
    return [n for n in iter_nodes(tree) if isinstance(n, Leaf)]


def decision_nodes(tree: GameTree) -> list[Decision]:
    return [n for n in iter_nodes(tree) if isinstance(n, Decision)]


def owned_nodes(tree: GameTree, player) -> list[Decision]:
    p = player_index(player)
    return [n for n in decision_nodes(tree) if n.owner == p]


def tree_size(tree: GameTree) -> int:
    return sum(1 for _ in iter_nodes(tree))


def has_contract_nodes(tree: GameTree) -> bool:
    return any(isinstance(n, ContractNode) for n in iter_nodes(tree))


def player_count(tree: GameTree) -> int:
    for n in iter_nodes(tree):
        if isinstance(n, Leaf):
            return len(n.payoffs)
    raise MalformedTreeError("tree has no leaves")


def require_no_contracts(tree: GameTree, operation: str) -> None:
    if has_contract_nodes(tree):
        raise ContractNodePresentError(
            f"{operation} requires an expanded tree; found a contract node"
        )


@dataclass(frozen=True)
class StrategyProfile:
    """One chosen child index per decision node, keyed by node uid."""

    choices: Mapping[int, int]

    def __getitem__(self, uid: int) -> int:
        return self.choices[uid]

    def by_owner(self, tree: GameTree) -> dict[int, dict[int, int]]:
        grouped: dict[int, dict[int, int]] = {}
        for n in decision_nodes(tree):
            grouped.setdefault(n.owner, {})[n.uid] = self.choices[n.uid]
        return grouped


def require_complete_profile(tree: GameTree, profile: StrategyProfile) -> None:
    for n in decision_nodes(tree):
        if n.uid not in profile.choices:
            raise IncompleteProfileError(f"profile has no choice at node {n.uid}")
        idx = profile.choices[n.uid]
        if not 0 <= idx < len(n.children):
            raise IncompleteProfileError(
                f"profile choice {idx} out of range at node {n.uid}"
            )


def play(tree: GameTree, profile: StrategyProfile) -> Leaf:
    """Follow a profile from the root to its realized leaf."""
    n = tree
    while not isinstance(n, Leaf):
        if isinstance(n, ContractNode):
            raise ContractNodePresentError("cannot play through a contract node")
        n = n.children[profile[n.uid]]
    return n


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    strictly_generic: bool
    duplicate_vectors: tuple[tuple[int, int], ...]
    duplicate_values: tuple[tuple[int, int, int], ...]  # (player, uid, uid)


def validate(tree: GameTree, players: list | tuple) -> GenericityReport:
    """Check structural invariants and classify genericity.

    Raises MalformedTreeError for arity or fanout violations; never mutates.
    """
    n_players = len(players)
    seen: set[int] = set()
    for n in iter_nodes(tree):
        if n.uid in seen:
            raise MalformedTreeError(f"duplicate node id {n.uid}")
        seen.add(n.uid)
        if isinstance(n, Leaf):
            if len(n.payoffs) != n_players:
                raise MalformedTreeError(
                    f"leaf {n.uid} has {len(n.payoffs)} payoffs for {n_players} players"
                )
        elif isinstance(n, Decision):
            if len(n.children) < 2:
                raise MalformedTreeError(f"decision node {n.uid} has fanout < 2")
            if not 0 <= n.owner < n_players:
                raise MalformedTreeError(f"node {n.uid} owner {n.owner} out of range")
        else:
            if not 0 <= n.owner < n_players:
                raise MalformedTreeError(f"node {n.uid} owner {n.owner} out of range")

    all_leaves = leaves(tree)
    dup_vectors = []
    for i, a in enumerate(all_leaves):
        for b in all_leaves[i + 1 :]:
            if a.payoffs == b.payoffs:
                dup_vectors.append((a.uid, b.uid))
    dup_values = []
    for p in range(n_players):
        for i, a in enumerate(all_leaves):
            for b in all_leaves[i + 1 :]:
                if a.payoffs[p] == b.payoffs[p]:
                    dup_values.append((p, a.uid, b.uid))
    return GenericityReport(
        generic=not dup_vectors,
        strictly_generic=not dup_values,
        duplicate_vectors=tuple(dup_vectors),
        duplicate_values=tuple(dup_values),
    )
