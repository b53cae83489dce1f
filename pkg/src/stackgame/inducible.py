"""Inducible regions for two-player games with leader-then-follower contracts.

The region of a subgame is the set of leaves the leading contract player can
force as outcomes. Leaves merge upward through two rules: at a leader node
the child regions survive and any leaf of the subgame the follower can be
threatened into joins them; at a follower node each side's region survives
only where the other side holds a strictly worse payoff for the follower to
be threatened with.

Coercion uses a strict inequality on the follower's payoff even in games with
payoff ties, so a threat that merely matches the follower's payoff never
coerces. Verdicts on non-generic games should be cross-checked against the
expansion path (the resilience module does this).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotBifurcatingError, NotTwoPlayerError
from .trees import (
    Decision,
    GameTree,
    Leaf,
    UtilityVector,
    decision_nodes,
    leaves,
    node,
    player_count,
    player_index,
    reindex,
    require_no_contracts,
)


@dataclass(frozen=True)
class RegionEntry:
    leaf: int
    origin: int
    label: Optional[str]
    payoffs: UtilityVector
    threat: Optional[int] = None  # leaf uid backing the coercion; None = direct

    def describe(self) -> str:
        return self.label if self.label else f"leaf#{self.origin}"


@dataclass(frozen=True)
class Region:
    entries: tuple[RegionEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def leaf_ids(self) -> frozenset[int]:
        return frozenset(e.leaf for e in self.entries)

    def labels(self) -> frozenset[str]:
        return frozenset(e.describe() for e in self.entries)

    def vectors(self) -> frozenset[UtilityVector]:
        return frozenset(e.payoffs for e in self.entries)

    def get(self, leaf_uid: int) -> Optional[RegionEntry]:
        for e in self.entries:
            if e.leaf == leaf_uid:
                return e
        return None


def _region(entries) -> Region:
    return Region(entries=tuple(sorted(entries, key=lambda e: e.leaf)))


def _union(first: Region, second: Region) -> Region:
    # on duplicates the first region's entry wins (direct entries stay direct)
    merged = {e.leaf: e for e in second}
    merged.update({e.leaf: e for e in first})
    return _region(merged.values())


def threaten(a: Region, b: Region, follower) -> Region:
    """Entries of ``a`` the leader can coerce using a strictly worse entry of ``b``."""
    f = player_index(follower)
    if not b.entries:
        return _region([])
    worst = min(b.entries, key=lambda e: (e.payoffs[f], e.leaf))
    kept = []
    for x in a.entries:
        if worst.payoffs[f] < x.payoffs[f]:
            kept.append(
                RegionEntry(
                    leaf=x.leaf,
                    origin=x.origin,
                    label=x.label,
                    payoffs=x.payoffs,
                    threat=worst.leaf,
                )
            )
    return _region(kept)


def _leaf_region(tree: GameTree) -> Region:
    return _region(
        RegionEntry(leaf=lf.uid, origin=lf.origin, label=lf.label, payoffs=lf.payoffs)
        for lf in leaves(tree)
    )


def inducible_region(tree: GameTree, leader) -> Region:
    """The leaves the leading contract player can induce at the root.

    Requires a two-player game whose decision nodes are all binary; binarize
    wider games first.
    """
    require_no_contracts(tree, "inducible_region")
    if player_count(tree) != 2:
        raise NotTwoPlayerError("inducible regions are defined for two-player games")
    lead = player_index(leader)
    follower = 1 - lead
    for n in decision_nodes(tree):
        if len(n.children) != 2:
            raise NotBifurcatingError(
                f"node {n.uid} has fanout {len(n.children)}; binarize first"
            )

    def rec(n: GameTree) -> Region:
        if isinstance(n, Leaf):
            return _region([RegionEntry(leaf=n.uid, origin=n.origin, label=n.label, payoffs=n.payoffs)])
        left, right = n.children
        rl = rec(left)
        rr = rec(right)
        if n.owner == lead:
            pool = _union(rl, rr)
            return _union(pool, threaten(_leaf_region(n), pool, follower))
        return _union(threaten(rr, rl, follower), threaten(rl, rr, follower))

    return rec(tree)


def leading_equilibrium(tree: GameTree, leader) -> RegionEntry:
    """The region entry the leading player induces: their best, ties malicious."""
    lead = player_index(leader)
    follower = 1 - lead
    region = inducible_region(tree, leader)
    best = None
    for e in region:
        if best is None:
            best = e
            continue
        if e.payoffs[lead] > best.payoffs[lead]:
            best = e
        elif e.payoffs[lead] == best.payoffs[lead]:
            if (e.payoffs[follower], e.leaf) < (best.payoffs[follower], best.leaf):
                best = e
    assert best is not None, "regions are never empty"
    return best


def binarize(tree: GameTree) -> GameTree:
    """Split fanout-m decision nodes into right-leaning chains of binary nodes."""
    require_no_contracts(tree, "binarize")

    def rec(n: GameTree) -> GameTree:
        if isinstance(n, Leaf):
            return Leaf(uid=-1, payoffs=n.payoffs, label=n.label, origin=n.origin)
        children = [rec(c) for c in n.children]
        while len(children) > 2:
            last_two = node(n.owner, children[-2], children[-1])
            children = children[:-2] + [last_two]
        return node(n.owner, *children)

    return reindex(rec(tree))
