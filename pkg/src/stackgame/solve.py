"""Equilibrium solvers: deterministic SPE, SPE outcome sets, pruning, margins.

The deterministic solver breaks payoff ties the weakly-malicious way: an
indifferent owner picks the candidate that is worst for everyone else. With
more than one opponent, "worst" means the smallest sum of the others' finite
payoffs; a candidate handing another player -inf beats every finite option,
one handing out +inf loses to them. Any ties still left go to the lowest
child index, so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    IncompleteCutError,
    PlayerMismatchError,
    UnknownNodeError,
)
from .rational import ExtendedRational, POS_INF
from .trees import (
    ContractNode,
    Decision,
    GameTree,
    Leaf,
    StrategyProfile,
    UtilityVector,
    owned_nodes,
    play,
    player_count,
    player_index,
    require_complete_profile,
    require_no_contracts,
)


def malice_key(payoffs: UtilityVector, owner: int):
    """Sort key over candidates an indifferent owner chooses among (lower wins)."""
    neg = 0
    pos = 0
    total = Fraction(0)
    for q, v in enumerate(payoffs):
        if q == owner:
            continue
        if v.is_finite:
            total += v.value
        elif v < 0:
            neg += 1
        else:
            pos += 1
    return (-neg, pos, total)


def pick_best(owner: int, candidates):
    """Index of the owner's preferred candidate among (payoffs, ...) tuples.

    Maximizes the owner's payoff, then applies the malicious tie-break, then
    keeps the lowest index.
    """
    best_idx = None
    best_vec = None
    best_key = None
    for idx, cand in enumerate(candidates):
        vec = cand[0]
        if best_idx is None or vec[owner] > best_vec[owner]:
            best_idx, best_vec, best_key = idx, vec, None
        elif vec[owner] == best_vec[owner]:
            if best_key is None:
                best_key = malice_key(best_vec, owner)
            key = malice_key(vec, owner)
            if key < best_key:
                best_idx, best_vec, best_key = idx, vec, key
    return best_idx


@dataclass(frozen=True)
class SpeResult:
    payoffs: UtilityVector
    profile: StrategyProfile
    leaf: int
    leaf_origin: int
    leaf_label: str | None


def spe(tree: GameTree) -> SpeResult:
    """Backward-induction SPE under the weakly-malicious tie-break.

    Returns the equilibrium payoff vector, a complete profile (including
    off-path choices) and the realized leaf.
    """
    require_no_contracts(tree, "spe")
    choices: dict[int, int] = {}

    def rec(n: GameTree):
        if isinstance(n, Leaf):
            return n.payoffs, n
        results = [rec(c) for c in n.children]
        idx = pick_best(n.owner, results)
        choices[n.uid] = idx
        return results[idx]

    payoffs, lf = rec(tree)
    return SpeResult(
        payoffs=payoffs,
        profile=StrategyProfile(choices),
        leaf=lf.uid,
        leaf_origin=lf.origin,
        leaf_label=lf.label,
    )


def outcome_set(tree: GameTree) -> frozenset[UtilityVector]:
    """Payoff vectors realizable by some SPE under arbitrary tie-breaking.

    Bottom-up: at a node owned by p, a child's vector survives iff every
    sibling subgame admits an SPE continuation that is no better for p.
    """
    require_no_contracts(tree, "outcome_set")

    def rec(n: GameTree) -> set[UtilityVector]:
        if isinstance(n, Leaf):
            return {n.payoffs}
        child_sets = [rec(c) for c in n.children]
        floors = [min(v[n.owner] for v in s) for s in child_sets]
        out: set[UtilityVector] = set()
        for i, s in enumerate(child_sets):
            bar = max(floors[j] for j in range(len(child_sets)) if j != i)
            for v in s:
                if v[n.owner] >= bar:
                    out.add(v)
        return out

    return frozenset(rec(tree))


def equivalent(g1: GameTree, g2: GameTree, mode: str = "strict") -> bool:
    """Equal equilibrium payoffs: deterministic SPE (strict) or full outcome sets."""
    if player_count(g1) != player_count(g2):
        raise PlayerMismatchError("games have different player counts")
    if mode == "strict":
        return spe(g1).payoffs == spe(g2).payoffs
    if mode == "set":
        return outcome_set(g1) == outcome_set(g2)
    raise ValueError(f"unknown mode {mode!r}")


def prune(tree: GameTree, player, cut_choices) -> GameTree:
    """Collapse every decision node owned by the player to its chosen child.

    ``cut_choices`` maps node uid -> child index and must cover exactly the
    player's decision nodes. Node uids and leaf origins are preserved; the
    result shares no structure with the input.
    """
    p = player_index(player)
    choices = dict(getattr(cut_choices, "choices", cut_choices))
    owned = {n.uid: n for n in owned_nodes(tree, p)}
    for uid in choices:
        if uid not in owned:
            raise UnknownNodeError(f"cut references node {uid} not owned by player {p}")
    for uid, n in owned.items():
        if uid not in choices:
            raise IncompleteCutError(f"cut missing a choice at node {uid}")
        if not 0 <= choices[uid] < len(n.children):
            raise UnknownNodeError(f"cut child {choices[uid]} out of range at node {uid}")

    def rec(n: GameTree) -> GameTree:
        if isinstance(n, Leaf):
            return Leaf(uid=n.uid, payoffs=n.payoffs, label=n.label, origin=n.origin)
        if isinstance(n, ContractNode):
            return ContractNode(uid=n.uid, owner=n.owner, inner=rec(n.inner))
        if n.owner == p:
            return rec(n.children[choices[n.uid]])
        return Decision(uid=n.uid, owner=n.owner, children=tuple(rec(c) for c in n.children))

    return rec(tree)


def security_margin(tree: GameTree, profile: StrategyProfile) -> ExtendedRational:
    """Smallest loss any player takes for a payoff-changing unilateral deviation.

    For each player, the others' choices are fixed to the profile and the
    player's best reachable alternative payoff is computed over leaves whose
    vector differs from the profile's outcome. Returns +inf when no player
    can change the outcome at all.
    """
    require_no_contracts(tree, "security_margin")
    require_complete_profile(tree, profile)
    base = play(tree, profile).payoffs
    n_players = player_count(tree)

    def reachable(n: GameTree, p: int):
        if isinstance(n, Leaf):
            yield n.payoffs
            return
        if n.owner == p:
            for c in n.children:
                yield from reachable(c, p)
        else:
            yield from reachable(n.children[profile[n.uid]], p)

    margin = POS_INF
    for p in range(n_players):
        deviating = [v[p] for v in reachable(tree, p) if v != base]
        if not deviating:
            continue
        gap = base[p] - max(deviating)
        if gap < margin:
            margin = gap
    return margin
