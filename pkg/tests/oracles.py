"""Independent brute-force oracles the implementation is checked against.

These deliberately avoid the library's solver internals: profiles are
enumerated outright and subgame perfection is checked with the one-shot
deviation test at every decision node, which characterizes SPE in finite
perfect-information games.
"""

from __future__ import annotations

import itertools

from stackgame.trees import Decision, Leaf, StrategyProfile, decision_nodes


def follow(node, choices):
    while isinstance(node, Decision):
        node = node.children[choices[node.uid]]
    return node


def all_profiles(tree):
    nodes = decision_nodes(tree)
    uids = [n.uid for n in nodes]
    for combo in itertools.product(*(range(len(n.children)) for n in nodes)):
        yield dict(zip(uids, combo))


def is_subgame_perfect(tree, choices) -> bool:
    for n in decision_nodes(tree):
        owner = n.owner
        current = follow(n.children[choices[n.uid]], choices).payoffs[owner]
        for alt in n.children:
            if follow(alt, choices).payoffs[owner] > current:
                return False
    return True


def spe_outcomes_brute(tree) -> frozenset:
    """All payoff vectors realized by some subgame-perfect profile."""
    out = set()
    for choices in all_profiles(tree):
        if is_subgame_perfect(tree, choices):
            out.add(follow(tree, choices).payoffs)
    return frozenset(out)


def spe_profiles_brute(tree):
    return [
        StrategyProfile(choices)
        for choices in all_profiles(tree)
        if is_subgame_perfect(tree, choices)
    ]


def margin_brute(tree, profile: StrategyProfile):
    """Exhaustive-deviation security margin.

    For each player, enumerates every full assignment of that player's own
    choices (others pinned to the profile) and takes the best deviation whose
    induced payoff vector differs from the profile's outcome.
    """
    from stackgame.rational import POS_INF

    base = follow(tree, profile.choices).payoffs
    margin = POS_INF
    nodes = decision_nodes(tree)
    n_players = len(base)
    for p in range(n_players):
        own = [n for n in nodes if n.owner == p]
        best = None
        for combo in itertools.product(*(range(len(n.children)) for n in own)):
            choices = dict(profile.choices)
            choices.update({n.uid: c for n, c in zip(own, combo)})
            vec = follow(tree, choices).payoffs
            if vec == base:
                continue
            if best is None or vec[p] > best:
                best = vec[p]
        if best is not None:
            gap = base[p] - best
            if gap < margin:
                margin = gap
    return margin


def check_dot(text: str) -> None:
    """Minimal DOT well-formedness check: quoting, bracing, statement shape."""
    assert text.startswith("digraph "), "must declare a digraph"
    assert text.rstrip().endswith("}"), "must close the graph block"
    depth = 0
    in_string = False
    prev = ""
    brackets = 0
    for ch in text:
        if in_string:
            if ch == '"' and prev != "\\":
                in_string = False
        else:
            if ch == '"':
                in_string = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                assert depth >= 0, "unbalanced closing brace"
            elif ch == "[":
                brackets += 1
            elif ch == "]":
                brackets -= 1
                assert brackets >= 0, "unbalanced closing bracket"
        prev = ch
    assert depth == 0, "unbalanced braces"
    assert brackets == 0, "unbalanced attribute brackets"
    assert not in_string, "unterminated string"
    body = text[text.index("{") + 1 : text.rindex("}")]
    for line in body.splitlines():
        line = line.strip()
        if not line:
            continue
        assert line.endswith(";"), f"statement missing semicolon: {line!r}"
