"""Seeded random games and the campaigns that stress the solvers against
each other.

Determinism contract: a campaign is a pure function of its configuration.
Game i of a run is generated from an RNG seeded with "<seed>:<i>", so games
are independent of evaluation order and a single game can be regenerated in
isolation.

Three campaigns are provided: downward transitivity of resilience (a game
resilient with k contracts must be resilient with fewer), agreement of the
inducible-region fast path with the expansion semantics on two-player games,
and idempotence of stacking two contracts for the same player. Budget-limited
orders are counted and excluded, never silently dropped.
"""

from __future__ import annotations

import csv
import json
import os
import string
import time
from dataclasses import dataclass, field, replace
from random import Random
from typing import Optional

from .dsl import GameDocument, parse, serialize
from .errors import BudgetExceededError
from .expansion import expand_one
from .inducible import leading_equilibrium
from .resilience import Verdict, k_resilient, solve_expansion
from .solve import spe
from .trees import GameTree, Leaf, PlayerId, leaf as make_leaf, node, reindex, validate

_PLAYER_NAMES = string.ascii_lowercase


@dataclass(frozen=True)
class GeneratorConfig:
    players: int = 2
    max_depth: int = 3
    branching: tuple[int, int] = (2, 2)
    max_leaves: int = 16
    seed: int = 0
    strict_generic: bool = True

    def __post_init__(self):
        if self.players < 2:
            raise ValueError("need at least two players")
        if self.max_depth < 1:
            raise ValueError("need depth >= 1")
        lo, hi = self.branching
        if lo != 2 or hi < 2:
            raise ValueError("branching must be fixed 2 or a range (2, hi)")
        if self.max_leaves < 2:
            raise ValueError("need room for at least two leaves")


def _player_name(i: int) -> str:
    if i < len(_PLAYER_NAMES):
        return _PLAYER_NAMES[i]
    return f"p{i}"


def _build_shape(rng: Random, cfg: GeneratorConfig, target: int, depth: int) -> GameTree:
    """A tree with exactly `target` leaves that fits in the remaining depth."""
    lo, hi = cfg.branching
    if target == 1:
        return Leaf(uid=-1, payoffs=(), origin=-1)
    capacity = hi ** (cfg.max_depth - depth - 1)
    if capacity == 1:
        fanout = target  # children must all be leaves
    else:
        least = max(lo, -(-target // capacity))  # enough children to hold the leaves
        fanout = rng.randint(least, min(hi, target))
    parts: list[int] = []
    remaining = target
    for i in range(fanout):
        slots_left = fanout - i - 1
        low = max(1, remaining - slots_left * capacity)
        high = min(capacity, remaining - slots_left)
        take = rng.randint(low, high) if i < fanout - 1 else remaining
        parts.append(take)
        remaining -= take
    owner = rng.randrange(cfg.players)
    return node(owner, *(_build_shape(rng, cfg, p, depth + 1) for p in parts))


def generate(config: GeneratorConfig, index: int = 0) -> GameDocument:
    """Deterministic random game; same (config, index) always gives the same text."""
    rng = Random(f"{config.seed}:{index}")
    lo, hi = config.branching
    cap = min(config.max_leaves, hi**config.max_depth)
    target = rng.randint(min(2, cap), cap)
    shape = _build_shape(rng, config, max(target, 2), 0)

    # fill payoffs in preorder
    leaf_slots: list[Leaf] = [n for n in _preorder_leaves(shape)]
    count = len(leaf_slots)
    if config.strict_generic:
        columns = [rng.sample(range(1, count + 1), count) for _ in range(config.players)]
    else:
        columns = [
            [rng.randint(0, count) for _ in range(count)] for _ in range(config.players)
        ]
    it = iter(range(count))

    def fill(n: GameTree) -> GameTree:
        if isinstance(n, Leaf):
            i = next(it)
            return make_leaf(*(columns[p][i] for p in range(config.players)))
        return node(n.owner, *(fill(c) for c in n.children))

    root = reindex(fill(shape), fresh_origins=True)
    players = tuple(PlayerId(i, _player_name(i)) for i in range(config.players))
    validate(root, players)
    return GameDocument(name=f"rand-{config.seed}-{index}", players=players, root=root)


def _preorder_leaves(tree: GameTree):
    if isinstance(tree, Leaf):
        yield tree
        return
    for c in tree.children:
        yield from _preorder_leaves(c)


@dataclass
class Counterexample:
    index: int
    game_text: str
    detail: str
    data: dict = field(default_factory=dict)


@dataclass
class CampaignResult:
    property_name: str
    config: GeneratorConfig
    games: int
    checked: int
    inconclusive: int
    counterexamples: list[Counterexample]
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def inconclusive_fraction(self) -> float:
        total = self.checked + self.inconclusive
        return self.inconclusive / total if total else 0.0

    def to_json(self, include_timing: bool = False) -> dict:
        data = {
            "property": self.property_name,
            "config": {
                "players": self.config.players,
                "max_depth": self.config.max_depth,
                "branching": list(self.config.branching),
                "max_leaves": self.config.max_leaves,
                "seed": self.config.seed,
                "strict_generic": self.config.strict_generic,
            },
            "games": self.games,
            "checked": self.checked,
            "inconclusive": self.inconclusive,
            "counterexamples": [
                {"index": c.index, "detail": c.detail, "data": c.data}
                for c in self.counterexamples
            ],
            "passed": self.passed,
        }
        if include_timing:
            data["elapsed_s"] = round(self.elapsed_s, 3)
        return data


def check_downward_transitivity(
    config: GeneratorConfig, games: int, k_max: Optional[int] = None, budget=None
) -> CampaignResult:
    """Hunt for a game that is k-resilient but not (k-1)-resilient.

    Any hit would contradict downward transitivity (or reveal a solver bug)
    and is serialized for replay. Budget-limited verdicts are excluded from
    the implication and counted as inconclusive orders.
    """
    t0 = time.perf_counter()
    k_top = k_max if k_max is not None else config.players
    checked = 0
    inconclusive = 0
    counterexamples: list[Counterexample] = []
    for i in range(games):
        doc = generate(config, i)
        verdicts: dict[int, Verdict] = {}
        for k in range(1, k_top + 1):
            report = k_resilient(doc.root, k, budget=budget, short_circuit=True)
            verdicts[k] = report.verdict
            for r in report.orders:
                if r.verdict == Verdict.INCONCLUSIVE:
                    inconclusive += 1
                else:
                    checked += 1
        for k in range(2, k_top + 1):
            if (
                verdicts[k] == Verdict.RESILIENT
                and verdicts[k - 1] == Verdict.NOT_RESILIENT
            ):
                counterexamples.append(
                    Counterexample(
                        index=i,
                        game_text=serialize(doc),
                        detail=f"{k}-resilient but not {k - 1}-resilient",
                        data={"k": k},
                    )
                )
    return CampaignResult(
        property_name="downward-transitivity",
        config=config,
        games=games,
        checked=checked,
        inconclusive=inconclusive,
        counterexamples=counterexamples,
        elapsed_s=time.perf_counter() - t0,
    )


def check_algorithm1_agreement(
    config: GeneratorConfig, games: int, budget=None
) -> CampaignResult:
    """Fast-path equilibrium vs. brute-force expansion, both leader roles."""
    if config.players != 2 or config.branching != (2, 2) or not config.strict_generic:
        raise ValueError("agreement checks need strictly generic bifurcating 2-player games")
    t0 = time.perf_counter()
    checked = 0
    inconclusive = 0
    counterexamples: list[Counterexample] = []
    for i in range(games):
        doc = generate(config, i)
        for lead in (0, 1):
            fast = leading_equilibrium(doc.root, lead).payoffs
            try:
                brute, _, _ = solve_expansion(doc.root, (lead, 1 - lead), budget)
            except BudgetExceededError:
                inconclusive += 1
                continue
            checked += 1
            if fast != brute:
                counterexamples.append(
                    Counterexample(
                        index=i,
                        game_text=serialize(doc),
                        detail=(
                            f"leader {doc.player_names[lead]}: fast path gives "
                            f"{tuple(str(v) for v in fast)}, expansion gives "
                            f"{tuple(str(v) for v in brute)}"
                        ),
                        data={"leader": lead},
                    )
                )
    return CampaignResult(
        property_name="algorithm1-agreement",
        config=config,
        games=games,
        checked=checked,
        inconclusive=inconclusive,
        counterexamples=counterexamples,
        elapsed_s=time.perf_counter() - t0,
    )


def check_idempotence(config: GeneratorConfig, games: int, budget=None) -> CampaignResult:
    """Stacking a second contract for the same player must not move the SPE."""
    t0 = time.perf_counter()
    checked = 0
    inconclusive = 0
    counterexamples: list[Counterexample] = []
    for i in range(games):
        doc = generate(config, i)
        for p in range(config.players):
            try:
                once = expand_one(doc.root, p, budget)
                twice = expand_one(once, p, budget)
            except BudgetExceededError:
                inconclusive += 1
                continue
            checked += 1
            a = spe(once).payoffs
            b = spe(twice).payoffs
            if a != b:
                counterexamples.append(
                    Counterexample(
                        index=i,
                        game_text=serialize(doc),
                        detail=(
                            f"player {doc.player_names[p]}: one contract gives "
                            f"{tuple(str(v) for v in a)}, two give {tuple(str(v) for v in b)}"
                        ),
                        data={"player": p},
                    )
                )
    return CampaignResult(
        property_name="contract-idempotence",
        config=config,
        games=games,
        checked=checked,
        inconclusive=inconclusive,
        counterexamples=counterexamples,
        elapsed_s=time.perf_counter() - t0,
    )


CHECKS = {
    "transitivity": check_downward_transitivity,
    "algorithm1": check_algorithm1_agreement,
    "idempotence": check_idempotence,
}


def replay_counterexample(property_name: str, cx: Counterexample, budget=None) -> bool:
    """Re-run the flagged check on the serialized game; True if it fails again."""
    doc = parse(cx.game_text, name=f"replay-{cx.index}")
    if property_name == "downward-transitivity":
        k = cx.data["k"]
        high = k_resilient(doc.root, k, budget=budget).verdict
        low = k_resilient(doc.root, k - 1, budget=budget).verdict
        return high == Verdict.RESILIENT and low == Verdict.NOT_RESILIENT
    if property_name == "algorithm1-agreement":
        lead = cx.data["leader"]
        fast = leading_equilibrium(doc.root, lead).payoffs
        brute, _, _ = solve_expansion(doc.root, (lead, 1 - lead), budget)
        return fast != brute
    if property_name == "contract-idempotence":
        p = cx.data["player"]
        once = expand_one(doc.root, p, budget)
        return spe(once).payoffs != spe(expand_one(once, p, budget)).payoffs
    raise ValueError(f"unknown property {property_name!r}")


def write_campaign(result: CampaignResult, out_dir: str, include_timing=False) -> None:
    """Dump campaign artifacts: summary JSON, CSV and counterexample games."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "campaign.json"), "w", encoding="utf-8") as fh:
        json.dump(result.to_json(include_timing), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "campaign.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["property", "games", "checked", "inconclusive", "passed"])
        writer.writerow(
            [
                result.property_name,
                result.games,
                result.checked,
                result.inconclusive,
                result.passed,
            ]
        )
        writer.writerow([])
        writer.writerow(["counterexample", "detail", "file"])
        for c in result.counterexamples:
            writer.writerow([c.index, c.detail, f"cx-{c.index}.game"])
    for c in result.counterexamples:
        path = os.path.join(out_dir, f"cx-{c.index}.game")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(c.game_text)
