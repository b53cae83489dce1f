"""Builders and audits for the two decentralized-commerce escrow games.

Both games are two-player trades between a buyer B and a seller S: an item
worth ``y`` to the buyer and ``x_prime`` to the seller changes hands for a
price ``x``, with a deposit ``lam`` at stake in disputes. The second game
adds an arbitration oracle with error rate ``gamma``. Payoff vectors are
ordered (B, S) and leaves are labeled u1..u4 resp. u1..u6 left to right.

The audit recomputes everything from the parameters: the equilibrium, the
security margin of the honest play, the inducible regions for both leader
roles, and resilience for one and two contracts by both the fast path and
the expansion. Parameter inequalities are reported, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dsl import GameDocument
from .errors import InvalidParamsError
from .expansion import DEFAULT_BUDGET, _as_budget
from .inducible import Region, RegionEntry, inducible_region, leading_equilibrium
from .rational import POS_INF, ExtendedRational
from .resilience import (
    OrderResult,
    Verdict,
    _overall,
    is_resilient,
    order_result_json,
)
from .solve import security_margin, spe
from .trees import PlayerId, StrategyProfile, leaf, leaves, node, reindex, validate

BUYER, SELLER = 0, 1
PLAYERS = (PlayerId(BUYER, "B"), PlayerId(SELLER, "S"))


@dataclass(frozen=True)
class CommerceParams:
    x: Fraction  # price
    x_prime: Fraction  # item value to the seller
    y: Fraction  # item value to the buyer
    lam: Fraction  # dispute deposit
    gamma: Optional[Fraction] = None  # oracle error rate (second contract only)

    @classmethod
    def from_strings(cls, x, x_prime, y, lam, gamma=None) -> "CommerceParams":
        return cls(
            x=Fraction(x),
            x_prime=Fraction(x_prime),
            y=Fraction(y),
            lam=Fraction(lam),
            gamma=None if gamma is None else Fraction(gamma),
        )


def _require_common(params: CommerceParams):
    if not (params.y > params.x > params.x_prime > 0):
        raise InvalidParamsError(
            f"need y > x > x' > 0, got y={params.y}, x={params.x}, x'={params.x_prime}"
        )
    if not params.lam > 0:
        raise InvalidParamsError(f"need a positive deposit, got {params.lam}")


def validate_params(contract: int, params: CommerceParams):
    _require_common(params)
    if contract == 2:
        if params.gamma is None:
            raise InvalidParamsError("the oracle contract needs an error rate gamma")
        if not (0 <= params.gamma < Fraction(1, 2)):
            raise InvalidParamsError(f"need 0 <= gamma < 1/2, got {params.gamma}")
    elif contract != 1:
        raise InvalidParamsError(f"unknown contract {contract}")


@dataclass(frozen=True)
class Constraint:
    name: str
    lhs: ExtendedRational
    op: str
    rhs: ExtendedRational
    satisfied: bool


@dataclass(frozen=True)
class ConstraintLedger:
    constraints: tuple[Constraint, ...]

    def __getitem__(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.constraints)


def check_constraints(contract: int, params: CommerceParams) -> ConstraintLedger:
    """Evaluate the named parameter inequalities exactly; reports, never rejects."""
    items: list[Constraint] = []
    if contract == 1:
        lhs = ExtendedRational(params.y - params.x - params.lam)
        items.append(
            Constraint("C1_attack_feasible", lhs, ">", ExtendedRational(0), lhs > 0)
        )
    else:
        g = params.gamma if params.gamma is not None else Fraction(0)
        lam = ExtendedRational(params.lam)
        lower = ExtendedRational(g / (1 - g) * params.x)
        items.append(Constraint("C2_lambda_lower", lower, "<", lam, lower < lam))
        upper = POS_INF if g == 0 else ExtendedRational((1 - g) / g * params.x)
        items.append(Constraint("C2_lambda_upper", upper, ">", lam, upper > lam))
    return ConstraintLedger(tuple(items))


def build_contract1(params: CommerceParams) -> GameDocument:
    """Hash-escrow trade: S sends or not, then B accepts or disputes."""
    validate_params(1, params)
    x, y, lam = params.x, params.y, params.lam
    root = node(
        SELLER,
        node(
            BUYER,
            leaf(y - x - lam, x, label="u1"),  # dispute a delivered item
            leaf(y - x, x, label="u2"),  # accept
        ),
        node(
            BUYER,
            leaf(-x - lam, x, label="u3"),  # accept a missing item
            leaf(0, -lam, label="u4"),  # dispute
        ),
    )
    root = reindex(root, fresh_origins=True)
    validate(root, PLAYERS)
    return GameDocument(name="contract1", players=PLAYERS, root=root)


def build_contract2(params: CommerceParams) -> GameDocument:
    """Oracle-escrow trade: disputes escalate to forfeit-or-counter subgames."""
    validate_params(2, params)
    x, xp, y, lam, g = params.x, params.x_prime, params.y, params.lam, params.gamma
    root = node(
        SELLER,
        node(
            BUYER,
            node(
                SELLER,
                leaf(y, -xp, label="u1"),  # forfeit
                leaf(y * g - (x + lam) * (1 - g), x * (1 - g) - lam * g - xp, label="u2"),
            ),
            leaf(y - x, x - xp, label="u3"),  # accept
        ),
        node(
            BUYER,
            leaf(-x, x, label="u4"),  # accept a missing item
            node(
                SELLER,
                leaf(-(x + lam) * g, x * g - lam * (1 - g), label="u5"),  # counter
                leaf(0, 0, label="u6"),  # forfeit
            ),
        ),
    )
    root = reindex(root, fresh_origins=True)
    validate(root, PLAYERS)
    return GameDocument(name="contract2", players=PLAYERS, root=root)


def build_contract(contract: int, params: CommerceParams) -> GameDocument:
    return build_contract1(params) if contract == 1 else build_contract2(params)


def honest_profile(contract: int, doc: GameDocument) -> StrategyProfile:
    """The intended play: send and accept, with disputes answered as drawn."""
    if contract == 1:
        return StrategyProfile({0: 0, 1: 1, 4: 1})
    return StrategyProfile({0: 0, 1: 1, 2: 1, 6: 1, 8: 1})


@dataclass
class LeaderAnalysis:
    leader: int
    region: Region
    equilibrium: RegionEntry
    matches_spe: bool


@dataclass
class CommerceAudit:
    contract: int
    params: CommerceParams
    constraints: ConstraintLedger
    strictly_generic: bool
    spe_label: Optional[str]
    spe_payoffs: tuple
    margin: ExtendedRational
    reference_margin: Optional[ExtendedRational]
    leaders: dict[str, LeaderAnalysis]
    k1: list[OrderResult]
    k2: list[OrderResult]
    verdict: Verdict
    fast_agrees: bool

    @property
    def resilient(self) -> Optional[bool]:
        if self.verdict == Verdict.INCONCLUSIVE:
            return None
        return self.verdict == Verdict.RESILIENT


def audit(contract: int, params: CommerceParams, budget=None) -> CommerceAudit:
    """Full parameterized analysis of one commerce contract."""
    validate_params(contract, params)
    budget = _as_budget(budget)
    doc = build_contract(contract, params)
    ledger = check_constraints(contract, params)
    report = validate(doc.root, doc.players)
    equilibrium = spe(doc.root)
    margin = security_margin(doc.root, honest_profile(contract, doc))
    reference = (
        ExtendedRational(params.x * (1 - 2 * params.gamma)) if contract == 2 else None
    )

    leaders = {}
    for pid in doc.players:
        region = inducible_region(doc.root, pid.index)
        entry = leading_equilibrium(doc.root, pid.index)
        leaders[pid.name] = LeaderAnalysis(
            leader=pid.index,
            region=region,
            equilibrium=entry,
            matches_spe=entry.payoffs == equilibrium.payoffs,
        )

    k1 = [is_resilient(doc.root, (p,), budget=budget) for p in (BUYER, SELLER)]
    k2 = [
        is_resilient(doc.root, order, budget=budget)
        for order in ((BUYER, SELLER), (SELLER, BUYER))
    ]
    verdict = _overall(k1 + k2)

    fast_agrees = True
    for result in k2:
        fast = leaders[doc.players[result.order[0]].name]
        if result.verdict != Verdict.INCONCLUSIVE and fast.matches_spe != (
            result.verdict == Verdict.RESILIENT
        ):
            fast_agrees = False
    return CommerceAudit(
        contract=contract,
        params=params,
        constraints=ledger,
        strictly_generic=report.strictly_generic,
        spe_label=equilibrium.leaf_label,
        spe_payoffs=equilibrium.payoffs,
        margin=margin,
        reference_margin=reference,
        leaders=leaders,
        k1=k1,
        k2=k2,
        verdict=verdict,
        fast_agrees=fast_agrees,
    )


def _region_json(doc: GameDocument, region: Region) -> list[dict]:
    labels = {lf.uid: lf.label for lf in leaves(doc.root)}
    out = []
    for e in region:
        out.append(
            {
                "label": e.describe(),
                "payoffs": [str(v) for v in e.payoffs],
                "threat": labels.get(e.threat) if e.threat is not None else None,
            }
        )
    return out


def audit_json(result: CommerceAudit, include_timing=False) -> dict:
    doc = build_contract(result.contract, result.params)
    names = doc.player_names
    params = result.params
    return {
        "contract": result.contract,
        "params": {
            "x": str(params.x),
            "xprime": str(params.x_prime),
            "y": str(params.y),
            "lambda": str(params.lam),
            "gamma": None if params.gamma is None else str(params.gamma),
        },
        "constraints": [
            {
                "name": c.name,
                "lhs": str(c.lhs),
                "op": c.op,
                "rhs": str(c.rhs),
                "satisfied": c.satisfied,
            }
            for c in result.constraints.constraints
        ],
        "strictly_generic": result.strictly_generic,
        "spe": {
            "label": result.spe_label,
            "payoffs": [str(v) for v in result.spe_payoffs],
        },
        "margin": str(result.margin),
        "reference_margin": (
            None if result.reference_margin is None else str(result.reference_margin)
        ),
        "fast_path": {
            name: {
                "region": _region_json(doc, la.region),
                "equilibrium": {
                    "label": la.equilibrium.describe(),
                    "payoffs": [str(v) for v in la.equilibrium.payoffs],
                },
                "matches_spe": la.matches_spe,
            }
            for name, la in sorted(result.leaders.items())
        },
        "resilience": {
            "k1": [order_result_json(r, names, include_timing) for r in result.k1],
            "k2": [order_result_json(r, names, include_timing) for r in result.k2],
        },
        "fast_agrees": result.fast_agrees,
        "verdict": result.verdict.value,
    }


COMMERCE_AUDIT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": [
        "contract",
        "params",
        "constraints",
        "spe",
        "margin",
        "resilience",
        "verdict",
    ],
    "properties": {
        "contract": {"enum": [1, 2]},
        "params": {
            "type": "object",
            "required": ["x", "xprime", "y", "lambda"],
            "properties": {
                "x": {"type": "string"},
                "xprime": {"type": "string"},
                "y": {"type": "string"},
                "lambda": {"type": "string"},
                "gamma": {"type": ["string", "null"]},
            },
        },
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "lhs", "op", "rhs", "satisfied"],
                "properties": {
                    "name": {"type": "string"},
                    "lhs": {"type": "string"},
                    "op": {"enum": ["<", ">", "<=", ">="]},
                    "rhs": {"type": "string"},
                    "satisfied": {"type": "boolean"},
                },
            },
        },
        "strictly_generic": {"type": "boolean"},
        "spe": {
            "type": "object",
            "required": ["payoffs"],
            "properties": {
                "label": {"type": ["string", "null"]},
                "payoffs": {"type": "array", "items": {"type": "string"}},
            },
        },
        "margin": {"type": "string"},
        "reference_margin": {"type": ["string", "null"]},
        "fast_path": {"type": "object"},
        "resilience": {
            "type": "object",
            "required": ["k1", "k2"],
            "properties": {
                "k1": {"type": "array"},
                "k2": {"type": "array"},
            },
        },
        "fast_agrees": {"type": "boolean"},
        "verdict": {"enum": ["resilient", "not-resilient", "inconclusive"]},
    },
}
