"""Solvers and audits for extensive-form games with contract commitments."""

from .rational import NEG_INF, POS_INF, ExtendedRational, rat, vector_str
from .trees import (
    ContractNode,
    Decision,
    GameTree,
    GenericityReport,
    Leaf,
    PlayerId,
    StrategyProfile,
    contract,
    leaf,
    node,
    reindex,
    validate,
)
from .solve import (
    SpeResult,
    equivalent,
    outcome_set,
    prune,
    security_margin,
    spe,
)
from .dsl import GameDocument, parse, parse_file, serialize, to_dot
from .expansion import (
    AttackWitness,
    ContractOrder,
    Cut,
    ExpansionBudget,
    enumerate_cuts,
    expand_contract_nodes,
    expand_layers,
    expand_one,
    expand_order,
    extract_witness,
    predicted_expansion_size,
)
from .inducible import (
    Region,
    RegionEntry,
    binarize,
    inducible_region,
    leading_equilibrium,
    threaten,
)
from .resilience import (
    OrderResult,
    ResilienceReport,
    Verdict,
    full_resilient,
    is_resilient,
    k_resilient,
    solve_expansion,
)
from .commerce import (
    CommerceAudit,
    CommerceParams,
    ConstraintLedger,
    audit,
    build_contract1,
    build_contract2,
    check_constraints,
    honest_profile,
)
from .harness import (
    CampaignResult,
    GeneratorConfig,
    check_algorithm1_agreement,
    check_downward_transitivity,
    check_idempotence,
    generate,
    replay_counterexample,
    write_campaign,
)

__version__ = "0.1.0"
