"""Traffic remapping attacks in multi-hop ad hoc networks.

Library for studying selfish access-category remapping: resolve who ends
up sending what at which priority, score nodes with a rank-based cost
heuristic, enumerate one-shot equilibria, and simulate the multistage
boundedly-rational dynamics.
"""

from .costs import (
    Aggregation,
    NodeStatus,
    RankCostModel,
    RankParams,
    classify_status,
    competing_hflows,
    flow_cost,
    hflow_rank,
    node_costs,
    status_of,
)
from .game import (
    DEFAULT_DELTA,
    DEFAULT_ENUMERATION_CAP,
    EquilibriumCensus,
    PayoffTable,
    RegretFlags,
    ResponseCase,
    build_payoff_table,
    census,
    is_nash,
    is_sce,
    regret_nodes,
    response_case,
    toggle,
)
from .experiments import (
    FixedFileTopology,
    GenerationError,
    GeometricTopology,
    HitsSummary,
    InstanceGenParams,
    InstanceResult,
    SweepCell,
    campaign,
    congruity,
    evaluate_instance,
    gen_instance,
    gen_instances,
    improvement_rating,
    informed_gambler_congruity,
    ne_sce_hits,
    pd_heuristic_status,
    sce_hit_exponent,
    sweep,
)
from .fileio import (
    bundled_instance_path,
    bundled_reference_status_path,
    load_instance,
    load_status_corpus,
    read_rows,
    save_instance,
    save_status_corpus,
    write_rows,
)
from .rest import (
    RestNodeState,
    RestParams,
    RestTrace,
    StageRecord,
    Terminal,
    TerminalKind,
    rest_step,
    run,
    satisfied,
    sigmoid,
)
from .model import (
    AccessCategory,
    AttackerSet,
    E2eFlow,
    HearabilityGraph,
    HopAcTable,
    InvalidInstanceError,
    NetworkInstance,
    Route,
    TraEvent,
    TraKind,
    ValidationReport,
    Violation,
    resolve_attacks,
    tra_events,
    validate_instance,
)
from .seeding import derive_seed

__all__ = [
    "AccessCategory",
    "Aggregation",
    "AttackerSet",
    "DEFAULT_DELTA",
    "DEFAULT_ENUMERATION_CAP",
    "E2eFlow",
    "EquilibriumCensus",
    "FixedFileTopology",
    "GenerationError",
    "GeometricTopology",
    "HearabilityGraph",
    "HitsSummary",
    "HopAcTable",
    "InstanceGenParams",
    "InstanceResult",
    "InvalidInstanceError",
    "NetworkInstance",
    "NodeStatus",
    "PayoffTable",
    "RankCostModel",
    "RankParams",
    "RegretFlags",
    "ResponseCase",
    "RestNodeState",
    "RestParams",
    "RestTrace",
    "Route",
    "StageRecord",
    "SweepCell",
    "Terminal",
    "TerminalKind",
    "TraEvent",
    "TraKind",
    "ValidationReport",
    "Violation",
    "build_payoff_table",
    "bundled_instance_path",
    "bundled_reference_status_path",
    "campaign",
    "census",
    "classify_status",
    "competing_hflows",
    "congruity",
    "derive_seed",
    "evaluate_instance",
    "flow_cost",
    "gen_instance",
    "gen_instances",
    "hflow_rank",
    "improvement_rating",
    "informed_gambler_congruity",
    "is_nash",
    "is_sce",
    "load_instance",
    "load_status_corpus",
    "ne_sce_hits",
    "node_costs",
    "pd_heuristic_status",
    "read_rows",
    "regret_nodes",
    "resolve_attacks",
    "response_case",
    "rest_step",
    "run",
    "satisfied",
    "save_instance",
    "save_status_corpus",
    "sce_hit_exponent",
    "sigmoid",
    "status_of",
    "sweep",
    "toggle",
    "tra_events",
    "validate_instance",
    "write_rows",
]
