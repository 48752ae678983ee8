"""graphforge: grow entangled graph states with probabilistic fusions.

The package has four layers: explicit graph-state bookkeeping with the
fusion rewrite rule (:mod:`graphforge.graph`), the stochastic model and
attempt accounting (:mod:`graphforge.eo`), growth strategies with their
closed-form expected costs (:mod:`graphforge.strategies`,
:mod:`graphforge.analytic`), and structure assembly plus an exact
amplitude-level verifier (:mod:`graphforge.assembly`,
:mod:`graphforge.oracle`).  Hot Monte Carlo loops run on a compiled
kernel when available; set ``GRAPHFORGE_PURE_KERNEL=1`` to force the
pure-Python mirror.
"""

from ._kernel import COMPILED
from .analytic import (
    AnalyticCosts,
    BK_RECYCLED_REFERENCE,
    S1_THRESHOLD,
    S2_THRESHOLD,
    analytic_costs,
    bk_chunk_cost,
    expected_cost_oracle_s2,
    s1_cost,
    s2_cost,
    s2_cost_components,
)
from .assembly import (
    AssemblyStats,
    ChainSection,
    ConnectivityReport,
    NonGrowingError,
    assemble,
    connectivity_report,
    grow_sections,
)
from .eo import (
    AttemptCapExceeded,
    AttemptLedger,
    DEFAULT_BUILD_CAP,
    EoModel,
    attempt_fusion,
    build_epr,
    forced_outcome_fusion,
)
from .graph import FusionReport, GraphState
from .oracle import (
    DEFAULT_QUBIT_CAP,
    SweepSummary,
    VerificationReport,
    make_graph_state,
    sweep_verify,
    verify_fusion_rule,
)
from .strategies import (
    ComparisonRow,
    CostSummary,
    GIVE_UP_BOUND,
    GrowthRate,
    GrowthState,
    S1Growth,
    S2Growth,
    compare_strategies,
    growth_rate,
    run_many,
    run_s1,
    run_s2,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticCosts",
    "AssemblyStats",
    "AttemptCapExceeded",
    "AttemptLedger",
    "BK_RECYCLED_REFERENCE",
    "COMPILED",
    "ChainSection",
    "ComparisonRow",
    "ConnectivityReport",
    "CostSummary",
    "DEFAULT_BUILD_CAP",
    "DEFAULT_QUBIT_CAP",
    "EoModel",
    "FusionReport",
    "GIVE_UP_BOUND",
    "GraphState",
    "GrowthRate",
    "GrowthState",
    "NonGrowingError",
    "S1Growth",
    "S1_THRESHOLD",
    "S2Growth",
    "S2_THRESHOLD",
    "SweepSummary",
    "VerificationReport",
    "analytic_costs",
    "assemble",
    "attempt_fusion",
    "bk_chunk_cost",
    "build_epr",
    "compare_strategies",
    "connectivity_report",
    "expected_cost_oracle_s2",
    "forced_outcome_fusion",
    "grow_sections",
    "growth_rate",
    "make_graph_state",
    "run_many",
    "run_s1",
    "run_s2",
    "s1_cost",
    "s2_cost",
    "s2_cost_components",
    "sweep_verify",
    "verify_fusion_rule",
    "__version__",
]
