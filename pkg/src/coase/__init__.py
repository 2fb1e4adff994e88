"""Finite exchange economies with bilateral and ideal-exchange dynamics.

Agents hold disjoint bundles of indivisible resources and rank every bundle
by a strict total order.  The package runs the two exchange processes to
stagnation, decides Pareto optimality by brute force, and sweeps small
economy spaces to check convergence and efficiency claims.
"""

from .core import (
    Allocation,
    BudgetExceeded,
    Economy,
    EconomyError,
    NonPermutationPreferences,
    OverlappingOwnership,
    PreferenceOrder,
    ResourceTable,
    UnclaimedResource,
    UnknownResource,
    bundle_from_names,
    enumerate_allocations,
    enumerate_preference_orders,
    prefers,
    random_economy,
    rank,
    validate_allocation,
)
from .dynamics import (
    FIRST_IN_ORDER,
    SeededRandom,
    StepLimitExceeded,
    Trace,
    TradeProposal,
    find_bilateral_trades,
    find_ideal_exchanges,
    potential,
    run_bilateral,
    run_ideal,
    step_bilateral,
    step_ideal,
)
from .kernels import BACKEND
from .pareto import ParetoVerdict, pareto_frontier, pareto_witness, prefers_distribution
from .scenario import load_scenario
from .verifier import (
    SweepConfig,
    SweepReport,
    check_coase,
    check_convergence,
    find_invariance_violation,
    find_suboptimal_stagnation,
)

__version__ = "0.1.0"
