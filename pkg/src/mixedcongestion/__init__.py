"""Congestion games with mixed (sum-of-latency / max-of-bottleneck) objectives."""

from mixedcongestion.errors import (
    CapExceededError, CostEvaluationError, GameError, InapplicableError,
    IntractableError, InvalidStateError, SolverError,
)
from mixedcongestion.game import (
    CostFunction, Game, Player, Resource, all_costs, bottleneck_max,
    check_monotone_dependence, congestion, latency_sum, player_cost, validate,
)
from mixedcongestion.matroid import MatroidHandle, lemma1_verify
from mixedcongestion.dynamics import (
    best_responses, lazy_best_response, rank_potential, run_dynamics,
    weakly_acyclic_probe,
)
from mixedcongestion.equilibrium import (
    Certificate, approx_solve, beta_sweep, certify, enumerate_pne,
    solve_monotone_dependence, solve_pure_preferences, solve_singleton,
)

__version__ = "0.1.0"
