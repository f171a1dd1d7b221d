"""Repeated-game simulator for uniform, no-regret, and no-swap-regret learners."""

from .engine import (
    BatchResult,
    History,
    RoundRecord,
    SimulationConfig,
    final_window_start,
    play_round,
    run_batch,
    run_simulation,
)
from .errors import ConfigError, GameError, LearnerError, NumericError
from .games import (
    AuctionGame,
    BimatrixGame,
    Game,
    battle_of_sexes,
    bimatrix_from_dict,
    bimatrix_to_dict,
    default_bid_grid,
    make_auction,
    make_bimatrix,
    prisoners_dilemma,
)
from .learners import (
    LearnerSpec,
    MWLearner,
    NoSwapLearner,
    UniformLearner,
    adjust_swap_rate,
    build_learner,
    parse_spec,
    resolve_auto_rates,
    stationary,
    uniform_distribution,
)
from .metrics import (
    cce_gains,
    cce_gap,
    ce_gains,
    ce_gap,
    empirical_distribution,
    equilibrium_gaps,
    external_regret,
    swap_regret,
)
from .search import GapReport, gap_experiment, mine, random_bimatrix

__version__ = "1.0.0"

__all__ = [
    "AuctionGame",
    "BatchResult",
    "BimatrixGame",
    "ConfigError",
    "Game",
    "GameError",
    "GapReport",
    "History",
    "LearnerError",
    "LearnerSpec",
    "MWLearner",
    "NoSwapLearner",
    "NumericError",
    "RoundRecord",
    "SimulationConfig",
    "UniformLearner",
    "adjust_swap_rate",
    "battle_of_sexes",
    "bimatrix_from_dict",
    "bimatrix_to_dict",
    "build_learner",
    "cce_gains",
    "cce_gap",
    "ce_gains",
    "ce_gap",
    "default_bid_grid",
    "empirical_distribution",
    "equilibrium_gaps",
    "external_regret",
    "final_window_start",
    "gap_experiment",
    "make_auction",
    "make_bimatrix",
    "mine",
    "parse_spec",
    "play_round",
    "prisoners_dilemma",
    "random_bimatrix",
    "resolve_auto_rates",
    "run_batch",
    "run_simulation",
    "stationary",
    "swap_regret",
    "uniform_distribution",
]
