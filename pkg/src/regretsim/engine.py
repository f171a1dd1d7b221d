"""Full-information repeated play: one round, one simulation, or a seeded batch.

Each turn every learner emits a distribution, the engine samples one action
per player, and every learner then receives its full vector of normalized
counterfactual losses. Learners never observe who they are playing.

Batches are vectorized across simulations for speed, but each simulation
draws from its own generator seeded by (master seed, simulation index), so
running simulations one at a time, in any order, reproduces the batch
bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .games import Game
from .learners import (
    STATIONARY_TOL,
    LearnerSpec,
    _mw_distribution,
    _mw_step,
    _stationary_core,
)

DEFAULT_TURNS = 1000
DEFAULT_SIMS = 100


def final_window_start(turns: int) -> int:
    """First turn of the trailing 10% window used for equilibrium checks."""
    return turns - max(1, turns // 10)


def _sample_rows(dist: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sample per row: dist (n, k) and u (n,) -> action indices."""
    cum = np.cumsum(dist, axis=-1)
    idx = (cum < u[..., None]).sum(axis=-1)
    return np.minimum(idx, dist.shape[-1] - 1)


@dataclass
class SimulationConfig:
    """A batch to run: game, per-player learner specs, sizes, master seed."""

    game: Game
    learners: tuple[LearnerSpec, ...]
    turns: int = DEFAULT_TURNS
    sims: int = DEFAULT_SIMS
    seed: int = 0

    def __post_init__(self):
        self.learners = tuple(self.learners)
        if len(self.learners) != self.game.num_players:
            raise ConfigError(
                f"{len(self.learners)} learner specs for {self.game.num_players} players"
            )
        for spec in self.learners:
            if spec.kind != "uniform" and (spec.auto or spec.rate is None):
                raise ConfigError(f"learner spec {spec.label()} is unresolved")
        if int(self.turns) < 1:
            raise ConfigError("turns must be at least 1")
        if int(self.sims) < 1:
            raise ConfigError("sims must be at least 1")
        if int(self.seed) < 0:
            raise ConfigError("seed must be non-negative")
        self.turns = int(self.turns)
        self.sims = int(self.sims)
        self.seed = int(self.seed)


@dataclass
class RoundRecord:
    """What one turn produced: actions, realized utilities, counterfactuals."""

    turn: int
    profile: tuple[int, ...]
    utilities: np.ndarray
    counterfactuals: tuple[np.ndarray, ...]


@dataclass
class History:
    """One simulation's full record.

    ``counterfactuals[i][t]`` is player i's counterfactual utility vector at
    turn t; its entry at the realized action equals ``utilities[t, i]``.
    """

    actions: np.ndarray
    utilities: np.ndarray
    counterfactuals: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return self.actions.shape[0]

    def round(self, t: int) -> RoundRecord:
        return RoundRecord(
            turn=t,
            profile=tuple(int(a) for a in self.actions[t]),
            utilities=self.utilities[t],
            counterfactuals=tuple(cf[t] for cf in self.counterfactuals),
        )


@dataclass
class BatchResult:
    """Averages over a batch of independent simulations.

    Regrets are per-turn averages in utility units. ``heatmap`` counts every
    (row action, column action) pair across all simulations and turns of a
    two-player game; ``final_heatmap`` restricts to the trailing window.
    ``inner_regrets[i]`` holds, per simulation, the external regret of each
    inner copy of player i's no-swap learner on the scaled losses it saw.
    """

    config: SimulationConfig
    per_turn_utility: np.ndarray
    per_turn_action: np.ndarray
    overall_mean_utility: np.ndarray
    per_sim_mean_utility: np.ndarray
    external_regret: np.ndarray
    swap_regret: np.ndarray
    per_sim_external_regret: np.ndarray
    per_sim_swap_regret: np.ndarray
    inner_regrets: dict[int, np.ndarray] = field(default_factory=dict)
    heatmap: np.ndarray | None = None
    final_heatmap: np.ndarray | None = None

    @property
    def final_window_start(self) -> int:
        return final_window_start(self.config.turns)


# -- batched learner states ------------------------------------------------------


class _BatchUniform:
    def __init__(self, n_actions, n_sims):
        self._dist = np.full((n_sims, n_actions), 1.0 / n_actions)

    def distribution(self):
        return self._dist

    def update(self, loss):
        pass


class _BatchMW:
    def __init__(self, n_actions, rate, n_sims):
        self.rate = rate
        self.weights = np.ones((n_sims, n_actions))

    def distribution(self):
        return _mw_distribution(self.weights)

    def update(self, loss):
        self.weights = _mw_step(self.weights, self.rate, loss)


class _BatchNoSwap:
    def __init__(self, n_actions, rate, n_sims):
        self.rate = rate
        self.inner_weights = np.ones((n_sims, n_actions, n_actions))
        self._pending = None
        self._pending_q = None
        self.inner_paid = np.zeros((n_sims, n_actions))
        self.inner_cum = np.zeros((n_sims, n_actions, n_actions))

    def distribution(self):
        q = _mw_distribution(self.inner_weights)
        p = _stationary_core(q, STATIONARY_TOL)
        self._pending = p
        self._pending_q = q
        return p

    def update(self, loss):
        scaled = self._pending[:, :, None] * loss[:, None, :]
        self.inner_paid += (self._pending_q * scaled).sum(axis=-1)
        self.inner_cum += scaled
        self.inner_weights = _mw_step(self.inner_weights, self.rate, scaled)
        self._pending = None
        self._pending_q = None

    def inner_external_regrets(self):
        return self.inner_paid - self.inner_cum.min(axis=-1)


def _batch_state(spec: LearnerSpec, n_actions: int, n_sims: int):
    if spec.kind == "uniform":
        return _BatchUniform(n_actions, n_sims)
    if spec.kind == "mw":
        return _BatchMW(n_actions, spec.rate, n_sims)
    return _BatchNoSwap(n_actions, spec.rate, n_sims)


# -- driving play ----------------------------------------------------------------


def play_round(game: Game, learners, rng: np.random.Generator, turn: int = 0) -> RoundRecord:
    """Run one full-information round against live learner objects.

    Draw order is fixed: one uniform variate per player, in player order.
    """
    learners = list(learners)
    if len(learners) != game.num_players:
        raise ConfigError(f"{len(learners)} learners for {game.num_players} players")
    dists = [ln.distribution() for ln in learners]
    u = rng.random(len(learners))
    profile = tuple(
        int(_sample_rows(d[None, :], u[i : i + 1])[0]) for i, d in enumerate(dists)
    )
    counterfactuals = tuple(
        game.counterfactual_utilities(i, profile) for i in range(game.num_players)
    )
    utilities = np.array([counterfactuals[i][profile[i]] for i in range(game.num_players)])
    for i, ln in enumerate(learners):
        ln.update(game.normalized_loss(counterfactuals[i]))
    return RoundRecord(turn=turn, profile=profile, utilities=utilities, counterfactuals=counterfactuals)


def _simulate(config: SimulationConfig, sim_indices, record: bool):
    game = config.game
    n_players = game.num_players
    turns = config.turns
    indices = [int(i) for i in sim_indices]
    n = len(indices)
    lo, hi = game.utility_bounds
    span = hi - lo

    draws = np.empty((n, turns, n_players))
    for row, idx in enumerate(indices):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, idx)))
        draws[row] = rng.random((turns, n_players))

    states = [
        _batch_state(spec, k, n) for spec, k in zip(config.learners, game.action_counts)
    ]
    values = [game.action_values(i) for i in range(n_players)]

    all_u = np.empty((n, turns, n_players))
    all_av = np.empty((n, turns, n_players))
    cum_cf = [np.zeros((n, k)) for k in game.action_counts]
    cum_u = np.zeros((n, n_players))
    swap_cf = [np.zeros((n, k, k)) for k in game.action_counts]
    two_player = n_players == 2
    heat = None
    final_heat = None
    window = final_window_start(turns)
    if two_player:
        k1, k2 = game.action_counts
        heat = np.zeros((k1, k2), dtype=np.int64)
        final_heat = np.zeros((k1, k2), dtype=np.int64)
    if record:
        rec_actions = np.empty((n, turns, n_players), dtype=np.int64)
        rec_cf = [np.empty((n, turns, k)) for k in game.action_counts]

    rows = np.arange(n)
    acts = np.empty((n, n_players), dtype=np.int64)
    for t in range(turns):
        dists = [st.distribution() for st in states]
        for i in range(n_players):
            acts[:, i] = _sample_rows(dists[i], draws[:, t, i])
        for i in range(n_players):
            cf = game.counterfactuals(i, acts)
            u = cf[rows, acts[:, i]]
            all_u[:, t, i] = u
            all_av[:, t, i] = values[i][acts[:, i]]
            cum_cf[i] += cf
            cum_u[:, i] += u
            swap_cf[i][rows, acts[:, i], :] += cf
            if record:
                rec_cf[i][:, t, :] = cf
            states[i].update((hi - cf) / span)
        if two_player:
            np.add.at(heat, (acts[:, 0], acts[:, 1]), 1)
            if t >= window:
                np.add.at(final_heat, (acts[:, 0], acts[:, 1]), 1)
        if record:
            rec_actions[:, t, :] = acts

    external = np.stack(
        [(cum_cf[i].max(axis=-1) - cum_u[:, i]) / turns for i in range(n_players)], axis=1
    )
    swap = np.empty((n, n_players))
    for i in range(n_players):
        k = game.action_counts[i]
        own = swap_cf[i][:, np.arange(k), np.arange(k)]
        gains = swap_cf[i] - own[:, :, None]
        # The diagonal gain is exactly zero, so the per-source max is already
        # floored at no deviation.
        swap[:, i] = gains.max(axis=-1).sum(axis=-1) / turns
    inner = {
        i: st.inner_external_regrets()
        for i, st in enumerate(states)
        if isinstance(st, _BatchNoSwap)
    }

    out = {
        "all_u": all_u,
        "all_av": all_av,
        "external": external,
        "swap": swap,
        "inner": inner,
        "heat": heat,
        "final_heat": final_heat,
    }
    if record:
        out["actions"] = rec_actions
        out["cf"] = rec_cf
    return out


def run_simulation(config: SimulationConfig, sim_index: int) -> History:
    """Run one simulation of the batch and return its full history."""
    if not 0 <= int(sim_index) < config.sims:
        raise ConfigError(f"sim_index {sim_index} outside 0..{config.sims - 1}")
    raw = _simulate(config, [sim_index], record=True)
    return History(
        actions=raw["actions"][0],
        utilities=raw["all_u"][0],
        counterfactuals=tuple(cf[0] for cf in raw["cf"]),
    )


def run_batch(config: SimulationConfig) -> BatchResult:
    """Run all simulations of the batch and average the outputs."""
    raw = _simulate(config, range(config.sims), record=False)
    per_turn_utility = raw["all_u"].mean(axis=0)
    per_turn_action = raw["all_av"].mean(axis=0)
    return BatchResult(
        config=config,
        per_turn_utility=per_turn_utility,
        per_turn_action=per_turn_action,
        overall_mean_utility=per_turn_utility.mean(axis=0),
        per_sim_mean_utility=raw["all_u"].mean(axis=1),
        external_regret=raw["external"].mean(axis=0),
        swap_regret=raw["swap"].mean(axis=0),
        per_sim_external_regret=raw["external"],
        per_sim_swap_regret=raw["swap"],
        inner_regrets=raw["inner"],
        heatmap=raw["heat"],
        final_heatmap=raw["final_heat"],
    )
