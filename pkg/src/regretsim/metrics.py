"""Regret measures on finished histories and equilibrium gaps on joint
action distributions.

Regrets are per-turn averages in utility units. Deviation gains are floored
at zero, so a gap of 0 means no profitable deviation of the corresponding
class exists; the raw signed gain arrays are available for diagnostics.
"""
from __future__ import annotations

import numpy as np

from .engine import History
from .errors import GameError
from .games import Game


def external_regret(history: History, player: int) -> float:
    """Best fixed action's cumulative utility minus realized, per turn."""
    cf = history.counterfactuals[player]
    realized = history.utilities[:, player]
    turns = cf.shape[0]
    # Accumulate in turn order so results match the engine's running sums.
    best = cf.sum(axis=0).max()
    return float((best - realized.sum()) / turns)


def swap_regret(history: History, player: int) -> float:
    """Best per-source-action rewrite's gain over realized play, per turn.

    For each action a the history actually played, take the best fixed
    replacement b over the turns where a was played (never worse than
    keeping a), sum the gains, and average over turns.
    """
    cf = history.counterfactuals[player]
    acts = history.actions[:, player]
    turns, k = cf.shape
    by_source = np.zeros((k, k))
    np.add.at(by_source, acts, cf)
    own = by_source[np.arange(k), np.arange(k)]
    gains = by_source - own[:, None]
    return float(gains.max(axis=-1).sum() / turns)


def empirical_distribution(source, player_actions: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Joint action distribution of a two-player game.

    ``source`` is either a History or a matrix of non-negative counts (for
    example a BatchResult heatmap); the result is normalized to sum to 1.
    """
    if isinstance(source, History):
        acts = source.actions[:, list(player_actions)]
        k1 = int(acts[:, 0].max()) + 1
        k2 = int(acts[:, 1].max()) + 1
        counts = np.zeros((k1, k2))
        np.add.at(counts, (acts[:, 0], acts[:, 1]), 1.0)
    else:
        counts = np.asarray(source, dtype=float)
        if counts.ndim != 2:
            raise GameError("expected a History or a 2-d count matrix")
        if (counts < 0.0).any():
            raise GameError("counts must be non-negative")
    total = counts.sum()
    if total <= 0.0:
        raise GameError("empty distribution: no observations")
    return counts / total


def _check_joint(game: Game, dist) -> np.ndarray:
    if game.num_players != 2:
        raise GameError("equilibrium gaps are defined for two-player games")
    dist = np.asarray(dist, dtype=float)
    if dist.shape != tuple(game.action_counts):
        raise GameError(
            f"distribution shape {dist.shape} does not match actions {game.action_counts}"
        )
    if (dist < 0.0).any() or abs(dist.sum() - 1.0) > 1e-9:
        raise GameError("joint distribution must be non-negative and sum to 1 within 1e-9")
    return dist


def cce_gains(game: Game, dist) -> tuple[np.ndarray, np.ndarray]:
    """Signed gain of each constant deviation for both players."""
    dist = _check_joint(game, dist)
    u1, u2 = game.payoff_tensors()
    base1 = (dist * u1).sum()
    base2 = (dist * u2).sum()
    gains1 = u1 @ dist.sum(axis=0) - base1   # deviate against the column marginal
    gains2 = dist.sum(axis=1) @ u2 - base2   # deviate against the row marginal
    return gains1, gains2


def ce_gains(game: Game, dist) -> tuple[np.ndarray, np.ndarray]:
    """Signed gain matrices G[a, b] of rewriting source action a to b.

    Entries are weighted by the joint mass on the source action, and the
    diagonal is exactly zero.
    """
    dist = _check_joint(game, dist)
    u1, u2 = game.payoff_tensors()
    # Subtracting each row's own diagonal entry of the same product keeps
    # the identity rewiring at exactly 0.0 (x - x), which ce_gap's
    # keep-yourself floor relies on.
    prod1 = dist @ u1.T
    g1 = prod1 - np.diagonal(prod1)[:, None]
    prod2 = dist.T @ u2
    g2 = prod2 - np.diagonal(prod2)[:, None]
    return g1, g2


def cce_gap(game: Game, dist) -> float:
    """Best gain any player gets from a constant deviation, floored at 0.

    Zero exactly when ``dist`` is a coarse correlated equilibrium.
    """
    gains1, gains2 = cce_gains(game, dist)
    return float(max(0.0, gains1.max(), gains2.max()))


def ce_gap(game: Game, dist) -> float:
    """Best gain any player gets from rewriting its actions, floored at 0.

    Each source action independently picks its most profitable replacement
    (keeping itself when nothing beats it), so this is the gain of the best
    swap function and never falls below cce_gap. Zero exactly when ``dist``
    is a correlated equilibrium.
    """
    g1, g2 = ce_gains(game, dist)
    per_player = [g.max(axis=-1).sum() for g in (g1, g2)]
    return float(max(0.0, *per_player))


def equilibrium_gaps(game: Game, counts_or_dist) -> dict[str, float]:
    """Both gap measures of a joint distribution (or count matrix)."""
    dist = empirical_distribution(counts_or_dist)
    return {"cce": cce_gap(game, dist), "ce": ce_gap(game, dist)}
