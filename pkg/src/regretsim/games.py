"""Games: bimatrix payoff tables and discretized sealed-bid auctions.

All payoffs are exact expectations. When the top bids of an auction tie,
the winner is conceptually drawn uniformly at random and utilities are
averaged over that draw, so feedback is a deterministic function of the
action profile.
"""
from __future__ import annotations

import numpy as np

from .errors import GameError

FIRST_PRICE = "first"
SECOND_PRICE = "second"
ALL_PAY = "all-pay"
AUCTION_KINDS = (FIRST_PRICE, SECOND_PRICE, ALL_PAY)


def default_bid_grid() -> np.ndarray:
    """Bid grid {0.05, 0.10, ..., 1.00}: twenty actions, no zero bid."""
    return np.arange(1, 21) * 0.05


class Game:
    """Common surface shared by every game type.

    Subclasses implement ``counterfactuals``; everything else (realized
    utilities, loss normalization, payoff tensors) derives from it.
    """

    def __init__(self, action_counts, utility_bounds, name: str | None = None):
        action_counts = tuple(int(k) for k in action_counts)
        if len(action_counts) < 2:
            raise GameError("a game needs at least two players")
        if any(k < 2 for k in action_counts):
            raise GameError("every player needs at least two actions")
        lo, hi = float(utility_bounds[0]), float(utility_bounds[1])
        if not hi > lo:
            raise GameError("degenerate game: utility upper bound must exceed lower bound")
        self.action_counts = action_counts
        self.num_players = len(action_counts)
        self.utility_bounds = (lo, hi)
        self.name = name

    # -- single-profile interface ------------------------------------------------

    def validate_profile(self, profile) -> tuple[int, ...]:
        """Return the profile as a tuple of ints, or raise GameError."""
        try:
            prof = tuple(int(a) for a in profile)
        except (TypeError, ValueError) as exc:
            raise GameError(f"invalid action profile {profile!r}") from exc
        if len(prof) != self.num_players:
            raise GameError(
                f"profile {prof} has {len(prof)} entries for {self.num_players} players"
            )
        for a, k in zip(prof, self.action_counts):
            if not 0 <= a < k:
                raise GameError(f"action {a} out of range for {k} actions")
        return prof

    def utility(self, profile) -> np.ndarray:
        """Exact per-player utility of one action profile."""
        prof = self.validate_profile(profile)
        out = np.empty(self.num_players)
        for i in range(self.num_players):
            out[i] = self.counterfactual_utilities(i, prof)[prof[i]]
        return out

    def counterfactual_utilities(self, player, profile) -> np.ndarray:
        """Utility ``player`` would have received for each of their actions,
        holding the rest of the profile fixed."""
        prof = self.validate_profile(profile)
        if not 0 <= player < self.num_players:
            raise GameError(f"no player {player} in a {self.num_players}-player game")
        acts = np.array([prof], dtype=np.int64)
        return self.counterfactuals(player, acts)[0]

    def normalized_loss(self, values) -> np.ndarray:
        """Map utilities to losses in [0, 1] via (u_max - u) / (u_max - u_min)."""
        lo, hi = self.utility_bounds
        return (hi - np.asarray(values, dtype=float)) / (hi - lo)

    def action_values(self, player: int) -> np.ndarray:
        """Numeric value of each action, used for 'mean action' summaries.

        Auctions report the bid amount; matrix games report the action index,
        so for two-action games the mean is P(second action).
        """
        return np.arange(self.action_counts[player], dtype=float)

    def action_labels(self, player: int) -> list[str]:
        return [str(i) for i in range(self.action_counts[player])]

    # -- vectorized interface (engine hot path) -----------------------------------

    def counterfactuals(self, player: int, actions: np.ndarray) -> np.ndarray:
        """Counterfactual utilities for a stack of profiles.

        ``actions`` has shape (n, num_players); the result has shape
        (n, action_counts[player]) and row r holds player's utility for each
        own action against the opponents' actions in row r.
        """
        raise NotImplementedError

    def payoff_tensors(self) -> tuple[np.ndarray, np.ndarray]:
        """Exact (K1, K2) utility tables for a two-player game."""
        if self.num_players != 2:
            raise GameError("payoff tensors are only defined for two-player games")
        k1, k2 = self.action_counts
        cols = np.zeros((k2, 2), dtype=np.int64)
        cols[:, 1] = np.arange(k2)
        u1 = self.counterfactuals(0, cols).T  # (K1, K2)
        rows = np.zeros((k1, 2), dtype=np.int64)
        rows[:, 0] = np.arange(k1)
        u2 = self.counterfactuals(1, rows)  # (K1, K2)
        return u1, u2

    def describe(self) -> dict:
        """JSON-friendly description used in emitted result files."""
        raise NotImplementedError


class BimatrixGame(Game):
    """Two-player game given by payoff matrices A (row player) and B (column)."""

    def __init__(self, a, b, name=None, row_labels=None, col_labels=None):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.ndim != 2 or b.ndim != 2:
            raise GameError("payoff matrices must be two-dimensional")
        if a.shape != b.shape:
            raise GameError(f"payoff matrix shapes differ: {a.shape} vs {b.shape}")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise GameError("payoff matrices must be finite")
        if a.min() < 0.0 or a.max() > 1.0 or b.min() < 0.0 or b.max() > 1.0:
            raise GameError("payoff entries must lie in [0, 1]")
        super().__init__(a.shape, (0.0, 1.0), name=name)
        self.a = a
        self.b = b
        self._a_t = np.ascontiguousarray(a.T)
        self._labels = (row_labels, col_labels)

    def counterfactuals(self, player, actions):
        if player == 0:
            return self._a_t[actions[:, 1]]
        return self.b[actions[:, 0]]

    def action_labels(self, player):
        labels = self._labels[player]
        if labels is None:
            return super().action_labels(player)
        return list(labels)

    def describe(self):
        return {
            "kind": "bimatrix",
            "name": self.name,
            "action_counts": list(self.action_counts),
            "utility_bounds": list(self.utility_bounds),
            "A": self.a.tolist(),
            "B": self.b.tolist(),
            "action_labels": [self.action_labels(0), self.action_labels(1)],
            "action_values": [self.action_values(0).tolist(), self.action_values(1).tolist()],
        }


class AuctionGame(Game):
    """Sealed-bid auction on a shared discrete bid grid.

    ``kind`` selects the payment rule: first price (winner pays own bid),
    second price (winner pays the highest losing bid), or all-pay (everyone
    pays their own bid, winner takes the item).
    """

    def __init__(self, kind, values, grid, name=None):
        if kind not in AUCTION_KINDS:
            raise GameError(f"unknown auction kind {kind!r}; expected one of {AUCTION_KINDS}")
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise GameError("an auction needs a value for each of at least two players")
        if (values <= 0.0).any() or (values > 1.0).any():
            raise GameError("player values must lie in (0, 1]")
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise GameError("bid grid needs at least two bids")
        if (grid <= 0.0).any() or (grid > 1.0).any():
            raise GameError("bids must lie in (0, 1]")
        if not (np.diff(grid) > 0.0).all():
            raise GameError("bid grid must be strictly increasing")
        n = values.size
        if kind == ALL_PAY:
            bounds = (-1.0, 1.0)
        else:
            # Winner can pay more than their value when values differ from 1,
            # so the lower bound widens accordingly.
            bounds = (min(0.0, float(values.min()) - 1.0), 1.0)
        super().__init__((grid.size,) * n, bounds, name=name)
        self.kind = kind
        self.values = values
        self.grid = grid

    def counterfactuals(self, player, actions):
        n = actions.shape[0]
        k = self.grid.size
        if self.num_players == 2:
            opp = actions[:, 1 - player][:, None]
        else:
            opp = np.delete(actions, player, axis=1)
        top = opp.max(axis=1)                      # (n,) highest opposing bid index
        ties = (opp == top[:, None]).sum(axis=1)   # (n,) opponents at that bid
        v = float(self.values[player])
        bids = self.grid[None, :]
        win = np.arange(k)[None, :] > top[:, None]
        tie = np.arange(k)[None, :] == top[:, None]
        share = 1.0 / (ties + 1.0)[:, None]
        if self.kind == FIRST_PRICE:
            out = np.where(win, v - bids, 0.0)
            out = np.where(tie, (v - bids) * share, out)
        elif self.kind == SECOND_PRICE:
            pay = self.grid[top][:, None]
            out = np.where(win, v - pay, 0.0)
            out = np.where(tie, (v - bids) * share, out)
        else:  # all-pay: the bid is sunk either way
            out = np.where(win, v - bids, -bids * np.ones((n, 1)))
            out = np.where(tie, v * share - bids, out)
        return out

    def action_values(self, player):
        return self.grid.copy()

    def action_labels(self, player):
        return [f"{b:.2f}" for b in self.grid]

    def describe(self):
        return {
            "kind": "auction",
            "name": self.name,
            "auction": self.kind,
            "action_counts": list(self.action_counts),
            "utility_bounds": list(self.utility_bounds),
            "values": self.values.tolist(),
            "grid": self.grid.tolist(),
            "action_labels": [self.action_labels(i) for i in range(self.num_players)],
            "action_values": [self.action_values(i).tolist() for i in range(self.num_players)],
        }


def make_bimatrix(a, b, name=None, row_labels=None, col_labels=None) -> BimatrixGame:
    """Build a bimatrix game, validating shapes and the [0, 1] payoff range."""
    return BimatrixGame(a, b, name=name, row_labels=row_labels, col_labels=col_labels)


def make_auction(kind, num_players=2, values=1.0, grid=None, name=None) -> AuctionGame:
    """Build a sealed-bid auction; ``values`` may be a scalar shared by all players."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        values = np.full(int(num_players), float(values))
    elif values.size != int(num_players):
        raise GameError(f"got {values.size} values for {num_players} players")
    if grid is None:
        grid = default_bid_grid()
    return AuctionGame(kind, values, grid, name=name)


def prisoners_dilemma() -> BimatrixGame:
    """Two actions, cooperate then defect; mutual defection is the unique equilibrium."""
    a = [[0.9, 0.0], [1.0, 0.1]]
    b = [[0.9, 1.0], [0.0, 0.1]]
    return make_bimatrix(a, b, name="pd", row_labels=("C", "D"), col_labels=("C", "D"))


def battle_of_sexes() -> BimatrixGame:
    """Coordination game where each player prefers a different meeting point."""
    a = [[1.0, 0.0], [0.0, 0.1]]
    b = [[0.1, 0.0], [0.0, 1.0]]
    return make_bimatrix(a, b, name="bos", row_labels=("A", "B"), col_labels=("A", "B"))


def bimatrix_from_dict(doc: dict, name=None) -> BimatrixGame:
    """Build a bimatrix game from the file format {"A": [[...]], "B": [[...]]}."""
    if not isinstance(doc, dict) or "A" not in doc or "B" not in doc:
        raise GameError('matrix document must be an object with "A" and "B" entries')
    return make_bimatrix(doc["A"], doc["B"], name=name)


def bimatrix_to_dict(game: BimatrixGame) -> dict:
    return {"A": game.a.tolist(), "B": game.b.tolist()}
