"""Learners: uniform play, multiplicative weights, and the no-swap-regret
reduction that runs one inner multiplicative-weights copy per action.

The helpers prefixed with an underscore operate on arrays with an arbitrary
number of leading batch axes; the engine uses them to advance many
simulations at once with bit-identical per-simulation results.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LearnerError, NumericError

# Rescale weights before they can decay into the subnormal range.
WEIGHT_FLOOR = 1e-150

STATIONARY_TOL = 1e-10


def uniform_distribution(n: int) -> np.ndarray:
    return np.full(int(n), 1.0 / int(n))


def adjust_swap_rate(rate: float, n_actions: int) -> float:
    """Learning rate that makes the no-swap reduction track a plain
    multiplicative-weights learner of rate ``rate`` on ``n_actions`` actions.

    One loss is split across the inner copies, so each copy sees roughly a
    1/K share; 1 - (1 - rate)^K undoes that slowdown.
    """
    if not 0.0 < rate < 1.0:
        raise LearnerError(f"learning rate must be in (0, 1), got {rate}")
    if n_actions < 1:
        raise LearnerError(f"action count must be positive, got {n_actions}")
    return 1.0 - (1.0 - rate) ** n_actions


def _mw_distribution(weights: np.ndarray) -> np.ndarray:
    return weights / weights.sum(axis=-1, keepdims=True)


def _mw_step(weights: np.ndarray, rate: float, loss: np.ndarray) -> np.ndarray:
    w = weights * (1.0 - rate) ** loss
    wmax = w.max(axis=-1, keepdims=True)
    if (wmax < WEIGHT_FLOOR).any():
        w = np.where(wmax < WEIGHT_FLOOR, w / wmax, w)
    return w


def _check_loss(loss, n_actions) -> np.ndarray:
    loss = np.asarray(loss, dtype=float)
    if loss.shape != (n_actions,):
        raise LearnerError(f"loss vector has shape {loss.shape}, expected ({n_actions},)")
    if not np.isfinite(loss).all() or loss.min() < 0.0 or loss.max() > 1.0:
        raise LearnerError("loss entries must be finite and lie in [0, 1]")
    return loss


# -- stationary distributions --------------------------------------------------

# Power-iteration bookkeeping: check residuals every CHUNK steps and bail out
# to direct elimination once the contraction rate projects a miss of the
# iteration cap (slow mixing) or stops improving.
_CHUNK = 16


def _power_iteration(q: np.ndarray, tol: float, cap: int):
    """Batched power iteration on row-stochastic matrices (m, n, n).

    Returns (p, converged, residual); rows that converged are frozen as soon
    as their residual clears ``tol`` so results do not depend on batch peers.
    """
    m, n, _ = q.shape
    p = np.full((m, n), 1.0 / n)
    done = np.zeros(m, dtype=bool)
    res = np.full(m, np.inf)
    prev = np.full(m, np.inf)
    steps = 0
    while steps < cap:
        active = ~done
        if not active.any():
            break
        pa = p[active]
        qa = q[active]
        for _ in range(min(_CHUNK, cap - steps)):
            nxt = (pa[:, :, None] * qa).sum(axis=-2)
            r = np.abs(nxt - pa).max(axis=-1)
            hit = r <= tol
            pa = np.where(hit[:, None], pa, nxt)
            if hit.all():
                break
        steps += min(_CHUNK, cap - steps)
        idx = np.flatnonzero(active)
        p[idx] = pa
        res[idx] = r
        newly = idx[r <= tol]
        done[newly] = True
        still = idx[r > tol]
        if still.size:
            # Project whether the remaining budget can reach tol at the
            # observed per-chunk contraction; give up early if not.
            ratio = res[still] / prev[still]
            hopeless = ratio >= 1.0
            with np.errstate(divide="ignore", invalid="ignore"):
                needed = np.log(tol / res[still]) / np.log(ratio) * _CHUNK
            hopeless |= ~np.isfinite(needed) | (needed > cap - steps)
            done[still[hopeless]] = True  # frozen unconverged; caller re-checks
        prev = res.copy()
    return p, res <= tol, res


def _gth(q: np.ndarray) -> np.ndarray:
    """Stationary distribution by Grassmann-Taksar-Heyman state elimination.

    Subtraction-free Gaussian elimination specialized to stochastic matrices;
    stays accurate where power iteration mixes too slowly. Shape (m, n, n).
    """
    p = np.array(q, dtype=float, copy=True)
    m, n, _ = p.shape
    x = np.zeros((m, n))
    x[:, 0] = 1.0
    denoms = np.zeros((m, n))
    for k in range(n - 1, 0, -1):
        s = p[:, k, :k].sum(axis=-1)
        denoms[:, k] = s
        safe = np.where(s > 0.0, s, 1.0)
        p[:, k, :k] /= safe[:, None]
        p[:, :k, :k] += p[:, :k, k, None] * p[:, None, k, :k]
    for k in range(1, n):
        # Unnormalized masses can span hundreds of orders of magnitude when a
        # denominator is tiny; shrink before dividing so nothing overflows.
        # Only ratios matter until the final normalization.
        big = x[:, :k].max(axis=-1)
        oversize = big > 1e100
        if oversize.any():
            x *= np.where(oversize, 1e-150 / big, 1.0)[:, None]
        s = denoms[:, k]
        safe = np.where(s > 0.0, s, 1.0)
        flow = (x[:, :k] * p[:, :k, k]).sum(axis=-1) / safe
        x[:, k] = np.where(s > 0.0, flow, 0.0)
    total = x.sum(axis=-1)
    return x / total[:, None]


def _stationary_core(q: np.ndarray, tol: float) -> np.ndarray:
    """Stationary rows for a batch of row-stochastic matrices (m, n, n)."""
    n = q.shape[-1]
    cap = 100 * n * int(np.ceil(np.log10(1.0 / tol)))
    p, ok, res = _power_iteration(q, tol, cap)
    if not ok.all():
        bad = np.flatnonzero(~ok)
        fixed = _gth(q[bad])
        check = (fixed[:, :, None] * q[bad]).sum(axis=-2)
        res_fix = np.abs(check - fixed).max(axis=-1)
        good = res_fix <= tol
        if not good.all():
            worst = float(res_fix.max())
            raise NumericError("stationary distribution did not converge", residual=worst)
        p[bad] = fixed
    return p


def stationary(q: np.ndarray, tol: float = STATIONARY_TOL) -> np.ndarray:
    """Stationary distribution p of a row-stochastic matrix: p @ q = p.

    Raises NumericError (carrying the residual) if no candidate reaches
    max |pQ - p| <= tol.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise LearnerError(f"expected a square matrix, got shape {q.shape}")
    if not np.isfinite(q).all() or (q < 0.0).any():
        raise LearnerError("transition matrix entries must be finite and non-negative")
    if np.abs(q.sum(axis=-1) - 1.0).max() > 1e-9:
        raise LearnerError("transition matrix rows must sum to 1 within 1e-9")
    return _stationary_core(q[None], float(tol))[0]


# -- learner classes -----------------------------------------------------------


class UniformLearner:
    """Plays every action with equal probability and never updates."""

    def __init__(self, n_actions: int):
        if n_actions < 2:
            raise LearnerError("need at least two actions")
        self.n_actions = int(n_actions)

    def distribution(self) -> np.ndarray:
        return uniform_distribution(self.n_actions)

    def update(self, loss) -> None:
        _check_loss(loss, self.n_actions)


class MWLearner:
    """Multiplicative weights over normalized losses.

    Weights start at 1 and each update multiplies them by (1 - rate)^loss.
    """

    def __init__(self, n_actions: int, rate: float):
        if n_actions < 2:
            raise LearnerError("need at least two actions")
        if not 0.0 < rate < 1.0:
            raise LearnerError(f"learning rate must be in (0, 1), got {rate}")
        self.n_actions = int(n_actions)
        self.rate = float(rate)
        self.weights = np.ones(self.n_actions)

    def distribution(self) -> np.ndarray:
        return _mw_distribution(self.weights)

    def update(self, loss) -> None:
        loss = _check_loss(loss, self.n_actions)
        self.weights = _mw_step(self.weights, self.rate, loss)


class NoSwapLearner:
    """No-swap-regret play built from one inner MW copy per action.

    Each round the inner distributions are stacked into a transition matrix
    Q and the played distribution is its stationary vector p; afterwards the
    observed loss is split, copy j receiving p[j] * loss. The stationary
    choice makes "copy j's share of play" consistent with "copy j's share of
    the loss", which is what bounds swap regret by the copies' external
    regrets.
    """

    def __init__(self, n_actions: int, rate: float):
        if n_actions < 2:
            raise LearnerError("need at least two actions")
        if not 0.0 < rate < 1.0:
            raise LearnerError(f"learning rate must be in (0, 1), got {rate}")
        self.n_actions = int(n_actions)
        self.rate = float(rate)
        self.inner_weights = np.ones((self.n_actions, self.n_actions))
        self._pending: np.ndarray | None = None
        self._pending_q: np.ndarray | None = None
        # Per-copy accounting for the regret bound: realized inner loss and
        # cumulative scaled loss vectors.
        self._inner_paid = np.zeros(self.n_actions)
        self._inner_cum = np.zeros((self.n_actions, self.n_actions))

    def distribution(self) -> np.ndarray:
        q = _mw_distribution(self.inner_weights)
        p = _stationary_core(q[None], STATIONARY_TOL)[0]
        self._pending = p
        self._pending_q = q
        return p

    def update(self, loss) -> None:
        loss = _check_loss(loss, self.n_actions)
        if self._pending is None:
            raise LearnerError("update() before distribution(): no played distribution to split the loss over")
        scaled = self._pending[:, None] * loss[None, :]
        self._inner_paid += (self._pending_q * scaled).sum(axis=-1)
        self._inner_cum += scaled
        self.inner_weights = _mw_step(self.inner_weights, self.rate, scaled)
        self._pending = None
        self._pending_q = None

    def inner_external_regrets(self) -> np.ndarray:
        """External regret of each inner copy on the scaled losses it received."""
        return self._inner_paid - self._inner_cum.min(axis=-1)


# -- learner specs -------------------------------------------------------------


@dataclass(frozen=True)
class LearnerSpec:
    """Which learner a player runs: kind plus learning rate (or auto)."""

    kind: str
    rate: float | None = None
    auto: bool = False

    def label(self) -> str:
        if self.kind == "uniform":
            return "uniform"
        if self.auto:
            return f"{self.kind}:auto"
        return f"{self.kind}:{self.rate!r}"


def parse_spec(text: str) -> LearnerSpec:
    """Parse "uniform", "mw:RATE", "noswap:RATE", or "noswap:auto"."""
    parts = str(text).strip().split(":")
    kind = parts[0]
    if kind == "uniform":
        if len(parts) != 1:
            raise LearnerError(f"uniform takes no rate, got {text!r}")
        return LearnerSpec("uniform")
    if kind not in ("mw", "noswap"):
        raise LearnerError(f"unknown learner kind in {text!r}; expected uniform, mw, or noswap")
    if len(parts) != 2 or not parts[1]:
        raise LearnerError(f"{kind} needs a rate, e.g. {kind}:0.5")
    if parts[1] == "auto":
        if kind != "noswap":
            raise LearnerError("auto rate is only meaningful for noswap")
        return LearnerSpec("noswap", auto=True)
    try:
        rate = float(parts[1])
    except ValueError as exc:
        raise LearnerError(f"bad learning rate in {text!r}") from exc
    if not 0.0 < rate < 1.0:
        raise LearnerError(f"learning rate must be in (0, 1), got {rate}")
    return LearnerSpec(kind, rate=rate)


def resolve_auto_rates(specs, action_counts) -> list[LearnerSpec]:
    """Replace noswap:auto with the rate matched to the player's MW partner.

    The resolved rate is adjust_swap_rate(partner mw rate, own action count).
    """
    specs = list(specs)
    mw_rates = {s.rate for s in specs if s.kind == "mw"}
    out = []
    for spec, k in zip(specs, action_counts):
        if spec.kind == "noswap" and spec.auto:
            if len(mw_rates) != 1:
                raise LearnerError(
                    "noswap:auto needs exactly one mw partner rate to match against"
                )
            (partner,) = mw_rates
            out.append(LearnerSpec("noswap", rate=adjust_swap_rate(partner, k)))
        else:
            out.append(spec)
    return out


def build_learner(spec: LearnerSpec, n_actions: int):
    """Instantiate the learner a spec describes."""
    if spec.kind == "uniform":
        return UniformLearner(n_actions)
    if spec.auto or spec.rate is None:
        raise LearnerError(f"spec {spec.label()} has no concrete rate; resolve auto rates first")
    if spec.kind == "mw":
        return MWLearner(n_actions, spec.rate)
    if spec.kind == "noswap":
        return NoSwapLearner(n_actions, spec.rate)
    raise LearnerError(f"unknown learner kind {spec.kind!r}")
