"""Search for random bimatrix games where the choice of learning algorithm
moves the column player's utility.

Each candidate game is evaluated by two batches sharing one seed schedule:
arm A plays mw vs mw, arm B swaps the column player to the no-swap learner.
The gap is the column player's mean utility in arm B minus arm A, so common
random numbers cancel much of the shared noise. Candidates whose gap clears
both an absolute threshold and three combined standard errors are re-run on
fresh seeds before they are finally flagged.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .engine import SimulationConfig, run_batch
from .errors import ConfigError
from .games import BimatrixGame, bimatrix_to_dict, make_bimatrix
from .learners import LearnerSpec, adjust_swap_rate

MINE_SIMS = 50
MINE_TURNS = 1000


def random_bimatrix(n: int, rng: np.random.Generator) -> BimatrixGame:
    """An n x n bimatrix game with i.i.d. uniform [0, 1) payoff entries."""
    if n < 2:
        raise ConfigError("random games need at least two actions")
    a = rng.random((n, n))
    b = rng.random((n, n))
    return make_bimatrix(a, b)


@dataclass
class GapReport:
    """Outcome of one two-arm comparison on one game."""

    game_id: str
    game_seed: int
    seed: int
    size: int
    mean_mw: float
    mean_noswap: float
    gap: float
    se_mw: float
    se_noswap: float
    flagged: bool
    stage: str = "screen"

    def to_dict(self) -> dict:
        return asdict(self)


def _se(per_sim: np.ndarray) -> float:
    n = per_sim.shape[0]
    if n < 2:
        return float("inf")
    return float(per_sim.std(ddof=1) / np.sqrt(n))


def gap_experiment(
    game: BimatrixGame,
    eps_mw: float,
    eps_swap: float,
    sims: int = MINE_SIMS,
    turns: int = MINE_TURNS,
    seed: int = 0,
    game_id: str = "",
    game_seed: int = 0,
    stage: str = "screen",
) -> GapReport:
    """Column player's utility under (mw vs mw) and (mw vs noswap).

    Both arms run the same master seed, so per-simulation draw streams are
    shared until the learners' choices diverge.
    """
    mw = LearnerSpec("mw", rate=eps_mw)
    arm_a = run_batch(SimulationConfig(game, (mw, LearnerSpec("mw", rate=eps_mw)), turns=turns, sims=sims, seed=seed))
    arm_b = run_batch(SimulationConfig(game, (mw, LearnerSpec("noswap", rate=eps_swap)), turns=turns, sims=sims, seed=seed))
    mean_mw = float(arm_a.overall_mean_utility[1])
    mean_noswap = float(arm_b.overall_mean_utility[1])
    return GapReport(
        game_id=game_id,
        game_seed=int(game_seed),
        seed=int(seed),
        size=int(game.action_counts[0]),
        mean_mw=mean_mw,
        mean_noswap=mean_noswap,
        gap=mean_noswap - mean_mw,
        se_mw=_se(arm_a.per_sim_mean_utility[:, 1]),
        se_noswap=_se(arm_b.per_sim_mean_utility[:, 1]),
        flagged=False,
        stage=stage,
    )


def _meets_flag(report: GapReport, threshold: float) -> bool:
    combined = float(np.hypot(report.se_mw, report.se_noswap))
    return abs(report.gap) > threshold and abs(report.gap) > 3.0 * combined


def _derive_seed(*parts) -> int:
    return int(np.random.SeedSequence(tuple(int(p) for p in parts)).generate_state(1)[0])


def mine(
    sizes,
    count_per_size: int,
    threshold: float,
    eps_mw: float = 0.2,
    sims: int = MINE_SIMS,
    turns: int = MINE_TURNS,
    seed: int = 0,
    out_dir: str | Path | None = None,
    log=None,
) -> list[GapReport]:
    """Screen random games for algorithm-dependent column utility.

    Returns one final report per game, in deterministic (size, index) order.
    A game is flagged only if the screen and a fresh-seed confirmation both
    clear the threshold-and-3-standard-errors rule with the same gap sign.

    ``out_dir`` (optional) receives a reports.jsonl stream of every stage
    plus, per flagged game, its matrices and confirming report.
    ``log`` (optional) is called with each report as it is produced.
    """
    if threshold <= 0.0:
        raise ConfigError("threshold must be positive")
    if count_per_size < 1:
        raise ConfigError("count_per_size must be at least 1")
    out_path = None
    stream = None
    if out_dir is not None:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        stream = open(out_path / "reports.jsonl", "w")

    def emit(report: GapReport):
        if stream is not None:
            stream.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
        if log is not None:
            log(report)

    final: list[GapReport] = []
    try:
        for n in sizes:
            n = int(n)
            eps_swap = adjust_swap_rate(eps_mw, n)
            for idx in range(int(count_per_size)):
                game_id = f"n{n}-{idx:04d}"
                game_seed = _derive_seed(seed, 1, n, idx)
                game = random_bimatrix(n, np.random.default_rng(game_seed))
                screen_seed = _derive_seed(seed, 2, n, idx)
                screen = gap_experiment(
                    game, eps_mw, eps_swap, sims=sims, turns=turns,
                    seed=screen_seed, game_id=game_id, game_seed=game_seed, stage="screen",
                )
                if not _meets_flag(screen, threshold):
                    emit(screen)
                    final.append(screen)
                    continue
                emit(screen)
                confirm_seed = _derive_seed(seed, 3, n, idx)
                confirm = gap_experiment(
                    game, eps_mw, eps_swap, sims=sims, turns=turns,
                    seed=confirm_seed, game_id=game_id, game_seed=game_seed, stage="confirm",
                )
                confirm.flagged = bool(
                    _meets_flag(confirm, threshold)
                    and np.sign(confirm.gap) == np.sign(screen.gap)
                )
                emit(confirm)
                final.append(confirm)
                if confirm.flagged and out_path is not None:
                    with open(out_path / f"{game_id}.matrix.json", "w") as f:
                        json.dump(bimatrix_to_dict(game), f, sort_keys=True)
                        f.write("\n")
                    with open(out_path / f"{game_id}.report.json", "w") as f:
                        json.dump(confirm.to_dict(), f, sort_keys=True, indent=1)
                        f.write("\n")
    finally:
        if stream is not None:
            stream.close()
    return final
