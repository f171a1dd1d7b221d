"""Command-line front door: simulate, search, analyze.

Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O
error. Bare output file names resolve against $REGRETSIM_OUT_DIR when set.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .engine import DEFAULT_SIMS, DEFAULT_TURNS, SimulationConfig, run_batch
from .errors import ConfigError, LearnerError, GameError, NumericError
from .games import battle_of_sexes, make_auction, prisoners_dilemma
from .learners import parse_spec, resolve_auto_rates
from .metrics import equilibrium_gaps
from .search import MINE_SIMS, MINE_TURNS, mine

MAX_PLAYERS = 8

BUILTIN_GAMES = {
    "pd": lambda n: prisoners_dilemma(),
    "bos": lambda n: battle_of_sexes(),
    "fpa": lambda n: make_auction("first", num_players=n, name="fpa"),
    "spa": lambda n: make_auction("second", num_players=n, name="spa"),
    "apa": lambda n: make_auction("all-pay", num_players=n, name="apa"),
}


@dataclass
class RunConfig:
    """One simulate invocation, as parsed from flags and/or a config file."""

    game: str | None = None
    matrix: str | None = None
    learners: list[str] = field(default_factory=list)
    turns: int = DEFAULT_TURNS
    sims: int = DEFAULT_SIMS
    seed: int = 0
    out: str | None = None

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "matrix": self.matrix,
            "learners": list(self.learners),
            "turns": self.turns,
            "sims": self.sims,
            "seed": self.seed,
            "out": self.out,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(doc) - {"game", "matrix", "learners", "turns", "sims", "seed", "out"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        for key, value in doc.items():
            setattr(cfg, key, value)
        cfg.learners = list(cfg.learners or [])
        return cfg

    def build(self) -> tuple[SimulationConfig, list[str]]:
        """Materialize the game and resolved learner specs."""
        if (self.game is None) == (self.matrix is None):
            raise ConfigError("choose a game: exactly one of --game or --matrix")
        if len(self.learners) < 2:
            raise ConfigError("need learner specs for at least two players (--p1, --p2)")
        if len(self.learners) > MAX_PLAYERS:
            raise ConfigError(f"at most {MAX_PLAYERS} players are supported")
        if self.game is not None:
            if self.game not in BUILTIN_GAMES:
                raise ConfigError(
                    f"unknown game {self.game!r}; built-ins are {', '.join(sorted(BUILTIN_GAMES))}"
                )
            game = BUILTIN_GAMES[self.game](len(self.learners))
        else:
            game = io.load_matrix_file(self.matrix)
        if game.num_players != len(self.learners):
            raise ConfigError(
                f"{self.game or self.matrix} is a {game.num_players}-player game; "
                f"got {len(self.learners)} learner specs"
            )
        try:
            specs = [parse_spec(text) for text in self.learners]
            specs = resolve_auto_rates(specs, game.action_counts)
        except LearnerError as exc:
            raise ConfigError(str(exc)) from exc
        sim = SimulationConfig(game, tuple(specs), turns=self.turns, sims=self.sims, seed=self.seed)
        return sim, list(self.learners)


def _add_simulate(sub):
    p = sub.add_parser("simulate", help="run one batch and write a result JSON")
    p.add_argument("--game", help="built-in game: " + ", ".join(sorted(BUILTIN_GAMES)))
    p.add_argument("--matrix", help="path to a bimatrix JSON file")
    for i in range(1, MAX_PLAYERS + 1):
        p.add_argument(
            f"--p{i}",
            metavar="SPEC",
            help="player %d learner: uniform, mw:RATE, noswap:RATE, noswap:auto" % i if i <= 2 else argparse.SUPPRESS,
        )
    p.add_argument("--turns", type=int, help=f"turns per simulation (default {DEFAULT_TURNS})")
    p.add_argument("--sims", type=int, help=f"simulations per batch (default {DEFAULT_SIMS})")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--out", help="result path (default result.json)")
    p.add_argument("--config", help="JSON file of RunConfig values; flags override")


def _add_search(sub):
    p = sub.add_parser("search", help="mine random games for algorithm-driven utility gaps")
    p.add_argument("--sizes", default="2,3,4,5", help="comma-separated matrix sizes")
    p.add_argument("--count", type=int, default=200, help="games per size")
    p.add_argument("--threshold", type=float, default=0.1, help="absolute gap needed to flag")
    p.add_argument("--eps-mw", type=float, default=0.2, help="mw rate; noswap rate is matched per size")
    p.add_argument("--sims", type=int, default=MINE_SIMS, help=f"simulations per arm (default {MINE_SIMS})")
    p.add_argument("--turns", type=int, default=MINE_TURNS, help=f"turns per simulation (default {MINE_TURNS})")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out-dir", default="search-out", help="directory for reports and flagged games")


def _add_analyze(sub):
    p = sub.add_parser("analyze", help="summarize a result JSON")
    p.add_argument("result", help="path to a result file written by simulate")
    p.add_argument("--out", help="optionally write the summary as JSON")


def _cmd_simulate(args) -> int:
    cfg = RunConfig.from_dict(json.load(open(args.config))) if args.config else RunConfig()
    if args.game is not None:
        cfg.game = args.game
    if args.matrix is not None:
        cfg.matrix = args.matrix
    flags = [getattr(args, f"p{i}") for i in range(1, MAX_PLAYERS + 1)]
    given = [s for s in flags if s is not None]
    if given:
        if flags[: len(given)] != given:
            raise ConfigError("player specs must be contiguous: --p1, --p2, ...")
        cfg.learners = given
    for key in ("turns", "sims", "seed", "out"):
        value = getattr(args, key)
        if value is not None:
            setattr(cfg, key, value)
    sim, requested = cfg.build()
    result = run_batch(sim)
    doc = io.result_document(result, requested=requested)
    path = io.write_result(io.resolve_out_path(cfg.out, "result.json"), doc)
    learners = " vs ".join(spec.label() for spec in sim.learners)
    print(f"{sim.game.name or 'game'}: {learners}, T={sim.turns}, S={sim.sims}, seed={sim.seed}")
    means = ", ".join(f"{x:.4f}" for x in result.overall_mean_utility)
    print(f"mean utility: ({means})")
    print(f"wrote {path}")
    return 0


def _cmd_search(args) -> int:
    try:
        sizes = [int(s) for s in str(args.sizes).split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --sizes value {args.sizes!r}") from exc
    if not sizes:
        raise ConfigError("no sizes given")
    out_dir = io.resolve_out_path(args.out_dir, "search-out")

    def log(report):
        mark = " FLAG" if report.flagged else ""
        print(
            f"{report.game_id} [{report.stage}] gap={report.gap:+.4f} "
            f"(mw={report.mean_mw:.4f}, noswap={report.mean_noswap:.4f}){mark}"
        )

    reports = mine(
        sizes,
        args.count,
        args.threshold,
        eps_mw=args.eps_mw,
        sims=args.sims,
        turns=args.turns,
        seed=args.seed,
        out_dir=out_dir,
        log=log,
    )
    flagged = [r for r in reports if r.flagged]
    print(f"{len(reports)} games screened, {len(flagged)} flagged; reports in {out_dir}")
    return 0


def _cmd_analyze(args) -> int:
    doc = io.load_result(args.result)
    for key in ("config", "overall_mean_utility", "regret", "schema_version"):
        if key not in doc:
            raise ConfigError(f"result file {args.result} is missing {key!r}")
    game_doc = doc["config"]["game"]
    summary = {
        "schema_version": doc["schema_version"],
        "game": game_doc.get("name") or game_doc.get("kind"),
        "learners": [entry["resolved"] for entry in doc["config"]["learners"]],
        "turns": doc["config"]["turns"],
        "sims": doc["config"]["sims"],
        "overall_mean_utility": doc["overall_mean_utility"],
        "regret": doc["regret"],
        "equilibrium_gaps": doc.get("equilibrium_gaps"),
    }
    if doc.get("final_heatmap") is not None:
        game = _game_from_echo(game_doc)
        gaps = equilibrium_gaps(game, np.asarray(doc["final_heatmap"], dtype=float))
        summary["equilibrium_gaps"] = gaps
        gaps_all = equilibrium_gaps(game, np.asarray(doc["heatmap"], dtype=float))
        summary["equilibrium_gaps_all_turns"] = gaps_all
    print(f"game: {summary['game']}  learners: {', '.join(summary['learners'])}")
    print(f"turns: {summary['turns']}  sims: {summary['sims']}")
    means = ", ".join(f"{x:.4f}" for x in summary["overall_mean_utility"])
    print(f"mean utility: ({means})")
    ext = ", ".join(f"{x:.4f}" for x in summary["regret"]["external"])
    swp = ", ".join(f"{x:.4f}" for x in summary["regret"]["swap"])
    print(f"regret: external ({ext})  swap ({swp})")
    if summary.get("equilibrium_gaps"):
        gaps = summary["equilibrium_gaps"]
        print(f"final-window gaps: cce {gaps['cce']:.4f}  ce {gaps['ce']:.4f}")
    if args.out:
        path = io.write_result(io.resolve_out_path(args.out, "analysis.json"), summary)
        print(f"wrote {path}")
    return 0


def _game_from_echo(game_doc: dict):
    """Rebuild a game from the config echo of a result document."""
    from .games import make_bimatrix

    kind = game_doc.get("kind")
    if kind == "bimatrix":
        return make_bimatrix(game_doc["A"], game_doc["B"], name=game_doc.get("name"))
    if kind == "auction":
        return make_auction(
            game_doc["auction"],
            num_players=len(game_doc["values"]),
            values=game_doc["values"],
            grid=game_doc["grid"],
            name=game_doc.get("name"),
        )
    raise ConfigError(f"result file has an unrecognized game kind {kind!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="regretsim",
        description="Repeated-game simulator for uniform, no-regret, and no-swap-regret learners.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_search(sub)
    _add_analyze(sub)
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "search":
            return _cmd_search(args)
        return _cmd_analyze(args)
    except (ConfigError, GameError, LearnerError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
