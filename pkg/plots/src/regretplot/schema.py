"""Loading and validation of simulation result documents.

A result file is a JSON object with ``schema_version`` "1" and the fields
written by the simulator's ``simulate`` command. Everything the renderers
draw comes from these documents; nothing is ever recomputed from game rules.
"""

import json
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "1"

RESULT_KEYS = (
    "schema_version",
    "config",
    "per_turn",
    "heatmap",
    "final_heatmap",
    "final_window_start",
    "overall_mean_utility",
    "regret",
    "equilibrium_gaps",
)

GAME_KEYS = ("kind", "name", "action_counts", "utility_bounds", "action_labels")


class SchemaError(ValueError):
    """The document does not match the result schema."""


def load_result(path) -> dict:
    """Read and validate one result file.

    Raises OSError when the file cannot be read and SchemaError when its
    contents do not match the schema.
    """
    path = Path(path)
    with open(path) as f:
        text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None
    try:
        return validate_result(doc)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _require(condition, message):
    if not condition:
        raise SchemaError(message)


def _finite_row(values, length, what):
    _require(isinstance(values, list) and len(values) == length,
             f"{what} must be a list of {length} numbers")
    row = np.asarray(values, dtype=float)
    _require(np.isfinite(row).all(), f"{what} contains non-finite values")
    return row


def validate_result(doc) -> dict:
    """Check one parsed document against the schema and return it."""
    _require(isinstance(doc, dict), "result must be a JSON object")
    for key in RESULT_KEYS:
        _require(key in doc, f"missing result field {key!r}")
    _require(doc["schema_version"] == SCHEMA_VERSION,
             f"unsupported schema_version {doc['schema_version']!r}")

    config = doc["config"]
    _require(isinstance(config, dict), "config must be an object")
    for key in ("game", "learners", "turns", "sims", "seed"):
        _require(key in config, f"missing config field {key!r}")
    game = config["game"]
    _require(isinstance(game, dict), "config.game must be an object")
    for key in GAME_KEYS:
        _require(key in game, f"missing game field {key!r}")

    counts = game["action_counts"]
    _require(isinstance(counts, list) and len(counts) >= 2
             and all(isinstance(k, int) and k >= 1 for k in counts),
             "game.action_counts must list at least two positive action counts")
    players = len(counts)
    labels = game["action_labels"]
    _require(isinstance(labels, list) and len(labels) == players,
             "game.action_labels must have one list per player")
    for i, (per_player, k) in enumerate(zip(labels, counts)):
        _require(isinstance(per_player, list) and len(per_player) == k
                 and all(isinstance(s, str) for s in per_player),
                 f"game.action_labels[{i}] must be {k} strings")

    learners = config["learners"]
    _require(isinstance(learners, list) and len(learners) == players,
             "config.learners must have one entry per player")
    for i, entry in enumerate(learners):
        _require(isinstance(entry, dict) and isinstance(entry.get("resolved"), str),
                 f"config.learners[{i}] must carry a resolved spec string")

    turns = config["turns"]
    _require(isinstance(turns, int) and turns >= 1, "config.turns must be a positive integer")
    per_turn = doc["per_turn"]
    _require(isinstance(per_turn, list), "per_turn must be a list")
    _require(len(per_turn) == turns,
             f"per_turn has {len(per_turn)} entries for {turns} turns")
    for t, entry in enumerate(per_turn):
        _require(isinstance(entry, dict), f"per_turn[{t}] must be an object")
        _require(entry.get("turn") == t, f"per_turn[{t}] is out of order")
        _finite_row(entry.get("mean_utility"), players, f"per_turn[{t}].mean_utility")
        _finite_row(entry.get("mean_action"), players, f"per_turn[{t}].mean_action")

    start = doc["final_window_start"]
    _require(isinstance(start, int) and 0 <= start < turns,
             "final_window_start must be a turn index")

    _finite_row(doc["overall_mean_utility"], players, "overall_mean_utility")
    regret = doc["regret"]
    _require(isinstance(regret, dict), "regret must be an object")
    for key in ("external", "swap"):
        _finite_row(regret.get(key), players, f"regret.{key}")

    for key in ("heatmap", "final_heatmap"):
        matrix = doc[key]
        if matrix is None:
            continue
        _require(players == 2, f"{key} is only defined for two players")
        _require(isinstance(matrix, list) and len(matrix) == counts[0],
                 f"{key} must have {counts[0]} rows")
        for row in matrix:
            _require(isinstance(row, list) and len(row) == counts[1],
                     f"{key} rows must have {counts[1]} entries")
        grid = np.asarray(matrix, dtype=float)
        _require(np.isfinite(grid).all() and (grid >= 0).all(),
                 f"{key} entries must be non-negative numbers")
    _require((doc["heatmap"] is None) == (doc["final_heatmap"] is None),
             "heatmap and final_heatmap must be present together")

    gaps = doc["equilibrium_gaps"]
    if gaps is not None:
        _require(isinstance(gaps, dict) and {"cce", "ce"} <= set(gaps),
                 "equilibrium_gaps must carry cce and ce")
    return doc


def num_players(doc) -> int:
    return len(doc["config"]["game"]["action_counts"])


def per_turn_series(doc, field) -> np.ndarray:
    """The (turns, players) array of one per-turn field."""
    return np.asarray([entry[field] for entry in doc["per_turn"]], dtype=float)


def resolved_specs(doc) -> list[str]:
    return [entry["resolved"] for entry in doc["config"]["learners"]]


def action_axis_label(doc) -> str:
    """Y-axis caption for mean-action trajectories, from game metadata only.

    Auctions report the mean bid. Two-action games report the mean action
    index, which is the probability of the second action. Anything else
    falls back to the raw index scale.
    """
    game = doc["config"]["game"]
    if game["kind"] == "auction":
        return "mean bid"
    if all(k == 2 for k in game["action_counts"]):
        return "P(second action)"
    return "mean action index"
