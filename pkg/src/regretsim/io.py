"""Result serialization and game-file loading.

Result documents are written with sorted keys and floats at 17 significant
digits, so identical runs produce byte-identical files and re-runs diff
cleanly.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from .engine import BatchResult
from .errors import ConfigError, GameError, NumericError
from .games import BimatrixGame, bimatrix_from_dict
from . import metrics

SCHEMA_VERSION = "1"

OUT_DIR_ENV = "REGRETSIM_OUT_DIR"


def _format_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise NumericError("non-finite value in result document")
        if value == int(value) and abs(value) < 1e16:
            return repr(value)  # keep a trailing .0 so the type round-trips
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pieces: list[str] = []

    def walk(node):
        if isinstance(node, dict):
            pieces.append("{")
            for i, key in enumerate(sorted(node)):
                if i:
                    pieces.append(",")
                if not isinstance(key, str):
                    raise TypeError("object keys must be strings")
                pieces.append(json.dumps(key))
                pieces.append(":")
                walk(node[key])
            pieces.append("}")
        elif isinstance(node, (list, tuple)):
            pieces.append("[")
            for i, item in enumerate(node):
                if i:
                    pieces.append(",")
                walk(item)
            pieces.append("]")
        else:
            pieces.append(_format_scalar(node))

    walk(obj)
    return "".join(pieces)


def config_echo(result: BatchResult, requested=None) -> dict:
    """The resolved run configuration embedded in a result document."""
    cfg = result.config
    learners = []
    for i, spec in enumerate(cfg.learners):
        entry = {"kind": spec.kind, "rate": spec.rate, "resolved": spec.label()}
        if requested is not None:
            entry["requested"] = requested[i]
        learners.append(entry)
    return {
        "game": cfg.game.describe(),
        "learners": learners,
        "turns": cfg.turns,
        "sims": cfg.sims,
        "seed": cfg.seed,
    }


def result_document(result: BatchResult, requested=None) -> dict:
    """JSON-ready document for one batch run."""
    turns = result.config.turns
    per_turn = [
        {
            "turn": t,
            "mean_utility": [float(x) for x in result.per_turn_utility[t]],
            "mean_action": [float(x) for x in result.per_turn_action[t]],
        }
        for t in range(turns)
    ]
    gaps = None
    heatmap = None
    final_heatmap = None
    if result.heatmap is not None:
        heatmap = [[int(c) for c in row] for row in result.heatmap]
        final_heatmap = [[int(c) for c in row] for row in result.final_heatmap]
        gaps_raw = metrics.equilibrium_gaps(result.config.game, result.final_heatmap)
        gaps = {"cce": gaps_raw["cce"], "ce": gaps_raw["ce"]}
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config_echo(result, requested),
        "per_turn": per_turn,
        "heatmap": heatmap,
        "final_heatmap": final_heatmap,
        "final_window_start": result.final_window_start,
        "overall_mean_utility": [float(x) for x in result.overall_mean_utility],
        "regret": {
            "external": [float(x) for x in result.external_regret],
            "swap": [float(x) for x in result.swap_regret],
        },
        "equilibrium_gaps": gaps,
    }


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def resolve_out_path(out: str | os.PathLike | None, default_name: str) -> Path:
    """Resolve an output path against the default output directory.

    Bare file names (and a missing ``out``) land in $REGRETSIM_OUT_DIR when
    that is set, else the working directory; explicit paths win as given.
    """
    if out is None:
        return default_out_dir() / default_name
    out = Path(out)
    if out.is_absolute() or len(out.parts) > 1:
        return out
    return default_out_dir() / out


def write_result(path: str | os.PathLike, document: dict) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            f.write(canonical_json(document))
            f.write("\n")
    except OSError as exc:
        raise IOError(f"cannot write result to {path}: {exc}") from exc
    return path


def load_result(path: str | os.PathLike) -> dict:
    path = Path(path)
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError as exc:
        raise IOError(f"result file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"result file {path} is not valid JSON: {exc}") from exc


def load_matrix_file(path: str | os.PathLike) -> BimatrixGame:
    """Load a bimatrix game from {"A": [[...]], "B": [[...]]}.

    Missing files surface as IOError; malformed JSON and bad shapes or
    ranges surface as ConfigError with distinct messages.
    """
    path = Path(path)
    try:
        with open(path) as f:
            doc = json.load(f)
    except FileNotFoundError as exc:
        raise IOError(f"matrix file not found: {path}") from exc
    except OSError as exc:
        raise IOError(f"cannot read matrix file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"matrix file {path} is not valid JSON: {exc}") from exc
    try:
        return bimatrix_from_dict(doc, name=path.stem)
    except GameError as exc:
        raise ConfigError(f"matrix file {path}: {exc}") from exc
