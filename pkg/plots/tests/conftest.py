import json

import pytest


def build_doc(
    turns=6,
    players=2,
    counts=(2, 2),
    kind="bimatrix",
    name="toy",
    mean_action=None,
    mean_utility=None,
    heatmap=None,
    final_heatmap=None,
):
    """A complete, schema-valid result document built by hand.

    Per-turn series default to small deterministic ramps so tests can check
    that drawn lines carry exactly these numbers.
    """
    counts = tuple(counts)[:players] + (2,) * (players - len(counts))
    labels = [[f"a{i}" for i in range(k)] for k in counts]
    per_turn = []
    for t in range(turns):
        if mean_action is None:
            action = [round(0.1 * ((t + p) % 10), 1) for p in range(players)]
        else:
            action = list(mean_action[t])
        if mean_utility is None:
            utility = [round(0.05 * ((t + 2 * p) % 10), 2) for p in range(players)]
        else:
            utility = list(mean_utility[t])
        per_turn.append({"turn": t, "mean_utility": utility, "mean_action": action})
    if players == 2 and heatmap is None and final_heatmap is None:
        heatmap = [[0] * counts[1] for _ in range(counts[0])]
        heatmap[0][0] = turns
        final_heatmap = [[0] * counts[1] for _ in range(counts[0])]
        final_heatmap[0][0] = 1
    return {
        "schema_version": "1",
        "config": {
            "game": {
                "kind": kind,
                "name": name,
                "action_counts": list(counts),
                "utility_bounds": [0.0, 1.0],
                "action_labels": labels,
            },
            "learners": [
                {"kind": "mw", "rate": 0.5, "resolved": f"mw:0.{5 + p}"}
                for p in range(players)
            ],
            "turns": turns,
            "sims": 1,
            "seed": 0,
        },
        "per_turn": per_turn,
        "heatmap": heatmap,
        "final_heatmap": final_heatmap,
        "final_window_start": max(0, turns - max(1, turns // 10)),
        "overall_mean_utility": [0.5] * players,
        "regret": {"external": [0.0] * players, "swap": [0.0] * players},
        "equilibrium_gaps": {"cce": 0.0, "ce": 0.0} if players == 2 else None,
    }


@pytest.fixture
def doc_factory():
    return build_doc


@pytest.fixture
def write_doc(tmp_path):
    def _write(doc, name="result.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return path

    return _write
