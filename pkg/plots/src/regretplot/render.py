"""Figure rendering for simulation result files.

Three plot kinds: per-turn mean action trajectories, per-turn mean
utilities, and joint-action heatmaps. Every drawn value comes straight from
the loaded JSON document. Output is deterministic for fixed inputs: fixed
figure geometry, fixed dpi, and a fixed hash salt for SVG element ids.
"""

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .schema import (
    SchemaError,
    action_axis_label,
    load_result,
    per_turn_series,
    resolved_specs,
)

KINDS = ("trajectory", "utility", "heatmap")
WINDOWS = ("final", "all")
LINE_STYLES = ("-", "--", ":", "-.")
FIG_SIZE = (8.0, 5.0)
DPI = 150

plt.rcParams["svg.hashsalt"] = "regretplot"


@dataclass
class PlotJob:
    """One rendering request: input result file(s), kind, and output path."""

    inputs: tuple[str, ...]
    kind: str
    output: str | None = None
    labels: tuple[str, ...] = field(default_factory=tuple)
    window: str = "final"

    def __post_init__(self):
        self.inputs = tuple(str(p) for p in self.inputs)
        self.labels = tuple(str(s) for s in self.labels)
        if not self.inputs:
            raise ValueError("a plot job needs at least one input file")
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")
        if self.window not in WINDOWS:
            raise ValueError(f"unknown window {self.window!r}; expected one of {WINDOWS}")
        if len(self.labels) > len(self.inputs):
            raise ValueError("more labels than input files")


def render_job(job: PlotJob):
    """Render one job and return the matplotlib Figure.

    When the job carries an output path the figure is also written there.
    The caller owns the figure and should close it when done.
    """
    renderer = {
        "trajectory": plot_trajectory,
        "utility": plot_utility,
        "heatmap": plot_heatmap,
    }[job.kind]
    return renderer(job)


def _input_labels(job: PlotJob) -> list[str]:
    names = list(job.labels)
    for path in job.inputs[len(names):]:
        names.append(Path(path).stem)
    return names


def _save(fig, job: PlotJob):
    if job.output is None:
        return fig
    path = Path(job.output)
    if path.suffix.lower() == ".svg":
        # The date stamp is the one non-deterministic byte source in SVG.
        fig.savefig(path, dpi=DPI, metadata={"Date": None})
    else:
        fig.savefig(path, dpi=DPI)
    return fig


def _series_figure(job: PlotJob, field_name: str, ylabel_of, title_verb: str):
    docs = [load_result(path) for path in job.inputs]
    names = _input_labels(job)
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    for file_index, (doc, file_label) in enumerate(zip(docs, names)):
        series = per_turn_series(doc, field_name)
        specs = resolved_specs(doc)
        style = LINE_STYLES[file_index % len(LINE_STYLES)]
        for player in range(series.shape[1]):
            if len(docs) == 1:
                label = f"p{player + 1} ({specs[player]})"
            else:
                label = f"{file_label} p{player + 1} ({specs[player]})"
            ax.plot(
                np.arange(series.shape[0]),
                series[:, player],
                color=f"C{player}",
                linestyle=style,
                label=label,
            )
    ax.set_xlabel("turn")
    ylabels = []
    for doc in docs:
        caption = ylabel_of(doc)
        if caption not in ylabels:
            ylabels.append(caption)
    ax.set_ylabel(" / ".join(ylabels))
    games = []
    for doc in docs:
        name = doc["config"]["game"]["name"]
        if name not in games:
            games.append(name)
    ax.set_title(f"{', '.join(games)}: {title_verb} by turn")
    ax.legend()
    fig.tight_layout()
    return _save(fig, job)


def plot_trajectory(job: PlotJob):
    """Mean played action (bid value or action index) per turn, one line per
    player per input file."""
    return _series_figure(job, "mean_action", action_axis_label, "mean action")


def plot_utility(job: PlotJob):
    """Mean utility per turn, one line per player per input file."""
    return _series_figure(job, "mean_utility", lambda doc: "mean utility", "mean utility")


def plot_heatmap(job: PlotJob):
    """Joint-action share grid for a two-player result.

    ``window="final"`` draws the final-window counts, ``window="all"`` the
    whole run. Rows are player 1 actions, columns player 2 actions.
    """
    if len(job.inputs) != 1:
        raise ValueError("heatmap plots take exactly one input file")
    doc = load_result(job.inputs[0])
    key = "final_heatmap" if job.window == "final" else "heatmap"
    matrix = doc[key]
    if matrix is None:
        raise SchemaError(
            f"{job.inputs[0]}: no joint-action heatmap (only two-player results have one)"
        )
    counts = np.asarray(matrix, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise SchemaError(f"{job.inputs[0]}: {key} is empty")
    share = counts / total

    game = doc["config"]["game"]
    specs = resolved_specs(doc)
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    image = ax.imshow(share, cmap="viridis", vmin=0.0)
    row_labels, col_labels = game["action_labels"]
    ax.set_yticks(np.arange(len(row_labels)), labels=row_labels)
    rotation = 90 if len(col_labels) > 6 else 0
    ax.set_xticks(np.arange(len(col_labels)), labels=col_labels, rotation=rotation)
    ax.set_ylabel(f"p1 ({specs[0]})")
    ax.set_xlabel(f"p2 ({specs[1]})")
    if job.window == "final":
        turns = doc["config"]["turns"]
        span = f"turns {doc['final_window_start']}..{turns - 1}"
    else:
        span = "all turns"
    ax.set_title(f"{game['name']}: joint actions, {span}")
    fig.colorbar(image, ax=ax, label="share of turns")
    fig.tight_layout()
    return _save(fig, job)
