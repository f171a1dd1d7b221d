"""Bundled game instances.

Two 7x7 bimatrix games where, against a fixed multiplicative-weights row
player, the column player's mean utility depends on which algorithm it runs:
``gap_mw_favored_7x7`` rewards multiplicative weights, and
``gap_noswap_favored_7x7`` rewards the no-swap learner, by about 0.1 per
turn each at rates (mw 0.2, noswap 0.79).
"""
from importlib import resources
from pathlib import Path

INSTANCE_NAMES = ("gap_mw_favored_7x7", "gap_noswap_favored_7x7")


def instance_path(name: str) -> Path:
    """Filesystem path of a bundled instance's matrix JSON."""
    if name not in INSTANCE_NAMES:
        raise KeyError(f"unknown bundled instance {name!r}; have {INSTANCE_NAMES}")
    return Path(resources.files(__name__) / f"{name}.json")
