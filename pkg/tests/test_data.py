"""Bundled instance files."""
import json

import pytest

from regretsim import bimatrix_from_dict
from regretsim.data import INSTANCE_NAMES, instance_path


def test_instance_names_listed():
    assert INSTANCE_NAMES == ("gap_mw_favored_7x7", "gap_noswap_favored_7x7")


def test_unknown_instance_rejected():
    with pytest.raises(KeyError):
        instance_path("nope")


def test_instances_load_as_valid_games():
    for name in INSTANCE_NAMES:
        path = instance_path(name)
        assert path.exists()
        game = bimatrix_from_dict(json.load(open(path)), name=name)
        assert game.action_counts == (7, 7)
        assert game.a.min() >= 0.0 and game.a.max() <= 1.0
        assert game.b.min() >= 0.0 and game.b.max() <= 1.0


def test_instance_spot_values():
    mw_doc = json.load(open(instance_path("gap_mw_favored_7x7")))
    assert mw_doc["A"][0][0] == 0.365
    assert mw_doc["B"][0][0] == 0.756
    ns_doc = json.load(open(instance_path("gap_noswap_favored_7x7")))
    assert ns_doc["A"][0][0] == 0.869
    assert ns_doc["B"][0][0] == 0.332
