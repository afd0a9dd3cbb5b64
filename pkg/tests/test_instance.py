"""
Tests for loading instance documents.

Run with: pytest tests/test_instance.py -v
"""

import copy
import json
import os
import sys

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from condbox.base import InstanceError
from condbox.condset import make_subset
from condbox.instance import load_instance, read_instance

SAMPLE = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "samples", "instance.json")


@pytest.fixture
def doc():
    """The sample instance as a fresh dictionary."""
    with open(SAMPLE) as fh:
        return json.load(fh)


class TestLoad:
    """Tests for building every section of an instance."""

    def test_sample_loads(self, doc):
        inst = load_instance(doc)
        assert inst.algebra.atoms == ("w1", "w2")
        assert inst.names("set") == ["X", "E"]
        assert inst.get("x", "element").as_dict() == {"w1": 1, "w2": 3}
        assert inst.get("a", "condition") == inst.algebra.atom("w1")

    def test_ground_set_is_the_same_everywhere(self, doc):
        E = load_instance(doc).get("E", "set")
        assert E.carrier("w1") == E.carrier("w2") == ("u", "v")

    def test_filter_generated_from_subsets(self, doc):
        inst = load_instance(doc)
        X = inst.get("X", "set")
        assert inst.get("F", "filter").kernel == make_subset(X, {"w1": [1, 2], "w2": [3]})

    def test_read_from_file(self):
        inst = read_instance(SAMPLE)
        assert "p" in inst
        assert inst.names("lp") == ["p"]


class TestErrors:
    """Tests for the errors an instance can raise."""

    def test_missing_algebra(self, doc):
        del doc["algebra"]
        with pytest.raises(InstanceError):
            load_instance(doc)

    def test_unknown_section(self, doc):
        doc["widgets"] = {}
        with pytest.raises(InstanceError, match="unknown sections"):
            load_instance(doc)

    def test_duplicate_name(self, doc):
        doc["conditions"]["X"] = ["w2"]
        with pytest.raises(InstanceError, match="defined twice"):
            load_instance(doc)

    def test_wrong_kind(self, doc):
        inst = load_instance(doc)
        with pytest.raises(InstanceError):
            inst.get("x", "subset")
        with pytest.raises(InstanceError):
            inst.get("nothing")

    def test_missing_carrier(self, doc):
        del doc["sets"]["X"]["carriers"]["w2"]
        with pytest.raises(InstanceError):
            load_instance(doc)

    def test_invalid_objects_are_wrapped(self, doc):
        bad = copy.deepcopy(doc)
        bad["topologies"]["T"]["opens"]["w1"] = [[], [1], [2]]
        with pytest.raises(InstanceError, match="TopologyInvalid"):
            load_instance(bad)
        bad = copy.deepcopy(doc)
        bad["elements"]["x"]["assignment"]["w1"] = 9
        with pytest.raises(InstanceError, match="InvalidValue"):
            load_instance(bad)

    def test_unresolved_reference(self, doc):
        doc["subsets"]["Y"]["set"] = "Nope"
        with pytest.raises(InstanceError, match="unknown name"):
            load_instance(doc)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(InstanceError):
            read_instance(tmp_path / "missing.json")
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        with pytest.raises(InstanceError):
            read_instance(broken)
