"""Loaders for the bundled animal-classification fixture.

The fixture is a static, hand-coded 7-class model (one depth-1 tree per
class) with three instances; see data/README.txt.  Tests, demos and the
CLI selftest all run against it.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .features import Cube, FeatureSpace
from .model import Ensemble, parse_ensemble, parse_instances

AMPHIBIAN, BIRD, BUG, FISH, INVERTEBRATE, MAMMAL, REPTILE = range(7)

CLASS_NAMES = ("amphibian", "bird", "bug", "fish", "invertebrate", "mammal", "reptile")


def _data(name: str) -> str:
    return (resources.files("gbtexplain") / "data" / name).read_text("utf-8")


def fixture_dir() -> Path:
    """Directory holding the fixture files, for use as CLI arguments."""
    return Path(str(resources.files("gbtexplain"))) / "data"


def model_text() -> str:
    return _data("zoo_model.json")


def feature_map_text() -> str:
    return _data("zoo.fmap")


def instances_text() -> str:
    return _data("zoo_instances.csv")


def anchor_candidates_text() -> str:
    return _data("zoo_anchor_candidates.txt")


def load() -> tuple[Ensemble, FeatureSpace, list[Cube]]:
    """The parsed fixture: (ensemble, feature space, [pitviper, toad, bear])."""
    ensemble, space = parse_ensemble(model_text(), feature_map_text())
    instances = parse_instances(instances_text(), space)
    return ensemble, space, instances
