import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gbtexplain import Oracle, zoo
from gbtexplain.features import FeatureKind
from gbtexplain.model import Leaf


@pytest.fixture(scope="session")
def zoo_model():
    ensemble, space, instances = zoo.load()
    named = dict(zip(("pitviper", "toad", "bear"), instances))
    return ensemble, space, named


@pytest.fixture(scope="session")
def zoo_oracle(zoo_model):
    ensemble, space, _ = zoo_model
    return Oracle(ensemble, space)


def naive_scores(ensemble, space, cube):
    """Independent re-implementation of the forward pass, used as an oracle.

    Deliberately structured differently from semantics.score: recursive
    evaluation against the literal mapping, no dense value vector.
    """

    def run(node):
        if isinstance(node, Leaf):
            return node.value
        pred = node.pred
        value = cube.value(pred.feature)
        kind = space.decl(pred.feature).kind
        if kind is FeatureKind.BOOLEAN:
            holds = value is True
        elif kind is FeatureKind.CATEGORICAL:
            holds = value == pred.value
        else:
            holds = value < pred.threshold
        return run(node.right if holds else node.left)

    q = ensemble.trees_per_class
    out = []
    for j in range(ensemble.num_classes):
        total = ensemble.base_score
        for tree in ensemble.trees[q * j : q * (j + 1)]:
            total += run(tree)
        out.append(total)
    return tuple(out)


def naive_predict(ensemble, space, cube) -> int:
    scores = naive_scores(ensemble, space, cube)
    best = max(scores)
    return min(i for i, s in enumerate(scores) if s == best)
