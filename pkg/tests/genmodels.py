"""Deterministic random fixtures for the test suites.

Models are generated as on-disk texts and loaded through the real parser,
so every generated ensemble satisfies the same invariants as a parsed one
(harvested thresholds, interval bounds, class-major tree blocks).
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from gbtexplain.features import Cube, FeatureKind, FeatureSpace, Literal
from gbtexplain.model import parse_ensemble
from gbtexplain.rational import to_decimal_str


def feature_map_text(n_bool: int, n_cat: int = 0, n_cont: int = 0, cat_values: int = 3) -> str:
    lines = []
    idx = 0
    for b in range(n_bool):
        lines.append(f"{idx}\tb{b}\tbinary")
        idx += 1
    for c in range(n_cat):
        values = "|".join(f"v{k}" for k in range(cat_values))
        lines.append(f"{idx}\tc{c}\tcategorical:{values}")
        idx += 1
    for r in range(n_cont):
        lines.append(f"{idx}\tx{r}\tcontinuous")
        idx += 1
    return "\n".join(lines) + "\n"


def _leaf(rng: random.Random, scale: int) -> str:
    return to_decimal_str(Fraction(rng.randint(-scale, scale), 10_000))


def _random_node(rng, splits, depth, next_id, leaf_scale, split_prob=0.85):
    nodeid = next_id[0]
    next_id[0] += 1
    if depth == 0 or not splits or rng.random() > split_prob:
        return {"nodeid": nodeid, "leaf": _leaf(rng, leaf_scale)}
    name, cond = rng.choice(splits)
    yes = _random_node(rng, splits, depth - 1, next_id, leaf_scale, split_prob)
    no = _random_node(rng, splits, depth - 1, next_id, leaf_scale, split_prob)
    return {
        "nodeid": nodeid,
        "split": name,
        "split_condition": cond,
        "yes": yes["nodeid"],
        "no": no["nodeid"],
        "missing": yes["nodeid"],
        "children": [yes, no],
    }


def model_texts(
    rng: random.Random,
    n_bool: int = 6,
    n_cat: int = 0,
    n_cont: int = 0,
    num_classes: int = 2,
    trees_per_class: int = 2,
    depth: int = 3,
    cat_values: int = 3,
    thresholds_per_feature: int = 3,
    leaf_scale: int = 1000,
    concentrated: bool = False,
) -> tuple[str, str]:
    """(model_text, fmap_text) for a random ensemble over a mixed space.

    With concentrated=True the split palette is weighted geometrically, so a
    few features dominate the trees the way importances do in trained
    boosters.
    """
    fmap = feature_map_text(n_bool, n_cat, n_cont, cat_values)
    splits: list[tuple[str, str]] = []
    for b in range(n_bool):
        splits.append((f"b{b}", "0.5"))
    for c in range(n_cat):
        for k in range(cat_values):
            splits.append((f"c{c}=v{k}", "0.5"))
    for r in range(n_cont):
        pool = rng.sample(range(-20, 21), thresholds_per_feature)
        for t in sorted(pool):
            splits.append((f"x{r}", to_decimal_str(Fraction(t, 10))))
    if concentrated:
        weighted = []
        for rank, split in enumerate(splits):
            weighted.extend([split] * max(1, 2 ** (6 - rank)))
        splits = weighted
    trees = [
        _random_node(rng, splits, depth, [0], leaf_scale)
        for _ in range(num_classes * trees_per_class)
    ]
    model = json.dumps(
        {"num_classes": num_classes, "trees_per_class": trees_per_class, "trees": trees}
    )
    return model, fmap


def random_model(rng: random.Random, **kwargs):
    model, fmap = model_texts(rng, **kwargs)
    return parse_ensemble(model, fmap)


def random_instance(rng: random.Random, space: FeatureSpace) -> Cube:
    lits = []
    for i, decl in enumerate(space):
        if decl.kind is FeatureKind.BOOLEAN:
            lits.append(Literal(i, rng.random() < 0.5))
        elif decl.kind is FeatureKind.CATEGORICAL:
            lits.append(Literal(i, rng.choice(decl.values)))
        else:
            lits.append(Literal(i, Fraction(rng.randint(-30, 30), 10)))
    return Cube.of(lits)


def random_subcube(rng: random.Random, cube: Cube, keep_prob: float = 0.5) -> Cube:
    return Cube.of([l for l in cube if rng.random() < keep_prob])
