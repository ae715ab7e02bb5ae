"""Ensemble data model and the on-disk interchange formats.

The model file is a JSON document in the boosted-tree dump layout: an
ordered array of trees whose internal nodes carry
{nodeid, split, split_condition, yes, no, missing, children} and whose
leaves carry {nodeid, leaf}, preceded by a small header declaring
num_classes and trees_per_class.  Class j owns the contiguous tree block
[q*j, q*(j+1)).  All decimals are parsed exactly into rationals; numeric
fields may be JSON numbers or quoted decimal strings.

The feature-map file has one line per feature, `index<TAB>name<TAB>kind`,
with kind one of `binary`, `categorical:v1|v2|...`, `continuous`.
The instance file is CSV with a header of feature names in declaration
order and an optional trailing `label` column that the engine ignores.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import InstanceFormatError, ModelFormatError, PartialCubeError
from .features import (
    AbstractCell,
    Cube,
    FeatureDecl,
    FeatureKind,
    FeatureSpace,
    Literal,
)
from .rational import parse_decimal, to_decimal_str

DEFAULT_MAX_DEPTH = 64

_TRUE_STRINGS = {"1", "true"}
_FALSE_STRINGS = {"0", "false"}


# ---------------------------------------------------------------------------
# split predicates


@dataclass(frozen=True)
class BoolIsTrue:
    """Predicate `feature is true` over a boolean feature."""

    feature: int

    def eval_value(self, value) -> bool:
        return bool(value)

    def eval_cell(self, cell: AbstractCell):
        r = cell.restrictions[self.feature]
        if len(r) == 2:
            return None
        return True in r

    def assume(self, cell: AbstractCell, holds: bool) -> AbstractCell:
        return cell.with_restriction(self.feature, frozenset((holds,)))

    def sort_key(self):
        return (self.feature, 0, 0)


@dataclass(frozen=True)
class IndicatorIsTrue:
    """Predicate `feature = value` over a categorical feature (one-hot test)."""

    feature: int
    value: str
    value_index: int

    def eval_value(self, value) -> bool:
        return value == self.value

    def eval_cell(self, cell: AbstractCell):
        r = cell.restrictions[self.feature]
        if self.value_index not in r:
            return False
        if len(r) == 1:
            return True
        return None

    def assume(self, cell: AbstractCell, holds: bool) -> AbstractCell:
        r = cell.restrictions[self.feature]
        new = frozenset((self.value_index,)) if holds else r - {self.value_index}
        return cell.with_restriction(self.feature, new)

    def sort_key(self):
        return (self.feature, 1, self.value_index)


@dataclass(frozen=True)
class LessThan:
    """Predicate `feature < threshold` over a continuous feature.

    interval_bound is the index of the threshold in the feature's declared
    (harvested) threshold list: the predicate holds exactly on interval
    cells 0..interval_bound.
    """

    feature: int
    threshold: Fraction
    interval_bound: int

    def eval_value(self, value) -> bool:
        return value < self.threshold

    def eval_cell(self, cell: AbstractCell):
        lo, hi = cell.restrictions[self.feature]
        if hi <= self.interval_bound:
            return True
        if lo > self.interval_bound:
            return False
        return None

    def assume(self, cell: AbstractCell, holds: bool) -> AbstractCell:
        lo, hi = cell.restrictions[self.feature]
        if holds:
            new = (lo, min(hi, self.interval_bound))
        else:
            new = (max(lo, self.interval_bound + 1), hi)
        return cell.with_restriction(self.feature, new)

    def sort_key(self):
        return (self.feature, 2, self.interval_bound)


SplitPredicate = Union[BoolIsTrue, IndicatorIsTrue, LessThan]


# ---------------------------------------------------------------------------
# tree nodes and the ensemble


@dataclass(frozen=True)
class Leaf:
    value: Fraction


@dataclass(frozen=True)
class Split:
    """Internal node; left child when the predicate is false, right when true."""

    pred: SplitPredicate
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


@dataclass(frozen=True)
class Ensemble:
    """A trained boosted-tree classifier: m*q trees in class-major order."""

    num_classes: int
    trees_per_class: int
    trees: tuple[TreeNode, ...]
    base_score: Fraction = Fraction(0)

    def __post_init__(self):
        if self.num_classes < 1 or self.trees_per_class < 1:
            raise ValueError("num_classes and trees_per_class must be positive")
        if len(self.trees) != self.num_classes * self.trees_per_class:
            raise ValueError("tree count does not equal num_classes * trees_per_class")

    def class_trees(self, class_index: int) -> tuple[TreeNode, ...]:
        q = self.trees_per_class
        return self.trees[q * class_index : q * (class_index + 1)]

    def iter_splits(self) -> Iterable[SplitPredicate]:
        stack = list(self.trees)
        while stack:
            node = stack.pop()
            if isinstance(node, Split):
                yield node.pred
                stack.append(node.left)
                stack.append(node.right)

    def used_features(self) -> frozenset[int]:
        return frozenset(p.feature for p in self.iter_splits())


def restrict(cube: Cube, features: Iterable[int]) -> Cube:
    """The sub-cube of `cube` over exactly the requested features."""
    return cube.restrict(features)


# ---------------------------------------------------------------------------
# feature-map parsing


def _parse_kind(text: str, name: str):
    if text == "binary":
        return FeatureKind.BOOLEAN, ()
    if text == "continuous":
        return FeatureKind.CONTINUOUS, ()
    if text.startswith("categorical:"):
        values = tuple(v for v in text[len("categorical:") :].split("|") if v)
        if not values:
            raise ModelFormatError(f"feature {name!r}: categorical kind lists no values")
        return FeatureKind.CATEGORICAL, values
    raise ModelFormatError(f"feature {name!r}: unknown kind {text!r}")


def parse_feature_map(text: str | bytes) -> list[tuple[str, FeatureKind, tuple[str, ...]]]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ModelFormatError(f"feature map line {lineno}: expected index<TAB>name<TAB>kind")
        idx_text, name, kind_text = parts
        try:
            idx = int(idx_text)
        except ValueError:
            raise ModelFormatError(f"feature map line {lineno}: bad index {idx_text!r}") from None
        if idx != len(rows):
            raise ModelFormatError(f"feature map line {lineno}: index {idx} out of order")
        kind, values = _parse_kind(kind_text, name)
        rows.append((name, kind, values))
    return rows


# ---------------------------------------------------------------------------
# model parsing


def _as_fraction(value, where: str) -> Fraction:
    try:
        return parse_decimal(value)
    except ValueError as exc:
        raise ModelFormatError(f"{where}: {exc}") from None


def _node_children(raw: dict, where: str) -> tuple[dict, dict]:
    children = raw.get("children")
    if not isinstance(children, list) or len(children) != 2:
        raise ModelFormatError(f"{where}: internal node must have exactly two children")
    by_id = {}
    for child in children:
        if not isinstance(child, dict) or "nodeid" not in child:
            raise ModelFormatError(f"{where}: malformed child record")
        by_id[child["nodeid"]] = child
    for key in ("yes", "no"):
        if raw.get(key) not in by_id:
            raise ModelFormatError(f"{where}: {key!r} does not reference a child")
    if raw["yes"] == raw["no"]:
        raise ModelFormatError(f"{where}: yes and no reference the same child")
    if raw.get("missing") not in (raw["yes"], raw["no"]):
        raise ModelFormatError(f"{where}: missing branch routes to neither child")
    return by_id[raw["yes"]], by_id[raw["no"]]


def _resolve_split(name: str, decls: list, where: str):
    """Resolve a split name to (feature index, categorical value or None)."""
    by_name = {d[0]: i for i, d in enumerate(decls)}
    if name in by_name:
        idx = by_name[name]
        if decls[idx][1] is FeatureKind.CATEGORICAL:
            raise ModelFormatError(
                f"{where}: split {name!r} targets a categorical feature; use {name}=value"
            )
        return idx, None
    if "=" in name:
        base, value = name.rsplit("=", 1)
        if base in by_name and decls[by_name[base]][1] is FeatureKind.CATEGORICAL:
            idx = by_name[base]
            if value not in decls[idx][2]:
                raise ModelFormatError(f"{where}: unknown value {value!r} for feature {base!r}")
            return idx, value
    raise ModelFormatError(f"{where}: split on undeclared feature {name!r}")


def _harvest(raw: dict, decls: list, thresholds: dict, where: str, depth: int, max_depth: int):
    if depth > max_depth:
        raise ModelFormatError(f"{where}: node depth exceeds the maximum of {max_depth}")
    if "leaf" in raw:
        _as_fraction(raw["leaf"], f"{where} leaf value")
        return
    if "split" not in raw or "split_condition" not in raw:
        raise ModelFormatError(f"{where}: node is neither a leaf nor a split")
    feature, value = _resolve_split(str(raw["split"]), decls, where)
    cond = _as_fraction(raw["split_condition"], f"{where} split condition")
    if value is None and decls[feature][1] is FeatureKind.BOOLEAN:
        if not 0 < cond <= 1:
            raise ModelFormatError(f"{where}: boolean split condition {cond} not in (0, 1]")
    if value is None and decls[feature][1] is FeatureKind.CONTINUOUS:
        thresholds.setdefault(feature, set()).add(cond)
    yes, no = _node_children(raw, where)
    _harvest(yes, decls, thresholds, where, depth + 1, max_depth)
    _harvest(no, decls, thresholds, where, depth + 1, max_depth)


def _build_node(raw: dict, space: FeatureSpace, decls: list, where: str) -> TreeNode:
    if "leaf" in raw:
        return Leaf(_as_fraction(raw["leaf"], where))
    feature, value = _resolve_split(str(raw["split"]), decls, where)
    yes, no = _node_children(raw, where)
    decl = space.decl(feature)
    if value is not None:
        pred = IndicatorIsTrue(feature, value, decl.values.index(value))
        left_raw, right_raw = yes, no  # yes-branch means the indicator is 0
    elif decl.kind is FeatureKind.BOOLEAN:
        pred = BoolIsTrue(feature)
        left_raw, right_raw = yes, no
    else:
        threshold = _as_fraction(raw["split_condition"], where)
        pred = LessThan(feature, threshold, decl.thresholds.index(threshold))
        left_raw, right_raw = no, yes  # yes-branch means feature < threshold
    return Split(
        pred,
        _build_node(left_raw, space, decls, where),
        _build_node(right_raw, space, decls, where),
    )


def parse_ensemble(
    model_text: str | bytes,
    fmap_text: str | bytes,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> tuple[Ensemble, FeatureSpace]:
    """Parse a model dump and its feature map into an Ensemble + FeatureSpace.

    Continuous-feature thresholds are harvested from the trees, sorted, and
    recorded on the feature declarations; leaf values and thresholds are
    exact rationals.
    """
    if isinstance(model_text, bytes):
        model_text = model_text.decode("utf-8")
    decls = parse_feature_map(fmap_text)
    try:
        doc = json.loads(model_text, parse_float=parse_decimal)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "trees" not in doc:
        raise ModelFormatError("model file must be an object with a 'trees' array")
    raw_trees = doc["trees"]
    if not isinstance(raw_trees, list) or not raw_trees:
        raise ModelFormatError("'trees' must be a non-empty array")

    num_classes = doc.get("num_classes")
    if not isinstance(num_classes, int) or num_classes < 1:
        raise ModelFormatError("header must declare a positive integer num_classes")
    if len(raw_trees) % num_classes != 0:
        raise ModelFormatError(
            f"tree count {len(raw_trees)} is not divisible by num_classes {num_classes}"
        )
    trees_per_class = doc.get("trees_per_class", len(raw_trees) // num_classes)
    if trees_per_class * num_classes != len(raw_trees):
        raise ModelFormatError(
            f"tree count {len(raw_trees)} != num_classes {num_classes} "
            f"* trees_per_class {trees_per_class}"
        )
    base_score = _as_fraction(doc.get("base_score", 0), "base_score")

    thresholds: dict[int, set] = {}
    for ti, raw in enumerate(raw_trees):
        _harvest(raw, decls, thresholds, f"tree {ti}", 0, max_depth)

    features = []
    for i, (name, kind, values) in enumerate(decls):
        features.append(
            FeatureDecl(
                name=name,
                kind=kind,
                values=values,
                thresholds=tuple(sorted(thresholds.get(i, ()))),
            )
        )
    space = FeatureSpace(tuple(features))

    trees = tuple(_build_node(raw, space, decls, f"tree {ti}") for ti, raw in enumerate(raw_trees))
    ensemble = Ensemble(
        num_classes=num_classes,
        trees_per_class=trees_per_class,
        trees=trees,
        base_score=base_score,
    )
    return ensemble, space


# ---------------------------------------------------------------------------
# serialization (round-trips through parse_ensemble)


def _dump_node(node: TreeNode, space: FeatureSpace, next_id: list[int]) -> dict:
    nodeid = next_id[0]
    next_id[0] += 1
    if isinstance(node, Leaf):
        return {"nodeid": nodeid, "leaf": to_decimal_str(node.value)}
    pred = node.pred
    decl = space.decl(pred.feature)
    if isinstance(pred, LessThan):
        split, cond = decl.name, to_decimal_str(pred.threshold)
        yes_node, no_node = node.right, node.left
    elif isinstance(pred, IndicatorIsTrue):
        split, cond = f"{decl.name}={pred.value}", "0.5"
        yes_node, no_node = node.left, node.right
    else:
        split, cond = decl.name, "0.5"
        yes_node, no_node = node.left, node.right
    yes = _dump_node(yes_node, space, next_id)
    no = _dump_node(no_node, space, next_id)
    return {
        "nodeid": nodeid,
        "split": split,
        "split_condition": cond,
        "yes": yes["nodeid"],
        "no": no["nodeid"],
        "missing": yes["nodeid"],
        "children": [yes, no],
    }


def serialize_ensemble(ensemble: Ensemble, space: FeatureSpace) -> str:
    """Dump an ensemble back into the model-file format (decimals quoted)."""
    doc: dict = {
        "num_classes": ensemble.num_classes,
        "trees_per_class": ensemble.trees_per_class,
    }
    if ensemble.base_score:
        doc["base_score"] = to_decimal_str(ensemble.base_score)
    doc["trees"] = [_dump_node(t, space, [0]) for t in ensemble.trees]
    return json.dumps(doc, indent=1)


def serialize_feature_map(space: FeatureSpace) -> str:
    lines = []
    for i, decl in enumerate(space):
        if decl.kind is FeatureKind.CATEGORICAL:
            kind = "categorical:" + "|".join(decl.values)
        else:
            kind = decl.kind.value
        lines.append(f"{i}\t{decl.name}\t{kind}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# instance files


def parse_instances(text: str | bytes, space: FeatureSpace) -> list[Cube]:
    """Parse a CSV instance file into total cubes."""
    import csv

    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return []
    header = [h.strip() for h in rows[0]]
    expected = [d.name for d in space]
    has_label = header[: len(expected)] == expected and header[len(expected) :] == ["label"]
    if not (header == expected or has_label):
        raise InstanceFormatError(
            "header does not match the declared features "
            f"(expected {expected}{' + optional label' if not has_label else ''})"
        )
    cubes = []
    for lineno, row in enumerate(rows[1:], 2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) < len(expected) or len(row) > len(header):
            raise InstanceFormatError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        literals = []
        for idx, decl in enumerate(space):
            cell = row[idx].strip()
            if cell == "":
                raise InstanceFormatError(f"row {lineno}: missing value for feature {decl.name!r}")
            if decl.kind is FeatureKind.BOOLEAN:
                low = cell.lower()
                if low in _TRUE_STRINGS:
                    value: object = True
                elif low in _FALSE_STRINGS:
                    value = False
                else:
                    raise InstanceFormatError(
                        f"row {lineno}: feature {decl.name!r} expects 0/1, got {cell!r}"
                    )
            elif decl.kind is FeatureKind.CATEGORICAL:
                if cell not in decl.values:
                    raise InstanceFormatError(
                        f"row {lineno}: unknown value {cell!r} for feature {decl.name!r}"
                    )
                value = cell
            else:
                try:
                    value = parse_decimal(cell)
                except ValueError:
                    raise InstanceFormatError(
                        f"row {lineno}: non-numeric value {cell!r} for feature {decl.name!r}"
                    ) from None
            literals.append(Literal(idx, value))
        cubes.append(Cube.of(literals))
    return cubes


def serialize_instances(space: FeatureSpace, cubes: Iterable[Cube], labels=None) -> str:
    header = [d.name for d in space]
    if labels is not None:
        header = header + ["label"]
    lines = [",".join(header)]
    labels = list(labels) if labels is not None else None
    for i, cube in enumerate(cubes):
        cells = []
        for idx, decl in enumerate(space):
            v = cube.value(idx)
            if v is None:
                raise PartialCubeError(f"cube {i} is not total")
            if decl.kind is FeatureKind.BOOLEAN:
                cells.append("1" if v else "0")
            elif decl.kind is FeatureKind.CATEGORICAL:
                cells.append(str(v))
            else:
                cells.append(to_decimal_str(v))
        if labels is not None:
            cells.append(str(labels[i]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
