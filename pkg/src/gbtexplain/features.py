"""Feature spaces, partial assignments (cubes) and abstract cells.

A FeatureSpace declares the features of the classification problem:
booleans, categoricals (internally one-hot: exactly one indicator true),
and continuous features whose split thresholds are harvested from the
trained ensemble.  A Cube is a partial assignment, at most one literal per
feature; instances and explanations are both cubes.  An AbstractCell is a
product of per-feature domain restrictions over which tree behavior is
analyzed; the threshold-interval abstraction makes it exact.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Union

FeatureValue = Union[bool, str, Fraction]

# restriction of one feature inside an AbstractCell:
#   boolean      -> frozenset of bool
#   categorical  -> frozenset of value indices
#   continuous   -> (lo, hi) inclusive range of interval-cell indices
Restriction = Union[frozenset, tuple]


class FeatureKind(enum.Enum):
    BOOLEAN = "binary"
    CATEGORICAL = "categorical"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class FeatureDecl:
    """One declared feature: name, kind, and (kind-dependent) domain data."""

    name: str
    kind: FeatureKind
    values: tuple[str, ...] = ()
    thresholds: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind is FeatureKind.CATEGORICAL:
            if not self.values:
                raise ValueError(f"categorical feature {self.name!r} has no values")
            if len(set(self.values)) != len(self.values):
                raise ValueError(f"duplicate value names in feature {self.name!r}")
        elif self.values:
            raise ValueError(f"{self.kind.value} feature {self.name!r} cannot carry values")
        if self.thresholds:
            if self.kind is not FeatureKind.CONTINUOUS:
                raise ValueError(f"{self.kind.value} feature {self.name!r} cannot carry thresholds")
            if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
                raise ValueError(f"thresholds of {self.name!r} not strictly sorted")

    @property
    def num_cells(self) -> int:
        """Number of atoms: 2 for booleans, |values|, or #thresholds + 1 intervals."""
        if self.kind is FeatureKind.BOOLEAN:
            return 2
        if self.kind is FeatureKind.CATEGORICAL:
            return len(self.values)
        return len(self.thresholds) + 1


@dataclass(frozen=True)
class FeatureSpace:
    """Ordered, immutable collection of feature declarations."""

    features: tuple[FeatureDecl, ...]

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ValueError("feature names are not unique")

    def __len__(self) -> int:
        return len(self.features)

    def __iter__(self) -> Iterator[FeatureDecl]:
        return iter(self.features)

    @cached_property
    def _by_name(self) -> dict[str, int]:
        return {f.name: i for i, f in enumerate(self.features)}

    def decl(self, feature: int) -> FeatureDecl:
        return self.features[feature]

    def index_of(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"undeclared feature {name!r}") from None

    def value_index(self, feature: int, value: str) -> int:
        decl = self.features[feature]
        try:
            return decl.values.index(value)
        except ValueError:
            raise ValueError(f"unknown value {value!r} for feature {decl.name!r}") from None

    def interval_of(self, feature: int, value: Fraction) -> int:
        """Index of the threshold interval containing `value`.

        Interval i covers [t_{i-1}, t_i); interval 0 is unbounded below and the
        last one unbounded above.
        """
        return bisect_right(self.features[feature].thresholds, value)


@dataclass(frozen=True)
class Literal:
    """A single feature assignment.

    value is bool for boolean features, the value name (str) for categorical
    ones and an exact rational for continuous ones.
    """

    feature: int
    value: FeatureValue

    def __post_init__(self):
        if not isinstance(self.value, (bool, str, Fraction)):
            raise TypeError(f"literal value must be bool, str or Fraction, got {type(self.value)}")


@dataclass(frozen=True)
class Cube:
    """A set of literals with at most one literal per feature.

    A cube over all declared features is a total instance; any subset of a
    cube is again a cube.  Cubes are immutable and hashable.
    """

    literals: tuple[Literal, ...]

    @classmethod
    def of(cls, literals: Iterable[Literal]) -> "Cube":
        lits = sorted(literals, key=lambda l: l.feature)
        feats = [l.feature for l in lits]
        if len(set(feats)) != len(feats):
            dup = next(f for i, f in enumerate(feats) if f in feats[:i])
            raise ValueError(f"two literals over the same feature (index {dup})")
        return cls(tuple(lits))

    @classmethod
    def empty(cls) -> "Cube":
        return cls(())

    @cached_property
    def _by_feature(self) -> dict[int, FeatureValue]:
        return {l.feature: l.value for l in self.literals}

    @cached_property
    def features(self) -> frozenset[int]:
        return frozenset(l.feature for l in self.literals)

    def value(self, feature: int) -> FeatureValue | None:
        return self._by_feature.get(feature)

    def has(self, feature: int) -> bool:
        return feature in self._by_feature

    def restrict(self, features: Iterable[int]) -> "Cube":
        """Sub-cube over exactly the requested features that are present."""
        wanted = set(features)
        return Cube(tuple(l for l in self.literals if l.feature in wanted))

    def without(self, feature: int) -> "Cube":
        return Cube(tuple(l for l in self.literals if l.feature != feature))

    def union(self, other: "Cube") -> "Cube":
        for lit in other.literals:
            mine = self.value(lit.feature)
            if mine is not None and mine != lit.value:
                raise ValueError(f"conflicting literals on feature {lit.feature}")
        merged = {l.feature: l for l in self.literals}
        merged.update({l.feature: l for l in other.literals})
        return Cube.of(merged.values())

    def issubset(self, other: "Cube") -> bool:
        return all(other.value(l.feature) == l.value for l in self.literals)

    def is_total(self, space: FeatureSpace) -> bool:
        return len(self.literals) == len(space)

    def validate(self, space: FeatureSpace) -> None:
        """Raise ValueError when a literal does not fit its declared feature."""
        for lit in self.literals:
            if not 0 <= lit.feature < len(space):
                raise ValueError(f"literal references undeclared feature index {lit.feature}")
            decl = space.decl(lit.feature)
            if decl.kind is FeatureKind.BOOLEAN and not isinstance(lit.value, bool):
                raise ValueError(f"feature {decl.name!r} is boolean, got {lit.value!r}")
            if decl.kind is FeatureKind.CATEGORICAL:
                if not isinstance(lit.value, str) or lit.value not in decl.values:
                    raise ValueError(f"feature {decl.name!r}: unknown value {lit.value!r}")
            if decl.kind is FeatureKind.CONTINUOUS and not isinstance(lit.value, Fraction):
                raise ValueError(f"feature {decl.name!r} is continuous, got {lit.value!r}")

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __contains__(self, literal: Literal) -> bool:
        return self.value(literal.feature) == literal.value

    def describe(self, space: FeatureSpace) -> str:
        from .rational import to_decimal_str

        parts = []
        for lit in self.literals:
            decl = space.decl(lit.feature)
            if decl.kind is FeatureKind.BOOLEAN:
                parts.append(decl.name if lit.value else f"not {decl.name}")
            elif decl.kind is FeatureKind.CATEGORICAL:
                parts.append(f"{decl.name}={lit.value}")
            else:
                parts.append(f"{decl.name}={to_decimal_str(lit.value)}")
        return " AND ".join(parts) if parts else "(empty)"


_BOTH_BOOLS = frozenset((False, True))


@dataclass(frozen=True)
class AbstractCell:
    """Per-feature domain restrictions, aligned with the feature space.

    Booleans are restricted to a non-empty subset of {false, true},
    categoricals to a non-empty subset of value indices, continuous features
    to a contiguous, non-empty range of threshold intervals.
    """

    restrictions: tuple[Restriction, ...]

    @classmethod
    def full(cls, space: FeatureSpace) -> "AbstractCell":
        rs: list[Restriction] = []
        for decl in space:
            if decl.kind is FeatureKind.BOOLEAN:
                rs.append(_BOTH_BOOLS)
            elif decl.kind is FeatureKind.CATEGORICAL:
                rs.append(frozenset(range(len(decl.values))))
            else:
                rs.append((0, len(decl.thresholds)))
        return cls(tuple(rs))

    @classmethod
    def from_cube(cls, space: FeatureSpace, cube: Cube) -> "AbstractCell":
        """Tightest cell containing the cube."""
        rs = list(cls.full(space).restrictions)
        for lit in cube:
            decl = space.decl(lit.feature)
            if decl.kind is FeatureKind.BOOLEAN:
                rs[lit.feature] = frozenset((bool(lit.value),))
            elif decl.kind is FeatureKind.CATEGORICAL:
                idx = space.value_index(lit.feature, lit.value)
                rs[lit.feature] = frozenset((idx,))
            else:
                cell = space.interval_of(lit.feature, lit.value)
                rs[lit.feature] = (cell, cell)
        return cls(tuple(rs))

    def with_restriction(self, feature: int, restriction: Restriction) -> "AbstractCell":
        rs = list(self.restrictions)
        rs[feature] = restriction
        return AbstractCell(tuple(rs))

    def atoms(self, feature: int) -> list:
        """The atoms a feature may still take inside this cell, in fixed order."""
        r = self.restrictions[feature]
        if isinstance(r, tuple):
            return list(range(r[0], r[1] + 1))
        return sorted(r)

    def atom_count(self, feature: int) -> int:
        r = self.restrictions[feature]
        if isinstance(r, tuple):
            return r[1] - r[0] + 1
        return len(r)

    def concrete_value(self, space: FeatureSpace, feature: int) -> FeatureValue:
        """A deterministic witness value for one feature.

        Booleans keep their search assignment (false when free), categoricals
        take the smallest selected value, continuous features the midpoint of
        the interval, with a finite bound +/- 1 for unbounded ends.
        """
        decl = space.decl(feature)
        r = self.restrictions[feature]
        if decl.kind is FeatureKind.BOOLEAN:
            return False if r == _BOTH_BOOLS else next(iter(r))
        if decl.kind is FeatureKind.CATEGORICAL:
            return decl.values[min(r)]
        lo, hi = r
        lower = decl.thresholds[lo - 1] if lo > 0 else None
        upper = decl.thresholds[hi] if hi < len(decl.thresholds) else None
        if lower is None and upper is None:
            return Fraction(0)
        if lower is None:
            return upper - 1
        if upper is None:
            return lower + 1
        return (lower + upper) / 2
