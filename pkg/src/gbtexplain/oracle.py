"""Exact decision procedure for partial-assignment queries.

Given a partial cube of fixed literals and a target class, the oracle
decides whether every total instance extending the cube is still
predicted as the target (entailment), or produces verified counterexample
instances.  The procedure is a best-first branch-and-bound, run once per
adversary class, over abstract cells:

* the bound of a cell is the sum of the maximal reachable leaves of the
  adversary's trees minus the sum of the minimal reachable leaves of the
  target's trees -- an admissible upper bound on the adversary's score
  margin anywhere in the cell;
* branching resolves the split predicate that is ambiguous in the most
  trees of the two classes involved, ties broken by feature index;
* a branch dies when its bound drops below what the adversary needs
  (strictly positive margin, or zero when the adversary has the lower
  class index and wins the tie); a cell whose relevant trees are all
  resolved has an exact margin and is accepted or discarded outright.

Everything is exact rational arithmetic; features that appear in no split
are dropped from the search.  Queries that exhaust their node or
wall-clock budget raise IndeterminateError rather than guessing.

brute_force_entails is the exhaustive reference oracle used by the test
suite; it shares nothing with the search except the cell abstraction.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator

from .errors import BruteForceCapError, IndeterminateError, InternalCheckError
from .features import AbstractCell, Cube, FeatureSpace, Literal
from .model import Ensemble, Leaf, Split, SplitPredicate
from .semantics import adversary_conditions, predict

BRUTE_FORCE_CAP = 2**22


@dataclass(frozen=True)
class Budget:
    """Per-query resource limits; exceeding either is an error, never a verdict."""

    max_nodes: int = 10_000_000
    max_seconds: float = 60.0


@dataclass(frozen=True)
class Counterexample:
    """A verified total instance predicted as something other than the target."""

    instance: Cube
    predicted: int
    scores: tuple[Fraction, ...]


@dataclass(frozen=True)
class SearchNode:
    """One branch-and-bound state: a cell, its margin bound, and the next split."""

    cell: AbstractCell
    bound: Fraction
    branch_pred: SplitPredicate | None  # None once every relevant tree is resolved


@dataclass
class EnumerationResult:
    """Counterexamples from distinct cells; truncated when the budget ran out."""

    counterexamples: list[Counterexample]
    truncated: bool = False

    def __iter__(self):
        return iter(self.counterexamples)

    def __len__(self):
        return len(self.counterexamples)

    def __getitem__(self, i):
        return self.counterexamples[i]


class _Meter:
    __slots__ = ("nodes_left", "deadline", "_tick")

    def __init__(self, budget: Budget):
        self.nodes_left = budget.max_nodes
        self.deadline = time.monotonic() + budget.max_seconds
        self._tick = 0

    def charge(self) -> None:
        self.nodes_left -= 1
        if self.nodes_left < 0:
            raise IndeterminateError("node budget exhausted before the query was decided")
        self._tick += 1
        if (self._tick & 0xFF) == 0 and time.monotonic() > self.deadline:
            raise IndeterminateError("time budget exhausted before the query was decided")


class Oracle:
    """Decision procedure bound to one immutable ensemble + feature space.

    Safe to share across threads; every query gets its own budget meter and
    search state.
    """

    def __init__(self, ensemble: Ensemble, space: FeatureSpace, budget: Budget | None = None):
        self.ensemble = ensemble
        self.space = space
        self.budget = budget or Budget()
        self.relevant = tuple(sorted(ensemble.used_features()))
        self._full_cell = AbstractCell.full(space)
        # per-tree global leaf ranges, for the adversary visiting order
        self._tree_range = [self._scan(t, self._full_cell, None) for t in ensemble.trees]

    # -- tree scanning ------------------------------------------------------

    def _scan(self, node, cell: AbstractCell, ambig: set | None):
        """(min, max) reachable leaf values of a tree within a cell."""
        if isinstance(node, Leaf):
            return node.value, node.value
        res = node.pred.eval_cell(cell)
        if res is True:
            return self._scan(node.right, cell, ambig)
        if res is False:
            return self._scan(node.left, cell, ambig)
        if ambig is not None:
            ambig.add(node.pred)
        lmn, lmx = self._scan(node.left, cell, ambig)
        rmn, rmx = self._scan(node.right, cell, ambig)
        return (lmn if lmn <= rmn else rmn), (lmx if lmx >= rmx else rmx)

    def _evaluate(self, cell: AbstractCell, adversary: int, pi: int) -> SearchNode:
        """Margin bound of a cell plus the most-contested predicate to branch on."""
        q = self.ensemble.trees_per_class
        trees = self.ensemble.trees
        counts: dict[SplitPredicate, int] = {}
        bound = Fraction(0)
        for tree in trees[q * adversary : q * (adversary + 1)]:
            ambig: set = set()
            _, mx = self._scan(tree, cell, ambig)
            bound += mx
            for p in ambig:
                counts[p] = counts.get(p, 0) + 1
        for tree in trees[q * pi : q * (pi + 1)]:
            ambig = set()
            mn, _ = self._scan(tree, cell, ambig)
            bound -= mn
            for p in ambig:
                counts[p] = counts.get(p, 0) + 1
        if not counts:
            return SearchNode(cell, bound, None)
        pred = min(counts.items(), key=lambda kv: (-kv[1], kv[0].sort_key()))[0]
        return SearchNode(cell, bound, pred)

    def max_margin_bound(self, cell: AbstractCell, adversary: int, pi: int) -> Fraction:
        """Admissible upper bound on score(adversary) - score(pi) over the cell."""
        return self._evaluate(cell, adversary, pi).bound

    # -- search -------------------------------------------------------------

    def _adversaries(self, pi: int) -> list[int]:
        ranked = []
        q = self.ensemble.trees_per_class
        for c, _ in adversary_conditions(pi, self.ensemble.num_classes):
            bound = sum(self._tree_range[l][1] for l in range(q * c, q * (c + 1))) - sum(
                self._tree_range[l][0] for l in range(q * pi, q * (pi + 1))
            )
            ranked.append((c, bound))
        ranked.sort(key=lambda t: (-t[1], t[0]))
        return [c for c, _ in ranked]

    def _winning_cells(
        self, root: AbstractCell, pi: int, adversary: int, meter: _Meter
    ) -> Iterator[AbstractCell]:
        """Yield maximal resolved cells where the adversary defeats the target.

        Search states carry per-tree contributions and ambiguity sets so a
        child only re-scans the trees whose ambiguous predicates mention the
        branched feature; everything else is inherited from the parent.
        """
        tie_ok = adversary < pi

        def viable(bound) -> bool:
            return bound > 0 or (bound == 0 and tie_ok)

        q = self.ensemble.trees_per_class
        trees = self.ensemble.trees
        slots = [(l, 1) for l in range(q * adversary, q * (adversary + 1))]
        slots += [(l, -1) for l in range(q * pi, q * (pi + 1))]

        def scan_slot(i: int, cell: AbstractCell):
            l, sign = slots[i]
            ambig: set = set()
            mn, mx = self._scan(trees[l], cell, ambig)
            return (mx if sign > 0 else -mn), frozenset(ambig)

        def best_pred(counts: dict):
            return min(counts.items(), key=lambda kv: (-kv[1], kv[0].sort_key()))[0]

        meter.charge()
        contrib, ambigs, counts = [], [], {}
        for i in range(len(slots)):
            c, a = scan_slot(i, root)
            contrib.append(c)
            ambigs.append(a)
            for p in a:
                counts[p] = counts.get(p, 0) + 1
        bound = sum(contrib, Fraction(0))
        if not viable(bound):
            return
        heap = [(-bound, 0, root, contrib, ambigs, counts)]
        seq = 1
        while heap:
            negbound, _, cell, contrib, ambigs, counts = heapq.heappop(heap)
            if not viable(-negbound):
                return  # best-first order: nothing left can win
            if not counts:
                yield cell  # every relevant tree resolved; -negbound is exact
                continue
            pred = best_pred(counts)
            feature = pred.feature
            touched = [
                i for i, a in enumerate(ambigs) if any(p.feature == feature for p in a)
            ]
            for holds in (True, False):
                meter.charge()
                child_cell = pred.assume(cell, holds)
                child_bound = -negbound
                child_contrib = contrib[:]
                child_ambigs = ambigs[:]
                child_counts = dict(counts)
                for i in touched:
                    c, a = scan_slot(i, child_cell)
                    child_bound += c - child_contrib[i]
                    child_contrib[i] = c
                    for p in child_ambigs[i]:
                        left = child_counts[p] - 1
                        if left:
                            child_counts[p] = left
                        else:
                            del child_counts[p]
                    for p in a:
                        child_counts[p] = child_counts.get(p, 0) + 1
                    child_ambigs[i] = a
                if viable(child_bound):
                    heapq.heappush(
                        heap,
                        (-child_bound, seq, child_cell, child_contrib, child_ambigs, child_counts),
                    )
                    seq += 1

    def _check_query(self, fixed: Cube, pi: int) -> None:
        fixed.validate(self.space)
        if not 0 <= pi < self.ensemble.num_classes:
            raise ValueError(f"target class {pi} out of range")

    def entails(self, fixed: Cube, pi: int) -> bool:
        """True iff no total instance extending `fixed` is predicted as any
        class other than `pi` (sound and complete)."""
        self._check_query(fixed, pi)
        meter = _Meter(self.budget)
        root = AbstractCell.from_cube(self.space, fixed)
        for c in self._adversaries(pi):
            if next(self._winning_cells(root, pi, c, meter), None) is not None:
                return False
        return True

    def find_counterexample(self, fixed: Cube, pi: int) -> Counterexample | None:
        """A verified counterexample instance, or None iff entails() holds."""
        self._check_query(fixed, pi)
        meter = _Meter(self.budget)
        root = AbstractCell.from_cube(self.space, fixed)
        for c in self._adversaries(pi):
            cell = next(self._winning_cells(root, pi, c, meter), None)
            if cell is not None:
                return self._materialize(cell, fixed, pi)
        return None

    def enumerate_counterexamples(
        self, fixed: Cube, pi: int, limit: int | None = None
    ) -> EnumerationResult:
        """Up to `limit` counterexamples, one per distinct atomic cell.

        With no limit this enumerates every misclassifying cell.  Running out
        of budget returns the partial list flagged as truncated instead of
        raising.
        """
        self._check_query(fixed, pi)
        if limit is not None and limit < 1:
            raise ValueError("limit must be at least 1")
        meter = _Meter(self.budget)
        root = AbstractCell.from_cube(self.space, fixed)
        found: list[Counterexample] = []
        seen: set = set()
        try:
            for c in self._adversaries(pi):
                for cell in self._winning_cells(root, pi, c, meter):
                    for key, atom in self._iter_atoms(cell, meter):
                        if key in seen:
                            continue
                        seen.add(key)
                        found.append(self._materialize(atom, fixed, pi))
                        if limit is not None and len(found) >= limit:
                            return EnumerationResult(found)
        except IndeterminateError:
            return EnumerationResult(found, truncated=True)
        return EnumerationResult(found)

    # -- witnesses ----------------------------------------------------------

    def _iter_atoms(self, cell: AbstractCell, meter: _Meter | None):
        """Atomic sub-cells of a cell over the model-relevant features."""
        feats = self.relevant
        choices = [cell.atoms(f) for f in feats]
        for combo in itertools.product(*choices):
            if meter is not None:
                meter.charge()
            atom = cell
            for f, a in zip(feats, combo):
                if isinstance(atom.restrictions[f], tuple):
                    atom = atom.with_restriction(f, (a, a))
                else:
                    atom = atom.with_restriction(f, frozenset((a,)))
            yield combo, atom

    def _materialize(self, cell: AbstractCell, fixed: Cube, pi: int) -> Counterexample:
        lits = []
        for f in range(len(self.space)):
            v = fixed.value(f)
            if v is None:
                v = cell.concrete_value(self.space, f)
            lits.append(Literal(f, v))
        instance = Cube.of(lits)
        result = predict(self.ensemble, self.space, instance)
        if result.pi == pi:
            raise InternalCheckError(
                "witness re-evaluation produced the target class; the search is unsound"
            )
        return Counterexample(instance=instance, predicted=result.pi, scores=result.scores)

    # -- exhaustive reference -----------------------------------------------

    def _cell_leaf(self, node, cell: AbstractCell) -> Fraction:
        while isinstance(node, Split):
            res = node.pred.eval_cell(cell)
            if res is None:
                raise InternalCheckError("atomic cell left a split undetermined")
            node = node.right if res else node.left
        return node.value

    def _cell_prediction(self, cell: AbstractCell) -> int:
        q = self.ensemble.trees_per_class
        best, winner = None, 0
        for j in range(self.ensemble.num_classes):
            s = sum(
                (self._cell_leaf(t, cell) for t in self.ensemble.trees[q * j : q * (j + 1)]),
                Fraction(0),
            )
            if best is None or s > best:
                best, winner = s, j
        return winner

    def brute_force_entails(self, fixed: Cube, pi: int, cap: int = BRUTE_FORCE_CAP) -> bool:
        """Exhaustive check over every atomic cell extending `fixed`."""
        self._check_query(fixed, pi)
        root = AbstractCell.from_cube(self.space, fixed)
        total = prod(root.atom_count(f) for f in self.relevant)
        if total > cap:
            raise BruteForceCapError(f"{total} cells exceed the cap of {cap}")
        for _, atom in self._iter_atoms(root, None):
            if self._cell_prediction(atom) != pi:
                return False
        return True

    def brute_force_misclassified_cells(
        self, fixed: Cube, pi: int, cap: int = BRUTE_FORCE_CAP
    ) -> list[tuple]:
        """Atom keys of every cell extending `fixed` predicted as a non-target."""
        self._check_query(fixed, pi)
        root = AbstractCell.from_cube(self.space, fixed)
        total = prod(root.atom_count(f) for f in self.relevant)
        if total > cap:
            raise BruteForceCapError(f"{total} cells exceed the cap of {cap}")
        return [key for key, atom in self._iter_atoms(root, None) if self._cell_prediction(atom) != pi]


# ---------------------------------------------------------------------------
# functional surface over a throwaway Oracle


def entails(ensemble, space, fixed, pi, budget=None) -> bool:
    return Oracle(ensemble, space, budget).entails(fixed, pi)


def find_counterexample(ensemble, space, fixed, pi, budget=None) -> Counterexample | None:
    return Oracle(ensemble, space, budget).find_counterexample(fixed, pi)


def enumerate_counterexamples(ensemble, space, fixed, pi, limit=None, budget=None):
    return Oracle(ensemble, space, budget).enumerate_counterexamples(fixed, pi, limit)


def max_margin_bound(ensemble, space, cell, adversary, pi) -> Fraction:
    return Oracle(ensemble, space).max_margin_bound(cell, adversary, pi)


def brute_force_entails(ensemble, space, fixed, pi, cap=BRUTE_FORCE_CAP) -> bool:
    return Oracle(ensemble, space).brute_force_entails(fixed, pi, cap)
