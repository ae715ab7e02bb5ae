"""Exact minimum hitting sets over feature-index universes.

Used by the implicit-hitting-set loop for smallest explanations: the sets
to hit are correction sets generated lazily from counterexamples.  The
solver is a dependency-free branch-and-bound: a greedy cover supplies the
initial upper bound, a maximal collection of pairwise-disjoint unhit sets
supplies the lower bound, and elements are branched in ascending index
order with include-before-exclude, which makes the first optimum found
the lexicographically smallest one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class HitProblem:
    """A universe of feature indices and non-empty subsets to hit."""

    universe: tuple[int, ...]
    sets: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, universe: Iterable[int], sets: Iterable[Iterable[int]]) -> "HitProblem":
        uni = tuple(sorted(set(universe)))
        uniset = set(uni)
        frozen = []
        for s in sets:
            fs = frozenset(s)
            if not fs:
                raise ValueError("hitting-set instances must not contain empty sets")
            if not fs <= uniset:
                raise ValueError(f"set {sorted(fs)} is not contained in the universe")
            frozen.append(fs)
        return cls(uni, tuple(frozen))


def _greedy_size(masks: list[int], elem_masks: dict[int, int]) -> int:
    """Size of the cover found by repeatedly taking the most-covering element."""
    unhit = list(range(len(masks)))
    size = 0
    while unhit:
        best_elem, best_hits = None, -1
        for e in sorted(elem_masks):
            hits = sum(1 for i in unhit if masks[i] & elem_masks[e])
            if hits > best_hits:
                best_elem, best_hits = e, hits
        unhit = [i for i in unhit if not (masks[i] & elem_masks[best_elem])]
        size += 1
    return size


def _disjoint_lower_bound(unhit: list[frozenset[int]]) -> int:
    """Count of a maximal pairwise-disjoint subcollection (admissible bound)."""
    taken: set[int] = set()
    count = 0
    for s in sorted(unhit, key=lambda s: (len(s), sorted(s))):
        if not (s & taken):
            taken |= s
            count += 1
    return count


def minimum_hitting_set(problem: HitProblem) -> tuple[int, ...]:
    """A minimum-cardinality hitting set, lexicographically smallest among
    the minimum-size solutions (by ascending feature index)."""
    if not problem.sets:
        return ()
    sets = [frozenset(s) for s in problem.sets]
    # only elements that occur in some set can be part of a minimum solution
    elements = sorted(set().union(*sets))
    elem_bit = {e: 1 << i for i, e in enumerate(elements)}
    set_masks = [sum(elem_bit[e] for e in s) for s in sets]
    elem_hits = {
        e: [i for i, s in enumerate(sets) if e in s] for e in elements
    }

    best_size = _greedy_size(set_masks, {e: elem_bit[e] for e in elements}) + 1
    best: tuple[int, ...] | None = None

    def lower_bound(unhit_idx: list[int]) -> int:
        return _disjoint_lower_bound([sets[i] for i in unhit_idx])

    def search(pos: int, chosen: list[int], unhit_idx: list[int]) -> None:
        nonlocal best_size, best
        if not unhit_idx:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best = tuple(chosen)
            return
        if pos == len(elements):
            return
        if len(chosen) + lower_bound(unhit_idx) >= best_size:
            return
        e = elements[pos]
        still_hits = [i for i in elem_hits[e] if i in set(unhit_idx)]
        if still_hits:
            chosen.append(e)
            remaining = [i for i in unhit_idx if e not in sets[i]]
            search(pos + 1, chosen, remaining)
            chosen.pop()
        # excluding e is sound only if the remaining elements can still hit
        # every unhit set; the lower-bound prune handles infeasibility lazily,
        # but skip the obvious dead end where some unhit set has no element left
        tail = set(elements[pos + 1 :])
        if all(sets[i] & tail for i in unhit_idx):
            search(pos + 1, chosen, unhit_idx)

    search(0, [], list(range(len(sets))))
    if best is None:
        raise AssertionError("search failed to find the universe itself")
    return best
