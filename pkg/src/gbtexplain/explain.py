"""Explanation computation, validation, repair, refinement, and auditing.

All routines reduce to entailment queries against the oracle:

* subset_minimal deletes literals one at a time in a fixed scan order and
  keeps those whose removal admits a counterexample;
* cardinality_minimal runs the implicit-hitting-set loop: propose the
  minimum hitting set of the correction sets collected so far, and either
  certify it or extract a fresh correction set from the counterexample;
* validate is a single oracle call on the candidate;
* repair reruns the deletion loop with the candidate's features tested
  last, so as much of the candidate as possible survives into the fixed,
  now-correct explanation;
* refine minimizes an already-valid candidate instead of the full
  instance;
* audit classifies a heuristic explanation as optimistic (counterexample
  exists; a repair is attached), pessimistic (valid but reducible; the
  refinement is attached) or realistic (valid and subset-minimal).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import IndeterminateError, InternalCheckError, NotEntailingError
from .features import Cube
from .hitting import HitProblem, minimum_hitting_set
from .oracle import Counterexample, Oracle
from .semantics import predict

DEFAULT_MAX_CORRECTION_SETS = 100_000
DEFAULT_AUDIT_COUNTEREXAMPLES = 5

SUBSET_MINIMAL = "subset-minimal"
CARDINALITY_MINIMAL = "cardinality-minimal"
REPAIRED = "repaired"
REFINED = "refined"

OPTIMISTIC = "optimistic"
PESSIMISTIC = "pessimistic"
REALISTIC = "realistic"


@dataclass(frozen=True)
class Explanation:
    """A cube of instance literals that provably entails the prediction."""

    literals: Cube
    kind: str
    instance: Cube
    target: int

    def __len__(self) -> int:
        return len(self.literals)


@dataclass(frozen=True)
class Verdict:
    """Outcome of auditing a heuristic explanation."""

    status: str
    counterexamples: tuple[Counterexample, ...] = ()
    repaired: Explanation | None = None
    refined: Explanation | None = None


def _target_of(oracle: Oracle, instance: Cube, target: int | None) -> int:
    prediction = predict(oracle.ensemble, oracle.space, instance)
    if target is None:
        return prediction.pi
    if prediction.pi != target:
        raise ValueError(
            f"instance is predicted as class {prediction.pi}, not the requested {target}"
        )
    return target


def _scan_order(oracle: Oracle, instance: Cube, seed_order: Sequence[int] | None) -> list[int]:
    """Model-used instance features in deletion order (default: ascending index)."""
    usable = [f for f in oracle.relevant if instance.has(f)]
    if seed_order is None:
        return usable
    ordered = [f for f in seed_order if f in usable]
    missing = set(usable) - set(ordered)
    if missing:
        ordered.extend(sorted(missing))
    return ordered


def _resolve_candidate(instance: Cube, candidate: "Cube | Iterable[int]") -> Cube:
    """A candidate is either a sub-cube of the instance or a set of features
    whose values are taken from the instance."""
    if isinstance(candidate, Cube):
        if not candidate.issubset(instance):
            raise ValueError("candidate literals disagree with the instance")
        return candidate
    return instance.restrict(candidate)


def subset_minimal(
    oracle: Oracle,
    instance: Cube,
    target: int | None = None,
    seed_order: Sequence[int] | None = None,
) -> Explanation:
    """Deletion-based minimal explanation: drop a literal whenever the rest
    still entails the prediction; what remains is irreducible."""
    target = _target_of(oracle, instance, target)
    current = instance.restrict(oracle.relevant)
    for f in _scan_order(oracle, instance, seed_order):
        trial = current.without(f)
        if oracle.entails(trial, target):
            current = trial
    return Explanation(current, SUBSET_MINIMAL, instance, target)


def _shrink_difference(
    oracle: Oracle, instance: Cube, witness: Cube, target: int, diff: list[int]
) -> list[int]:
    """Greedily move the witness back toward the instance one feature at a
    time, keeping it a counterexample; shrinks the correction set."""
    for f in sorted(diff):
        candidate = witness.without(f).union(instance.restrict([f]))
        if predict(oracle.ensemble, oracle.space, candidate).pi != target:
            witness = candidate
    return [f for f in diff if witness.value(f) != instance.value(f)]


def cardinality_minimal(
    oracle: Oracle,
    instance: Cube,
    target: int | None = None,
    max_correction_sets: int = DEFAULT_MAX_CORRECTION_SETS,
    shrink_correction_sets: bool = False,
) -> Explanation:
    """Smallest explanation via the implicit-hitting-set loop.

    Every counterexample yields a correction set (the model-used features
    where it differs from the instance); a valid explanation must pick at
    least one feature from each, so the minimum hitting set of all
    correction sets lower-bounds the explanation size, and a hitting set
    that itself entails the prediction is optimal.
    """
    target = _target_of(oracle, instance, target)
    universe = tuple(f for f in oracle.relevant if instance.has(f))
    correction_sets: list[frozenset[int]] = []
    while len(correction_sets) <= max_correction_sets:
        hit = minimum_hitting_set(HitProblem(universe, tuple(correction_sets)))
        candidate = instance.restrict(hit)
        witness = oracle.find_counterexample(candidate, target)
        if witness is None:
            return Explanation(candidate, CARDINALITY_MINIMAL, instance, target)
        diff = [f for f in universe if witness.instance.value(f) != instance.value(f)]
        if shrink_correction_sets and len(diff) > 1:
            diff = _shrink_difference(oracle, instance, witness.instance, target, diff)
        if not diff:
            raise InternalCheckError("counterexample does not differ on any model-used feature")
        correction_sets.append(frozenset(diff))
    raise IndeterminateError(
        f"implicit-hitting-set loop exceeded {max_correction_sets} correction sets"
    )


def validate(
    oracle: Oracle,
    instance: Cube,
    target: int | None = None,
    candidate: "Cube | Iterable[int]" = (),
) -> Counterexample | None:
    """None iff the candidate entails the prediction; otherwise a verified
    counterexample that matches the candidate but is predicted differently."""
    target = _target_of(oracle, instance, target)
    cube = _resolve_candidate(instance, candidate)
    return oracle.find_counterexample(cube, target)


def repair(
    oracle: Oracle,
    instance: Cube,
    target: int | None = None,
    broken: "Cube | Iterable[int]" = (),
    seed_order: Sequence[int] | None = None,
) -> Explanation:
    """Turn an incorrect heuristic explanation into a correct minimal one.

    Two deletion phases: first the instance literals outside the candidate,
    then the candidate's own literals, so candidate features are tested as
    late as possible and tend to survive.
    """
    target = _target_of(oracle, instance, target)
    broken_cube = _resolve_candidate(instance, broken)
    order = _scan_order(oracle, instance, seed_order)
    outside = [f for f in order if not broken_cube.has(f)]
    inside = [f for f in order if broken_cube.has(f)]
    current = instance.restrict(oracle.relevant)
    for f in outside + inside:
        trial = current.without(f)
        if oracle.entails(trial, target):
            current = trial
    return Explanation(current, REPAIRED, instance, target)


def refine(
    oracle: Oracle,
    instance: Cube,
    target: int | None = None,
    candidate: "Cube | Iterable[int]" = (),
    mode: str = "subset",
) -> Explanation:
    """Minimize an already-valid explanation within its own literals."""
    target = _target_of(oracle, instance, target)
    cube = _resolve_candidate(instance, candidate)
    if not oracle.entails(cube, target):
        raise NotEntailingError(
            "candidate admits a counterexample; refine only minimizes valid "
            "explanations, run repair instead"
        )
    if mode == "subset":
        current = cube.restrict(oracle.relevant)
        for f in sorted(current.features):
            trial = current.without(f)
            if oracle.entails(trial, target):
                current = trial
        return Explanation(current, REFINED, instance, target)
    if mode == "cardinality":
        universe = tuple(f for f in oracle.relevant if cube.has(f))
        correction_sets: list[frozenset[int]] = []
        while len(correction_sets) <= DEFAULT_MAX_CORRECTION_SETS:
            hit = minimum_hitting_set(HitProblem(universe, tuple(correction_sets)))
            trial = cube.restrict(hit)
            witness = oracle.find_counterexample(trial, target)
            if witness is None:
                return Explanation(trial, REFINED, instance, target)
            diff = [f for f in universe if witness.instance.value(f) != cube.value(f)]
            if not diff:
                raise InternalCheckError("counterexample agrees with the whole candidate")
            correction_sets.append(frozenset(diff))
        raise IndeterminateError("implicit-hitting-set loop exceeded its iteration cap")
    raise ValueError(f"unknown refine mode {mode!r}")


def audit(
    oracle: Oracle,
    instance: Cube,
    target: int | None = None,
    candidate: "Cube | Iterable[int]" = (),
    max_counterexamples: int = DEFAULT_AUDIT_COUNTEREXAMPLES,
) -> Verdict:
    """Classify a heuristic explanation and attach the evidence."""
    target = _target_of(oracle, instance, target)
    cube = _resolve_candidate(instance, candidate)
    witness = oracle.find_counterexample(cube, target)
    if witness is not None:
        extra = oracle.enumerate_counterexamples(cube, target, limit=max_counterexamples)
        cexs = tuple(extra.counterexamples) if len(extra) else (witness,)
        fixed = repair(oracle, instance, target, cube)
        return Verdict(OPTIMISTIC, counterexamples=cexs, repaired=fixed)
    refined = refine(oracle, instance, target, cube, mode="subset")
    if len(refined.literals) < len(cube):
        return Verdict(PESSIMISTIC, refined=refined)
    return Verdict(REALISTIC, refined=refined)
