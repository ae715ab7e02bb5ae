"""Exact forward semantics and the solver-file export.

Scores are per-class sums of the leaf values reached by the unique
prediction path of a total instance, plus the uniform base score.  The
winning class is the argmax with the lowest index winning ties; that tie
rule is the engine's own deterministic refinement (the score aggregation
itself leaves ties undefined) and every counterexample query in the
engine uses the matching negation: an adversary c beats the target class
p when v_c > v_p, or v_c = v_p with c < p.

export_smtlib renders the same semantics as a standalone QF_LRA document
so any off-the-shelf solver can cross-check the native decision
procedure: the document is satisfiable iff a counterexample to the query
exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PartialCubeError
from .features import Cube, FeatureKind, FeatureSpace
from .model import BoolIsTrue, Ensemble, IndicatorIsTrue, Leaf, LessThan, Split, TreeNode
from .rational import smt_real, to_decimal_str


@dataclass(frozen=True)
class Prediction:
    """Predicted class index plus the full exact score vector."""

    pi: int
    scores: tuple[Fraction, ...]


def _leaf_of(tree: TreeNode, values) -> Fraction:
    node = tree
    while isinstance(node, Split):
        node = node.right if node.pred.eval_value(values[node.pred.feature]) else node.left
    return node.value


def score(ensemble: Ensemble, space: FeatureSpace, cube: Cube) -> tuple[Fraction, ...]:
    """Exact class scores of a total instance.

    Raises PartialCubeError on partial cubes; deciding partial assignments
    is the oracle's job.
    """
    if not cube.is_total(space):
        raise PartialCubeError(
            f"score needs a total instance; {len(space) - len(cube)} features unassigned"
        )
    values = [cube.value(i) for i in range(len(space))]
    q = ensemble.trees_per_class
    out = []
    for j in range(ensemble.num_classes):
        total = ensemble.base_score
        for tree in ensemble.trees[q * j : q * (j + 1)]:
            total += _leaf_of(tree, values)
        out.append(total)
    return tuple(out)


def predict(ensemble: Ensemble, space: FeatureSpace, cube: Cube) -> Prediction:
    """Argmax of score() with the lowest class index winning ties."""
    scores = score(ensemble, space, cube)
    return Prediction(pi=scores.index(max(scores)), scores=scores)


def prediction_formula(pi: int, num_classes: int) -> tuple[tuple[int, int], ...]:
    """The strict inequalities fixing class `pi` as the winner.

    Returns (pi, i) pairs, each read as `score(pi) > score(i)`.  Empty for a
    single-class model, where the prediction is vacuous.
    """
    if not 0 <= pi < num_classes:
        raise ValueError(f"class index {pi} out of range for {num_classes} classes")
    return tuple((pi, i) for i in range(num_classes) if i != pi)


def adversary_conditions(pi: int, num_classes: int) -> tuple[tuple[int, bool], ...]:
    """Negation of the prediction under the tie rule.

    Returns (c, strict) pairs: adversary c defeats pi when v_c > v_pi, or,
    for c < pi (strict=False), when v_c >= v_pi.
    """
    if not 0 <= pi < num_classes:
        raise ValueError(f"class index {pi} out of range for {num_classes} classes")
    return tuple((c, c > pi) for c in range(num_classes) if c != pi)


@dataclass(frozen=True)
class Query:
    """A candidate-explanation query: fixed literals plus the target class."""

    fixed: Cube
    target: int
    mode: str = "counterexample-search"  # or "entailment"; same document either way


# ---------------------------------------------------------------------------
# SMT-LIB export


class _Names:
    """Deterministic, collision-free SMT symbol names per feature/threshold."""

    def __init__(self, space: FeatureSpace):
        self.space = space

    def boolean(self, f: int) -> str:
        return f"b{f}"

    def indicator(self, f: int, value_index: int) -> str:
        return f"c{f}_{value_index}"

    def real(self, f: int) -> str:
        return f"x{f}"

    def threshold(self, f: int, bound: int) -> str:
        return f"t{f}_{bound}"

    def pred(self, pred) -> str:
        if isinstance(pred, BoolIsTrue):
            return self.boolean(pred.feature)
        if isinstance(pred, IndicatorIsTrue):
            return self.indicator(pred.feature, pred.value_index)
        return self.threshold(pred.feature, pred.interval_bound)


def _paths(tree: TreeNode):
    """All root-to-leaf paths as (literal list, leaf value)."""
    out = []

    def walk(node, lits):
        if isinstance(node, Leaf):
            out.append((tuple(lits), node.value))
            return
        walk(node.left, lits + [(node.pred, False)])
        walk(node.right, lits + [(node.pred, True)])

    walk(tree, [])
    return out


def export_smtlib(ensemble: Ensemble, space: FeatureSpace, query: Query) -> str:
    """Render the ensemble, the fixed cube, and the negated prediction as
    a QF_LRA document with one (check-sat).  sat <=> counterexample exists."""
    query.fixed.validate(space)
    if not 0 <= query.target < ensemble.num_classes:
        raise ValueError(f"target class {query.target} out of range")
    names = _Names(space)
    out = []
    emit = out.append
    emit(f"; boosted-tree counterexample query, mode={query.mode}")
    emit(f"; target class: {query.target}; fixed: {query.fixed.describe(space)}")
    emit("(set-logic QF_LRA)")

    # feature variables and one-hot structure
    for f, decl in enumerate(space):
        if decl.kind is FeatureKind.BOOLEAN:
            emit(f"(declare-const {names.boolean(f)} Bool) ; {decl.name}")
        elif decl.kind is FeatureKind.CATEGORICAL:
            syms = []
            for k, value in enumerate(decl.values):
                sym = names.indicator(f, k)
                syms.append(sym)
                emit(f"(declare-const {sym} Bool) ; {decl.name}={value}")
            if len(syms) == 1:
                emit(f"(assert {syms[0]})")
            else:
                emit(f"(assert (or {' '.join(syms)}))")
                for a in range(len(syms)):
                    for b in range(a + 1, len(syms)):
                        emit(f"(assert (not (and {syms[a]} {syms[b]})))")
        else:
            emit(f"(declare-const {names.real(f)} Real) ; {decl.name}")
            for k, threshold in enumerate(decl.thresholds):
                sym = names.threshold(f, k)
                emit(f"(declare-const {sym} Bool)")
                emit(f"(assert (= {sym} (< {names.real(f)} {smt_real(threshold)})))")

    # per-tree score variables and path implications
    for l, tree in enumerate(ensemble.trees):
        emit(f"(declare-const r{l} Real)")
        for lits, value in _paths(tree):
            rhs = f"(= r{l} {smt_real(value)})"
            if not lits:
                emit(f"(assert {rhs})")
                continue
            conj = " ".join(
                names.pred(p) if holds else f"(not {names.pred(p)})" for p, holds in lits
            )
            guard = conj if len(lits) == 1 else f"(and {conj})"
            emit(f"(assert (=> {guard} {rhs}))")

    # per-class aggregate scores
    q = ensemble.trees_per_class
    for j in range(ensemble.num_classes):
        emit(f"(declare-const v{j} Real)")
        terms = [f"r{q * j + i}" for i in range(q)]
        body = terms[0] if q == 1 else f"(+ {' '.join(terms)})"
        emit(f"(assert (= v{j} {body}))")

    # fixed literals
    for lit in query.fixed:
        decl = space.decl(lit.feature)
        if decl.kind is FeatureKind.BOOLEAN:
            sym = names.boolean(lit.feature)
            emit(f"(assert {sym})" if lit.value else f"(assert (not {sym}))")
        elif decl.kind is FeatureKind.CATEGORICAL:
            k = space.value_index(lit.feature, lit.value)
            emit(f"(assert {names.indicator(lit.feature, k)})")
        else:
            emit(f"(assert (= {names.real(lit.feature)} {smt_real(lit.value)}))")

    # negated prediction under the tie rule
    parts = [
        f"({'>' if strict else '>='} v{c} v{query.target})"
        for c, strict in adversary_conditions(query.target, ensemble.num_classes)
    ]
    if not parts:
        emit("(assert false)")
    elif len(parts) == 1:
        emit(f"(assert {parts[0]})")
    else:
        emit(f"(assert (or {' '.join(parts)}))")
    emit("(check-sat)")
    return "\n".join(out) + "\n"
