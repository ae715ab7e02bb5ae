"""Exact, provably correct explanations for gradient-boosted tree ensembles.

The library computes subset-minimal and cardinality-minimal abductive
explanations of ensemble predictions that hold over the whole instance
space, and validates, repairs, and refines explanations produced by
heuristic explainers.  All arithmetic is exact rational; every verdict is
backed by either an exhaustive argument or a verified counterexample.
"""

from .errors import (
    BruteForceCapError,
    IndeterminateError,
    InstanceFormatError,
    InternalCheckError,
    ModelFormatError,
    NotEntailingError,
    PartialCubeError,
)
from .explain import (
    Explanation,
    Verdict,
    audit,
    cardinality_minimal,
    refine,
    repair,
    subset_minimal,
    validate,
)
from .features import AbstractCell, Cube, FeatureDecl, FeatureKind, FeatureSpace, Literal
from .hitting import HitProblem, minimum_hitting_set
from .model import (
    Ensemble,
    Leaf,
    Split,
    parse_ensemble,
    parse_instances,
    restrict,
    serialize_ensemble,
    serialize_feature_map,
    serialize_instances,
)
from .oracle import (
    BRUTE_FORCE_CAP,
    Budget,
    Counterexample,
    EnumerationResult,
    Oracle,
    brute_force_entails,
    entails,
    enumerate_counterexamples,
    find_counterexample,
    max_margin_bound,
)
from .semantics import Prediction, Query, adversary_conditions, export_smtlib, predict, prediction_formula, score

__version__ = "0.1.0"

__all__ = [
    "AbstractCell",
    "BRUTE_FORCE_CAP",
    "BruteForceCapError",
    "Budget",
    "Counterexample",
    "Cube",
    "Ensemble",
    "EnumerationResult",
    "Explanation",
    "FeatureDecl",
    "FeatureKind",
    "FeatureSpace",
    "HitProblem",
    "IndeterminateError",
    "InstanceFormatError",
    "InternalCheckError",
    "Leaf",
    "Literal",
    "ModelFormatError",
    "NotEntailingError",
    "Oracle",
    "PartialCubeError",
    "Prediction",
    "Query",
    "Split",
    "Verdict",
    "adversary_conditions",
    "audit",
    "brute_force_entails",
    "cardinality_minimal",
    "entails",
    "enumerate_counterexamples",
    "export_smtlib",
    "find_counterexample",
    "max_margin_bound",
    "minimum_hitting_set",
    "parse_ensemble",
    "parse_instances",
    "predict",
    "prediction_formula",
    "refine",
    "repair",
    "restrict",
    "score",
    "serialize_ensemble",
    "serialize_feature_map",
    "serialize_instances",
    "subset_minimal",
    "validate",
]
