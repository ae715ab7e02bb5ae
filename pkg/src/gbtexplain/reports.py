"""Machine-readable run reports and their summary statistics.

A report is one self-describing JSON document per run: a records array
(one entry per instance or candidate, in id order) and a summary object
recomputable from the records.  Percentages are taken over decided
instances; indeterminate ones are counted separately.  An optional flat
CSV table carries the same records for spreadsheets.
"""

from __future__ import annotations

import statistics
from typing import Any

from .explain import Explanation
from .features import Cube, FeatureKind, FeatureSpace
from .oracle import Counterexample
from .rational import to_decimal_str

STATUSES = ("optimistic", "pessimistic", "realistic")


def value_json(space: FeatureSpace, feature: int, value) -> Any:
    if space.decl(feature).kind is FeatureKind.CONTINUOUS:
        return to_decimal_str(value)
    return value


def cube_json(space: FeatureSpace, cube: Cube) -> dict[str, Any]:
    return {
        space.decl(l.feature).name: value_json(space, l.feature, l.value) for l in cube
    }


def scores_json(scores) -> list[str]:
    return [to_decimal_str(s) for s in scores]


def explanation_json(space: FeatureSpace, expl: Explanation) -> dict[str, Any]:
    return {
        "kind": expl.kind,
        "size": len(expl.literals),
        "features": [space.decl(l.feature).name for l in expl.literals],
        "literals": cube_json(space, expl.literals),
    }


def counterexample_json(space: FeatureSpace, cex: Counterexample) -> dict[str, Any]:
    return {
        "instance": cube_json(space, cex.instance),
        "predicted": cex.predicted,
        "scores": scores_json(cex.scores),
    }


def _size_stats(sizes: list[int]) -> dict[str, Any] | None:
    if not sizes:
        return None
    return {
        "min": min(sizes),
        "max": max(sizes),
        "mean": round(statistics.mean(sizes), 4),
        "stddev": round(statistics.pstdev(sizes), 4),
    }


def _mean_timings(records: list[dict]) -> dict[str, float]:
    keys: list[str] = []
    for rec in records:
        for k in rec.get("timings", {}):
            if k not in keys:
                keys.append(k)
    out = {}
    for k in keys:
        vals = [r["timings"][k] for r in records if r.get("timings", {}).get(k) is not None]
        if vals:
            out[k] = round(statistics.mean(vals), 6)
    return out


def summarize(records: list[dict]) -> dict[str, Any]:
    """Summary block shared by every command; audit adds the status split."""
    decided = [r for r in records if r.get("status") != "indeterminate"]
    summary: dict[str, Any] = {
        "instances": len(records),
        "decided": len(decided),
        "indeterminate": len(records) - len(decided),
    }
    statuses = [r["status"] for r in decided if r.get("status") in STATUSES]
    if statuses:
        split = {}
        for s in STATUSES:
            count = sum(1 for x in statuses if x == s)
            split[s] = {"count": count, "percent": round(100.0 * count / len(statuses), 1)}
        summary["verdicts"] = split
    sizes = [
        r["explanation"]["size"]
        for r in decided
        if isinstance(r.get("explanation"), dict) and "size" in r["explanation"]
    ]
    stats = _size_stats(sizes)
    if stats:
        summary["explanation_size"] = stats
    candidate_sizes = [len(r["candidate"]) for r in decided if "candidate" in r]
    stats = _size_stats(candidate_sizes)
    if stats:
        summary["candidate_size"] = stats
    timings = _mean_timings(decided)
    if timings:
        summary["mean_runtimes"] = timings
    return summary


def flat_table(records: list[dict]) -> str:
    """Records as a flat CSV for spreadsheets."""
    import csv
    import io

    columns = ["id", "status", "pi", "candidate", "explanation_size", "explanation_features"]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for rec in records:
        expl = rec.get("explanation") or {}
        writer.writerow(
            [
                rec.get("id"),
                rec.get("status"),
                rec.get("pi"),
                " ".join(rec.get("candidate", [])),
                expl.get("size"),
                " ".join(expl.get("features", [])),
            ]
        )
    return buf.getvalue()
