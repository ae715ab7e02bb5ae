"""Command-line surface of the engine.

Subcommands: explain, validate, repair, refine, audit, export-smt,
selftest.  Batch commands shard instances across a worker pool and emit
one JSON report per run (records array + summary), optionally with a flat
CSV table.  Exit codes: 0 success, 1 usage or parse error, 2 at least one
instance ran out of budget, 3 an internal soundness check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent import futures

from . import __version__, reports
from .errors import (
    IndeterminateError,
    InstanceFormatError,
    InternalCheckError,
    ModelFormatError,
    NotEntailingError,
)
from .explain import (
    REALISTIC,
    audit,
    cardinality_minimal,
    refine,
    repair,
    subset_minimal,
    validate,
)
from .features import Cube
from .model import parse_ensemble, parse_instances
from .oracle import Budget, Oracle
from .semantics import Query, export_smtlib, predict

_STATE: dict | None = None


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# batch worker


def _init_worker(payload: dict) -> None:
    global _STATE
    ensemble, space = parse_ensemble(payload["model"], payload["fmap"])
    instances = parse_instances(payload["instances"], space)
    budget = Budget(payload["node_budget"], payload["time_budget"])
    _STATE = {
        "oracle": Oracle(ensemble, space, budget),
        "space": space,
        "instances": instances,
        "options": payload["options"],
    }


def _indeterminate(record: dict, exc: IndeterminateError, phase: str) -> dict:
    record["status"] = "indeterminate"
    record["error"] = f"{phase}: {exc}"
    return record


def _run_task(task: tuple) -> dict:
    state = _STATE
    oracle: Oracle = state["oracle"]
    space = state["space"]
    opts = state["options"]
    command = opts["command"]
    kind, record = task[0], {"id": task[1]}

    instance = state["instances"][task[2]]
    prediction = predict(oracle.ensemble, oracle.space, instance)
    record["pi"] = prediction.pi
    record["scores"] = reports.scores_json(prediction.scores)
    candidate_names = None
    if kind == "explain":
        record["rows"] = list(task[3])
    else:
        candidate_names = list(task[3])
        record["candidate"] = candidate_names
        candidate = instance.restrict(space.index_of(n) for n in candidate_names)

    timings: dict[str, float | None] = {}
    record["timings"] = timings
    record["status"] = "ok"
    try:
        if kind == "explain":
            start = time.perf_counter()
            if opts["mode"] == "cardinality":
                expl = cardinality_minimal(oracle, instance, prediction.pi)
            else:
                expl = subset_minimal(oracle, instance, prediction.pi, opts.get("seed_order"))
            timings["explain"] = round(time.perf_counter() - start, 6)
            record["explanation"] = reports.explanation_json(space, expl)
        elif kind == "validate":
            start = time.perf_counter()
            cex = validate(oracle, instance, prediction.pi, candidate)
            timings["validate"] = round(time.perf_counter() - start, 6)
            record["status"] = "counterexample" if cex else "valid"
            record["counterexample"] = (
                reports.counterexample_json(space, cex) if cex else None
            )
        elif kind == "repair":
            start = time.perf_counter()
            expl = repair(oracle, instance, prediction.pi, candidate, opts.get("seed_order"))
            timings["repair"] = round(time.perf_counter() - start, 6)
            record["explanation"] = reports.explanation_json(space, expl)
            record["distance"] = len(
                candidate.features.symmetric_difference(expl.literals.features)
            )
        elif kind == "refine":
            start = time.perf_counter()
            try:
                expl = refine(oracle, instance, prediction.pi, candidate, opts["mode"])
            except NotEntailingError as exc:
                timings["refine"] = round(time.perf_counter() - start, 6)
                record["status"] = "not-entailing"
                record["error"] = str(exc)
                return record
            timings["refine"] = round(time.perf_counter() - start, 6)
            record["explanation"] = reports.explanation_json(space, expl)
        elif kind == "audit":
            start = time.perf_counter()
            cex = validate(oracle, instance, prediction.pi, candidate)
            timings["validate"] = round(time.perf_counter() - start, 6)
            timings["repair"] = None
            timings["refine"] = None
            if cex is not None:
                record["status"] = "optimistic"
                extra = oracle.enumerate_counterexamples(
                    candidate, prediction.pi, limit=opts["max_cex"]
                )
                found = list(extra.counterexamples) or [cex]
                record["counterexamples"] = [
                    reports.counterexample_json(space, c) for c in found
                ]
                start = time.perf_counter()
                expl = repair(oracle, instance, prediction.pi, candidate)
                timings["repair"] = round(time.perf_counter() - start, 6)
                record["explanation"] = reports.explanation_json(space, expl)
                record["distance"] = len(
                    candidate.features.symmetric_difference(expl.literals.features)
                )
            else:
                start = time.perf_counter()
                refined = refine(oracle, instance, prediction.pi, candidate, "subset")
                timings["refine"] = round(time.perf_counter() - start, 6)
                pessimistic = len(refined.literals) < len(candidate)
                record["status"] = "pessimistic" if pessimistic else "realistic"
                record["explanation"] = reports.explanation_json(space, refined)
                record["distance"] = len(
                    candidate.features.symmetric_difference(refined.literals.features)
                )
        else:
            raise AssertionError(f"unknown task kind {kind}")
    except IndeterminateError as exc:
        return _indeterminate(record, exc, kind)
    return record


def _run_batch(payload: dict, tasks: list[tuple], workers: int) -> list[dict]:
    if workers <= 1 or len(tasks) <= 1:
        _init_worker(payload)
        return [_run_task(t) for t in tasks]
    with futures.ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(payload,)
    ) as pool:
        return list(pool.map(_run_task, tasks))


# ---------------------------------------------------------------------------
# argument plumbing


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _parse_candidates(text: str) -> dict[int, list[str]]:
    out: dict[int, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise UsageError(f"candidates line {lineno}: expected 'id: f1,f2,...'")
        id_text, _, feat_text = line.partition(":")
        try:
            rec_id = int(id_text.strip())
        except ValueError:
            raise UsageError(f"candidates line {lineno}: bad instance id {id_text!r}") from None
        if rec_id in out:
            raise UsageError(f"candidates line {lineno}: duplicate id {rec_id}")
        feats = [f.strip() for f in feat_text.split(",") if f.strip()]
        out[rec_id] = feats
    return out


def _load_inputs(args, need_candidates: bool):
    model_text = _read(args.model)
    fmap_text = _read(args.fmap)
    instances_text = _read(args.instances)
    try:
        ensemble, space = parse_ensemble(model_text, fmap_text)
        instances = parse_instances(instances_text, space)
    except (ModelFormatError, InstanceFormatError) as exc:
        raise UsageError(str(exc)) from None
    candidates = None
    if need_candidates:
        if not args.candidates:
            raise UsageError("this command needs --candidates")
        candidates = _parse_candidates(_read(args.candidates))
        for rec_id, names in candidates.items():
            if not 0 <= rec_id < len(instances):
                raise UsageError(f"candidate id {rec_id} does not match any instance row")
            for name in names:
                try:
                    space.index_of(name)
                except KeyError as exc:
                    raise UsageError(f"candidate for id {rec_id}: {exc}") from None
    payload = {
        "model": model_text,
        "fmap": fmap_text,
        "instances": instances_text,
        "node_budget": args.node_budget,
        "time_budget": args.time_budget,
        "options": {},
    }
    return payload, ensemble, space, instances, candidates


def _seed_order_indices(args, space) -> list[int] | None:
    if not getattr(args, "seed_order", None):
        return None
    out = []
    for name in args.seed_order.split(","):
        name = name.strip()
        if not name:
            continue
        try:
            out.append(space.index_of(name))
        except KeyError as exc:
            raise UsageError(f"--seed-order: {exc}") from None
    return out


def _emit_report(args, command: str, records: list[dict], parameters: dict) -> int:
    report = {
        "tool": "gbtexplain",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "records": records,
        "summary": reports.summarize(records),
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "table", None):
        with open(args.table, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports.flat_table(records))
    return 2 if any(r.get("status") == "indeterminate" for r in records) else 0


def _cmd_batch(args, command: str) -> int:
    need_candidates = command in ("validate", "repair", "refine", "audit")
    payload, ensemble, space, instances, candidates = _load_inputs(args, need_candidates)
    options = {
        "command": command,
        "mode": getattr(args, "mode", "subset"),
        "max_cex": getattr(args, "max_cex", 5),
        "seed_order": _seed_order_indices(args, space),
    }
    payload["options"] = options

    tasks: list[tuple] = []
    if command == "explain":
        # duplicate instances are considered once; the record lists its rows
        groups: dict[Cube, list[int]] = {}
        for row, cube in enumerate(instances):
            groups.setdefault(cube, []).append(row)
        for rows in sorted(groups.values(), key=lambda r: r[0]):
            tasks.append(("explain", rows[0], rows[0], rows))
    else:
        for rec_id in sorted(candidates):
            tasks.append((command, rec_id, rec_id, candidates[rec_id]))

    records = _run_batch(payload, tasks, args.workers)
    records.sort(key=lambda r: r["id"])
    parameters = {
        "model": args.model,
        "fmap": args.fmap,
        "instances": args.instances,
        "candidates": getattr(args, "candidates", None),
        "mode": options["mode"] if command in ("explain", "refine") else None,
        "max_cex": options["max_cex"] if command == "audit" else None,
        "node_budget": args.node_budget,
        "time_budget": args.time_budget,
        "workers": args.workers,
    }
    return _emit_report(args, command, records, parameters)


def _cmd_export_smt(args) -> int:
    payload, ensemble, space, instances, candidates = _load_inputs(
        args, need_candidates=False
    )
    if not instances:
        raise UsageError("instance file has no rows to export")
    if not 0 <= args.row < len(instances):
        raise UsageError(f"--row {args.row} out of range")
    instance = instances[args.row]
    if args.candidates:
        table = _parse_candidates(_read(args.candidates))
        if args.row not in table:
            raise UsageError(f"candidates file has no entry for id {args.row}")
        names = table[args.row]
    elif args.features:
        names = [n.strip() for n in args.features.split(",") if n.strip()]
    else:
        names = [space.decl(l.feature).name for l in instance]
    try:
        idxs = [space.index_of(n) for n in names]
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    target = args.target
    if target is None:
        target = predict(ensemble, space, instance).pi
    if not 0 <= target < ensemble.num_classes:
        raise UsageError(f"--target {target} out of range")
    doc = export_smtlib(ensemble, space, Query(instance.restrict(idxs), target))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    return 0


def _cmd_selftest(args) -> int:
    from . import zoo

    ensemble, space, (pitviper, toad, bear) = zoo.load()
    oracle = Oracle(ensemble, space)
    failures = 0

    def check(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        line = f"{'ok' if ok else 'FAIL'} - {name}"
        if detail:
            line += f" ({detail})"
        print(line)
        if not ok:
            failures += 1

    pred = predict(ensemble, space, pitviper)
    check("pitviper is classified as reptile", pred.pi == zoo.REPTILE)
    check("bear is classified as mammal", predict(ensemble, space, bear).pi == zoo.MAMMAL)
    check("toad is classified as amphibian", predict(ensemble, space, toad).pi == zoo.AMPHIBIAN)

    expl = subset_minimal(oracle, bear)
    check(
        "minimal explanation of the bear prediction is {milk}",
        [space.decl(l.feature).name for l in expl.literals] == ["milk"],
        expl.literals.describe(space),
    )

    anchor = pitviper.restrict(
        space.index_of(n) for n in ("hair", "milk", "toothed", "fins")
    )
    cex = validate(oracle, pitviper, zoo.REPTILE, anchor)
    check(
        "the 4-literal heuristic explanation admits a counterexample",
        cex is not None and cex.predicted != zoo.REPTILE,
        "predicted " + (zoo.CLASS_NAMES[cex.predicted] if cex else "-"),
    )

    fixed = repair(oracle, pitviper, zoo.REPTILE, anchor)
    want = ["feathers", "milk", "backbone", "fins", "legs", "tail"]
    check(
        "repair keeps exactly {feathers, milk, backbone, fins, legs, tail}",
        [space.decl(l.feature).name for l in fixed.literals] == want,
        fixed.literals.describe(space),
    )
    return 3 if failures else 0


# ---------------------------------------------------------------------------
# parser


def _add_io_flags(p: argparse.ArgumentParser, candidates: bool) -> None:
    p.add_argument("--model", required=True, help="model dump file (JSON)")
    p.add_argument("--fmap", required=True, help="feature-map file")
    p.add_argument("--instances", required=True, help="instance CSV file")
    if candidates:
        p.add_argument("--candidates", help="candidate explanations, one 'id: f1,f2,...' per line")
    p.add_argument("--node-budget", type=int, default=Budget.max_nodes, help="search nodes per query")
    p.add_argument("--time-budget", type=float, default=Budget.max_seconds, help="seconds per query")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="parallel instances")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--table", help="also write a flat CSV table of the records")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbtexplain",
        description="Exact explanations for boosted-tree classifiers: compute, "
        "validate, repair, refine, audit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="compute a minimal explanation per unique instance")
    _add_io_flags(p, candidates=False)
    p.add_argument("--mode", choices=("subset", "cardinality"), default="subset")
    p.add_argument("--seed-order", help="comma-separated feature names tried first for deletion")

    p = sub.add_parser("validate", help="check candidate explanations, produce counterexamples")
    _add_io_flags(p, candidates=True)

    p = sub.add_parser("repair", help="fix incorrect candidate explanations")
    _add_io_flags(p, candidates=True)
    p.add_argument("--seed-order", help="comma-separated feature names tried first for deletion")

    p = sub.add_parser("refine", help="minimize valid candidate explanations")
    _add_io_flags(p, candidates=True)
    p.add_argument("--mode", choices=("subset", "cardinality"), default="subset")

    p = sub.add_parser("audit", help="classify candidates as optimistic/pessimistic/realistic")
    _add_io_flags(p, candidates=True)
    p.add_argument("--max-cex", type=int, default=5, help="counterexamples attached per optimistic record")

    p = sub.add_parser("export-smt", help="emit one query as a QF_LRA solver file")
    _add_io_flags(p, candidates=True)
    p.add_argument("--row", type=int, default=0, help="instance row id")
    p.add_argument("--features", help="comma-separated candidate features (default: whole instance)")
    p.add_argument("--target", type=int, help="target class index (default: the model's prediction)")

    sub.add_parser("selftest", help="run the bundled golden checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "selftest":
            return _cmd_selftest(args)
        if args.command == "export-smt":
            return _cmd_export_smt(args)
        return _cmd_batch(args, args.command)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalCheckError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
