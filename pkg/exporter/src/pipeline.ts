/**
 * End-to-end bundle export: parse the dataset, train the booster on a
 * seeded 80/20 split, dump the bundle, and gate it on engine agreement.
 * A failed gate removes the bundle files and leaves a diff report behind.
 */

import { existsSync, mkdirSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { Dataset, FeatureKind, Matrix, oneHotView, parseCsv } from "./dataset.js";
import { Booster, BoosterParams, DEFAULT_PARAMS } from "./gbt.js";
import {
  candidatesFromLiteralFile,
  featureMapDump,
  fullInstanceCandidates,
  instancesDump,
  modelDump,
} from "./dump.js";
import { Rng } from "./rng.js";
import { BUILTINS } from "./synthetic.js";
import { VerifyResult, enginePython, verifyAgainstEngine } from "./verify.js";

export interface ExportOptions {
  dataset: string; // path to a CSV, or a builtin name (shapes, constant)
  out: string;
  rounds: number;
  maxDepth: number;
  seed: number;
  labelColumn?: string;
  schema?: Record<string, FeatureKind>;
  learningRate?: number;
  lambda?: number;
  trainFraction?: number;
  python?: string;
}

export interface ExportResult {
  dataset: Dataset;
  booster: Booster;
  matrix: Matrix;
  verify: VerifyResult;
  manifest: Record<string, unknown>;
  paths: { model: string; fmap: string; instances: string; manifest: string };
}

export function loadDataset(options: ExportOptions): Dataset {
  const name = options.dataset;
  const builtin = name in BUILTINS ? BUILTINS[name] : undefined;
  const text = builtin ? builtin(options.seed) : readFileSync(name, "utf-8");
  const label = builtin ? "label" : options.labelColumn;
  return parseCsv(builtin ? name : name.replace(/\\/g, "/").split("/").pop() ?? name, text, {
    labelColumn: label,
    schema: options.schema,
  });
}

function accuracy(booster: Booster, matrix: Matrix, y: number[], rows: number[]): number {
  if (rows.length === 0) return 1;
  let hit = 0;
  for (const r of rows) {
    if (booster.predict(matrix.data[r]) === y[r]) hit++;
  }
  return hit / rows.length;
}

export function exportModel(options: ExportOptions): ExportResult {
  const dataset = loadDataset(options);
  const matrix = oneHotView(dataset);
  const params: BoosterParams = {
    ...DEFAULT_PARAMS,
    rounds: options.rounds,
    maxDepth: options.maxDepth,
    learningRate: options.learningRate ?? DEFAULT_PARAMS.learningRate,
    lambda: options.lambda ?? DEFAULT_PARAMS.lambda,
  };

  const rng = new Rng(options.seed);
  const order = rng.shuffle(dataset.cells.map((_, i) => i));
  const trainCount = Math.max(1, Math.round((options.trainFraction ?? 0.8) * order.length));
  const trainRows = order.slice(0, trainCount).sort((a, b) => a - b);
  const testRows = order.slice(trainCount).sort((a, b) => a - b);

  const trainMatrix: Matrix = {
    columns: matrix.columns,
    binary: matrix.binary,
    data: trainRows.map((r) => matrix.data[r]),
  };
  const booster = Booster.train(
    trainMatrix,
    trainRows.map((r) => dataset.y[r]),
    dataset.classNames.length,
    params,
  );

  mkdirSync(options.out, { recursive: true });
  const paths = {
    model: join(options.out, "model.json"),
    fmap: join(options.out, "features.fmap"),
    instances: join(options.out, "instances.csv"),
    manifest: join(options.out, "manifest.json"),
  };
  writeFileSync(paths.model, modelDump(booster, matrix.columns));
  writeFileSync(paths.fmap, featureMapDump(dataset));
  writeFileSync(paths.instances, instancesDump(dataset));

  const trainerClass = matrix.data.map((row) => booster.predict(row));
  const trainerMargins = matrix.data.map((row) => booster.margins(row));
  const verify = verifyAgainstEngine(
    paths,
    fullInstanceCandidates(dataset),
    trainerClass,
    trainerMargins,
    options.python ?? enginePython(),
  );
  if (!verify.agree) {
    const failure = {
      dataset: dataset.name,
      total: verify.total,
      mismatches: verify.mismatches,
      max_score_deviation: verify.maxScoreDeviation,
    };
    writeFileSync(join(options.out, "agreement-failure.json"), JSON.stringify(failure, null, 2));
    for (const p of [paths.model, paths.fmap, paths.instances]) {
      rmSync(p, { force: true });
    }
    throw new Error(
      `engine/trainer agreement failed on ${verify.mismatches.length} of ${verify.total} ` +
        `instances (max score deviation ${verify.maxScoreDeviation}); bundle removed, ` +
        `diff report written to agreement-failure.json`,
    );
  }

  const manifest = {
    dataset: dataset.name,
    seed: options.seed,
    num_classes: dataset.classNames.length,
    class_names: dataset.classNames,
    trees_per_class: params.rounds,
    max_depth: params.maxDepth,
    learning_rate: params.learningRate,
    lambda: params.lambda,
    base_score: params.baseScore,
    rows: dataset.cells.length,
    train_rows: trainRows.length,
    test_rows: testRows.length,
    train_accuracy: accuracy(booster, matrix, dataset.y, trainRows),
    test_accuracy: accuracy(booster, matrix, dataset.y, testRows),
    verification: {
      argmax_agreement: `${verify.total - verify.mismatches.length}/${verify.total}`,
      max_score_deviation: verify.maxScoreDeviation,
    },
  };
  writeFileSync(paths.manifest, JSON.stringify(manifest, null, 2) + "\n");
  return { dataset, booster, matrix, verify, manifest, paths };
}

/**
 * Emit a candidates file for a bundle.  Heuristic explainers are not
 * bundled; either pass a pre-computed literal file or get a notice.
 */
export function exportCandidates(
  outDir: string,
  dataset: Dataset,
  explainer: string,
  literalFile?: string,
): string | null {
  if (explainer === "literal-file") {
    if (!literalFile) throw new Error("literal-file explainer needs --from FILE");
    const text = candidatesFromLiteralFile(dataset, readFileSync(literalFile, "utf-8"));
    const path = join(outDir, "candidates.txt");
    writeFileSync(path, text);
    return path;
  }
  if (explainer === "anchor") {
    if (!existsSync(outDir)) mkdirSync(outDir, { recursive: true });
    console.error(
      "notice: no anchor explainer is bundled; run it separately and re-export " +
        "with --explainer literal-file --from its-output",
    );
    return null;
  }
  throw new Error(`unknown explainer ${explainer}; use anchor or literal-file`);
}
