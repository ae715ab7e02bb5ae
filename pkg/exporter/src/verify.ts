/**
 * Bundle verification through the engine's public CLI.
 *
 * The gate runs `validate` with full-instance candidates, which makes the
 * engine parse the exported bundle and report, per row, its predicted
 * class and exact scores.  Export succeeds only if the engine's argmax
 * matches the trainer's on every instance and every score agrees with the
 * trainer's float margin to 1e-5.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface Mismatch {
  row: number;
  trainerClass: number;
  engineClass: number;
}

export interface VerifyResult {
  total: number;
  mismatches: Mismatch[];
  maxScoreDeviation: number;
  agree: boolean;
}

export interface BundlePaths {
  model: string;
  fmap: string;
  instances: string;
}

export function enginePython(): string {
  return process.env.GBTEXPLAIN_PY ?? "python3";
}

export function engineAvailable(python = enginePython()): boolean {
  const probe = spawnSync(python, ["-c", "import gbtexplain"], { encoding: "utf-8" });
  return probe.status === 0;
}

export function runEngine(python: string, args: string[]): { status: number; stdout: string; stderr: string } {
  const run = spawnSync(python, ["-m", "gbtexplain.cli", ...args], {
    encoding: "utf-8",
    maxBuffer: 1 << 26,
  });
  return { status: run.status ?? -1, stdout: run.stdout ?? "", stderr: run.stderr ?? "" };
}

/** Per-row engine predictions and scores for a bundle. */
export function enginePredictions(
  bundle: BundlePaths,
  candidatesText: string,
  python = enginePython(),
): { pi: number; scores: number[] }[] {
  const work = mkdtempSync(join(tmpdir(), "gbt-verify-"));
  try {
    const candidates = join(work, "candidates.txt");
    const report = join(work, "report.json");
    writeFileSync(candidates, candidatesText);
    const run = runEngine(python, [
      "validate",
      "--model", bundle.model,
      "--fmap", bundle.fmap,
      "--instances", bundle.instances,
      "--candidates", candidates,
      "--workers", "1",
      "--out", report,
    ]);
    if (run.status !== 0) {
      throw new Error(`engine validate failed (exit ${run.status}): ${run.stderr.trim()}`);
    }
    const doc = JSON.parse(readFileSync(report, "utf-8"));
    return doc.records.map((rec: { pi: number; scores: string[] }) => ({
      pi: rec.pi,
      scores: rec.scores.map(Number),
    }));
  } finally {
    rmSync(work, { recursive: true, force: true });
  }
}

export function verifyAgainstEngine(
  bundle: BundlePaths,
  candidatesText: string,
  trainerClass: number[],
  trainerMargins: number[][],
  python = enginePython(),
): VerifyResult {
  const records = enginePredictions(bundle, candidatesText, python);
  if (records.length !== trainerClass.length) {
    throw new Error(
      `engine reported ${records.length} records for ${trainerClass.length} instances`,
    );
  }
  const mismatches: Mismatch[] = [];
  let maxScoreDeviation = 0;
  records.forEach((rec, row) => {
    if (rec.pi !== trainerClass[row]) {
      mismatches.push({ row, trainerClass: trainerClass[row], engineClass: rec.pi });
    }
    rec.scores.forEach((s, cls) => {
      maxScoreDeviation = Math.max(maxScoreDeviation, Math.abs(s - trainerMargins[row][cls]));
    });
  });
  return {
    total: records.length,
    mismatches,
    maxScoreDeviation,
    agree: mismatches.length === 0 && maxScoreDeviation <= 1e-5,
  };
}
