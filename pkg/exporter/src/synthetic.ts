/** Built-in deterministic datasets, so the pipeline is testable offline. */

import { Rng } from "./rng.js";

function csv(header: string[], rows: (string | number)[][]): string {
  return [header.join(","), ...rows.map((r) => r.join(","))].join("\n") + "\n";
}

/**
 * A learnable 3-class shape-sorting dataset: mixed binary, categorical and
 * continuous features with a noiseless labeling rule.
 */
export function makeShapes(seed: number, rows = 160): string {
  const rng = new Rng(seed);
  const corners = ["three", "four", "many"];
  const out: (string | number)[][] = [];
  for (let i = 0; i < rows; i++) {
    const size = Math.round((0.5 + rng.next() * 9) * 10) / 10;
    const shape = corners[rng.int(3)];
    const filled = rng.int(2);
    const striped = rng.int(2);
    const aspect = Math.round((0.5 + rng.next() * 2) * 100) / 100;
    let label: string;
    if (size < 3.5 && filled === 1) {
      label = "token";
    } else if (shape === "four" && aspect < 1.6) {
      label = "tile";
    } else {
      label = "scrap";
    }
    out.push([size, shape, filled, striped, aspect, label]);
  }
  return csv(["size", "corners", "filled", "striped", "aspect", "label"], out);
}

/** Every row carries the same class; trains to a single-class model. */
export function makeConstant(rows = 24): string {
  const rng = new Rng(7);
  const out: (string | number)[][] = [];
  for (let i = 0; i < rows; i++) {
    out.push([rng.int(2), Math.round(rng.next() * 100) / 10, "same"]);
  }
  return csv(["flag", "amount", "label"], out);
}

export const BUILTINS: Record<string, (seed: number) => string> = {
  shapes: (seed) => makeShapes(seed),
  constant: () => makeConstant(),
};
