/**
 * Writers for the engine's on-disk formats: the model dump (JSON header +
 * tree array, class-major), the feature map, the instance CSV, and the
 * candidates file.  Numbers are serialized with JavaScript's shortest
 * round-trip representation, which the engine parses exactly as decimal
 * text.
 */

import { Dataset } from "./dataset.js";
import { Booster, Tree, isLeaf } from "./gbt.js";

interface DumpNode {
  nodeid: number;
  split?: string;
  split_condition?: number;
  yes?: number;
  no?: number;
  missing?: number;
  children?: DumpNode[];
  leaf?: number;
}

function dumpTree(tree: Tree, columns: string[], nextId: { id: number }): DumpNode {
  const nodeid = nextId.id++;
  if (isLeaf(tree)) {
    return { nodeid, leaf: tree.leaf };
  }
  const yes = dumpTree(tree.yes, columns, nextId);
  const no = dumpTree(tree.no, columns, nextId);
  return {
    nodeid,
    split: columns[tree.column],
    split_condition: tree.threshold,
    yes: yes.nodeid,
    no: no.nodeid,
    missing: yes.nodeid,
    children: [yes, no],
  };
}

export function modelDump(booster: Booster, columns: string[]): string {
  const trees: DumpNode[] = [];
  for (let cls = 0; cls < booster.numClasses; cls++) {
    for (const tree of booster.classTrees[cls]) {
      trees.push(dumpTree(tree, columns, { id: 0 }));
    }
  }
  const doc = {
    num_classes: booster.numClasses,
    trees_per_class: booster.params.rounds,
    base_score: booster.params.baseScore,
    trees,
  };
  return JSON.stringify(doc, null, 1) + "\n";
}

export function featureMapDump(dataset: Dataset): string {
  const lines = dataset.features.map((feature, i) => {
    const kind =
      feature.kind === "categorical" ? `categorical:${feature.values.join("|")}` : feature.kind;
    return `${i}\t${feature.name}\t${kind}`;
  });
  return lines.join("\n") + "\n";
}

export function instancesDump(dataset: Dataset): string {
  const header = [...dataset.features.map((f) => f.name), "label"];
  const lines = [header.join(",")];
  dataset.cells.forEach((cells, r) => {
    lines.push([...cells, dataset.labels[r]].join(","));
  });
  return lines.join("\n") + "\n";
}

/** Candidates naming every feature, used to read back per-row predictions. */
export function fullInstanceCandidates(dataset: Dataset): string {
  const all = dataset.features.map((f) => f.name).join(",");
  return dataset.cells.map((_, r) => `${r}: ${all}`).join("\n") + "\n";
}

/**
 * Normalize an externally produced literal file ("id: f1,f2,..." lines)
 * into the engine's candidates format, validating ids and feature names.
 */
export function candidatesFromLiteralFile(dataset: Dataset, text: string): string {
  const known = new Set(dataset.features.map((f) => f.name));
  const out: string[] = [];
  const seen = new Set<number>();
  for (const [lineno, raw] of text.split(/\r?\n/).entries()) {
    const line = raw.trim();
    if (line === "" || line.startsWith("#")) continue;
    const sep = line.indexOf(":");
    if (sep < 0) throw new Error(`literal file line ${lineno + 1}: expected 'id: f1,f2,...'`);
    const id = Number(line.slice(0, sep).trim());
    if (!Number.isInteger(id) || id < 0 || id >= dataset.cells.length) {
      throw new Error(`literal file line ${lineno + 1}: id ${line.slice(0, sep)} out of range`);
    }
    if (seen.has(id)) throw new Error(`literal file line ${lineno + 1}: duplicate id ${id}`);
    seen.add(id);
    const features = line
      .slice(sep + 1)
      .split(",")
      .map((f) => f.trim())
      .filter((f) => f !== "");
    for (const f of features) {
      if (!known.has(f)) {
        throw new Error(`literal file line ${lineno + 1}: unknown feature ${f}`);
      }
    }
    out.push(`${id}: ${features.join(",")}`);
  }
  return out.join("\n") + "\n";
}
