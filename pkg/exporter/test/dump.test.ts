import { describe, expect, it } from "vitest";

import { oneHotView, parseCsv } from "../src/dataset.js";
import {
  candidatesFromLiteralFile,
  featureMapDump,
  fullInstanceCandidates,
  instancesDump,
  modelDump,
} from "../src/dump.js";
import { Booster, DEFAULT_PARAMS } from "../src/gbt.js";
import { makeShapes } from "../src/synthetic.js";

function trained() {
  const ds = parseCsv("shapes", makeShapes(5));
  const view = oneHotView(ds);
  const booster = Booster.train(view, ds.y, ds.classNames.length, {
    ...DEFAULT_PARAMS,
    rounds: 2,
    maxDepth: 2,
  });
  return { ds, view, booster };
}

describe("modelDump", () => {
  it("writes the header and class-major tree blocks", () => {
    const { view, booster } = trained();
    const doc = JSON.parse(modelDump(booster, view.columns));
    expect(doc.num_classes).toBe(3);
    expect(doc.trees_per_class).toBe(2);
    expect(doc.trees).toHaveLength(6);
    expect(doc.base_score).toBe(0.5);
  });

  it("gives every internal node two children and routes missing to yes", () => {
    const { view, booster } = trained();
    const doc = JSON.parse(modelDump(booster, view.columns));
    const walk = (node: any): void => {
      if (node.leaf !== undefined) return;
      expect(node.children).toHaveLength(2);
      const ids = node.children.map((c: any) => c.nodeid);
      expect(ids).toContain(node.yes);
      expect(ids).toContain(node.no);
      expect(node.missing).toBe(node.yes);
      expect(typeof node.split_condition).toBe("number");
      node.children.forEach(walk);
    };
    doc.trees.forEach(walk);
  });

  it("names one-hot splits feature=value", () => {
    const { view, booster } = trained();
    const text = modelDump(booster, view.columns);
    expect(view.columns).toContain("corners=four");
    // the learnable rule splits on the corners indicator somewhere
    expect(text).toMatch(/"split": "corners=/);
  });
});

describe("feature map and instances", () => {
  it("declares each feature with its kind and values", () => {
    const { ds } = trained();
    const lines = featureMapDump(ds).trim().split("\n");
    expect(lines[0]).toBe("0\tsize\tcontinuous");
    // categorical values are listed in order of first appearance
    expect(lines[1]).toBe(`1\tcorners\tcategorical:${ds.features[1].values.join("|")}`);
    expect(ds.features[1].values.slice().sort()).toEqual(["four", "many", "three"]);
    expect(lines[2]).toBe("2\tfilled\tbinary");
  });

  it("round-trips instance cells and appends the label column", () => {
    const { ds } = trained();
    const lines = instancesDump(ds).trim().split("\n");
    expect(lines[0]).toBe("size,corners,filled,striped,aspect,label");
    expect(lines).toHaveLength(ds.cells.length + 1);
    expect(lines[1].endsWith(ds.labels[0])).toBe(true);
  });

  it("emits one full-feature candidate line per row", () => {
    const { ds } = trained();
    const lines = fullInstanceCandidates(ds).trim().split("\n");
    expect(lines).toHaveLength(ds.cells.length);
    expect(lines[0]).toBe("0: size,corners,filled,striped,aspect");
  });
});

describe("candidatesFromLiteralFile", () => {
  it("normalizes and validates literal lines", () => {
    const { ds } = trained();
    const text = candidatesFromLiteralFile(ds, "# c\n1:  size , filled\n0: corners\n");
    expect(text).toBe("1: size,filled\n0: corners\n");
  });

  it("rejects unknown features and out-of-range ids", () => {
    const { ds } = trained();
    expect(() => candidatesFromLiteralFile(ds, "0: wings\n")).toThrow(/unknown feature/);
    expect(() => candidatesFromLiteralFile(ds, "99999: size\n")).toThrow(/out of range/);
    expect(() => candidatesFromLiteralFile(ds, "0: size\n0: filled\n")).toThrow(/duplicate/);
  });
});
