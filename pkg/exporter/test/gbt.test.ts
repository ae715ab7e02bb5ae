import { describe, expect, it } from "vitest";

import { oneHotView, parseCsv } from "../src/dataset.js";
import { Booster, DEFAULT_PARAMS, evalTree, isLeaf } from "../src/gbt.js";
import { modelDump } from "../src/dump.js";
import { makeShapes } from "../src/synthetic.js";

describe("Booster", () => {
  it("computes the regularized leaf weights exactly on a hand example", () => {
    // one binary feature separating the two classes perfectly:
    // round 0 probabilities are uniform, so for class 0 the gradients are
    // +-0.5 and every hessian is 0.5; with lambda=1 the split yes-side
    // (x=0, both class 0) gets w = -(-1)/(1+1) * eta = 0.15
    const matrix = { columns: ["x"], binary: [true], data: [[1], [1], [0], [0]] };
    const y = [1, 1, 0, 0];
    const booster = Booster.train(matrix, y, 2, {
      ...DEFAULT_PARAMS,
      rounds: 1,
      maxDepth: 1,
      learningRate: 0.3,
      lambda: 1.0,
    });
    const tree = booster.classTrees[0][0];
    expect(isLeaf(tree)).toBe(false);
    expect(evalTree(tree, [0])).toBeCloseTo(0.15, 12);
    expect(evalTree(tree, [1])).toBeCloseTo(-0.15, 12);
    // class 1 mirrors class 0
    expect(evalTree(booster.classTrees[1][0], [1])).toBeCloseTo(0.15, 12);
  });

  it("splits on the only informative feature", () => {
    const matrix = {
      columns: ["noise", "signal"],
      binary: [true, true],
      data: [
        [0, 0], [1, 0], [0, 0], [1, 0],
        [1, 1], [0, 1], [1, 1], [0, 1],
      ],
    };
    const y = [0, 0, 0, 0, 1, 1, 1, 1];
    const booster = Booster.train(matrix, y, 2, { ...DEFAULT_PARAMS, rounds: 1, maxDepth: 1 });
    const tree = booster.classTrees[0][0];
    expect(isLeaf(tree)).toBe(false);
    if (!isLeaf(tree)) expect(tree.column).toBe(1);
  });

  it("learns the noiseless shapes rule", () => {
    const ds = parseCsv("shapes", makeShapes(3));
    const view = oneHotView(ds);
    const booster = Booster.train(view, ds.y, ds.classNames.length, {
      ...DEFAULT_PARAMS,
      rounds: 12,
      maxDepth: 3,
    });
    const hits = view.data.filter((row, i) => booster.predict(row) === ds.y[i]).length;
    expect(hits / view.data.length).toBeGreaterThan(0.97);
  });

  it("is deterministic: same data and params give an identical dump", () => {
    const ds = parseCsv("shapes", makeShapes(9));
    const view = oneHotView(ds);
    const a = Booster.train(view, ds.y, ds.classNames.length, { ...DEFAULT_PARAMS, rounds: 4 });
    const b = Booster.train(view, ds.y, ds.classNames.length, { ...DEFAULT_PARAMS, rounds: 4 });
    expect(modelDump(a, view.columns)).toBe(modelDump(b, view.columns));
  });

  it("handles a single-class dataset with zero-valued leaves", () => {
    const matrix = { columns: ["x"], binary: [true], data: [[0], [1], [1]] };
    const booster = Booster.train(matrix, [0, 0, 0], 1, { ...DEFAULT_PARAMS, rounds: 2 });
    expect(booster.predict([0])).toBe(0);
    expect(booster.margins([1])[0]).toBeCloseTo(DEFAULT_PARAMS.baseScore, 9);
  });
});
