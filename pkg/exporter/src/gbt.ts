/**
 * A small gradient-boosted tree trainer with the classic softmax objective.
 *
 * Per boosting round and per class, a regression tree is fit to the
 * gradient/hessian of the cross-entropy at the current margins
 * (g = p - y, h = 2p(1-p)), with exact greedy split search and
 * L2-regularized leaf weights w = -G/(H+lambda) * eta.  Split semantics
 * match the dump format the engine consumes: the "yes" branch is taken
 * when feature < threshold, binary and one-hot columns test < 0.5.
 */

import { Matrix } from "./dataset.js";

export interface LeafNode {
  leaf: number;
}

export interface SplitNode {
  column: number;
  threshold: number;
  yes: Tree; // value < threshold
  no: Tree;
}

export type Tree = LeafNode | SplitNode;

export function isLeaf(tree: Tree): tree is LeafNode {
  return (tree as LeafNode).leaf !== undefined;
}

export interface BoosterParams {
  rounds: number; // trees per class
  maxDepth: number;
  learningRate: number;
  lambda: number;
  minGain: number;
  baseScore: number;
}

export const DEFAULT_PARAMS: BoosterParams = {
  rounds: 10,
  maxDepth: 3,
  learningRate: 0.3,
  lambda: 1.0,
  minGain: 1e-10,
  baseScore: 0.5,
};

function softmax(margins: number[]): number[] {
  const top = Math.max(...margins);
  const exps = margins.map((v) => Math.exp(v - top));
  const total = exps.reduce((a, b) => a + b, 0);
  return exps.map((e) => e / total);
}

interface BestSplit {
  column: number;
  threshold: number;
  gain: number;
}

export class Booster {
  constructor(
    readonly numClasses: number,
    readonly params: BoosterParams,
    /** classTrees[j] holds the q trees of class j, in round order */
    readonly classTrees: Tree[][],
  ) {}

  static train(matrix: Matrix, y: number[], numClasses: number, params: BoosterParams): Booster {
    const n = matrix.data.length;
    if (n === 0) throw new Error("cannot train on an empty dataset");
    const margins: number[][] = Array.from({ length: n }, () =>
      new Array(numClasses).fill(params.baseScore),
    );
    const classTrees: Tree[][] = Array.from({ length: numClasses }, () => []);

    for (let round = 0; round < params.rounds; round++) {
      const probs = margins.map(softmax);
      const roundTrees: Tree[] = [];
      for (let cls = 0; cls < numClasses; cls++) {
        const grad = new Array<number>(n);
        const hess = new Array<number>(n);
        for (let i = 0; i < n; i++) {
          const p = probs[i][cls];
          grad[i] = p - (y[i] === cls ? 1 : 0);
          hess[i] = Math.max(2 * p * (1 - p), 1e-16);
        }
        const tree = buildTree(
          matrix,
          grad,
          hess,
          Array.from({ length: n }, (_, i) => i),
          0,
          params,
        );
        roundTrees.push(tree);
        classTrees[cls].push(tree);
      }
      for (let i = 0; i < n; i++) {
        for (let cls = 0; cls < numClasses; cls++) {
          margins[i][cls] += evalTree(roundTrees[cls], matrix.data[i]);
        }
      }
    }
    return new Booster(numClasses, params, classTrees);
  }

  margins(row: number[]): number[] {
    const out = new Array<number>(this.numClasses).fill(this.params.baseScore);
    for (let cls = 0; cls < this.numClasses; cls++) {
      for (const tree of this.classTrees[cls]) {
        out[cls] += evalTree(tree, row);
      }
    }
    return out;
  }

  /** argmax with the lowest class index winning ties, like the engine. */
  predict(row: number[]): number {
    const scores = this.margins(row);
    let best = 0;
    for (let cls = 1; cls < scores.length; cls++) {
      if (scores[cls] > scores[best]) best = cls;
    }
    return best;
  }
}

export function evalTree(tree: Tree, row: number[]): number {
  let node = tree;
  while (!isLeaf(node)) {
    node = row[node.column] < node.threshold ? node.yes : node.no;
  }
  return node.leaf;
}

function scoreTerm(g: number, h: number, lambda: number): number {
  return (g * g) / (h + lambda);
}

function findSplit(
  matrix: Matrix,
  grad: number[],
  hess: number[],
  rows: number[],
  params: BoosterParams,
): BestSplit | null {
  let gTotal = 0;
  let hTotal = 0;
  for (const i of rows) {
    gTotal += grad[i];
    hTotal += hess[i];
  }
  const parentScore = scoreTerm(gTotal, hTotal, params.lambda);
  let best: BestSplit | null = null;

  for (let col = 0; col < matrix.columns.length; col++) {
    const thresholds: number[] = [];
    if (matrix.binary[col]) {
      thresholds.push(0.5);
    } else {
      const values = [...new Set(rows.map((i) => matrix.data[i][col]))].sort((a, b) => a - b);
      for (let k = 0; k + 1 < values.length; k++) {
        thresholds.push((values[k] + values[k + 1]) / 2);
      }
    }
    for (const threshold of thresholds) {
      let gYes = 0;
      let hYes = 0;
      let count = 0;
      for (const i of rows) {
        if (matrix.data[i][col] < threshold) {
          gYes += grad[i];
          hYes += hess[i];
          count++;
        }
      }
      if (count === 0 || count === rows.length) continue;
      const gain =
        0.5 *
        (scoreTerm(gYes, hYes, params.lambda) +
          scoreTerm(gTotal - gYes, hTotal - hYes, params.lambda) -
          parentScore);
      if (best === null || gain > best.gain) {
        best = { column: col, threshold, gain };
      }
    }
  }
  return best !== null && best.gain > params.minGain ? best : null;
}

function buildTree(
  matrix: Matrix,
  grad: number[],
  hess: number[],
  rows: number[],
  depth: number,
  params: BoosterParams,
): Tree {
  const split = depth < params.maxDepth ? findSplit(matrix, grad, hess, rows, params) : null;
  if (split === null) {
    let g = 0;
    let h = 0;
    for (const i of rows) {
      g += grad[i];
      h += hess[i];
    }
    return { leaf: (-g / (h + params.lambda)) * params.learningRate };
  }
  const yesRows = rows.filter((i) => matrix.data[i][split.column] < split.threshold);
  const noRows = rows.filter((i) => matrix.data[i][split.column] >= split.threshold);
  return {
    column: split.column,
    threshold: split.threshold,
    yes: buildTree(matrix, grad, hess, yesRows, depth + 1, params),
    no: buildTree(matrix, grad, hess, noRows, depth + 1, params),
  };
}
