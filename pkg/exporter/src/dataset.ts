/**
 * Tabular datasets for training: CSV parsing, feature typing, and the
 * one-hot view the booster trains on.
 *
 * The engine's formats distinguish binary, categorical and continuous
 * features.  Kinds are inferred per column ({0,1}-only -> binary,
 * non-numeric -> categorical, otherwise continuous) and can be forced via
 * an explicit schema, e.g. integer-coded enumerations that should stay
 * categorical.
 */

export type FeatureKind = "binary" | "categorical" | "continuous";

export interface Feature {
  name: string;
  kind: FeatureKind;
  /** categorical only, in order of first appearance */
  values: string[];
}

export interface Dataset {
  name: string;
  features: Feature[];
  /** raw cells, rows x features, as text */
  cells: string[][];
  labels: string[];
  classNames: string[];
  /** label index per row */
  y: number[];
}

function isNumeric(text: string): boolean {
  return text.trim() !== "" && !Number.isNaN(Number(text));
}

function splitCsvLine(line: string): string[] {
  return line.split(",").map((c) => c.trim());
}

export function parseCsv(
  name: string,
  text: string,
  options: { labelColumn?: string; schema?: Record<string, FeatureKind> } = {},
): Dataset {
  const lines = text.split(/\r?\n/).filter((l) => l.trim() !== "");
  if (lines.length < 2) {
    throw new Error(`dataset ${name}: need a header and at least one row`);
  }
  const header = splitCsvLine(lines[0]);
  const labelColumn = options.labelColumn ?? header[header.length - 1];
  const labelIdx = header.indexOf(labelColumn);
  if (labelIdx < 0) {
    throw new Error(`dataset ${name}: no label column ${labelColumn}`);
  }
  const featureIdx = header.map((_, i) => i).filter((i) => i !== labelIdx);

  const rows = lines.slice(1).map((line, r) => {
    const cells = splitCsvLine(line);
    if (cells.length !== header.length) {
      throw new Error(`dataset ${name}: row ${r + 2} has ${cells.length} cells, expected ${header.length}`);
    }
    return cells;
  });

  const features: Feature[] = [];
  for (const i of featureIdx) {
    const column = rows.map((r) => r[i]);
    const forced = options.schema?.[header[i]];
    let kind: FeatureKind;
    if (forced) {
      kind = forced;
    } else if (column.every((v) => v === "0" || v === "1")) {
      kind = "binary";
    } else if (column.every(isNumeric)) {
      kind = "continuous";
    } else {
      kind = "categorical";
    }
    const values: string[] = [];
    if (kind === "categorical") {
      for (const v of column) {
        if (!values.includes(v)) values.push(v);
      }
    }
    features.push({ name: header[i], kind, values });
  }

  const classNames: string[] = [];
  const labels = rows.map((r) => r[labelIdx]);
  for (const l of labels) {
    if (!classNames.includes(l)) classNames.push(l);
  }
  return {
    name,
    features,
    cells: rows.map((r) => featureIdx.map((i) => r[i])),
    labels,
    classNames,
    y: labels.map((l) => classNames.indexOf(l)),
  };
}

/**
 * The booster's training view: every categorical feature expanded into
 * indicator columns named `feature=value`, binaries and continuous kept
 * as numeric columns.  The indicator naming matches how the engine
 * resolves one-hot splits in model files.
 */
export interface Matrix {
  columns: string[];
  /** column kind: indicator columns count as binary */
  binary: boolean[];
  data: number[][]; // rows x columns
}

export function oneHotView(dataset: Dataset): Matrix {
  const columns: string[] = [];
  const binary: boolean[] = [];
  const mappers: ((cells: string[]) => number)[] = [];
  dataset.features.forEach((feature, f) => {
    if (feature.kind === "categorical") {
      for (const value of feature.values) {
        columns.push(`${feature.name}=${value}`);
        binary.push(true);
        mappers.push((cells) => (cells[f] === value ? 1 : 0));
      }
    } else {
      columns.push(feature.name);
      binary.push(feature.kind === "binary");
      mappers.push((cells) => Number(cells[f]));
    }
  });
  return {
    columns,
    binary,
    data: dataset.cells.map((cells) => mappers.map((m) => m(cells))),
  };
}

export function subset(dataset: Dataset, rows: number[]): Dataset {
  return {
    ...dataset,
    cells: rows.map((r) => dataset.cells[r]),
    labels: rows.map((r) => dataset.labels[r]),
    y: rows.map((r) => dataset.y[r]),
  };
}
