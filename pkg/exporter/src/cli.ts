/**
 * Exporter command line.
 *
 *   export     --dataset shapes|constant|path.csv --q 10 --depth 3 --seed 1 --out DIR
 *              [--label COL] [--schema '{"legs":"categorical"}'] [--python CMD]
 *   candidates --dataset ... --out DIR --explainer literal-file --from FILE
 */

import { FeatureKind } from "./dataset.js";
import { ExportOptions, exportCandidates, exportModel, loadDataset } from "./pipeline.js";

function parseArgs(argv: string[]): { command: string; flags: Map<string, string> } {
  const [command, ...rest] = argv;
  const flags = new Map<string, string>();
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    if (!key.startsWith("--") || i + 1 >= rest.length) {
      throw new Error(`bad arguments near ${key}`);
    }
    flags.set(key.slice(2), rest[i + 1]);
  }
  return { command: command ?? "", flags };
}

function need(flags: Map<string, string>, key: string): string {
  const value = flags.get(key);
  if (value === undefined) throw new Error(`missing --${key}`);
  return value;
}

function buildOptions(flags: Map<string, string>): ExportOptions {
  return {
    dataset: need(flags, "dataset"),
    out: need(flags, "out"),
    rounds: Number(flags.get("q") ?? 10),
    maxDepth: Number(flags.get("depth") ?? 3),
    seed: Number(flags.get("seed") ?? 1),
    labelColumn: flags.get("label"),
    schema: flags.has("schema")
      ? (JSON.parse(flags.get("schema")!) as Record<string, FeatureKind>)
      : undefined,
    learningRate: flags.has("eta") ? Number(flags.get("eta")) : undefined,
    python: flags.get("python"),
  };
}

export function main(argv: string[]): number {
  try {
    const { command, flags } = parseArgs(argv);
    if (command === "export") {
      const result = exportModel(buildOptions(flags));
      console.log(JSON.stringify(result.manifest, null, 2));
      return 0;
    }
    if (command === "candidates") {
      const options = buildOptions(flags);
      const dataset = loadDataset(options);
      const path = exportCandidates(
        options.out,
        dataset,
        flags.get("explainer") ?? "literal-file",
        flags.get("from"),
      );
      if (path) console.log(path);
      return 0;
    }
    console.error("usage: export|candidates --dataset D --out DIR [--q N --depth D --seed S]");
    return 1;
  } catch (error) {
    console.error(`error: ${error instanceof Error ? error.message : error}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
