#!/usr/bin/env node
/** Command line entry: render figures from harness CSVs, audit stats files.
 *
 * Exit codes: 0 success, 2 bad arguments or malformed input, 3 runtime
 * failure (unreadable file, failed check).
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { SchemaError } from "./schema.js";
import type { FigureKind, FigureSpec } from "./figures.js";
import { writeFigure } from "./render.js";
import { verifyStats } from "./verify.js";

const USAGE = `usage:
  slicesim-plots render --kind curve|sweep-line|boxplot|bar \\
      --input a.csv[,b.csv...] --out figure.svg \\
      [--metric NAME] [--labels a,b] [--title TEXT] [--width N] [--height N]
  slicesim-plots verify-stats --dir EVAL_DIR [--tol 1e-9]`;

const KINDS: FigureKind[] = ["curve", "sweep-line", "boxplot", "bar"];

class UsageError extends Error {}

function requireOpt(value: string | undefined, flag: string): string {
  if (value === undefined || value === "") {
    throw new UsageError(`missing required option ${flag}`);
  }
  return value;
}

function parseDimension(value: string | undefined, flag: string): number | undefined {
  if (value === undefined) {
    return undefined;
  }
  const n = Number(value);
  if (!Number.isFinite(n) || n <= 0) {
    throw new UsageError(`${flag} expects a positive number, got "${value}"`);
  }
  return n;
}

function cmdRender(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      kind: { type: "string" },
      input: { type: "string" },
      out: { type: "string" },
      metric: { type: "string" },
      labels: { type: "string" },
      title: { type: "string" },
      width: { type: "string" },
      height: { type: "string" },
    },
  });
  const kind = requireOpt(values.kind, "--kind") as FigureKind;
  if (!KINDS.includes(kind)) {
    throw new UsageError(`unknown figure kind "${kind}" (expected ${KINDS.join(", ")})`);
  }
  const spec: FigureSpec = {
    kind,
    inputs: requireOpt(values.input, "--input").split(","),
    output: requireOpt(values.out, "--out"),
    metric: values.metric,
    labels: values.labels?.split(","),
    title: values.title,
    width: parseDimension(values.width, "--width"),
    height: parseDimension(values.height, "--height"),
  };
  writeFigure(spec);
  console.log(`wrote ${spec.output}`);
  return 0;
}

function cmdVerifyStats(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: { dir: { type: "string" }, tol: { type: "string" } },
  });
  const dir = requireOpt(values.dir, "--dir");
  const tol = values.tol === undefined ? 1e-9 : Number(values.tol);
  if (!Number.isFinite(tol) || tol <= 0) {
    throw new UsageError(`--tol expects a positive number, got "${values.tol}"`);
  }
  const checks = verifyStats(dir, tol);
  let failed = 0;
  for (const c of checks) {
    if (!c.ok) {
      failed += 1;
      console.error(
        `MISMATCH ${c.scope} ${c.metric} ${c.stat}: ` +
          `reported ${c.reported} recomputed ${c.recomputed}`,
      );
    }
  }
  console.log(`${checks.length - failed}/${checks.length} stats rows match within ${tol}`);
  return failed === 0 ? 0 : 3;
}

export function main(argv: string[]): number {
  try {
    const [verb, ...rest] = argv;
    if (verb === "render") {
      return cmdRender(rest);
    }
    if (verb === "verify-stats") {
      return cmdVerifyStats(rest);
    }
    throw new UsageError(verb ? `unknown command "${verb}"` : "no command given");
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`error: ${err.message}\n${USAGE}`);
      return 2;
    }
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    // parseArgs rejects unknown flags with ERR_PARSE_ARGS_* codes.
    if (err instanceof TypeError && String((err as NodeJS.ErrnoException).code).startsWith("ERR_PARSE_ARGS")) {
      console.error(`error: ${err.message}\n${USAGE}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 3;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  process.exit(main(process.argv.slice(2)));
}
