import { cpSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { STATS_COLUMNS, parseCsv } from "../src/schema.js";
import { verifyStats } from "../src/verify.js";

const FIXTURES = new URL("./fixtures/", import.meta.url).pathname;
const EVAL_DIR = join(FIXTURES, "eval");

describe("verifyStats", () => {
  it("reproduces every harness stats row within 1e-9", () => {
    const checks = verifyStats(EVAL_DIR, 1e-9);
    const statsRows = parseCsv(join(EVAL_DIR, "stats.csv"), STATS_COLUMNS);
    expect(checks.length).toBe(statsRows.length);
    const bad = checks.filter((c) => !c.ok);
    expect(bad).toEqual([]);
  });

  it("also reproduces the sweep per-point bundles", () => {
    for (const point of ["users_30", "users_60", "users_90"]) {
      const checks = verifyStats(join(FIXTURES, "sweep", point), 1e-9);
      expect(checks.length).toBeGreaterThan(0);
      expect(checks.every((c) => c.ok)).toBe(true);
    }
  });

  it("flags a corrupted stats value", () => {
    const dir = mkdtempSync(join(tmpdir(), "verify-"));
    cpSync(EVAL_DIR, dir, { recursive: true });
    const statsPath = join(dir, "stats.csv");
    const lines = readFileSync(statsPath, "utf8").split("\n");
    // first data row: scope,metric,stat,value
    const cells = lines[1].split(",");
    cells[3] = String(Number(cells[3]) + 1e-3);
    lines[1] = cells.join(",");
    writeFileSync(statsPath, lines.join("\n"), "utf8");
    const checks = verifyStats(dir, 1e-9);
    const bad = checks.filter((c) => !c.ok);
    expect(bad.length).toBe(1);
    expect(bad[0].scope).toBe(cells[0]);
    expect(bad[0].metric).toBe(cells[1]);
  });
});
