import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { buildFigure } from "../src/figures.js";
import { USER_COLUMNS, num, parseCsv } from "../src/schema.js";
import { distributionStats, mean } from "../src/stats.js";

const FIXTURES = new URL("./fixtures/", import.meta.url).pathname;
const CURVE = join(FIXTURES, "train_curve.csv");
const SWEEP = join(FIXTURES, "sweep/sweep.csv");
const USERS = join(FIXTURES, "eval/users.csv");

describe("curve", () => {
  it("emits one line per agent with per-episode returns", () => {
    const { option, summary } = buildFigure({
      kind: "curve",
      inputs: [CURVE],
      output: "unused.svg",
    });
    const series = option.series as { name: string; data: [number, number][] }[];
    expect(series.map((s) => s.name)).toEqual(["global", "embb", "urllc", "mmtc"]);
    for (const s of series) {
      expect(s.data.map(([ep]) => ep)).toEqual([0, 1, 2, 3, 4, 5]);
    }
    expect((summary.global as number[]).length).toBe(6);
  });
});

describe("sweep-line", () => {
  it("sorts points by total user count and labels by algorithm", () => {
    const { option, summary } = buildFigure({
      kind: "sweep-line",
      inputs: [SWEEP],
      output: "unused.svg",
    });
    const series = option.series as { name: string; data: [number, number][] }[];
    expect(series.length).toBe(1);
    expect(series[0].name).toBe("rssi");
    expect(series[0].data.map(([x]) => x)).toEqual([30, 60, 90]);
    expect((summary.rssi as number[]).length).toBe(3);
  });

  it("accepts several inputs with explicit labels", () => {
    const { option } = buildFigure({
      kind: "sweep-line",
      inputs: [SWEEP, SWEEP],
      labels: ["a", "b"],
      output: "unused.svg",
    });
    const series = option.series as { name: string }[];
    expect(series.map((s) => s.name)).toEqual(["a", "b"]);
  });
});

describe("boxplot", () => {
  it("recomputes per-slice five-number summaries from the user table", () => {
    const { option, summary } = buildFigure({
      kind: "boxplot",
      inputs: [USERS],
      metric: "mean_rate_bps",
      output: "unused.svg",
    });
    const rows = parseCsv(USERS, USER_COLUMNS);
    const embb = rows
      .filter((r) => r.slice === "embb")
      .map((r) => num(r, "mean_rate_bps"));
    const want = distributionStats(embb);
    const got = (summary as Record<string, typeof want>).embb;
    expect(got).toEqual(want);
    const series = option.series as { data: number[][] }[];
    expect(series[0].data[0]).toEqual([want.min, want.q1, want.median, want.q3, want.max]);
  });

  it("degenerates to a flat box on a constant column", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    const path = join(dir, "users.csv");
    const header = USER_COLUMNS.join(",");
    const row = (u: number) =>
      `0,s,${u},2.0,1.0,0.25,0.125`;
    writeFileSync(path, [header, row(0), row(1), row(2)].join("\n") + "\n", "utf8");
    const { summary } = buildFigure({
      kind: "boxplot",
      inputs: [path],
      metric: "mean_satisfaction",
      output: "unused.svg",
    });
    expect(summary.s).toEqual({ mean: 1, q1: 1, median: 1, q3: 1, min: 1, max: 1 });
  });
});

describe("bar", () => {
  it("bar heights equal independently recomputed column means", () => {
    const { option, summary } = buildFigure({
      kind: "bar",
      inputs: [USERS],
      metric: "mean_wastage",
      output: "unused.svg",
    });
    const rows = parseCsv(USERS, USER_COLUMNS);
    for (const sid of ["embb", "urllc", "mmtc"]) {
      const want = mean(
        rows.filter((r) => r.slice === sid).map((r) => num(r, "mean_wastage")),
      );
      expect(summary[sid]).toBe(want);
    }
    const series = option.series as { data: number[] }[];
    expect(series[0].data).toEqual(Object.values(summary));
  });
});

describe("input validation", () => {
  it("rejects unknown metric columns by name", () => {
    expect(() =>
      buildFigure({ kind: "bar", inputs: [USERS], metric: "nope", output: "u.svg" }),
    ).toThrow(/unknown metric column "nope"/);
  });

  it("rejects multiple inputs for single-table kinds", () => {
    expect(() =>
      buildFigure({ kind: "boxplot", inputs: [USERS, USERS], output: "u.svg" }),
    ).toThrow(/exactly one input/);
  });
});
