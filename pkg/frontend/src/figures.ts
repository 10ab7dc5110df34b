/** Figure construction from harness CSVs.
 *
 * Four families: training curves, sweep lines over total user count,
 * per-slice box plots of user-level metrics, per-slice mean bars.  Every
 * builder returns both the chart option and the numbers it derived, so
 * tests can assert values without rasterizing.
 */

import { basename } from "node:path";
import type { EChartsOption } from "echarts";
import {
  CURVE_COLUMNS,
  SWEEP_COLUMNS,
  USER_COLUMNS,
  SchemaError,
  num,
  parseCsv,
} from "./schema.js";
import { distributionStats, mean, type DistributionStats } from "./stats.js";

export type FigureKind = "curve" | "sweep-line" | "boxplot" | "bar";

export interface FigureSpec {
  kind: FigureKind;
  /** Input CSV paths; sweep-line accepts several (one series each). */
  inputs: string[];
  /** Series labels; sweep-line pairs them with inputs. */
  labels?: string[];
  /** Value column where the kind supports a choice. */
  metric?: string;
  /** Output image path. */
  output: string;
  title?: string;
  width?: number;
  height?: number;
}

export interface BuiltFigure {
  option: EChartsOption;
  /** Derived numbers, keyed by series/category, for verification. */
  summary: Record<string, number[] | DistributionStats | number>;
}

const USER_METRIC_COLUMNS = [
  "mean_rate_bps",
  "mean_satisfaction",
  "mean_wastage",
  "mean_fraction",
];

const SWEEP_METRIC_COLUMNS = [
  "mean_objective",
  "mean_satisfaction",
  "mean_recon_cost",
];

function requireMetric(metric: string, allowed: string[]): string {
  if (!allowed.includes(metric)) {
    throw new SchemaError(
      `unknown metric column "${metric}" (expected one of ${allowed.join(", ")})`,
    );
  }
  return metric;
}

function singleInput(spec: FigureSpec): string {
  if (spec.inputs.length !== 1) {
    throw new SchemaError(`${spec.kind} takes exactly one input CSV`);
  }
  return spec.inputs[0];
}

const BASE: EChartsOption = { animation: false, backgroundColor: "#ffffff" };

function buildCurve(spec: FigureSpec): BuiltFigure {
  const rows = parseCsv(singleInput(spec), CURVE_COLUMNS);
  const agents: string[] = [];
  const byAgent = new Map<string, [number, number][]>();
  for (const row of rows) {
    const agent = row.agent;
    if (!byAgent.has(agent)) {
      byAgent.set(agent, []);
      agents.push(agent);
    }
    byAgent.get(agent)!.push([num(row, "episode"), num(row, "reward")]);
  }
  const summary: Record<string, number[]> = {};
  for (const agent of agents) {
    summary[agent] = byAgent.get(agent)!.map(([, r]) => r);
  }
  return {
    option: {
      ...BASE,
      title: { text: spec.title ?? "episode return by agent" },
      legend: { data: agents, top: 28 },
      xAxis: { type: "value", name: "episode" },
      yAxis: { type: "value", name: "return" },
      series: agents.map((agent) => ({
        name: agent,
        type: "line",
        showSymbol: false,
        data: byAgent.get(agent)!,
      })),
    },
    summary,
  };
}

function buildSweepLine(spec: FigureSpec): BuiltFigure {
  const metric = requireMetric(spec.metric ?? "mean_objective", SWEEP_METRIC_COLUMNS);
  const summary: Record<string, number[]> = {};
  const series = spec.inputs.map((path, i) => {
    const rows = parseCsv(path, SWEEP_COLUMNS);
    const label =
      spec.labels?.[i] ?? (rows.length > 0 ? rows[0].algorithm : basename(path));
    const points = rows
      .map((r) => [num(r, "total_users"), num(r, metric)] as [number, number])
      .sort((a, b) => a[0] - b[0]);
    summary[label] = points.map(([, v]) => v);
    return { name: label, type: "line" as const, data: points };
  });
  return {
    option: {
      ...BASE,
      title: { text: spec.title ?? `${metric} vs total users` },
      legend: { data: series.map((s) => s.name), top: 28 },
      xAxis: { type: "value", name: "total users" },
      yAxis: { type: "value", name: metric },
      series,
    },
    summary,
  };
}

function userColumnsBySlice(spec: FigureSpec, metric: string): Map<string, number[]> {
  const rows = parseCsv(singleInput(spec), USER_COLUMNS);
  const bySlice = new Map<string, number[]>();
  for (const row of rows) {
    if (!bySlice.has(row.slice)) {
      bySlice.set(row.slice, []);
    }
    bySlice.get(row.slice)!.push(num(row, metric));
  }
  if (bySlice.size === 0) {
    throw new SchemaError(`${singleInput(spec)} holds no data rows`);
  }
  return bySlice;
}

function buildBoxplot(spec: FigureSpec): BuiltFigure {
  const metric = requireMetric(spec.metric ?? "mean_satisfaction", USER_METRIC_COLUMNS);
  const bySlice = userColumnsBySlice(spec, metric);
  const slices = [...bySlice.keys()];
  const summary: Record<string, DistributionStats> = {};
  const boxes = slices.map((sid) => {
    const d = distributionStats(bySlice.get(sid)!);
    summary[sid] = d;
    return [d.min, d.q1, d.median, d.q3, d.max];
  });
  return {
    option: {
      ...BASE,
      title: { text: spec.title ?? `${metric} distribution by slice` },
      xAxis: { type: "category", data: slices },
      yAxis: { type: "value", name: metric },
      series: [{ name: metric, type: "boxplot", data: boxes }],
    },
    summary,
  };
}

function buildBar(spec: FigureSpec): BuiltFigure {
  const metric = requireMetric(spec.metric ?? "mean_wastage", USER_METRIC_COLUMNS);
  const bySlice = userColumnsBySlice(spec, metric);
  const slices = [...bySlice.keys()];
  const summary: Record<string, number> = {};
  const bars = slices.map((sid) => {
    const m = mean(bySlice.get(sid)!);
    summary[sid] = m;
    return m;
  });
  return {
    option: {
      ...BASE,
      title: { text: spec.title ?? `mean ${metric} by slice` },
      xAxis: { type: "category", data: slices },
      yAxis: { type: "value", name: metric },
      series: [{ name: metric, type: "bar", data: bars }],
    },
    summary,
  };
}

export function buildFigure(spec: FigureSpec): BuiltFigure {
  switch (spec.kind) {
    case "curve":
      return buildCurve(spec);
    case "sweep-line":
      return buildSweepLine(spec);
    case "boxplot":
      return buildBoxplot(spec);
    case "bar":
      return buildBar(spec);
    default:
      throw new SchemaError(`unknown figure kind "${(spec as FigureSpec).kind}"`);
  }
}
