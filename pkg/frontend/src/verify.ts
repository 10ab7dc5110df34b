/** Independent recomputation of the harness's stats.csv.
 *
 * Statistics are computed on both sides of the CSV boundary and compared,
 * never trusted from one side only.
 */

import { join } from "node:path";
import {
  SLICE_COLUMNS,
  STATS_COLUMNS,
  SYSTEM_COLUMNS,
  USER_COLUMNS,
  SchemaError,
  num,
  parseCsv,
  type Row,
} from "./schema.js";
import { closeEnough, distributionStats, mean } from "./stats.js";

export interface StatCheck {
  scope: string;
  metric: string;
  stat: string;
  reported: number;
  recomputed: number;
  ok: boolean;
}

const SYSTEM_METRICS = [
  "satisfaction",
  "recon_cost",
  "objective",
  "rate_violation_frac",
] as const;

const SLICE_METRICS: Record<string, string> = {
  satisfaction: "satisfaction",
  recon_cost: "recon_cost",
  fraction: "fraction",
  wastage: "wastage",
};

const USER_METRICS: Record<string, string> = {
  user_rate_bps: "mean_rate_bps",
  user_satisfaction: "mean_satisfaction",
  user_wastage: "mean_wastage",
  user_fraction: "mean_fraction",
};

function column(rows: Row[], name: string): number[] {
  return rows.map((r) => num(r, name));
}

/** Recompute every row of an eval directory's stats.csv. */
export function verifyStats(dir: string, tol = 1e-9): StatCheck[] {
  const stats = parseCsv(join(dir, "stats.csv"), STATS_COLUMNS);
  const system = parseCsv(join(dir, "system.csv"), SYSTEM_COLUMNS);
  const slices = parseCsv(join(dir, "slices.csv"), SLICE_COLUMNS);
  const users = parseCsv(join(dir, "users.csv"), USER_COLUMNS);

  const recomputed = new Map<string, number>();
  for (const metric of SYSTEM_METRICS) {
    recomputed.set(`system|${metric}|mean`, mean(column(system, metric)));
  }
  const sliceIds = [...new Set(slices.map((r) => r.slice))];
  for (const sid of sliceIds) {
    const srows = slices.filter((r) => r.slice === sid);
    for (const [metric, col] of Object.entries(SLICE_METRICS)) {
      recomputed.set(`slice:${sid}|${metric}|mean`, mean(column(srows, col)));
    }
    const urows = users.filter((r) => r.slice === sid);
    for (const [metric, col] of Object.entries(USER_METRICS)) {
      const d = distributionStats(column(urows, col));
      for (const [stat, value] of Object.entries(d)) {
        recomputed.set(`slice:${sid}|${metric}|${stat}`, value);
      }
    }
  }

  const checks: StatCheck[] = [];
  for (const row of stats) {
    const key = `${row.scope}|${row.metric}|${row.stat}`;
    const ours = recomputed.get(key);
    if (ours === undefined) {
      throw new SchemaError(`stats.csv row not recomputable: ${key}`);
    }
    const reported = num(row, "value");
    checks.push({
      scope: row.scope,
      metric: row.metric,
      stat: row.stat,
      reported,
      recomputed: ours,
      ok: closeEnough(reported, ours, tol),
    });
  }
  return checks;
}
