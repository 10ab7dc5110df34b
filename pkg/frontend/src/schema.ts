/** Harness CSV schemas and strict parsing.
 *
 * Column lists mirror the simulator's metrics writer; a file missing any
 * required column is a hard error naming that column, never a silent blank.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export const SYSTEM_COLUMNS = [
  "realization",
  "slot",
  "satisfaction",
  "recon_cost",
  "objective",
  "trigger",
  "global_acted",
  "global_valid",
  "rate_violation_frac",
] as const;

export const SLICE_COLUMNS = [
  "realization",
  "slot",
  "slice",
  "satisfaction",
  "recon_cost",
  "needs_flag",
  "spare_flag",
  "fraction",
  "intra_valid",
  "wastage",
] as const;

export const USER_COLUMNS = [
  "realization",
  "slice",
  "user",
  "mean_rate_bps",
  "mean_satisfaction",
  "mean_wastage",
  "mean_fraction",
] as const;

export const CURVE_COLUMNS = ["episode", "agent", "reward"] as const;

export const STATS_COLUMNS = ["scope", "metric", "stat", "value"] as const;

export const SWEEP_COLUMNS = [
  "total_users",
  "algorithm",
  "mean_objective",
  "mean_satisfaction",
  "mean_recon_cost",
] as const;

export type Row = Record<string, string>;

export class SchemaError extends Error {}

/** Parse a harness CSV, insisting on every required column. */
export function parseCsv(path: string, required: readonly string[]): Row[] {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`${path}: parse error on row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of required) {
    if (!fields.includes(column)) {
      throw new SchemaError(`${path}: missing required column "${column}"`);
    }
  }
  return parsed.data;
}

/** Numeric field access; blanks and non-numbers are hard errors. */
export function num(row: Row, column: string): number {
  const raw = row[column];
  if (raw === undefined) {
    throw new SchemaError(`missing required column "${column}"`);
  }
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`column "${column}" holds non-numeric value "${raw}"`);
  }
  return value;
}
