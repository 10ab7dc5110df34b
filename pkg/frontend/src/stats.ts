/** Summary statistics matching the harness's conventions exactly.
 *
 * Quartiles use linear interpolation between order statistics (the numpy
 * default); sums use Neumaier's compensated summation so recomputed means
 * agree with the harness to far better than the 1e-9 verification tolerance.
 */

export function kahanSum(values: number[]): number {
  // Neumaier variant: also compensates when an addend exceeds the running sum.
  let sum = 0;
  let comp = 0;
  for (const v of values) {
    const t = sum + v;
    if (Math.abs(sum) >= Math.abs(v)) {
      comp += sum - t + v;
    } else {
      comp += v - t + sum;
    }
    sum = t;
  }
  return sum + comp;
}

export function mean(values: number[]): number {
  if (values.length === 0) {
    throw new Error("mean of empty sample");
  }
  return kahanSum(values) / values.length;
}

/** Percentile with linear interpolation, q in [0, 100]. */
export function percentile(values: number[], q: number): number {
  if (values.length === 0) {
    throw new Error("percentile of empty sample");
  }
  const sorted = [...values].sort((a, b) => a - b);
  const pos = (q / 100) * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  const frac = pos - lo;
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

export interface DistributionStats {
  mean: number;
  q1: number;
  median: number;
  q3: number;
  min: number;
  max: number;
}

export function distributionStats(values: number[]): DistributionStats {
  return {
    mean: mean(values),
    q1: percentile(values, 25),
    median: percentile(values, 50),
    q3: percentile(values, 75),
    min: Math.min(...values),
    max: Math.max(...values),
  };
}

/** |a - b| within 1e-9, relative for magnitudes above 1. */
export function closeEnough(a: number, b: number, tol = 1e-9): boolean {
  return Math.abs(a - b) <= tol * Math.max(1, Math.abs(a), Math.abs(b));
}
