/** Per-(strategy, n) aggregation of result rows across seeds. */

import { ResultRow } from "./csv";

export interface SeriesPoint {
  n: number;
  mean: number;
  min: number;
  max: number;
}

export type Metric = "recomputed_tasks" | "projected_savings_J" | "makespan_s";

export function strategies(rows: ResultRow[]): string[] {
  return [...new Set(rows.map((r) => r.strategy))].sort();
}

export function seriesFor(rows: ResultRow[], strategy: string, metric: Metric): SeriesPoint[] {
  const byN = new Map<number, number[]>();
  for (const row of rows) {
    if (row.strategy !== strategy) continue;
    const bucket = byN.get(row.n) ?? [];
    bucket.push(row[metric]);
    byN.set(row.n, bucket);
  }
  const points: SeriesPoint[] = [];
  for (const [n, values] of [...byN.entries()].sort((a, b) => a[0] - b[0])) {
    const mean = values.reduce((acc, v) => acc + v, 0) / values.length;
    points.push({ n, mean, min: Math.min(...values), max: Math.max(...values) });
  }
  return points;
}
