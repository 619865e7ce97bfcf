/**
 * The three weak-scaling figures rendered from a results CSV:
 * recomputed work vs n, projected savings vs n with the degree-2 fit
 * overlaid (coefficients in the legend), and makespan vs n.
 */

import { ResultRow } from "./csv";
import { PolynomialFit, maxRelativeCoefficientGap, polyfit, polyval } from "./polyfit";
import { SeriesPoint, seriesFor, strategies } from "./stats";
import { ChartSeries, renderChart } from "./svg";

export const FIGURES = ["recompute", "savings", "makespan"] as const;
export type FigureName = (typeof FIGURES)[number];

const PALETTE: Record<string, string> = {
  global: "#1f77b4",
  "dfr-min": "#2ca02c",
  "dfr-rect": "#17becf",
  log: "#d62728",
};

function color(strategy: string, index: number): string {
  const fallback = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];
  return PALETTE[strategy] ?? fallback[index % fallback.length];
}

function toSeries(strategy: string, index: number, points: SeriesPoint[]): ChartSeries {
  return {
    label: strategy,
    color: color(strategy, index),
    points: points.map((p) => ({ x: p.n, y: p.mean, lo: p.min, hi: p.max })),
  };
}

export interface SavingsFitSummary {
  strategy: string;
  fit: PolynomialFit;
}

function coefficientLabel(fit: PolynomialFit): string {
  const [a, b, c] = fit.coefficients.map((v) => v.toPrecision(4));
  return `fit: ${a}*n^2 ${Number(b) >= 0 ? "+" : "-"} ${Math.abs(Number(b)).toPrecision(4)}*n ${
    Number(c) >= 0 ? "+" : "-"
  } ${Math.abs(Number(c)).toPrecision(4)} (R2=${fit.r2.toFixed(3)})`;
}

export function figureRecompute(rows: ResultRow[], logX = false, logY = false): string {
  const series = strategies(rows).map((s, i) => toSeries(s, i, seriesFor(rows, s, "recomputed_tasks")));
  return renderChart({
    title: "Recomputed tasks per run (mean over seeds, min-max whiskers)",
    xLabel: "processes n",
    yLabel: "recomputed tasks",
    series,
    logX,
    logY,
  });
}

export function savingsFits(rows: ResultRow[]): SavingsFitSummary[] {
  const out: SavingsFitSummary[] = [];
  for (const strategy of strategies(rows)) {
    if (strategy === "global") continue;
    const points = seriesFor(rows, strategy, "projected_savings_J");
    if (points.length < 3) continue;
    out.push({
      strategy,
      fit: polyfit(points.map((p) => p.n), points.map((p) => p.mean), 2),
    });
  }
  return out;
}

export function figureSavings(rows: ResultRow[], logX = false, logY = false): string {
  const series: ChartSeries[] = [];
  let index = 0;
  for (const strategy of strategies(rows)) {
    if (strategy === "global") continue; // savings are measured against global
    const points = seriesFor(rows, strategy, "projected_savings_J");
    const chartSeries = toSeries(strategy, index, points);
    if (points.length >= 3) {
      const fit = polyfit(points.map((p) => p.n), points.map((p) => p.mean), 2);
      const lo = points[0].n;
      const hi = points[points.length - 1].n;
      const overlay = [];
      for (let k = 0; k <= 100; k++) {
        const x = lo + ((hi - lo) * k) / 100;
        overlay.push({ x, y: polyval(fit.coefficients, x) });
      }
      chartSeries.overlay = overlay;
      chartSeries.overlayLabel = `${strategy} ${coefficientLabel(fit)}`;
    }
    series.push(chartSeries);
    index += 1;
  }
  if (series.length === 0) {
    throw new Error("no non-global strategies in the results; nothing to plot as savings");
  }
  return renderChart({
    title: "Projected energy savings vs global rollback",
    xLabel: "processes n",
    yLabel: "projected savings [J]",
    series,
    logX,
    logY,
  });
}

export function figureMakespan(rows: ResultRow[], logX = false, logY = false): string {
  const series = strategies(rows).map((s, i) => toSeries(s, i, seriesFor(rows, s, "makespan_s")));
  return renderChart({
    title: "Total runtime (mean over seeds, min-max whiskers)",
    xLabel: "processes n",
    yLabel: "makespan [s]",
    series,
    logX,
    logY,
  });
}

export function renderFigure(name: FigureName, rows: ResultRow[], logX: boolean, logY: boolean): string {
  switch (name) {
    case "recompute":
      return figureRecompute(rows, logX, logY);
    case "savings":
      return figureSavings(rows, logX, logY);
    case "makespan":
      return figureMakespan(rows, logX, logY);
  }
}

export interface FitReport {
  savings_fit: Record<string, { degree2: { coefficients: number[] } }>;
}

/**
 * Compare locally computed savings fits against the simulator's report.
 * Returns human-readable mismatch descriptions; anything beyond 1%
 * relative on a coefficient is a failure.
 */
export function crossCheckFits(local: SavingsFitSummary[], report: FitReport, tolerance = 0.01): string[] {
  const problems: string[] = [];
  for (const { strategy, fit } of local) {
    const reported = report.savings_fit?.[strategy]?.degree2?.coefficients;
    if (!reported) {
      problems.push(`fit report has no degree-2 coefficients for ${strategy}`);
      continue;
    }
    const gap = maxRelativeCoefficientGap(fit.coefficients, reported);
    if (gap > tolerance) {
      problems.push(
        `${strategy}: plot fit [${fit.coefficients.map((c) => c.toPrecision(6)).join(", ")}] ` +
          `differs from report [${reported.map((c) => c.toPrecision(6)).join(", ")}] by ${(gap * 100).toFixed(2)}%`,
      );
    }
  }
  return problems;
}
