"use strict";
/**
 * The three weak-scaling figures rendered from a results CSV:
 * recomputed work vs n, projected savings vs n with the degree-2 fit
 * overlaid (coefficients in the legend), and makespan vs n.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.FIGURES = void 0;
exports.figureRecompute = figureRecompute;
exports.savingsFits = savingsFits;
exports.figureSavings = figureSavings;
exports.figureMakespan = figureMakespan;
exports.renderFigure = renderFigure;
exports.crossCheckFits = crossCheckFits;
const polyfit_1 = require("./polyfit");
const stats_1 = require("./stats");
const svg_1 = require("./svg");
exports.FIGURES = ["recompute", "savings", "makespan"];
const PALETTE = {
    global: "#1f77b4",
    "dfr-min": "#2ca02c",
    "dfr-rect": "#17becf",
    log: "#d62728",
};
function color(strategy, index) {
    const fallback = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];
    return PALETTE[strategy] ?? fallback[index % fallback.length];
}
function toSeries(strategy, index, points) {
    return {
        label: strategy,
        color: color(strategy, index),
        points: points.map((p) => ({ x: p.n, y: p.mean, lo: p.min, hi: p.max })),
    };
}
function coefficientLabel(fit) {
    const [a, b, c] = fit.coefficients.map((v) => v.toPrecision(4));
    return `fit: ${a}*n^2 ${Number(b) >= 0 ? "+" : "-"} ${Math.abs(Number(b)).toPrecision(4)}*n ${Number(c) >= 0 ? "+" : "-"} ${Math.abs(Number(c)).toPrecision(4)} (R2=${fit.r2.toFixed(3)})`;
}
function figureRecompute(rows, logX = false, logY = false) {
    const series = (0, stats_1.strategies)(rows).map((s, i) => toSeries(s, i, (0, stats_1.seriesFor)(rows, s, "recomputed_tasks")));
    return (0, svg_1.renderChart)({
        title: "Recomputed tasks per run (mean over seeds, min-max whiskers)",
        xLabel: "processes n",
        yLabel: "recomputed tasks",
        series,
        logX,
        logY,
    });
}
function savingsFits(rows) {
    const out = [];
    for (const strategy of (0, stats_1.strategies)(rows)) {
        if (strategy === "global")
            continue;
        const points = (0, stats_1.seriesFor)(rows, strategy, "projected_savings_J");
        if (points.length < 3)
            continue;
        out.push({
            strategy,
            fit: (0, polyfit_1.polyfit)(points.map((p) => p.n), points.map((p) => p.mean), 2),
        });
    }
    return out;
}
function figureSavings(rows, logX = false, logY = false) {
    const series = [];
    let index = 0;
    for (const strategy of (0, stats_1.strategies)(rows)) {
        if (strategy === "global")
            continue; // savings are measured against global
        const points = (0, stats_1.seriesFor)(rows, strategy, "projected_savings_J");
        const chartSeries = toSeries(strategy, index, points);
        if (points.length >= 3) {
            const fit = (0, polyfit_1.polyfit)(points.map((p) => p.n), points.map((p) => p.mean), 2);
            const lo = points[0].n;
            const hi = points[points.length - 1].n;
            const overlay = [];
            for (let k = 0; k <= 100; k++) {
                const x = lo + ((hi - lo) * k) / 100;
                overlay.push({ x, y: (0, polyfit_1.polyval)(fit.coefficients, x) });
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
    return (0, svg_1.renderChart)({
        title: "Projected energy savings vs global rollback",
        xLabel: "processes n",
        yLabel: "projected savings [J]",
        series,
        logX,
        logY,
    });
}
function figureMakespan(rows, logX = false, logY = false) {
    const series = (0, stats_1.strategies)(rows).map((s, i) => toSeries(s, i, (0, stats_1.seriesFor)(rows, s, "makespan_s")));
    return (0, svg_1.renderChart)({
        title: "Total runtime (mean over seeds, min-max whiskers)",
        xLabel: "processes n",
        yLabel: "makespan [s]",
        series,
        logX,
        logY,
    });
}
function renderFigure(name, rows, logX, logY) {
    switch (name) {
        case "recompute":
            return figureRecompute(rows, logX, logY);
        case "savings":
            return figureSavings(rows, logX, logY);
        case "makespan":
            return figureMakespan(rows, logX, logY);
    }
}
/**
 * Compare locally computed savings fits against the simulator's report.
 * Returns human-readable mismatch descriptions; anything beyond 1%
 * relative on a coefficient is a failure.
 */
function crossCheckFits(local, report, tolerance = 0.01) {
    const problems = [];
    for (const { strategy, fit } of local) {
        const reported = report.savings_fit?.[strategy]?.degree2?.coefficients;
        if (!reported) {
            problems.push(`fit report has no degree-2 coefficients for ${strategy}`);
            continue;
        }
        const gap = (0, polyfit_1.maxRelativeCoefficientGap)(fit.coefficients, reported);
        if (gap > tolerance) {
            problems.push(`${strategy}: plot fit [${fit.coefficients.map((c) => c.toPrecision(6)).join(", ")}] ` +
                `differs from report [${reported.map((c) => c.toPrecision(6)).join(", ")}] by ${(gap * 100).toFixed(2)}%`);
        }
    }
    return problems;
}
