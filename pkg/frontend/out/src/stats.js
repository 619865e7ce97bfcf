"use strict";
/** Per-(strategy, n) aggregation of result rows across seeds. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.strategies = strategies;
exports.seriesFor = seriesFor;
function strategies(rows) {
    return [...new Set(rows.map((r) => r.strategy))].sort();
}
function seriesFor(rows, strategy, metric) {
    const byN = new Map();
    for (const row of rows) {
        if (row.strategy !== strategy)
            continue;
        const bucket = byN.get(row.n) ?? [];
        bucket.push(row[metric]);
        byN.set(row.n, bucket);
    }
    const points = [];
    for (const [n, values] of [...byN.entries()].sort((a, b) => a[0] - b[0])) {
        const mean = values.reduce((acc, v) => acc + v, 0) / values.length;
        points.push({ n, mean, min: Math.min(...values), max: Math.max(...values) });
    }
    return points;
}
