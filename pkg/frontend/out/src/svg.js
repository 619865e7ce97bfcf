"use strict";
/** Tiny deterministic SVG chart renderer: line series, whiskers, legend. */
Object.defineProperty(exports, "__esModule", { value: true });
exports.renderChart = renderChart;
const MARGIN = { left: 86, right: 24, top: 44, bottom: 58 };
function esc(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
function niceTicks(lo, hi, count = 6) {
    if (!(hi > lo))
        return [lo];
    const span = hi - lo;
    const step0 = span / Math.max(count - 1, 1);
    const mag = Math.pow(10, Math.floor(Math.log10(step0)));
    let step = mag;
    for (const mult of [1, 2, 5, 10]) {
        if (mag * mult >= step0) {
            step = mag * mult;
            break;
        }
    }
    const start = Math.ceil(lo / step) * step;
    const ticks = [];
    for (let v = start; v <= hi + 1e-9 * span; v += step)
        ticks.push(v);
    return ticks;
}
function logTicks(lo, hi) {
    const ticks = [];
    for (let p = Math.floor(Math.log10(lo)); p <= Math.ceil(Math.log10(hi)); p++) {
        const v = Math.pow(10, p);
        if (v >= lo / 1.0001 && v <= hi * 1.0001)
            ticks.push(v);
    }
    return ticks.length >= 2 ? ticks : niceTicks(lo, hi);
}
function fmt(value) {
    if (value === 0)
        return "0";
    const abs = Math.abs(value);
    if (abs >= 1e5 || abs < 1e-2)
        return value.toExponential(1).replace("e+", "e");
    return Number(value.toPrecision(4)).toString();
}
function renderChart(spec) {
    const width = spec.width ?? 860;
    const height = spec.height ?? 540;
    const plotW = width - MARGIN.left - MARGIN.right;
    const plotH = height - MARGIN.top - MARGIN.bottom;
    const xs = [];
    const ys = [];
    for (const series of spec.series) {
        for (const p of series.points) {
            xs.push(p.x);
            ys.push(p.y, p.lo ?? p.y, p.hi ?? p.y);
        }
        for (const p of series.overlay ?? []) {
            xs.push(p.x);
            ys.push(p.y);
        }
    }
    let xLo = Math.min(...xs);
    let xHi = Math.max(...xs);
    let yLo = Math.min(...ys);
    let yHi = Math.max(...ys);
    if (spec.logX)
        xLo = Math.max(xLo, 1e-12);
    if (spec.logY)
        yLo = Math.max(yLo, 1e-12);
    if (xLo === xHi)
        [xLo, xHi] = [xLo - 1, xHi + 1];
    if (yLo === yHi)
        [yLo, yHi] = [yLo - 1, yHi + 1];
    if (!spec.logY) {
        const pad = 0.06 * (yHi - yLo);
        yLo = Math.min(yLo, 0) === 0 && yLo >= 0 ? 0 : yLo - pad;
        yHi += pad;
    }
    const sx = (x) => {
        const t = spec.logX
            ? (Math.log10(x) - Math.log10(xLo)) / (Math.log10(xHi) - Math.log10(xLo))
            : (x - xLo) / (xHi - xLo);
        return MARGIN.left + t * plotW;
    };
    const sy = (y) => {
        const t = spec.logY
            ? (Math.log10(y) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))
            : (y - yLo) / (yHi - yLo);
        return MARGIN.top + (1 - t) * plotH;
    };
    const parts = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`, `<rect width="${width}" height="${height}" fill="white"/>`, `<text x="${width / 2}" y="24" text-anchor="middle" font-size="17">${esc(spec.title)}</text>`);
    const xTicks = spec.logX ? logTicks(xLo, xHi) : niceTicks(xLo, xHi);
    const yTicks = spec.logY ? logTicks(yLo, yHi) : niceTicks(yLo, yHi);
    for (const t of xTicks) {
        const x = sx(t);
        parts.push(`<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" stroke="#e5e5e5"/>`, `<text x="${x}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-size="12">${fmt(t)}</text>`);
    }
    for (const t of yTicks) {
        const y = sy(t);
        parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#e5e5e5"/>`, `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-size="12">${fmt(t)}</text>`);
    }
    parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`, `<text x="${MARGIN.left + plotW / 2}" y="${height - 14}" text-anchor="middle" font-size="14">${esc(spec.xLabel)}</text>`, `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`);
    for (const series of spec.series) {
        const pts = series.points.map((p) => `${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`).join(" ");
        for (const p of series.points) {
            if (p.lo === undefined || p.hi === undefined || p.lo === p.hi)
                continue;
            const x = sx(p.x);
            parts.push(`<line x1="${x}" y1="${sy(p.lo)}" x2="${x}" y2="${sy(p.hi)}" stroke="${series.color}" stroke-width="1"/>`, `<line x1="${x - 4}" y1="${sy(p.lo)}" x2="${x + 4}" y2="${sy(p.lo)}" stroke="${series.color}" stroke-width="1"/>`, `<line x1="${x - 4}" y1="${sy(p.hi)}" x2="${x + 4}" y2="${sy(p.hi)}" stroke="${series.color}" stroke-width="1"/>`);
        }
        parts.push(`<polyline points="${pts}" fill="none" stroke="${series.color}" stroke-width="2"/>`);
        for (const p of series.points) {
            parts.push(`<circle cx="${sx(p.x).toFixed(2)}" cy="${sy(p.y).toFixed(2)}" r="3.5" fill="${series.color}"/>`);
        }
        if (series.overlay && series.overlay.length > 1) {
            const overlay = series.overlay
                .filter((p) => (!spec.logY || p.y > 0) && (!spec.logX || p.x > 0))
                .map((p) => `${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`)
                .join(" ");
            parts.push(`<polyline points="${overlay}" fill="none" stroke="${series.color}" stroke-width="1.5" stroke-dasharray="6 4"/>`);
        }
    }
    const legendEntries = [];
    for (const series of spec.series) {
        legendEntries.push({ color: series.color, label: series.label, dashed: false });
        if (series.overlay && series.overlayLabel) {
            legendEntries.push({ color: series.color, label: series.overlayLabel, dashed: true });
        }
    }
    const legendW = 10 + Math.max(...legendEntries.map((e) => e.label.length)) * 6.6 + 34;
    parts.push(`<rect x="${MARGIN.left + 12}" y="${MARGIN.top + 10}" width="${legendW}" height="${legendEntries.length * 18 + 10}" fill="white" fill-opacity="0.85" stroke="#999"/>`);
    legendEntries.forEach((entry, i) => {
        const y = MARGIN.top + 24 + i * 18;
        parts.push(`<line x1="${MARGIN.left + 20}" y1="${y}" x2="${MARGIN.left + 44}" y2="${y}" stroke="${entry.color}" stroke-width="2"${entry.dashed ? ' stroke-dasharray="6 4"' : ""}/>`, `<text x="${MARGIN.left + 50}" y="${y + 4}" font-size="12">${esc(entry.label)}</text>`);
    });
    parts.push("</svg>");
    return parts.join("\n");
}
