"use strict";
var __createBinding = (this && this.__createBinding) || (Object.create ? (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    var desc = Object.getOwnPropertyDescriptor(m, k);
    if (!desc || ("get" in desc ? !m.__esModule : desc.writable || desc.configurable)) {
      desc = { enumerable: true, get: function() { return m[k]; } };
    }
    Object.defineProperty(o, k2, desc);
}) : (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    o[k2] = m[k];
}));
var __setModuleDefault = (this && this.__setModuleDefault) || (Object.create ? (function(o, v) {
    Object.defineProperty(o, "default", { enumerable: true, value: v });
}) : function(o, v) {
    o["default"] = v;
});
var __importStar = (this && this.__importStar) || (function () {
    var ownKeys = function(o) {
        ownKeys = Object.getOwnPropertyNames || function (o) {
            var ar = [];
            for (var k in o) if (Object.prototype.hasOwnProperty.call(o, k)) ar[ar.length] = k;
            return ar;
        };
        return ownKeys(o);
    };
    return function (mod) {
        if (mod && mod.__esModule) return mod;
        var result = {};
        if (mod != null) for (var k = ownKeys(mod), i = 0; i < k.length; i++) if (k[i] !== "default") __createBinding(result, mod, k[i]);
        __setModuleDefault(result, mod);
        return result;
    };
})();
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const fs = __importStar(require("node:fs"));
const os = __importStar(require("node:os"));
const path = __importStar(require("node:path"));
const node_test_1 = require("node:test");
const csv_1 = require("../src/csv");
const figures_1 = require("../src/figures");
const main_1 = require("../src/main");
const stats_1 = require("../src/stats");
const FIXTURES = path.join(__dirname, "..", "..", "test", "fixtures");
const rows = (0, csv_1.parseResultsCsv)(fs.readFileSync(path.join(FIXTURES, "results.csv"), "utf8"));
(0, node_test_1.test)("recompute figure has one series per strategy", () => {
    const svg = (0, figures_1.figureRecompute)(rows);
    strict_1.default.match(svg, /<svg /);
    const polylines = svg.match(/<polyline /g) ?? [];
    strict_1.default.equal(polylines.length, 3); // global, dfr-min, log
    for (const label of ["global", "dfr-min", "log"]) {
        strict_1.default.ok(svg.includes(`>${label}</text>`), `legend entry for ${label}`);
    }
});
(0, node_test_1.test)("savings figure overlays the degree-2 fit with coefficients in the legend", () => {
    const svg = (0, figures_1.figureSavings)(rows);
    strict_1.default.match(svg, /stroke-dasharray/); // the fit overlay
    strict_1.default.match(svg, /fit: .*n\^2/);
    // the leading coefficient shown must be positive (quadratic growth)
    const fits = (0, figures_1.savingsFits)(rows);
    for (const { fit } of fits)
        strict_1.default.ok(fit.coefficients[0] > 0);
});
(0, node_test_1.test)("makespan figure renders whiskers from seed spread", () => {
    const svg = (0, figures_1.figureMakespan)(rows);
    const whiskers = svg.match(/stroke-width="1"\/>/g) ?? [];
    strict_1.default.ok(whiskers.length > 0);
});
(0, node_test_1.test)("mean aggregation matches a hand computation", () => {
    const manual = rows
        .filter((r) => r.strategy === "log" && r.n === 20)
        .map((r) => r.projected_savings_J);
    const mean = manual.reduce((a, b) => a + b, 0) / manual.length;
    const points = (0, stats_1.seriesFor)(rows, "log", "projected_savings_J");
    const p20 = points.find((p) => p.n === 20);
    strict_1.default.ok(Math.abs(p20.mean - mean) < 1e-9);
    strict_1.default.equal(p20.min, Math.min(...manual));
    strict_1.default.equal(p20.max, Math.max(...manual));
});
(0, node_test_1.test)("plot fits agree with the simulator's fit report within 1%", () => {
    const report = JSON.parse(fs.readFileSync(path.join(FIXTURES, "fit_report.json"), "utf8"));
    const problems = (0, figures_1.crossCheckFits)((0, figures_1.savingsFits)(rows), report);
    strict_1.default.deepEqual(problems, []);
});
(0, node_test_1.test)("cross-check flags coefficients off by more than 1%", () => {
    const report = JSON.parse(fs.readFileSync(path.join(FIXTURES, "fit_report.json"), "utf8"));
    const tampered = structuredClone(report);
    tampered.savings_fit["dfr-min"].degree2.coefficients[0] *= 1.05;
    const problems = (0, figures_1.crossCheckFits)((0, figures_1.savingsFits)(rows), tampered);
    strict_1.default.equal(problems.length, 1);
    strict_1.default.match(problems[0], /dfr-min/);
});
(0, node_test_1.test)("end-to-end CLI writes the three figures and verifies fits", () => {
    const outDir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
    const code = (0, main_1.main)([
        "--input", path.join(FIXTURES, "results.csv"),
        "--figure", "all",
        "--out-dir", outDir,
        "--fit-report", path.join(FIXTURES, "fit_report.json"),
    ]);
    strict_1.default.equal(code, 0);
    for (const name of ["recompute", "savings", "makespan"]) {
        const file = path.join(outDir, `${name}.svg`);
        strict_1.default.ok(fs.existsSync(file), `${file} exists`);
        strict_1.default.match(fs.readFileSync(file, "utf8"), /^<svg /);
    }
});
(0, node_test_1.test)("CLI rejects a schema mismatch and writes nothing", () => {
    const outDir = fs.mkdtempSync(path.join(os.tmpdir(), "plots-bad-"));
    const badCsv = path.join(outDir, "bad.csv");
    fs.writeFileSync(badCsv, "# some-other-format v3\nstrategy\n");
    const code = (0, main_1.main)(["--input", badCsv, "--figure", "all", "--out-dir", outDir]);
    strict_1.default.equal(code, 2);
    strict_1.default.ok(!fs.existsSync(path.join(outDir, "recompute.svg")));
});
(0, node_test_1.test)("CLI usage errors exit 1", () => {
    strict_1.default.equal((0, main_1.main)(["--figure", "savings"]), 1);
    strict_1.default.equal((0, main_1.main)(["--input", "x.csv", "--figure", "nosuch"]), 1);
});
