#!/usr/bin/env node
"use strict";
/**
 * plot --input results.csv --figure {recompute|savings|makespan|all}
 *      --out-dir figs/ [--fit-report fit_report.json] [--log-x] [--log-y]
 *
 * Exit codes: 0 ok, 1 usage, 2 schema/input error, 3 fit cross-check failed.
 */
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
Object.defineProperty(exports, "__esModule", { value: true });
exports.main = main;
const fs = __importStar(require("node:fs"));
const path = __importStar(require("node:path"));
const csv_1 = require("./csv");
const figures_1 = require("./figures");
function parseArgs(argv) {
    const args = { input: "", figure: "all", outDir: "figs", logX: false, logY: false };
    for (let i = 0; i < argv.length; i++) {
        const flag = argv[i];
        const next = () => {
            i += 1;
            if (i >= argv.length)
                throw new Error(`missing value for ${flag}`);
            return argv[i];
        };
        switch (flag) {
            case "--input":
                args.input = next();
                break;
            case "--figure":
                args.figure = next();
                break;
            case "--out-dir":
                args.outDir = next();
                break;
            case "--fit-report":
                args.fitReport = next();
                break;
            case "--log-x":
                args.logX = true;
                break;
            case "--log-y":
                args.logY = true;
                break;
            case "--help":
            case "-h":
                console.log("usage: plot --input results.csv [--figure recompute|savings|makespan|all] " +
                    "[--out-dir figs/] [--fit-report fit_report.json] [--log-x] [--log-y]");
                process.exit(0);
                break;
            default:
                throw new Error(`unknown flag: ${flag}`);
        }
    }
    if (!args.input)
        throw new Error("--input is required");
    if (args.figure !== "all" && !figures_1.FIGURES.includes(args.figure)) {
        throw new Error(`--figure must be one of ${figures_1.FIGURES.join(", ")}, all`);
    }
    return args;
}
function main(argv) {
    let args;
    try {
        args = parseArgs(argv);
    }
    catch (err) {
        console.error(`usage error: ${err.message}`);
        return 1;
    }
    let rows;
    try {
        rows = (0, csv_1.parseResultsCsv)(fs.readFileSync(args.input, "utf8"));
    }
    catch (err) {
        if (err instanceof csv_1.SchemaError) {
            console.error(`schema error: ${err.message}`);
            return 2;
        }
        console.error(`cannot read ${args.input}: ${err.message}`);
        return 2;
    }
    const wanted = args.figure === "all" ? [...figures_1.FIGURES] : [args.figure];
    fs.mkdirSync(args.outDir, { recursive: true });
    for (const name of wanted) {
        let svg;
        try {
            svg = (0, figures_1.renderFigure)(name, rows, args.logX, args.logY);
        }
        catch (err) {
            console.error(`cannot render ${name}: ${err.message}`);
            return 2;
        }
        const file = path.join(args.outDir, `${name}.svg`);
        fs.writeFileSync(file, svg);
        console.log(`wrote ${file}`);
    }
    if (args.fitReport) {
        const report = JSON.parse(fs.readFileSync(args.fitReport, "utf8"));
        const problems = (0, figures_1.crossCheckFits)((0, figures_1.savingsFits)(rows), report);
        if (problems.length > 0) {
            for (const p of problems)
                console.error(`fit cross-check: ${p}`);
            return 3;
        }
        console.log("fit cross-check against the simulator report: ok (within 1%)");
    }
    return 0;
}
if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
