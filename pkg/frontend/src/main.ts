#!/usr/bin/env node
/**
 * plot --input results.csv --figure {recompute|savings|makespan|all}
 *      --out-dir figs/ [--fit-report fit_report.json] [--log-x] [--log-y]
 *
 * Exit codes: 0 ok, 1 usage, 2 schema/input error, 3 fit cross-check failed.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseResultsCsv, SchemaError } from "./csv";
import { crossCheckFits, FIGURES, FigureName, renderFigure, savingsFits } from "./figures";

interface Args {
  input: string;
  figure: string;
  outDir: string;
  fitReport?: string;
  logX: boolean;
  logY: boolean;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { input: "", figure: "all", outDir: "figs", logX: false, logY: false };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${flag}`);
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
        console.log(
          "usage: plot --input results.csv [--figure recompute|savings|makespan|all] " +
            "[--out-dir figs/] [--fit-report fit_report.json] [--log-x] [--log-y]",
        );
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag: ${flag}`);
    }
  }
  if (!args.input) throw new Error("--input is required");
  if (args.figure !== "all" && !FIGURES.includes(args.figure as FigureName)) {
    throw new Error(`--figure must be one of ${FIGURES.join(", ")}, all`);
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }

  let rows;
  try {
    rows = parseResultsCsv(fs.readFileSync(args.input, "utf8"));
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(`cannot read ${args.input}: ${(err as Error).message}`);
    return 2;
  }

  const wanted: FigureName[] = args.figure === "all" ? [...FIGURES] : [args.figure as FigureName];
  fs.mkdirSync(args.outDir, { recursive: true });
  for (const name of wanted) {
    let svg: string;
    try {
      svg = renderFigure(name, rows, args.logX, args.logY);
    } catch (err) {
      console.error(`cannot render ${name}: ${(err as Error).message}`);
      return 2;
    }
    const file = path.join(args.outDir, `${name}.svg`);
    fs.writeFileSync(file, svg);
    console.log(`wrote ${file}`);
  }

  if (args.fitReport) {
    const report = JSON.parse(fs.readFileSync(args.fitReport, "utf8"));
    const problems = crossCheckFits(savingsFits(rows), report);
    if (problems.length > 0) {
      for (const p of problems) console.error(`fit cross-check: ${p}`);
      return 3;
    }
    console.log("fit cross-check against the simulator report: ok (within 1%)");
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
