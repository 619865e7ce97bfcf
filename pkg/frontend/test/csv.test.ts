import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as path from "node:path";
import { test } from "node:test";

import { parseResultsCsv, SchemaError } from "../src/csv";

const FIXTURE = path.join(__dirname, "..", "..", "test", "fixtures", "results.csv");

test("parses the simulator's CSV fixture", () => {
  const rows = parseResultsCsv(fs.readFileSync(FIXTURE, "utf8"));
  assert.equal(rows.length, 4 * 6 * 3); // 4 node counts x 6 seeds x 3 strategies
  const strategies = new Set(rows.map((r) => r.strategy));
  assert.deepEqual([...strategies].sort(), ["dfr-min", "global", "log"]);
  for (const row of rows) {
    assert.ok(Number.isInteger(row.n) && row.n > 0);
    assert.ok(row.makespan_s > 0);
    if (row.strategy === "global") assert.equal(row.projected_savings_J, 0);
  }
});

test("rejects a missing schema line with expected/found versions", () => {
  assert.throws(
    () => parseResultsCsv("strategy,n\na,1\n"),
    (err: Error) => err instanceof SchemaError && /stencil-rollback-results v1/.test(err.message),
  );
});

test("rejects an unsupported schema version", () => {
  const text = "# stencil-rollback-results v99 | generated=x\nstrategy\n";
  assert.throws(
    () => parseResultsCsv(text),
    (err: Error) =>
      err instanceof SchemaError && /expected "stencil-rollback-results v1", found "stencil-rollback-results v99"/.test(err.message),
  );
});

test("rejects an empty results file", () => {
  const lines = fs.readFileSync(FIXTURE, "utf8").split("\n").slice(0, 2).join("\n");
  assert.throws(() => parseResultsCsv(lines), /no data rows/);
});

test("rejects malformed numeric fields", () => {
  const good = fs.readFileSync(FIXTURE, "utf8").split("\n");
  const bad = [...good.slice(0, 2), good[2].replace(/^global,10/, "global,ten")].join("\n");
  assert.throws(() => parseResultsCsv(bad), /bad n/);
});
