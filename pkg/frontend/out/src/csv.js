"use strict";
/**
 * Parser for the versioned results CSV written by the simulator CLI.
 *
 * Line 1 is a metadata comment carrying the schema tag, line 2 the column
 * header, and every further line one (strategy, n, seed) run.  Any other
 * shape is rejected with the expected/found versions in the message.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.SchemaError = exports.COLUMNS = exports.SUPPORTED_SCHEMA = void 0;
exports.parseResultsCsv = parseResultsCsv;
exports.SUPPORTED_SCHEMA = "stencil-rollback-results v1";
exports.COLUMNS = [
    "strategy",
    "n",
    "seed",
    "failures_fired",
    "recomputed_tasks",
    "makespan_s",
    "total_energy_J",
    "projected_savings_J",
    "config_hash",
];
class SchemaError extends Error {
}
exports.SchemaError = SchemaError;
function parseResultsCsv(text) {
    const lines = text.split(/\r?\n/);
    const header = lines[0] ?? "";
    const match = header.match(/^# (stencil-rollback-results v\d+)/);
    if (!match) {
        throw new SchemaError(`missing results schema line (expected "${exports.SUPPORTED_SCHEMA}", found ${JSON.stringify(header.slice(0, 60))})`);
    }
    if (match[1] !== exports.SUPPORTED_SCHEMA) {
        throw new SchemaError(`unsupported schema: expected "${exports.SUPPORTED_SCHEMA}", found "${match[1]}"`);
    }
    if ((lines[1] ?? "") !== exports.COLUMNS.join(",")) {
        throw new SchemaError(`unexpected column header: ${JSON.stringify(lines[1] ?? "")}`);
    }
    const rows = [];
    for (let i = 2; i < lines.length; i++) {
        const line = lines[i].trim();
        if (!line)
            continue;
        const parts = line.split(",");
        if (parts.length !== exports.COLUMNS.length) {
            throw new SchemaError(`line ${i + 1}: expected ${exports.COLUMNS.length} fields, found ${parts.length}`);
        }
        const num = (field, index) => {
            const value = Number(parts[index]);
            if (!Number.isFinite(value)) {
                throw new SchemaError(`line ${i + 1}: bad ${field}: ${JSON.stringify(parts[index])}`);
            }
            return value;
        };
        rows.push({
            strategy: parts[0],
            n: num("n", 1),
            seed: num("seed", 2),
            failures_fired: num("failures_fired", 3),
            recomputed_tasks: num("recomputed_tasks", 4),
            makespan_s: num("makespan_s", 5),
            total_energy_J: num("total_energy_J", 6),
            projected_savings_J: num("projected_savings_J", 7),
            config_hash: parts[8],
        });
    }
    if (rows.length === 0) {
        throw new SchemaError("results file contains no data rows");
    }
    return rows;
}
