/**
 * Result-CSV contract shared with the simulator CLI.
 *
 * The header is fixed; any deviation is rejected up front so a schema drift
 * fails loudly instead of producing a silently wrong figure.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";

export const CSV_HEADER = [
  "experiment", "method", "a", "b", "M", "K", "L", "tau", "p_f_db", "p_r_db",
  "gamma", "seed", "trials", "cell", "user", "rate", "stderr", "min_rate",
  "closed_form", "error",
] as const;

export class SchemaMismatch extends Error {}

const num = z.number();
const numOrNull = z.number().nullable();

export const ResultRowSchema = z.object({
  experiment: z.string(),
  method: z.string(),
  a: num,
  b: num,
  M: num.int(),
  K: num.int(),
  L: num.int(),
  tau: num.int(),
  p_f_db: num,
  p_r_db: num,
  gamma: num,
  seed: num.int(),
  trials: num.int(),
  cell: numOrNull,
  user: numOrNull,
  rate: numOrNull,
  stderr: numOrNull,
  min_rate: numOrNull,
  closed_form: numOrNull,
  error: z.string().nullable(),
});

export type ResultRow = z.infer<typeof ResultRowSchema>;

const STRING_COLUMNS = new Set(["experiment", "method", "error"]);

export function parseResultsCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaMismatch(`CSV parse error at row ${first.row}: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of CSV_HEADER) {
    if (!fields.includes(column)) {
      throw new SchemaMismatch(`missing required column: ${column}`);
    }
  }
  return parsed.data.map((raw, i) => {
    const converted: Record<string, unknown> = {};
    for (const column of CSV_HEADER) {
      const value = raw[column];
      if (STRING_COLUMNS.has(column)) {
        converted[column] = value === "" ? null : value;
        if (column !== "error" && value === "") {
          throw new SchemaMismatch(`row ${i + 1}: empty ${column}`);
        }
      } else {
        converted[column] = value === "" ? null : Number(value);
      }
    }
    const row = ResultRowSchema.safeParse(converted);
    if (!row.success) {
      throw new SchemaMismatch(`row ${i + 1}: ${row.error.issues[0].message}`);
    }
    return row.data;
  });
}

export function readResultsCsv(path: string): ResultRow[] {
  return parseResultsCsv(readFileSync(path, "utf-8"));
}
