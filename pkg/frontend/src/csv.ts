import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Column-oriented view of a numeric CSV. */
export interface NumericTable {
  columns: string[];
  length: number;
  data: Record<string, Float64Array>;
}

export class SchemaError extends Error {}

/**
 * Load a CSV written by the collision-spin CLI: one header line, numeric
 * cells, LF endings. Anything that does not parse as a finite number is a
 * schema problem, not data to be skipped.
 */
export function readCsv(path: string): NumericTable {
  const text = readFileSync(path, "utf-8");
  return parseCsv(text, path);
}

export function parseCsv(text: string, label = "<string>"): NumericTable {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`${label}: malformed CSV (${first.message})`);
  }
  const columns = (parsed.meta.fields ?? []).filter((f) => f.length > 0);
  if (columns.length === 0) {
    throw new SchemaError(`${label}: no header line`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError(`${label}: no data rows`);
  }
  const data: Record<string, Float64Array> = {};
  for (const col of columns) {
    data[col] = new Float64Array(rows.length);
  }
  rows.forEach((row, i) => {
    for (const col of columns) {
      const value = Number(row[col]);
      if (!Number.isFinite(value)) {
        throw new SchemaError(
          `${label}: row ${i + 2}, column "${col}": not a finite number (${row[col]})`,
        );
      }
      data[col][i] = value;
    }
  });
  return { columns, length: rows.length, data };
}

/** Assert the named columns exist; the error lists every missing one. */
export function requireColumns(table: NumericTable, names: string[], context: string): void {
  const missing = names.filter((n) => !(n in table.data));
  if (missing.length > 0) {
    throw new SchemaError(
      `${context}: missing column${missing.length > 1 ? "s" : ""} ${missing
        .map((n) => `"${n}"`)
        .join(", ")} (have: ${table.columns.join(", ")})`,
    );
  }
}
