/**
 * CSV access for the excitonqfi output schemas.
 *
 * Cells are kept as the exact strings from the file; numeric views are parsed
 * on demand. Checksums are sha256 over the raw cell strings joined with "\n",
 * so any mutation, reordering, or dropped row of a plotted array is
 * detectable against the same selection recomputed straight from the file.
 */

import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface CsvTable {
  path: string;
  header: string[];
  /** Row-major raw cells, exactly as they appear in the file. */
  rows: string[][];
}

export class CsvError extends Error {}

export function readCsv(path: string): CsvTable {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new CsvError(`${path}: ${parsed.errors[0].message}`);
  }
  const [header, ...rows] = parsed.data;
  if (!header || header.length === 0) {
    throw new CsvError(`${path}: empty CSV`);
  }
  if (rows.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  return { path, header, rows };
}

export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(
      `${table.path}: missing column "${name}" (have: ${table.header.join(", ")})`,
    );
  }
  return idx;
}

export interface RowFilter {
  column: string;
  value: string;
}

/** Raw strings of a column, optionally restricted to rows matching a filter,
 *  in file order. */
export function rawColumn(
  table: CsvTable,
  name: string,
  filter?: RowFilter,
): string[] {
  const idx = columnIndex(table, name);
  let rows = table.rows;
  if (filter) {
    const fidx = columnIndex(table, filter.column);
    rows = rows.filter((row) => row[fidx] === filter.value);
  }
  return rows.map((row) => row[idx]);
}

export function toNumbers(path: string, name: string, raw: string[]): number[] {
  return raw.map((cell) => {
    const value = Number(cell);
    if (!Number.isFinite(value)) {
      throw new CsvError(`${path}: column "${name}" has non-numeric cell "${cell}"`);
    }
    return value;
  });
}

export function checksumStrings(values: string[]): string {
  return createHash("sha256").update(values.join("\n")).digest("hex");
}

export function checksumFile(path: string): string {
  return createHash("sha256").update(readFileSync(path)).digest("hex");
}
