export const CSV_HEADER = "sweep_param,sweep_value,arm,metric,mean,stderr,trials";

export interface ResultRow {
  sweepParam: string;
  sweepValue: number;
  arm: string;
  metric: string;
  mean: number;
  stderr: number;
  trials: number;
}

/** Raised for anything that should abort rendering with exit code 2. */
export class CsvError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CsvError";
  }
}

function parseNumber(field: string, value: string, line: number): number {
  // Number("") === 0 and Number("  ") === 0, so reject blanks explicitly.
  if (value.trim() === "") {
    throw new CsvError(`line ${line}: empty ${field} field`);
  }
  const n = Number(value);
  if (!Number.isFinite(n)) {
    throw new CsvError(`line ${line}: ${field} is not a finite number: "${value}"`);
  }
  return n;
}

/**
 * Parse a results CSV. The header must match CSV_HEADER exactly; every data
 * row must have 7 fields with numeric sweep_value/mean/stderr/trials.
 * An empty table (header only) is an error: there is nothing to plot.
 */
export function parseResultsCsv(text: string): ResultRow[] {
  const lines = text.split("\n").map((l) => l.replace(/\r$/, ""));
  while (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvError("empty file");
  }
  if (lines[0] !== CSV_HEADER) {
    throw new CsvError(`header mismatch: expected "${CSV_HEADER}", got "${lines[0]}"`);
  }
  if (lines.length === 1) {
    throw new CsvError("no data rows");
  }
  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== 7) {
      throw new CsvError(`line ${i + 1}: expected 7 fields, got ${fields.length}`);
    }
    const trials = parseNumber("trials", fields[6], i + 1);
    if (!Number.isInteger(trials) || trials < 0) {
      throw new CsvError(`line ${i + 1}: trials must be a non-negative integer`);
    }
    rows.push({
      sweepParam: fields[0],
      sweepValue: parseNumber("sweep_value", fields[1], i + 1),
      arm: fields[2],
      metric: fields[3],
      mean: parseNumber("mean", fields[4], i + 1),
      stderr: parseNumber("stderr", fields[5], i + 1),
      trials,
    });
  }
  return rows;
}

export interface Series {
  arm: string;
  x: number[];
  y: number[];
  err: number[];
}

/** Group rows into one series per arm, preserving first-appearance order. */
export function groupByArm(rows: ResultRow[]): Series[] {
  const byArm = new Map<string, Series>();
  for (const row of rows) {
    let s = byArm.get(row.arm);
    if (!s) {
      s = { arm: row.arm, x: [], y: [], err: [] };
      byArm.set(row.arm, s);
    }
    s.x.push(row.sweepValue);
    s.y.push(row.mean);
    s.err.push(row.stderr);
  }
  return [...byArm.values()];
}
