import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { CSV_HEADER, CsvError, groupByArm, parseResultsCsv } from "../src/csv.js";

const FIXTURES = new URL("../fixtures/", import.meta.url);

function fixture(name: string): string {
  return readFileSync(new URL(name, FIXTURES), "utf8");
}

describe("parseResultsCsv", () => {
  it("parses the cdp fixture", () => {
    const rows = parseResultsCsv(fixture("cdp.csv"));
    expect(rows.length).toBe(78);
    expect(rows[0]).toEqual({
      sweepParam: "jammer_power_dbw",
      sweepValue: -20.0,
      arm: "g6_nd1",
      metric: "cdp",
      mean: 1.0,
      stderr: 0.0,
      trials: 20,
    });
    for (const r of rows) {
      expect(r.mean).toBeGreaterThanOrEqual(0);
      expect(r.mean).toBeLessThanOrEqual(1);
    }
  });

  it("parses all four golden fixtures", () => {
    for (const name of ["cdp.csv", "fap.csv", "se_jammer.csv", "se_antennas.csv"]) {
      const rows = parseResultsCsv(fixture(name));
      expect(rows.length).toBeGreaterThan(0);
    }
  });

  it("round-trips repr-formatted floats exactly", () => {
    const text = `${CSV_HEADER}\nq,1.5,a,m,0.30000000000000004,0.1,3\n`;
    expect(parseResultsCsv(text)[0].mean).toBe(0.30000000000000004);
  });

  it("accepts CRLF line endings", () => {
    const text = `${CSV_HEADER}\r\nq,1.0,a,m,0.5,0.1,3\r\n`;
    expect(parseResultsCsv(text).length).toBe(1);
  });

  it("rejects a renamed header column", () => {
    expect(() => parseResultsCsv(fixture("malformed_header.csv"))).toThrow(CsvError);
    expect(() => parseResultsCsv(fixture("malformed_header.csv"))).toThrow(/header mismatch/);
  });

  it("rejects reordered header columns", () => {
    const text = "sweep_value,sweep_param,arm,metric,mean,stderr,trials\nq,1.0,a,m,0.5,0.1,3\n";
    expect(() => parseResultsCsv(text)).toThrow(/header mismatch/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseResultsCsv(fixture("empty.csv"))).toThrow(/no data rows/);
  });

  it("rejects a zero-byte file", () => {
    expect(() => parseResultsCsv("")).toThrow(/empty file/);
  });

  it("rejects non-numeric mean", () => {
    expect(() => parseResultsCsv(fixture("malformed_row.csv"))).toThrow(/not a finite number/);
  });

  it("rejects rows with missing fields", () => {
    const text = `${CSV_HEADER}\nq,1.0,a,m,0.5\n`;
    expect(() => parseResultsCsv(text)).toThrow(/expected 7 fields/);
  });

  it("rejects blank numeric fields and non-integer trials", () => {
    expect(() => parseResultsCsv(`${CSV_HEADER}\nq,,a,m,0.5,0.1,3\n`)).toThrow(/empty sweep_value/);
    expect(() => parseResultsCsv(`${CSV_HEADER}\nq,1.0,a,m,0.5,0.1,2.5\n`)).toThrow(/non-negative integer/);
    expect(() => parseResultsCsv(`${CSV_HEADER}\nq,1.0,a,m,inf,0.1,3\n`)).toThrow(/not a finite number/);
  });
});

describe("groupByArm", () => {
  it("keeps first-appearance order and per-arm point order", () => {
    const rows = parseResultsCsv(fixture("se_jammer.csv"));
    const series = groupByArm(rows);
    expect(series.map((s) => s.arm)).toEqual(["no_jammer", "suppressed", "unsuppressed"]);
    for (const s of series) {
      expect(s.x.length).toBe(13);
      expect(s.x).toEqual([...s.x].sort((a, b) => a - b));
      expect(s.y.length).toBe(s.x.length);
      expect(s.err.length).toBe(s.x.length);
    }
  });

  it("groups the six detection curves", () => {
    const series = groupByArm(parseResultsCsv(fixture("cdp.csv")));
    expect(series.map((s) => s.arm)).toEqual([
      "g6_nd1",
      "g8_nd1",
      "g10_nd1",
      "g6_nd20",
      "g8_nd20",
      "g10_nd20",
    ]);
  });
});
