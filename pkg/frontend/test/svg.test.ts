import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { parseResultsCsv } from "../src/csv.js";
import { FigureKind, makeFigureSpec, plottableSeries } from "../src/figure.js";
import { renderFigure } from "../src/svg.js";

const FIXTURES = new URL("../fixtures/", import.meta.url);

function render(name: string, kind: FigureKind): string {
  const rows = parseResultsCsv(readFileSync(new URL(name, FIXTURES), "utf8"));
  return renderFigure(makeFigureSpec(name, kind, "out.svg"), plottableSeries(rows));
}

describe("renderFigure", () => {
  it("renders all four golden fixtures to standalone SVG", () => {
    const cases: Array<[string, FigureKind]> = [
      ["cdp.csv", "cdp"],
      ["fap.csv", "fap"],
      ["se_jammer.csv", "se-jammer"],
      ["se_antennas.csv", "se-antennas"],
    ];
    for (const [name, kind] of cases) {
      const svg = render(name, kind);
      expect(svg.startsWith('<svg xmlns="http://www.w3.org/2000/svg"')).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    }
  });

  it("draws one line per (g, N_d) combination for cdp", () => {
    const svg = render("cdp.csv", "cdp");
    const seriesPaths = svg.match(/data-series="[^"]*"/g) ?? [];
    expect(seriesPaths).toEqual([
      'data-series="g6_nd1"',
      'data-series="g8_nd1"',
      'data-series="g10_nd1"',
      'data-series="g6_nd20"',
      'data-series="g8_nd20"',
      'data-series="g10_nd20"',
    ]);
    // Grayscale safety: every curve distinguishable without color — five
    // dashed patterns plus one solid among the six.
    const dashes = new Set(svg.match(/stroke-dasharray="[^"]*"/g));
    expect(dashes.size).toBe(5);
  });

  it("draws three arms with error bars for se-jammer", () => {
    const svg = render("se_jammer.csv", "se-jammer");
    for (const arm of ["no_jammer", "suppressed", "unsuppressed"]) {
      expect(svg).toContain(`data-series="${arm}"`);
      expect(svg).toContain(`>${arm}</text>`);
    }
    // 13 sweep points x 3 arms, each error bar = stem + 2 caps, plus axis
    // gridline/tick lines; just require a healthy minimum of bar segments.
    const lines = svg.match(/<line /g) ?? [];
    expect(lines.length).toBeGreaterThan(13 * 3 * 3);
  });

  it("uses log ticks for fap and skips zero-rate points", () => {
    const svg = render("fap.csv", "fap");
    expect(svg).toContain(">0.001<");
    expect(svg).toContain(">0.1<");
    // g10 observed no false alarms anywhere: legend entry but no line.
    expect(svg).toContain(">g10</text>");
    expect(svg).not.toContain('data-series="g10"');
    expect(svg).toContain('data-series="g6"');
  });

  it("is a pure function of its inputs", () => {
    const a = render("se_antennas.csv", "se-antennas");
    const b = render("se_antennas.csv", "se-antennas");
    expect(a).toBe(b);
    expect(render("cdp.csv", "cdp")).not.toBe(a);
  });

  it("renders axis labels and title text", () => {
    const svg = render("se_antennas.csv", "se-antennas");
    expect(svg).toContain("Number of antennas");
    expect(svg).toContain("Sum spectral efficiency (bits/s/Hz)");
    expect(svg).toContain("array size");
  });

  it("escapes markup in labels", () => {
    const rows = parseResultsCsv(
      'sweep_param,sweep_value,arm,metric,mean,stderr,trials\nq,1.0,<arm&>,m,0.5,0.1,3\nq,2.0,<arm&>,m,0.6,0.1,3\n',
    );
    const spec = makeFigureSpec("x", "cdp", "o", { title: "a < b & c" });
    const svg = renderFigure(spec, plottableSeries(rows));
    expect(svg).toContain("a &lt; b &amp; c");
    expect(svg).toContain("&lt;arm&amp;&gt;");
    expect(svg).not.toContain("<arm&>");
  });

  it("falls back to a linear axis when log-y has no positive data", () => {
    const rows = parseResultsCsv(
      'sweep_param,sweep_value,arm,metric,mean,stderr,trials\nq,1.0,a,m,0.0,0.0,3\nq,2.0,a,m,0.0,0.0,3\n',
    );
    const svg = renderFigure(makeFigureSpec("x", "fap", "o"), plottableSeries(rows));
    expect(svg).toContain('data-series="a"');
  });

  it("handles a single sweep point without degenerate scales", () => {
    const rows = parseResultsCsv(
      'sweep_param,sweep_value,arm,metric,mean,stderr,trials\nq,1.0,a,m,0.5,0.1,3\n',
    );
    const svg = renderFigure(makeFigureSpec("x", "cdp", "o"), plottableSeries(rows));
    expect(svg).toContain("<circle");
    expect(svg).not.toContain("NaN");
  });

  it("never emits NaN coordinates on the golden fixtures", () => {
    expect(render("fap.csv", "fap")).not.toContain("NaN");
    expect(render("cdp.csv", "cdp")).not.toContain("NaN");
  });
});
