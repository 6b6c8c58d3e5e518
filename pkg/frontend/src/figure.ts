import { CsvError, ResultRow, Series, groupByArm } from "./csv.js";

export const FIGURE_KINDS = ["cdp", "fap", "se-jammer", "se-antennas"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  input: string;
  kind: FigureKind;
  output: string;
  xLabel: string;
  yLabel: string;
  title: string;
  logX: boolean;
  logY: boolean;
}

interface KindDefaults {
  xLabel: string;
  yLabel: string;
  title: string;
  logY: boolean;
}

const KIND_DEFAULTS: Record<FigureKind, KindDefaults> = {
  cdp: {
    xLabel: "Jammer training power (dBW)",
    yLabel: "Detection probability",
    title: "Jamming detection probability vs jammer power",
    logY: false,
  },
  fap: {
    // False-alarm rates span decades; a linear axis flattens every curve.
    xLabel: "Angular spread (rad)",
    yLabel: "False-alarm probability",
    title: "False-alarm probability vs angular spread",
    logY: true,
  },
  "se-jammer": {
    xLabel: "Jammer power (dBW)",
    yLabel: "Sum spectral efficiency (bits/s/Hz)",
    title: "Sum spectral efficiency vs jammer power",
    logY: false,
  },
  "se-antennas": {
    xLabel: "Number of antennas",
    yLabel: "Sum spectral efficiency (bits/s/Hz)",
    title: "Sum spectral efficiency vs array size",
    logY: false,
  },
};

export function isFigureKind(value: string): value is FigureKind {
  return (FIGURE_KINDS as readonly string[]).includes(value);
}

export interface SpecOverrides {
  xLabel?: string;
  yLabel?: string;
  title?: string;
  logX?: boolean;
  logY?: boolean;
}

export function makeFigureSpec(
  input: string,
  kind: FigureKind,
  output: string,
  overrides: SpecOverrides = {},
): FigureSpec {
  const d = KIND_DEFAULTS[kind];
  return {
    input,
    kind,
    output,
    xLabel: overrides.xLabel ?? d.xLabel,
    yLabel: overrides.yLabel ?? d.yLabel,
    title: overrides.title ?? d.title,
    logX: overrides.logX ?? false,
    logY: overrides.logY ?? d.logY,
  };
}

/**
 * Turn validated rows into plottable series. Validation rows ("check"
 * pseudo-sweeps from the validation suite) are not plottable.
 */
export function plottableSeries(rows: ResultRow[]): Series[] {
  const data = rows.filter((r) => r.sweepParam !== "check");
  if (data.length === 0) {
    throw new CsvError("no plottable rows (only validation checks)");
  }
  return groupByArm(data);
}
