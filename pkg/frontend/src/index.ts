export { CSV_HEADER, CsvError, parseResultsCsv, groupByArm } from "./csv.js";
export type { ResultRow, Series } from "./csv.js";
export { FIGURE_KINDS, isFigureKind, makeFigureSpec, plottableSeries } from "./figure.js";
export type { FigureKind, FigureSpec, SpecOverrides } from "./figure.js";
export { renderFigure } from "./svg.js";
export { runCli } from "./cli.js";
