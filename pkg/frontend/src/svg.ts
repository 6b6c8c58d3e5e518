import { CsvError, Series } from "./csv.js";
import { FigureSpec } from "./figure.js";

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { top: 42, right: 18, bottom: 52, left: 68 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;
const FONT = "Helvetica, Arial, sans-serif";

type MarkerShape = "circle" | "square" | "triangle" | "diamond" | "cross" | "plus";

interface LineStyle {
  dash: string;
  marker: MarkerShape;
  open: boolean;
  stroke: string;
}

// Grayscale-safe: curves are told apart by dash pattern and marker shape,
// never by hue.
const STYLES: LineStyle[] = [
  { dash: "", marker: "circle", open: false, stroke: "#000000" },
  { dash: "6 3", marker: "square", open: true, stroke: "#000000" },
  { dash: "1.5 2.5", marker: "triangle", open: false, stroke: "#000000" },
  { dash: "7 3 1.5 3", marker: "diamond", open: true, stroke: "#000000" },
  { dash: "10 4", marker: "cross", open: true, stroke: "#555555" },
  { dash: "2 4", marker: "plus", open: true, stroke: "#555555" },
];

function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  return String(Number(v.toPrecision(10)));
}

interface Scale {
  toPx(v: number): number;
  ticks: number[];
  log: boolean;
}

function niceStep(rough: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const r = rough / mag;
  if (r <= 1) return mag;
  if (r <= 2) return 2 * mag;
  if (r <= 5) return 5 * mag;
  return 10 * mag;
}

function linearScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (lo === hi) {
    const pad = Math.max(1, Math.abs(lo) * 0.1);
    lo -= pad;
    hi += pad;
  } else {
    const pad = (hi - lo) * 0.04;
    lo -= pad;
    hi += pad;
  }
  const step = niceStep((hi - lo) / 6);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    // Snap off float drift so ticks like 0.30000000000000004 label cleanly.
    ticks.push(Number(t.toPrecision(12)));
  }
  const span = hi - lo;
  return {
    toPx: (v) => pxLo + ((v - lo) / span) * (pxHi - pxLo),
    ticks,
    log: false,
  };
}

function logScale(loPos: number, hi: number, pxLo: number, pxHi: number): Scale {
  let dLo = Math.floor(Math.log10(loPos));
  let dHi = Math.ceil(Math.log10(hi));
  if (dLo === dHi) {
    dLo -= 1;
    dHi += 1;
  }
  const ticks: number[] = [];
  for (let d = dLo; d <= dHi; d++) {
    ticks.push(Math.pow(10, d));
  }
  return {
    toPx: (v) => pxLo + ((Math.log10(v) - dLo) / (dHi - dLo)) * (pxHi - pxLo),
    ticks,
    log: true,
  };
}

function clampY(py: number): number {
  return Math.min(Math.max(py, MARGIN.top), MARGIN.top + PLOT_H);
}

function markerSvg(shape: MarkerShape, cx: number, cy: number, style: LineStyle): string {
  const fill = style.open ? "#ffffff" : style.stroke;
  const s = style.stroke;
  switch (shape) {
    case "circle":
      return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="3.2" fill="${fill}" stroke="${s}"/>`;
    case "square":
      return `<rect x="${fmt(cx - 3)}" y="${fmt(cy - 3)}" width="6" height="6" fill="${fill}" stroke="${s}"/>`;
    case "triangle":
      return `<path d="M ${fmt(cx)} ${fmt(cy - 3.8)} L ${fmt(cx + 3.5)} ${fmt(cy + 2.8)} L ${fmt(cx - 3.5)} ${fmt(cy + 2.8)} Z" fill="${fill}" stroke="${s}"/>`;
    case "diamond":
      return `<path d="M ${fmt(cx)} ${fmt(cy - 4.2)} L ${fmt(cx + 4.2)} ${fmt(cy)} L ${fmt(cx)} ${fmt(cy + 4.2)} L ${fmt(cx - 4.2)} ${fmt(cy)} Z" fill="${fill}" stroke="${s}"/>`;
    case "cross":
      return (
        `<path d="M ${fmt(cx - 3)} ${fmt(cy - 3)} L ${fmt(cx + 3)} ${fmt(cy + 3)} ` +
        `M ${fmt(cx - 3)} ${fmt(cy + 3)} L ${fmt(cx + 3)} ${fmt(cy - 3)}" stroke="${s}" fill="none"/>`
      );
    case "plus":
      return (
        `<path d="M ${fmt(cx)} ${fmt(cy - 4)} L ${fmt(cx)} ${fmt(cy + 4)} ` +
        `M ${fmt(cx - 4)} ${fmt(cy)} L ${fmt(cx + 4)} ${fmt(cy)}" stroke="${s}" fill="none"/>`
      );
  }
}

interface Extent {
  lo: number;
  hi: number;
  loPos: number;
  anyPos: boolean;
}

function yExtent(series: Series[]): Extent {
  let lo = Infinity;
  let hi = -Infinity;
  let loPos = Infinity;
  for (const s of series) {
    for (let i = 0; i < s.y.length; i++) {
      lo = Math.min(lo, s.y[i] - s.err[i]);
      hi = Math.max(hi, s.y[i] + s.err[i]);
      // Log floor tracks positive means only: mean - stderr can sit an
      // epsilon above zero and would drag the axis down many decades.
      if (s.y[i] > 0) loPos = Math.min(loPos, s.y[i]);
    }
  }
  return { lo, hi, loPos, anyPos: loPos < Infinity };
}

/**
 * Render series as a standalone SVG document. Pure: identical spec + series
 * always produce the identical string.
 */
export function renderFigure(spec: FigureSpec, series: Series[]): string {
  if (series.length === 0) {
    throw new CsvError("nothing to plot");
  }

  let xLo = Infinity;
  let xHi = -Infinity;
  let xLoPos = Infinity;
  for (const s of series) {
    for (const v of s.x) {
      xLo = Math.min(xLo, v);
      xHi = Math.max(xHi, v);
      if (v > 0) xLoPos = Math.min(xLoPos, v);
    }
  }
  if (spec.logX && xLoPos === Infinity) {
    throw new CsvError("log x axis requested but no positive x values");
  }
  const xScale = spec.logX
    ? logScale(xLoPos, xHi, MARGIN.left, MARGIN.left + PLOT_W)
    : linearScale(xLo, xHi, MARGIN.left, MARGIN.left + PLOT_W);

  const ext = yExtent(series);
  // Zero-event curves are legitimate (nothing observed); fall back to a
  // linear axis when a log axis would have no finite point at all.
  const useLogY = spec.logY && ext.anyPos;
  const yScale = useLogY
    ? logScale(ext.loPos, Math.max(ext.hi, ext.loPos * 10), MARGIN.top + PLOT_H, MARGIN.top)
    : linearScale(Math.min(ext.lo, 0), Math.max(ext.hi, 0), MARGIN.top + PLOT_H, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" font-family="${FONT}" font-size="13" text-anchor="middle">${esc(spec.title)}</text>`,
  );

  // Gridlines and ticks.
  for (const t of yScale.ticks) {
    const py = yScale.toPx(t);
    if (py < MARGIN.top - 0.5 || py > MARGIN.top + PLOT_H + 0.5) continue;
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + PLOT_W}" y2="${fmt(py)}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 6}" y="${fmt(py + 3)}" font-family="${FONT}" font-size="10" text-anchor="end">${formatTick(t)}</text>`,
    );
  }
  for (const t of xScale.ticks) {
    const px = xScale.toPx(t);
    if (px < MARGIN.left - 0.5 || px > MARGIN.left + PLOT_W + 0.5) continue;
    parts.push(
      `<line x1="${fmt(px)}" y1="${MARGIN.top}" x2="${fmt(px)}" y2="${MARGIN.top + PLOT_H}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${fmt(px)}" y="${MARGIN.top + PLOT_H + 16}" font-family="${FONT}" font-size="10" text-anchor="middle">${formatTick(t)}</text>`,
    );
  }

  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" fill="none" stroke="#000000"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 14}" font-family="${FONT}" font-size="12" text-anchor="middle">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + PLOT_H / 2}" font-family="${FONT}" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">${esc(spec.yLabel)}</text>`,
  );

  series.forEach((s, idx) => {
    const style = STYLES[idx % STYLES.length];
    const pts: Array<{ px: number; py: number; lo: number; hi: number; drawable: boolean }> = [];
    for (let i = 0; i < s.x.length; i++) {
      const drawable = !useLogY || s.y[i] > 0;
      pts.push({
        px: xScale.toPx(s.x[i]),
        py: drawable ? clampY(yScale.toPx(s.y[i])) : NaN,
        lo: s.y[i] - s.err[i],
        hi: s.y[i] + s.err[i],
        drawable,
      });
    }

    // Error bars first so lines/markers draw over them.
    for (let i = 0; i < pts.length; i++) {
      const p = pts[i];
      if (!p.drawable || s.err[i] <= 0) continue;
      // p.hi > 0 whenever drawable on a log axis; p.lo can still hit zero,
      // in which case the lower whisker runs to the axis floor.
      const yTop = clampY(yScale.toPx(p.hi));
      const yBot = useLogY && p.lo <= 0 ? MARGIN.top + PLOT_H : clampY(yScale.toPx(p.lo));
      parts.push(
        `<line x1="${fmt(p.px)}" y1="${fmt(yTop)}" x2="${fmt(p.px)}" y2="${fmt(yBot)}" stroke="${style.stroke}"/>`,
      );
      parts.push(
        `<line x1="${fmt(p.px - 3)}" y1="${fmt(yTop)}" x2="${fmt(p.px + 3)}" y2="${fmt(yTop)}" stroke="${style.stroke}"/>`,
      );
      parts.push(
        `<line x1="${fmt(p.px - 3)}" y1="${fmt(yBot)}" x2="${fmt(p.px + 3)}" y2="${fmt(yBot)}" stroke="${style.stroke}"/>`,
      );
    }

    const drawn = pts.filter((p) => p.drawable);
    if (drawn.length > 1) {
      const d = drawn.map((p, i) => `${i === 0 ? "M" : "L"} ${fmt(p.px)} ${fmt(p.py)}`).join(" ");
      const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
      parts.push(
        `<path d="${d}" fill="none" stroke="${style.stroke}" stroke-width="1.4"${dash} data-series="${esc(s.arm)}"/>`,
      );
    }
    for (const p of drawn) {
      parts.push(markerSvg(style.marker, p.px, p.py, style));
    }
  });

  // Legend, top-right corner of the plot area.
  const labelWidth = Math.max(...series.map((s) => s.arm.length)) * 6.5;
  const legendW = 40 + labelWidth;
  const legendH = 8 + series.length * 16;
  const lx = MARGIN.left + PLOT_W - legendW - 8;
  const ly = MARGIN.top + 8;
  parts.push(
    `<rect x="${fmt(lx)}" y="${fmt(ly)}" width="${fmt(legendW)}" height="${fmt(legendH)}" fill="#ffffff" stroke="#000000"/>`,
  );
  series.forEach((s, idx) => {
    const style = STYLES[idx % STYLES.length];
    const cy = ly + 14 + idx * 16;
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    parts.push(
      `<line x1="${fmt(lx + 6)}" y1="${fmt(cy - 3)}" x2="${fmt(lx + 28)}" y2="${fmt(cy - 3)}" stroke="${style.stroke}" stroke-width="1.4"${dash}/>`,
    );
    parts.push(markerSvg(style.marker, lx + 17, cy - 3, style));
    parts.push(
      `<text x="${fmt(lx + 34)}" y="${fmt(cy)}" font-family="${FONT}" font-size="10">${esc(s.arm)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
