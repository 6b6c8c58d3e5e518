#!/usr/bin/env node
import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { CsvError, parseResultsCsv } from "./csv.js";
import { FIGURE_KINDS, isFigureKind, makeFigureSpec, plottableSeries } from "./figure.js";
import { renderFigure } from "./svg.js";

const USAGE = `usage: jamguard-plots --input <results.csv> --kind <kind> --output <figure.svg>
                      [--x-label s] [--y-label s] [--title s] [--log-x] [--log-y] [--linear-y]

kinds: ${FIGURE_KINDS.join(", ")}`;

export function runCli(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        input: { type: "string" },
        kind: { type: "string" },
        output: { type: "string" },
        "x-label": { type: "string" },
        "y-label": { type: "string" },
        title: { type: "string" },
        "log-x": { type: "boolean" },
        "log-y": { type: "boolean" },
        "linear-y": { type: "boolean" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  const opts = parsed.values;
  if (opts.help) {
    console.log(USAGE);
    return 0;
  }
  if (!opts.input || !opts.kind || !opts.output) {
    console.error("error: --input, --kind and --output are required");
    console.error(USAGE);
    return 2;
  }
  if (!isFigureKind(opts.kind)) {
    console.error(`error: unknown kind "${opts.kind}" (expected one of: ${FIGURE_KINDS.join(", ")})`);
    return 2;
  }

  let text: string;
  try {
    text = readFileSync(opts.input, "utf8");
  } catch (err) {
    console.error(`error: cannot read ${opts.input}: ${(err as NodeJS.ErrnoException).message}`);
    return 2;
  }

  const spec = makeFigureSpec(opts.input, opts.kind, opts.output, {
    xLabel: opts["x-label"],
    yLabel: opts["y-label"],
    title: opts.title,
    logX: opts["log-x"] ? true : undefined,
    logY: opts["log-y"] ? true : opts["linear-y"] ? false : undefined,
  });

  // Render fully before touching the output path so a bad CSV never leaves
  // a partial image behind.
  let svg: string;
  try {
    svg = renderFigure(spec, plottableSeries(parseResultsCsv(text)));
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${opts.input}: ${err.message}`);
      return 2;
    }
    throw err;
  }
  writeFileSync(spec.output, svg);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
if (invokedDirectly) {
  process.exit(runCli(process.argv.slice(2)));
}
