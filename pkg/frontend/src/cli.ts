#!/usr/bin/env node
/**
 * plot <kind> <input.csv> -o <out.svg> [--width N] [--height N] [--title T]
 *
 * kinds: collapse | spin | decay | arclength
 *
 * Pure presentation: every curve, including closed forms and bounds, is a
 * CSV column computed upstream. Schema problems exit 1 with the missing
 * column named; usage problems exit 2.
 */
import { writeFileSync } from "node:fs";
import { SchemaError, readCsv } from "./csv.js";
import { FIGURE_KINDS, FigureKind, FigureSpec, buildFigure } from "./figures.js";
import { renderSvg } from "./render.js";

const USAGE = `usage: plot <kind> <input.csv> -o <out.svg> [--width N] [--height N] [--title T]
kinds: ${FIGURE_KINDS.join(" | ")}`;

class UsageError extends Error {}

export function parseArgs(argv: string[]): FigureSpec {
  const positional: string[] = [];
  let output: string | undefined;
  let width: number | undefined;
  let height: number | undefined;
  let title: string | undefined;

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i++;
      if (i >= argv.length) throw new UsageError(`${arg} needs a value`);
      return argv[i];
    };
    if (arg === "-o" || arg === "--output") output = next();
    else if (arg === "--width") width = Number(next());
    else if (arg === "--height") height = Number(next());
    else if (arg === "--title") title = next();
    else if (arg.startsWith("-")) throw new UsageError(`unknown flag ${arg}`);
    else positional.push(arg);
  }

  if (positional.length !== 2) throw new UsageError("expected <kind> and <input.csv>");
  const [kind, input] = positional;
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown kind "${kind}" (expected ${FIGURE_KINDS.join(" | ")})`);
  }
  if (!output) throw new UsageError("missing -o <out.svg>");
  if ((width !== undefined && !(width > 0)) || (height !== undefined && !(height > 0))) {
    throw new UsageError("--width/--height must be positive numbers");
  }
  return { kind: kind as FigureKind, input, output, width, height, title };
}

export function run(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`${err.message}\n${USAGE}\n`);
      return 2;
    }
    throw err;
  }
  try {
    const table = readCsv(spec.input);
    const figure = buildFigure(table, spec.kind, spec.title);
    const svg = renderSvg(figure, spec.width, spec.height);
    writeFileSync(spec.output, svg);
    const gap = figure.spinGap !== undefined ? ` (spin gap ${figure.spinGap.toExponential(3)})` : "";
    process.stdout.write(`wrote ${spec.output}${gap}\n`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`${(err as Error).message}\n`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
