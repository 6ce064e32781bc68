#!/usr/bin/env node
import { parseArgs } from "node:util";
import { render, type FigureKind, type FigureSpec } from "./figures.js";
import type { ScaleKind } from "./svg.js";

const KINDS: FigureKind[] = ["survival_curves", "censor_heatmap", "threshold_overlay"];
const USAGE =
  "usage: render --kind <survival_curves|censor_heatmap|threshold_overlay> " +
  "--in <csv> [--in <csv> ...] --out <file.svg> [--x-scale log|linear] [--y-scale log|linear]";

function scaleOf(value: string | undefined, fallback: ScaleKind): ScaleKind {
  if (value === undefined) return fallback;
  if (value !== "log" && value !== "linear") {
    throw new UsageError(`scale must be log or linear, got ${value}`);
  }
  return value;
}

class UsageError extends Error {}

function main(argv: string[]): number {
  try {
    if (argv[0] !== "render") {
      throw new UsageError(USAGE);
    }
    const { values } = parseArgs({
      args: argv.slice(1),
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        out: { type: "string" },
        "x-scale": { type: "string" },
        "y-scale": { type: "string" },
      },
    });
    const kind = values.kind as FigureKind | undefined;
    if (kind === undefined || !KINDS.includes(kind)) {
      throw new UsageError(`--kind must be one of ${KINDS.join(", ")}`);
    }
    if (!values.in || values.in.length === 0) throw new UsageError("--in is required");
    if (!values.out) throw new UsageError("--out is required");
    const spec: FigureSpec = {
      kind,
      inputs: values.in,
      output: values.out,
      xScale: scaleOf(values["x-scale"], "log"),
      yScale: scaleOf(values["y-scale"], "log"),
    };
    render(spec);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

process.exitCode = main(process.argv.slice(2));
