#!/usr/bin/env node
/**
 * bh-figure: render one figure from a simulator output file.
 *
 *   bh-figure --input lifespan.summary.ndjson --kind lifespan --out fig.svg
 *
 * Exit codes: 0 success, 2 usage error, 3 schema mismatch, 4 bad input data.
 */
import { render, FigureKind } from "./figure.js";
import { InputFormatError, SchemaMismatchError } from "./schemas.js";

const KINDS: FigureKind[] = ["timeseries", "drift_scaling", "lifespan"];

function usage(): string {
  return (
    "usage: bh-figure --input <file> --kind <timeseries|drift_scaling|lifespan> " +
    "--out <file.svg> [--annotation <text>]..."
  );
}

export function main(argv: string[]): number {
  let input: string | undefined;
  let kind: string | undefined;
  let out: string | undefined;
  const annotations: string[] = [];
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`missing value for ${arg}`);
      return argv[i];
    };
    try {
      if (arg === "--input") input = next();
      else if (arg === "--kind") kind = next();
      else if (arg === "--out") out = next();
      else if (arg === "--annotation") annotations.push(next());
      else if (arg === "--help" || arg === "-h") {
        console.log(usage());
        return 0;
      } else {
        console.error(`unknown argument: ${arg}\n${usage()}`);
        return 2;
      }
    } catch (err) {
      console.error(String(err instanceof Error ? err.message : err));
      return 2;
    }
  }
  if (!input || !kind || !out) {
    console.error(usage());
    return 2;
  }
  if (!KINDS.includes(kind as FigureKind)) {
    console.error(`unknown figure kind: ${kind}\n${usage()}`);
    return 2;
  }
  try {
    render({
      inputPath: input,
      figureKind: kind as FigureKind,
      outputImagePath: out,
      annotations,
    });
  } catch (err) {
    if (err instanceof SchemaMismatchError) {
      console.error(`schema mismatch: ${err.message}`);
      return 3;
    }
    if (err instanceof InputFormatError) {
      console.error(`bad input: ${err.message}`);
      return 4;
    }
    console.error(String(err instanceof Error ? err.message : err));
    return 4;
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
