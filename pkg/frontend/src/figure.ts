/**
 * Figure assembly: read one simulator output file, build the matching
 * figure, write the SVG.  Rendering is read-only: fitted slopes and
 * intercepts are taken from the file, never recomputed here.
 */
import { readFileSync, writeFileSync } from "fs";

import {
  InputFormatError,
  parseRecordsStream,
  parseStudySummary,
  parseSweepSummary,
} from "./schemas.js";
import { Figure, fmtFit, renderFigure, Series } from "./svg.js";

export type FigureKind = "timeseries" | "drift_scaling" | "lifespan";

export interface FigureSpec {
  inputPath: string;
  figureKind: FigureKind;
  outputImagePath: string;
  /** Extra annotation lines; fit values from the file are added automatically. */
  annotations?: string[];
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c"];

function timeseriesFigure(text: string): Figure {
  const { records } = parseRecordsStream(text);
  const l2: Array<[number, number]> = [];
  const slope: Array<[number, number]> = [];
  for (const r of records) {
    if (r.l2_norm !== null) l2.push([r.t, r.l2_norm]);
    if (r.max_slope !== null) slope.push([r.t, r.max_slope]);
  }
  if (l2.length === 0) {
    throw new InputFormatError("timeseries: no finite l2_norm samples");
  }
  const series: Series[] = [
    { label: "l2_norm", color: COLORS[0], points: l2, mark: "line" },
    { label: "max_slope", color: COLORS[1], points: slope, mark: "line" },
  ];
  return {
    title: "Diagnostics time series",
    xLabel: "t",
    yLabel: "value",
    xKind: "linear",
    yKind: "linear",
    series,
    annotations: [],
  };
}

function fitLine(
  slope: number,
  intercept: number,
  xs: number[],
): Array<[number, number]> {
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  return [
    [lo, Math.exp(intercept + slope * Math.log(lo))],
    [hi, Math.exp(intercept + slope * Math.log(hi))],
  ];
}

function driftFigure(text: string): Figure {
  const summary = parseStudySummary(text);
  if (summary.pairs.length === 0) {
    throw new InputFormatError("drift_scaling: no (eps, rate) pairs in the file");
  }
  const series: Series[] = [
    {
      label: summary.quantity,
      color: COLORS[0],
      points: summary.pairs.map(([a, b]) => [a, b] as [number, number]),
      mark: "scatter",
    },
  ];
  const annotations: string[] = [];
  if (summary.exponent !== null && summary.intercept !== null) {
    series.push({
      label: "fit",
      color: COLORS[1],
      points: fitLine(summary.exponent, summary.intercept,
                      summary.pairs.map((p) => p[0])),
      mark: "line",
    });
    annotations.push(`slope = ${fmtFit(summary.exponent)}`);
    if (summary.r2 !== null) annotations.push(`r2 = ${fmtFit(summary.r2)}`);
  } else {
    annotations.push("fit unavailable");
  }
  return {
    title: `Drift rate vs amplitude (${summary.quantity})`,
    xLabel: "amplitude",
    yLabel: "drift rate",
    xKind: "log",
    yKind: "log",
    series,
    annotations,
  };
}

function lifespanFigure(text: string): Figure {
  const summary = parseSweepSummary(text);
  const broke = summary.entries.filter((en) => en.t_break !== null);
  const censored = summary.entries.length - broke.length;
  if (broke.length === 0) {
    throw new InputFormatError("lifespan: every entry is censored, nothing to draw");
  }
  const series: Series[] = [
    {
      label: `t_break (n=${summary.entries[0].n})`,
      color: COLORS[0],
      points: broke.map((en) => [en.eps, en.t_break as number]),
      mark: "scatter",
    },
  ];
  const broke2n = summary.entries.filter((en) => en.t_break_2n !== null);
  if (broke2n.length > 0) {
    series.push({
      label: "t_break (2n)",
      color: COLORS[2],
      points: broke2n.map((en) => [en.eps, en.t_break_2n as number]),
      mark: "scatter",
    });
  }
  const annotations: string[] = [];
  if (summary.slope !== null && summary.intercept !== null) {
    series.push({
      label: "fit",
      color: COLORS[1],
      points: fitLine(summary.slope, summary.intercept, broke.map((en) => en.eps)),
      mark: "line",
    });
    annotations.push(`slope = ${fmtFit(summary.slope)}`);
  } else {
    annotations.push("fit unavailable");
  }
  if (censored > 0) annotations.push(`${censored} censored entries omitted`);
  return {
    title: "Breakdown time vs amplitude",
    xLabel: "amplitude",
    yLabel: "t_break",
    xKind: "log",
    yKind: "log",
    series,
    annotations,
  };
}

export function buildFigure(kind: FigureKind, text: string): Figure {
  switch (kind) {
    case "timeseries":
      return timeseriesFigure(text);
    case "drift_scaling":
      return driftFigure(text);
    case "lifespan":
      return lifespanFigure(text);
  }
}

/** Render one figure spec to its SVG file; throws on any input problem. */
export function render(spec: FigureSpec): void {
  const text = readFileSync(spec.inputPath, "utf8");
  const figure = buildFigure(spec.figureKind, text);
  if (spec.annotations) {
    figure.annotations.push(...spec.annotations);
  }
  writeFileSync(spec.outputImagePath, renderFigure(figure), "utf8");
}
