/**
 * Minimal deterministic SVG plotting: fixed canvas, linear/log axes, scatter
 * and line marks, text annotations.  All coordinates are formatted with a
 * fixed number of decimals so identical inputs give identical bytes.
 */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 70, right: 20, top: 42, bottom: 52 };

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

export type AxisKind = "linear" | "log";

export interface Scale {
  toPixel(v: number): number;
  ticks(): number[];
}

function fmtCoord(v: number): string {
  return v.toFixed(2);
}

/** Tick label: short, locale-independent, trailing zeros trimmed. */
export function fmtLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.001 && a < 10000) {
    const s = v.toPrecision(4);
    return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
  }
  return v.toExponential(2).replace(/\.?0+e/, "e");
}

/** Fitted-value annotation: fixed four significant digits. */
export function fmtFit(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 0.001 || a >= 10000)) return v.toExponential(3);
  return v.toPrecision(4);
}

function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const out: number[] = [];
  let t = Math.ceil(lo / step) * step;
  for (; t <= hi + 1e-9 * step; t += step) {
    out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return out;
}

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  const d0 = Math.ceil(Math.log10(lo) - 1e-9);
  const d1 = Math.floor(Math.log10(hi) + 1e-9);
  for (let d = d0; d <= d1; d++) out.push(Math.pow(10, d));
  if (out.length < 2) {
    // fall back to 1-2-5 mantissas when the span is under a decade
    const steps: number[] = [];
    for (let d = Math.floor(Math.log10(lo)); d <= Math.ceil(Math.log10(hi)); d++) {
      for (const m of [1, 2, 5]) {
        const v = m * Math.pow(10, d);
        if (v >= lo * 0.999 && v <= hi * 1.001) steps.push(v);
      }
    }
    return steps.length >= 2 ? steps : [lo, hi];
  }
  return out;
}

export function makeScale(kind: AxisKind, lo: number, hi: number,
                          pixLo: number, pixHi: number): Scale {
  if (kind === "log") {
    if (lo <= 0 || hi <= 0) {
      throw new Error("log axis requires positive bounds");
    }
    const llo = Math.log10(lo);
    const lhi = Math.log10(hi);
    return {
      toPixel: (v) => pixLo + ((Math.log10(v) - llo) / (lhi - llo)) * (pixHi - pixLo),
      ticks: () => logTicks(lo, hi),
    };
  }
  return {
    toPixel: (v) => pixLo + ((v - lo) / (hi - lo)) * (pixHi - pixLo),
    ticks: () => linearTicks(lo, hi),
  };
}

export function padRange(lo: number, hi: number, kind: AxisKind): [number, number] {
  if (kind === "log") {
    return [lo / 1.35, hi * 1.35];
  }
  const span = hi - lo;
  if (span === 0) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 1.0;
    return [lo - pad, hi + pad];
  }
  return [lo - 0.06 * span, hi + 0.06 * span];
}

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
  mark: "line" | "scatter";
}

export interface Figure {
  title: string;
  xLabel: string;
  yLabel: string;
  xKind: AxisKind;
  yKind: AxisKind;
  series: Series[];
  annotations: string[];
}

const e = (text: string) =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function renderFigure(fig: Figure): string {
  const xs = fig.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = fig.series.flatMap((s) => s.points.map((p) => p[1]));
  if (xs.length === 0) {
    throw new Error("nothing to draw: no data points");
  }
  const [xLo, xHi] = padRange(Math.min(...xs), Math.max(...xs), fig.xKind);
  const [yLo, yHi] = padRange(Math.min(...ys), Math.max(...ys), fig.yKind);
  const sx = makeScale(fig.xKind, xLo, xHi, MARGIN.left, MARGIN.left + PLOT_W);
  const sy = makeScale(fig.yKind, yLo, yHi, MARGIN.top + PLOT_H, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" fill="#111111">` +
      `${e(fig.title)}</text>`,
  );

  // frame
  const x0 = MARGIN.left;
  const x1 = MARGIN.left + PLOT_W;
  const y0 = MARGIN.top;
  const y1 = MARGIN.top + PLOT_H;
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${PLOT_W}" height="${PLOT_H}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`,
  );

  for (const t of sx.ticks()) {
    const px = fmtCoord(sx.toPixel(t));
    parts.push(
      `<line x1="${px}" y1="${y1}" x2="${px}" y2="${y1 + 5}" stroke="#333333"/>`,
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#dddddd" stroke-width="0.5"/>`,
      `<text x="${px}" y="${y1 + 19}" text-anchor="middle" font-size="11" fill="#333333">` +
        `${e(fmtLabel(t))}</text>`,
    );
  }
  for (const t of sy.ticks()) {
    const py = fmtCoord(sy.toPixel(t));
    parts.push(
      `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333333"/>`,
      `<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#dddddd" stroke-width="0.5"/>`,
      `<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="11" fill="#333333">${e(fmtLabel(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13" ` +
      `fill="#111111">${e(fig.xLabel)}</text>`,
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" fill="#111111" ` +
      `transform="rotate(-90 18 ${(y0 + y1) / 2})">${e(fig.yLabel)}</text>`,
  );

  for (const s of fig.series) {
    const pts = s.points.map(
      ([vx, vy]) => [fmtCoord(sx.toPixel(vx)), fmtCoord(sy.toPixel(vy))] as const,
    );
    if (s.mark === "line") {
      const d = pts.map(([px, py], i) => `${i === 0 ? "M" : "L"}${px} ${py}`).join(" ");
      parts.push(`<path d="${d}" fill="none" stroke="${s.color}" stroke-width="1.6"/>`);
    } else {
      for (const [px, py] of pts) {
        parts.push(`<circle cx="${px}" cy="${py}" r="3.5" fill="${s.color}"/>`);
      }
    }
  }

  // legend (top-right inside the frame)
  fig.series.forEach((s, i) => {
    const ly = y0 + 16 + 16 * i;
    parts.push(
      `<rect x="${x1 - 150}" y="${ly - 8}" width="10" height="10" fill="${s.color}"/>`,
      `<text x="${x1 - 135}" y="${ly}" font-size="11" fill="#111111">${e(s.label)}</text>`,
    );
  });

  fig.annotations.forEach((a, i) => {
    parts.push(
      `<text x="${x0 + 10}" y="${y0 + 18 + 16 * i}" font-size="12" fill="#b22222">` +
        `${e(a)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
