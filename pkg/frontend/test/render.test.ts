import { describe, expect, it } from "vitest";
import { execFileSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { buildFigure, render } from "../src/figure.js";
import { renderFigure } from "../src/svg.js";

const root = join(__dirname, "..");
const samples = join(root, "samples");
const golden = join(root, "test", "golden");
const read = (dir: string, name: string) => readFileSync(join(dir, name), "utf8");

const KINDS: Array<["timeseries" | "drift_scaling" | "lifespan", string, string]> = [
  ["timeseries", "timeseries.ndjson", "timeseries.svg"],
  ["drift_scaling", "drift.summary.ndjson", "drift_scaling.svg"],
  ["lifespan", "lifespan.summary.ndjson", "lifespan.svg"],
];

describe("byte-deterministic rendering", () => {
  for (const [kind, sample, goldenName] of KINDS) {
    it(`${kind} matches its golden file and re-renders identically`, () => {
      const tmp = mkdtempSync(join(tmpdir(), "bhfig-"));
      const outA = join(tmp, "a.svg");
      const outB = join(tmp, "b.svg");
      render({ inputPath: join(samples, sample), figureKind: kind, outputImagePath: outA });
      render({ inputPath: join(samples, sample), figureKind: kind, outputImagePath: outB });
      const a = readFileSync(outA);
      const b = readFileSync(outB);
      expect(a.equals(b)).toBe(true);
      expect(a.toString("utf8")).toBe(read(golden, goldenName));
    });
  }
});

describe("figure content", () => {
  it("lifespan annotation carries the slope from the file, unre-fitted", () => {
    const svg = read(golden, "lifespan.svg");
    expect(svg).toContain("slope = -0.9889");
    expect(svg).toContain("Breakdown time vs amplitude");
  });

  it("drift annotation carries exponent and r2 from the file", () => {
    const svg = read(golden, "drift_scaling.svg");
    expect(svg).toContain("slope = 3.000");
    expect(svg).toContain("standard_energy_drift");
  });

  it("conserved L2 renders as a flat polyline", () => {
    // Build a tiny stream by hand with constant l2_norm.
    const header = JSON.stringify({ schema: "bh.records/1", config: { n: 64 } });
    const rec = (t: number) =>
      JSON.stringify({
        t,
        l2_norm: 0.77,
        hk_norms: {},
        max_slope: 0.1 + 0.01 * t,
        energies: {},
        lin: null,
        tail_fraction: 0,
        dt: 0.1,
      });
    const text = [header, rec(0), rec(1), rec(2), rec(3)].join("\n");
    const fig = buildFigure("timeseries", text);
    const svg = renderFigure(fig);
    const path = svg.match(/<path d="([^"]+)"/)![1];
    const ys = path.split(" ").filter((_, i) => i % 2 === 1);
    expect(new Set(ys).size).toBe(1);
  });

  it("censored lifespan entries are omitted and counted", () => {
    const raw = JSON.parse(read(samples, "lifespan.summary.ndjson"));
    raw.entries[0].t_break = null;
    raw.entries[0].cause = "none";
    const fig = buildFigure("lifespan", JSON.stringify(raw));
    expect(fig.annotations).toContain("1 censored entries omitted");
    expect(fig.series[0].points.length).toBe(4);
  });

  it("fit-unavailable summaries render without a fitted line", () => {
    const raw = JSON.parse(read(samples, "lifespan.summary.ndjson"));
    raw.slope = null;
    raw.intercept = null;
    raw.r2 = null;
    const fig = buildFigure("lifespan", JSON.stringify(raw));
    expect(fig.annotations).toContain("fit unavailable");
    expect(fig.series.every((s) => s.label !== "fit")).toBe(true);
  });
});

describe("hard errors", () => {
  it("empty NDJSON produces an error and no image", () => {
    const tmp = mkdtempSync(join(tmpdir(), "bhfig-"));
    const empty = join(tmp, "empty.ndjson");
    writeFileSync(empty, "");
    const out = join(tmp, "out.svg");
    expect(() =>
      render({ inputPath: empty, figureKind: "timeseries", outputImagePath: out }),
    ).toThrow(/empty/);
    expect(existsSync(out)).toBe(false);
  });

  it("schema drift is a distinct version-mismatch error", () => {
    const tmp = mkdtempSync(join(tmpdir(), "bhfig-"));
    const drifted = join(tmp, "drifted.ndjson");
    writeFileSync(
      drifted,
      read(samples, "lifespan.summary.ndjson").replace(
        "bh.sweep_summary/1",
        "bh.sweep_summary/9",
      ),
    );
    const out = join(tmp, "out.svg");
    expect(() =>
      render({ inputPath: drifted, figureKind: "lifespan", outputImagePath: out }),
    ).toThrow(/version mismatch/);
    expect(existsSync(out)).toBe(false);
  });
});

describe("command-line interface", () => {
  const cli = join(root, "dist", "cli.js");

  it("renders all three kinds with exit 0", () => {
    const tmp = mkdtempSync(join(tmpdir(), "bhfig-"));
    for (const [kind, sample] of KINDS) {
      const out = join(tmp, `${kind}.svg`);
      execFileSync("node", [cli, "--input", join(samples, sample),
                            "--kind", kind, "--out", out]);
      expect(existsSync(out)).toBe(true);
    }
  });

  it("exits 3 on schema mismatch", () => {
    const tmp = mkdtempSync(join(tmpdir(), "bhfig-"));
    const out = join(tmp, "x.svg");
    let code = 0;
    try {
      execFileSync("node", [cli, "--input", join(samples, "drift.summary.ndjson"),
                            "--kind", "lifespan", "--out", out], { stdio: "pipe" });
    } catch (err: any) {
      code = err.status;
    }
    expect(code).toBe(3);
    expect(existsSync(out)).toBe(false);
  });

  it("exits 2 on usage errors", () => {
    let code = 0;
    try {
      execFileSync("node", [cli, "--kind", "lifespan"], { stdio: "pipe" });
    } catch (err: any) {
      code = err.status;
    }
    expect(code).toBe(2);
  });
});
