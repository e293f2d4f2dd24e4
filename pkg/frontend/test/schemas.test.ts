import { describe, expect, it } from "vitest";
import { readFileSync } from "fs";
import { join } from "path";

import {
  InputFormatError,
  SchemaMismatchError,
  parseRecordsStream,
  parseStudySummary,
  parseSweepSummary,
} from "../src/schemas.js";

const samples = join(__dirname, "..", "samples");
const read = (name: string) => readFileSync(join(samples, name), "utf8");

describe("records stream parsing", () => {
  it("parses the checked-in sample", () => {
    const { config, records } = parseRecordsStream(read("timeseries.ndjson"));
    expect(config.n).toBe(128);
    expect(records.length).toBe(51);
    expect(records[0].t).toBe(0);
    expect(records.every((r) => typeof r.t === "number")).toBe(true);
  });

  it("rejects an empty file", () => {
    expect(() => parseRecordsStream("")).toThrow(InputFormatError);
    expect(() => parseRecordsStream("\n\n")).toThrow(/empty/);
  });

  it("rejects a header with no records", () => {
    const header = read("timeseries.ndjson").split("\n")[0];
    expect(() => parseRecordsStream(header)).toThrow(/no records/);
  });

  it("rejects a wrong schema tag as a version mismatch", () => {
    const text = read("timeseries.ndjson").replace("bh.records/1", "bh.records/2");
    expect(() => parseRecordsStream(text)).toThrow(SchemaMismatchError);
    expect(() => parseRecordsStream(text)).toThrow(/version mismatch/);
  });

  it("rejects records with missing fields", () => {
    const lines = read("timeseries.ndjson").split("\n").filter((l) => l);
    const broken = JSON.parse(lines[1]);
    delete broken.l2_norm;
    const text = [lines[0], JSON.stringify(broken)].join("\n");
    expect(() => parseRecordsStream(text)).toThrow(InputFormatError);
    expect(() => parseRecordsStream(text)).toThrow(/l2_norm/);
  });

  it("rejects records with unexpected extra fields", () => {
    const lines = read("timeseries.ndjson").split("\n").filter((l) => l);
    const broken = JSON.parse(lines[1]);
    broken.surprise = 1;
    const text = [lines[0], JSON.stringify(broken)].join("\n");
    expect(() => parseRecordsStream(text)).toThrow(InputFormatError);
  });
});

describe("summary parsing", () => {
  it("parses the sweep summary sample", () => {
    const summary = parseSweepSummary(read("lifespan.summary.ndjson"));
    expect(summary.entries.length).toBe(5);
    expect(summary.slope).toBeCloseTo(-0.9889, 3);
    expect(summary.entries[0].eps).toBeCloseTo(0.1);
  });

  it("parses the study summary sample", () => {
    const summary = parseStudySummary(read("drift.summary.ndjson"));
    expect(summary.quantity).toBe("standard_energy_drift");
    expect(summary.exponent).toBeCloseTo(3.0, 1);
    expect(summary.pairs.length).toBe(4);
  });

  it("cross-tagged files are version mismatches", () => {
    expect(() => parseSweepSummary(read("drift.summary.ndjson"))).toThrow(
      SchemaMismatchError,
    );
    expect(() => parseStudySummary(read("lifespan.summary.ndjson"))).toThrow(
      SchemaMismatchError,
    );
  });

  it("rejects a summary missing a field", () => {
    const raw = JSON.parse(read("lifespan.summary.ndjson"));
    delete raw.intercept;
    expect(() => parseSweepSummary(JSON.stringify(raw))).toThrow(/intercept/);
  });
});
