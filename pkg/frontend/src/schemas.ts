/**
 * Zod schemas for the simulator's output files.
 *
 * Each file carries a schema tag (e.g. "bh.records/1"); a tag we do not
 * know is a version mismatch and a hard error, as is any missing field.
 * Nothing is defaulted silently.
 */
import { z } from "zod";

export const RECORDS_SCHEMA = "bh.records/1";
export const SWEEP_SUMMARY_SCHEMA = "bh.sweep_summary/1";
export const STUDY_SUMMARY_SCHEMA = "bh.study_summary/1";

export class SchemaMismatchError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatchError";
  }
}

export class InputFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "InputFormatError";
  }
}

const finite = z.number().finite();
const maybeNumber = z.union([finite, z.null()]);

const energyReport = z
  .object({
    k: z.number().int(),
    standard: maybeNumber,
    modified: maybeNumber,
    correction: maybeNumber,
    ratio: maybeNumber,
    hux_inf: maybeNumber,
  })
  .strict();

export const recordSchema = z
  .object({
    t: finite,
    l2_norm: maybeNumber,
    hk_norms: z.record(z.string(), maybeNumber),
    max_slope: maybeNumber,
    energies: z.record(z.string(), energyReport),
    lin: z
      .union([
        z.object({ form_a: maybeNumber, form_b: maybeNumber, l2: maybeNumber }).strict(),
        z.null(),
      ]),
    tail_fraction: maybeNumber,
    dt: maybeNumber,
  })
  .strict();

export type DiagnosticsRecord = z.infer<typeof recordSchema>;

const recordsHeader = z
  .object({ schema: z.string(), config: z.record(z.string(), z.unknown()) })
  .strict();

const sweepEntry = z
  .object({
    eps: finite,
    t_break: maybeNumber,
    cause: z.string(),
    n: z.number().int(),
    t_break_2n: maybeNumber,
    cause_2n: z.string(),
    t_break_m2: maybeNumber,
  })
  .strict();

export const sweepSummarySchema = z
  .object({
    schema: z.string(),
    config: z.record(z.string(), z.unknown()),
    slope: maybeNumber,
    intercept: maybeNumber,
    r2: maybeNumber,
    slope_2n: maybeNumber,
    slope_threshold_doubled: maybeNumber,
    entries: z.array(sweepEntry),
    warnings: z.array(z.string()),
  })
  .strict();

export type SweepSummary = z.infer<typeof sweepSummarySchema>;

export const studySummarySchema = z
  .object({
    schema: z.string(),
    config: z.record(z.string(), z.unknown()),
    quantity: z.string(),
    exponent: maybeNumber,
    intercept: maybeNumber,
    r2: maybeNumber,
    tolerance: finite,
    pairs: z.array(z.tuple([finite, finite])),
    warnings: z.array(z.string()),
  })
  .strict();

export type StudySummary = z.infer<typeof studySummarySchema>;

function parseJsonLine(line: string, context: string): unknown {
  try {
    return JSON.parse(line);
  } catch (err) {
    throw new InputFormatError(`${context}: not valid JSON: ${String(err)}`);
  }
}

function checkTag(found: unknown, expected: string, context: string): void {
  if (typeof found !== "object" || found === null || !("schema" in found)) {
    throw new InputFormatError(`${context}: missing schema tag`);
  }
  const tag = (found as { schema: unknown }).schema;
  if (tag !== expected) {
    throw new SchemaMismatchError(
      `${context}: schema version mismatch: expected ${expected}, found ${String(tag)}`,
    );
  }
}

/** Parse a diagnostics NDJSON stream: header line plus one record per line. */
export function parseRecordsStream(text: string, context = "records stream"): {
  config: Record<string, unknown>;
  records: DiagnosticsRecord[];
} {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new InputFormatError(`${context}: file is empty`);
  }
  const headRaw = parseJsonLine(lines[0], `${context}: header`);
  checkTag(headRaw, RECORDS_SCHEMA, context);
  const header = recordsHeader.parse(headRaw);
  if (lines.length === 1) {
    throw new InputFormatError(`${context}: no records after the header`);
  }
  const records = lines.slice(1).map((line, i) => {
    const raw = parseJsonLine(line, `${context}: record ${i + 1}`);
    const parsed = recordSchema.safeParse(raw);
    if (!parsed.success) {
      throw new InputFormatError(
        `${context}: record ${i + 1} does not match the schema: ${parsed.error.issues
          .map((iss) => `${iss.path.join(".")}: ${iss.message}`)
          .join("; ")}`,
      );
    }
    return parsed.data;
  });
  return { config: header.config, records };
}

function parseSummary<T>(
  text: string,
  expectedTag: string,
  schema: z.ZodType<T>,
  context: string,
): T {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new InputFormatError(`${context}: file is empty`);
  }
  const raw = parseJsonLine(lines[0], context);
  checkTag(raw, expectedTag, context);
  const parsed = schema.safeParse(raw);
  if (!parsed.success) {
    throw new InputFormatError(
      `${context}: does not match the schema: ${parsed.error.issues
        .map((iss) => `${iss.path.join(".")}: ${iss.message}`)
        .join("; ")}`,
    );
  }
  return parsed.data;
}

export function parseSweepSummary(text: string, context = "sweep summary"): SweepSummary {
  return parseSummary(text, SWEEP_SUMMARY_SCHEMA, sweepSummarySchema, context);
}

export function parseStudySummary(text: string, context = "study summary"): StudySummary {
  return parseSummary(text, STUDY_SUMMARY_SCHEMA, studySummarySchema, context);
}
