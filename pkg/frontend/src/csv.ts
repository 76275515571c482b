import { readFileSync } from "node:fs";

/** Channel stems present in every aggregate CSV, in column order. */
export const CHANNELS = ["y", "err", "uf", "ub", "ubar"] as const;
export type Channel = (typeof CHANNELS)[number];

export const EXPECTED_HEADER = [
  "step",
  "ref",
  ...CHANNELS.flatMap((c) => [`${c}_mean`, `${c}_std`]),
].join(",");

/** Raised for anything wrong with the inputs; always names the file. */
export class InputError extends Error {}

export interface AggregateTable {
  path: string;
  steps: number[];
  ref: number[];
  mean: Record<Channel, number[]>;
  std: Record<Channel, number[]>;
}

function emptyColumns(): Record<Channel, number[]> {
  return { y: [], err: [], uf: [], ub: [], ubar: [] };
}

/**
 * Read one aggregate CSV written by the simulation harness.
 *
 * The schema is rigid on purpose: the exact header above, then one row per
 * step with 12 finite numeric fields and a 0-based contiguous step column.
 * Anything else is an InputError carrying the path (and line) so a figure
 * spec pointing at the wrong file fails loudly.
 */
export function readAggregateCsv(path: string): AggregateTable {
  let text: string;
  try {
    text = readFileSync(path, "ascii");
  } catch {
    throw new InputError(`cannot read CSV file: ${path}`);
  }
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new InputError(`empty CSV file: ${path}`);
  }
  if (lines[0] !== EXPECTED_HEADER) {
    throw new InputError(
      `${path}: header does not match the harness aggregate schema ` +
        `(got ${JSON.stringify(lines[0])})`,
    );
  }
  if (lines.length === 1) {
    throw new InputError(`${path}: no data rows`);
  }

  const table: AggregateTable = {
    path,
    steps: [],
    ref: [],
    mean: emptyColumns(),
    std: emptyColumns(),
  };
  const nFields = 2 + 2 * CHANNELS.length;
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== nFields) {
      throw new InputError(
        `${path}: line ${i + 1} has ${fields.length} fields, expected ${nFields}`,
      );
    }
    const values = fields.map((f) => Number(f));
    const bad = values.findIndex((v) => !Number.isFinite(v));
    if (bad >= 0 || fields.some((f) => f.trim() === "")) {
      throw new InputError(`${path}: line ${i + 1} has a non-numeric field`);
    }
    if (values[0] !== i - 1) {
      throw new InputError(
        `${path}: line ${i + 1} has step ${fields[0]}, expected ${i - 1}`,
      );
    }
    table.steps.push(values[0]);
    table.ref.push(values[1]);
    CHANNELS.forEach((c, j) => {
      table.mean[c].push(values[2 + 2 * j]);
      table.std[c].push(values[3 + 2 * j]);
    });
  }
  return table;
}
