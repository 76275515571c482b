import { readFileSync } from "node:fs";
import { dirname, isAbsolute, resolve } from "node:path";

import { CHANNELS, InputError } from "./csv.js";

/** Plottable series names: the CSV channels plus the derived feedback element. */
export const PLOTTABLE = [...CHANNELS, "fb"] as const;
export type SeriesName = (typeof PLOTTABLE)[number];

export interface PanelSpec {
  /** Aggregate CSV path, resolved against the spec file's directory. */
  csv: string;
  title?: string;
  channels: SeriesName[];
  /** Legend labels, parallel to channels; defaults to the channel names. */
  labels?: string[];
  /** Optional step index to mark with a vertical line (plant switch). */
  switchStep?: number;
}

export interface FigureSpec {
  /** Image filename, resolved against the --out directory. */
  output: string;
  title?: string;
  width?: number;
  panels: PanelSpec[];
}

function fail(path: string, msg: string): never {
  throw new InputError(`${path}: ${msg}`);
}

function asOptionalString(path: string, obj: any, key: string): string | undefined {
  if (!(key in obj)) return undefined;
  if (typeof obj[key] !== "string") fail(path, `"${key}" must be a string`);
  return obj[key];
}

/**
 * Load and validate a FigureSpec JSON document.
 *
 * Unknown keys are rejected so typos ("chanels") do not silently drop a
 * series from the figure.
 */
export function loadFigureSpec(path: string): FigureSpec {
  let raw: string;
  try {
    raw = readFileSync(path, "utf8");
  } catch {
    throw new InputError(`cannot read spec file: ${path}`);
  }
  let doc: any;
  try {
    doc = JSON.parse(raw);
  } catch (e) {
    fail(path, `not valid JSON (${(e as Error).message})`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    fail(path, "spec must be a JSON object");
  }

  const knownTop = new Set(["output", "title", "width", "panels"]);
  for (const key of Object.keys(doc)) {
    if (!knownTop.has(key)) fail(path, `unknown key "${key}"`);
  }
  if (typeof doc.output !== "string" || doc.output === "") {
    fail(path, '"output" must be a non-empty string');
  }
  if ("width" in doc && (!Number.isFinite(doc.width) || doc.width < 320)) {
    fail(path, '"width" must be a number >= 320');
  }
  if (!Array.isArray(doc.panels) || doc.panels.length === 0) {
    fail(path, '"panels" must be a non-empty array');
  }

  const baseDir = dirname(resolve(path));
  const knownPanel = new Set(["csv", "title", "channels", "labels", "switch_step"]);
  const panels: PanelSpec[] = doc.panels.map((p: any, i: number) => {
    const where = `panels[${i}]`;
    if (typeof p !== "object" || p === null || Array.isArray(p)) {
      fail(path, `${where} must be an object`);
    }
    for (const key of Object.keys(p)) {
      if (!knownPanel.has(key)) fail(path, `${where}: unknown key "${key}"`);
    }
    if (typeof p.csv !== "string" || p.csv === "") {
      fail(path, `${where}: "csv" must be a non-empty string`);
    }
    if (!Array.isArray(p.channels) || p.channels.length === 0) {
      fail(path, `${where}: "channels" must be a non-empty array`);
    }
    for (const c of p.channels) {
      if (!PLOTTABLE.includes(c)) {
        fail(
          path,
          `${where}: unknown channel "${c}" (known: ${PLOTTABLE.join(", ")})`,
        );
      }
    }
    let labels: string[] | undefined;
    if ("labels" in p) {
      if (
        !Array.isArray(p.labels) ||
        p.labels.some((l: any) => typeof l !== "string")
      ) {
        fail(path, `${where}: "labels" must be an array of strings`);
      }
      if (p.labels.length !== p.channels.length) {
        fail(
          path,
          `${where}: ${p.labels.length} labels for ${p.channels.length} channels`,
        );
      }
      labels = p.labels;
    }
    let switchStep: number | undefined;
    if ("switch_step" in p) {
      if (!Number.isInteger(p.switch_step) || p.switch_step < 0) {
        fail(path, `${where}: "switch_step" must be a non-negative integer`);
      }
      switchStep = p.switch_step;
    }
    return {
      csv: isAbsolute(p.csv) ? p.csv : resolve(baseDir, p.csv),
      title: asOptionalString(path, p, "title"),
      channels: p.channels,
      labels,
      switchStep,
    };
  });

  return {
    output: doc.output,
    title: asOptionalString(path, doc, "title"),
    width: "width" in doc ? doc.width : undefined,
    panels,
  };
}
