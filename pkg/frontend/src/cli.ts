#!/usr/bin/env node
import { pathToFileURL } from "node:url";

import { InputError } from "./csv.js";
import { renderToFile } from "./render.js";

const USAGE = `usage: figviz render --spec FILE.json --out DIR

Renders a figure-spec JSON document over harness aggregate CSVs into a PNG.
The image is written under DIR at the spec's "output" filename.`;

function parseArgs(argv: string[]): { spec: string; out: string } {
  if (argv[0] !== "render") {
    throw new InputError(`unknown command ${JSON.stringify(argv[0] ?? "")}`);
  }
  let spec: string | undefined;
  let out: string | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) {
      throw new InputError(`missing value for ${flag}`);
    }
    if (flag === "--spec") spec = value;
    else if (flag === "--out") out = value;
    else throw new InputError(`unknown option ${flag}`);
  }
  if (!spec || !out) {
    throw new InputError("both --spec and --out are required");
  }
  return { spec, out };
}

export function main(argv: string[]): number {
  if (argv.length === 0 || argv[0] === "--help" || argv[0] === "-h") {
    console.log(USAGE);
    return 0;
  }
  try {
    const { spec, out } = parseArgs(argv);
    const target = renderToFile(spec, out);
    console.log(`figure written to ${target}`);
    return 0;
  } catch (e) {
    if (e instanceof InputError) {
      console.error(`error: ${e.message}`);
      return 2;
    }
    throw e;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exitCode = main(process.argv.slice(2));
}
