import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, isAbsolute, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { Resvg } from "@resvg/resvg-js";

import { readAggregateCsv } from "./csv.js";
import { buildFigure } from "./figure.js";
import { FigureSpec, loadFigureSpec } from "./spec.js";
import { figureSvg } from "./svg.js";

// Text is rasterized from the bundled font only (system fonts are not even
// loaded), so the same spec and data produce the same bytes on any machine.
const FONT_PATH = join(
  dirname(fileURLToPath(import.meta.url)),
  "..",
  "assets",
  "DejaVuSans.ttf",
);

export function renderFigureSvg(spec: FigureSpec): string {
  const tables = spec.panels.map((p) => readAggregateCsv(p.csv));
  return figureSvg(buildFigure(spec, tables));
}

export function rasterize(svg: string): Buffer {
  const resvg = new Resvg(svg, {
    font: {
      fontFiles: [FONT_PATH],
      defaultFontFamily: "DejaVu Sans",
      loadSystemFonts: false,
    },
  });
  return resvg.render().asPng();
}

/** Render a spec file and write the PNG under outDir; returns the image path. */
export function renderToFile(specPath: string, outDir: string): string {
  const spec = loadFigureSpec(specPath);
  const png = rasterize(renderFigureSvg(spec));
  const target = isAbsolute(spec.output)
    ? spec.output
    : resolve(outDir, spec.output);
  mkdirSync(dirname(target), { recursive: true });
  writeFileSync(target, png);
  return target;
}
