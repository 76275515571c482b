import {
  BAND_OPACITY,
  FigureGeometry,
  PanelGeometry,
  Point,
  REF_COLOR,
} from "./figure.js";

const FONT = "DejaVu Sans";

function px(v: number): string {
  // two decimals is below half a pixel at 2x raster scale and keeps the
  // output byte-stable across runs
  return v.toFixed(2);
}

function pointList(points: Point[]): string {
  return points.map((p) => `${px(p.x)},${px(p.y)}`).join(" ");
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function panelSvg(p: PanelGeometry, clipId: string): string {
  const { x, y, width, height } = p.plot;
  const out: string[] = [];

  if (p.title) {
    out.push(
      `<text x="${px(x + width / 2)}" y="${px(y - 8)}" font-family="${FONT}" ` +
        `font-size="13" text-anchor="middle">${esc(p.title)}</text>`,
    );
  }

  out.push(
    `<rect x="${px(x)}" y="${px(y)}" width="${px(width)}" height="${px(height)}" ` +
      `fill="none" stroke="#999999" stroke-width="1"/>`,
  );
  for (const t of p.xTicks) {
    out.push(
      `<line x1="${px(t.pos)}" y1="${px(y + height)}" x2="${px(t.pos)}" ` +
        `y2="${px(y + height + 4)}" stroke="#999999" stroke-width="1"/>`,
      `<text x="${px(t.pos)}" y="${px(y + height + 16)}" font-family="${FONT}" ` +
        `font-size="10" text-anchor="middle">${esc(t.label)}</text>`,
    );
  }
  for (const t of p.yTicks) {
    out.push(
      `<line x1="${px(x - 4)}" y1="${px(t.pos)}" x2="${px(x)}" y2="${px(t.pos)}" ` +
        `stroke="#999999" stroke-width="1"/>`,
      `<text x="${px(x - 7)}" y="${px(t.pos + 3.5)}" font-family="${FONT}" ` +
        `font-size="10" text-anchor="end">${esc(t.label)}</text>`,
    );
  }

  // clip everything data-driven to the plot rectangle
  out.push(`<g clip-path="url(#${clipId})">`);
  for (const s of p.series) {
    if (s.band) {
      out.push(
        `<polygon points="${pointList(s.band)}" fill="${s.color}" ` +
          `fill-opacity="${BAND_OPACITY}" stroke="none"/>`,
      );
    }
  }
  out.push(
    `<polyline points="${pointList(p.ref)}" fill="none" stroke="${REF_COLOR}" ` +
      `stroke-width="1.2" stroke-dasharray="5 3"/>`,
  );
  for (const s of p.series) {
    out.push(
      `<polyline points="${pointList(s.mean)}" fill="none" stroke="${s.color}" ` +
        `stroke-width="1.5"/>`,
    );
  }
  if (p.switchX !== undefined) {
    out.push(
      `<line x1="${px(p.switchX)}" y1="${px(y)}" x2="${px(p.switchX)}" ` +
        `y2="${px(y + height)}" stroke="#777777" stroke-width="1.2" ` +
        `stroke-dasharray="2 3"/>`,
    );
  }
  out.push("</g>");

  // legend: reference entry plus one per series, top-right inside the plot
  const entries = [
    { label: "reference", color: REF_COLOR, dashed: true },
    ...p.series.map((s) => ({ label: s.label, color: s.color, dashed: false })),
  ];
  const legendWidth = 14 + 7 * Math.max(...entries.map((e) => e.label.length)) + 24;
  const lx = x + width - legendWidth - 6;
  let ly = y + 8;
  for (const e of entries) {
    const dash = e.dashed ? ` stroke-dasharray="5 3"` : "";
    out.push(
      `<line x1="${px(lx)}" y1="${px(ly)}" x2="${px(lx + 18)}" y2="${px(ly)}" ` +
        `stroke="${e.color}" stroke-width="1.5"${dash}/>`,
      `<text x="${px(lx + 24)}" y="${px(ly + 3.5)}" font-family="${FONT}" ` +
        `font-size="10">${esc(e.label)}</text>`,
    );
    ly += 14;
  }

  return out.join("\n");
}

export function figureSvg(fig: FigureGeometry): string {
  const out: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fig.width}" ` +
      `height="${px(fig.height)}" viewBox="0 0 ${fig.width} ${px(fig.height)}">`,
    `<rect width="${fig.width}" height="${px(fig.height)}" fill="#ffffff"/>`,
  ];
  out.push("<defs>");
  fig.panels.forEach((p, i) => {
    const { x, y, width, height } = p.plot;
    out.push(
      `<clipPath id="clip${i}"><rect x="${px(x)}" y="${px(y)}" ` +
        `width="${px(width)}" height="${px(height)}"/></clipPath>`,
    );
  });
  out.push("</defs>");
  if (fig.title) {
    out.push(
      `<text x="${px(fig.width / 2)}" y="20" font-family="${FONT}" ` +
        `font-size="15" text-anchor="middle">${esc(fig.title)}</text>`,
    );
  }
  fig.panels.forEach((p, i) => {
    out.push(panelSvg(p, `clip${i}`));
  });
  out.push("</svg>");
  return out.join("\n");
}
