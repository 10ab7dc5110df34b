/** Deterministic SVG rendering via the echarts server-side renderer. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import * as echarts from "echarts";
import { buildFigure, type BuiltFigure, type FigureSpec } from "./figures.js";

// Animations are disabled in every option and the SSR renderer performs a
// single synchronous pass, so equal specs yield byte-equal SVG output.
export function renderSvg(spec: FigureSpec): { svg: string; built: BuiltFigure } {
  const built = buildFigure(spec);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: spec.width ?? 800,
    height: spec.height ?? 500,
  });
  try {
    chart.setOption(built.option);
    return { svg: chart.renderToSVGString(), built };
  } finally {
    chart.dispose();
  }
}

export function writeFigure(spec: FigureSpec): BuiltFigure {
  const { svg, built } = renderSvg(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf8");
  return built;
}
