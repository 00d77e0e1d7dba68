import { init, use } from "echarts/core";
import { LineChart } from "echarts/charts";
import { GridComponent, LegendComponent, TitleComponent } from "echarts/components";
import { SVGRenderer } from "echarts/renderers";
import type { Figure } from "./figures.js";

use([LineChart, GridComponent, LegendComponent, TitleComponent, SVGRenderer]);

/**
 * Server-side SVG render. echarts supports headless operation with the
 * svg renderer, so no canvas binding is needed.
 */
export function renderSvg(figure: Figure, width = 800, height = 500): string {
  const chart = init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(figure.option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
